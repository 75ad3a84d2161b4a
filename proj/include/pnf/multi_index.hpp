#pragma once

#include <string>
#include <vector>

#include "pnf/errors.hpp"

namespace pnf {

/// Exponent vector Q = (q_1,...,q_m) of a monomial x^Q. Ordering is graded
/// lexicographic, which fixes the iteration order of every term map in the
/// project and hence the byte layout of serialized output.
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t size) : e_(size, 0) {}
    explicit MultiIndex(std::vector<int> exps) : e_(std::move(exps)) {
        for (int q : e_)
            if (q < 0) fail(ErrorKind::structural, "negative exponent in multi-index");
    }
    // Braced exponent lists must never fall through to the size constructor.
    MultiIndex(std::initializer_list<int> exps) : MultiIndex(std::vector<int>(exps)) {}

    static MultiIndex unit(std::size_t size, std::size_t var) {
        MultiIndex q(size);
        q.e_[var] = 1;
        return q;
    }

    std::size_t size() const { return e_.size(); }
    int operator[](std::size_t k) const { return e_[k]; }
    int& operator[](std::size_t k) { return e_[k]; }
    const std::vector<int>& exponents() const { return e_; }

    int degree() const {
        int d = 0;
        for (int q : e_) d += q;
        return d;
    }

    /// Degree in the first `n` variables only.
    int degree_front(std::size_t n) const {
        int d = 0;
        for (std::size_t k = 0; k < n && k < e_.size(); ++k) d += e_[k];
        return d;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
        return r;
    }

    /// Componentwise <=.
    bool divides(const MultiIndex& o) const {
        for (std::size_t k = 0; k < e_.size(); ++k)
            if (e_[k] > o.e_[k]) return false;
        return true;
    }

    MultiIndex minus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (std::size_t k = 0; k < e_.size(); ++k) {
            r.e_[k] -= o.e_[k];
            if (r.e_[k] < 0) fail(ErrorKind::structural, "multi-index subtraction below zero");
        }
        return r;
    }

    bool is_zero() const {
        for (int q : e_)
            if (q != 0) return false;
        return true;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t k = 0; k < e_.size(); ++k) {
            if (k) s += ",";
            s += std::to_string(e_[k]);
        }
        return s + ")";
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.e_ < b.e_;
    }

  private:
    std::vector<int> e_;
};

/// Enumerates all multi-indices of `size` variables with total degree exactly
/// `deg`, calling fn on each. The walk is deterministic (compositions of deg,
/// leading entry decreasing).
template <typename Fn>
void for_each_monomial_of_degree(std::size_t size, int deg, Fn&& fn) {
    if (deg < 0) return;
    MultiIndex q(size);
    if (size == 0) {
        if (deg == 0) fn(q);
        return;
    }
    q[0] = deg;
    while (true) {
        fn(q);
        // next composition: move one unit right of the last nonzero entry
        // among positions 0..size-2, collecting the tail.
        std::size_t k = size - 1;
        while (k > 0 && q[k - 1] == 0) --k;
        if (k == 0) break;
        int tail = q[size - 1];
        q[size - 1] = 0;
        q[k - 1] -= 1;
        q[k] = tail + 1;
    }
}

/// Same, over 0 <= degree <= dmax (or dmin..dmax).
template <typename Fn>
void for_each_monomial_up_to(std::size_t size, int dmin, int dmax, Fn&& fn) {
    for (int d = dmin; d <= dmax; ++d) for_each_monomial_of_degree(size, d, fn);
}

}  // namespace pnf
