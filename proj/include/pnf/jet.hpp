#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pnf/multi_index.hpp"
#include "pnf/scalar.hpp"

namespace pnf {

/// Identifies the polynomial ring a jet lives in: n_phase "x'" variables
/// followed by n_param "x''" variables, everything truncated at a joint
/// total degree.
struct JetRing {
    int n_phase = 0;
    int n_param = 0;
    int order = 0;

    int nvars() const { return n_phase + n_param; }
    bool same_vars(const JetRing& o) const {
        return n_phase == o.n_phase && n_param == o.n_param;
    }
    friend bool operator==(const JetRing& a, const JetRing& b) {
        return a.n_phase == b.n_phase && a.n_param == b.n_param && a.order == b.order;
    }
};

/// Truncated multivariate polynomial with exact Gaussian-rational
/// coefficients. Canonical form: no stored coefficient is zero and every
/// stored multi-index has total degree <= order(). Terms iterate in graded
/// lexicographic order.
///
/// Arithmetic truncates at the minimum of the operand orders; everything
/// at or below the result's order is exact.
class Jet {
  public:
    using TermMap = std::map<MultiIndex, Scalar>;

    Jet() = default;
    explicit Jet(const JetRing& ring) : ring_(ring) {}

    static Jet zero(const JetRing& ring) { return Jet(ring); }
    static Jet constant(const JetRing& ring, Scalar c);
    static Jet one(const JetRing& ring) { return constant(ring, Scalar(1)); }
    /// The coordinate function x_var (0-based across the joint variable list).
    static Jet variable(const JetRing& ring, int var);
    static Jet monomial(const JetRing& ring, const MultiIndex& q, Scalar c);

    const JetRing& ring() const { return ring_; }
    int order() const { return ring_.order; }
    int nvars() const { return ring_.nvars(); }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
    }

    Scalar coeff(const MultiIndex& q) const;
    Scalar value_at_zero() const;

    /// Smallest total degree among stored terms; order()+1 when zero.
    int min_degree() const;
    /// Smallest phase degree (degree in the first n_phase variables).
    int min_phase_degree() const;
    int max_degree() const;
    int max_degree_in(int var) const;
    bool depends_on(int var) const;

    /// Re-truncates; new_order may also raise the order, which asserts that
    /// the caller knows the higher coefficients to be exact (all zero here).
    Jet with_order(int new_order) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator*(const Scalar& c, const Jet& a);
    friend bool operator==(const Jet& a, const Jet& b) {
        return a.ring_.same_vars(b.ring_) && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    /// Product keeping all terms of degree <= keep_order regardless of the
    /// operands' carried orders. Callers use this where a triangular
    /// recursion guarantees the extra coefficients are exact.
    static Jet mul_to_order(const Jet& a, const Jet& b, int keep_order);

    /// Formal partial derivative; the carried order is preserved.
    Jet derivative(int var) const;

    /// Antiderivative in a parameter variable, vanishing at var = 0.
    /// Raising the degree past order() is a truncation-loss error, never a
    /// silent drop.
    Jet antiderivative(int var) const;

    /// f(subst_0, ..., subst_{N-1}). The substituents must all live in one
    /// common ring, which becomes the result's ring. Unless
    /// allow_constant_shift is set, each substituent must vanish at 0.
    Jet compose(std::span<const Jet> subst, bool allow_constant_shift = false) const;

    /// exp(g) = sum g^k/k! truncated; requires g(0) = 0.
    Jet exp() const;

    /// Multiplicative inverse of a jet with nonzero constant term.
    Jet inverse() const;

    /// Exact division by the variable x_var; error if some term lacks it.
    Jet divide_by_variable(int var) const;

    /// Substitutes 0 for one variable.
    Jet set_variable_zero(int var) const;

    /// Coefficient of (x')^phase_q as a jet (phase part of every returned
    /// term is zero).
    Jet phase_coefficient(const MultiIndex& phase_q) const;

    /// Terms whose exponent of `var` equals k, with that exponent removed.
    Jet extract_power(int var, int k) const;

    /// True when every stored term is at most `bound` in each variable of
    /// vars... (used by support scans).
    bool equals_to_order(const Jet& o, int k) const;

    std::string str(const std::vector<std::string>& var_names = {}) const;

    /// Inserts c·x^q, dropping it when |q| > order; zero sums are erased.
    void add_term(const MultiIndex& q, const Scalar& c);

  private:
    JetRing ring_;
    TermMap terms_;

    void check_same_vars(const Jet& o) const;
};

std::ostream& operator<<(std::ostream& os, const Jet& f);

}  // namespace pnf
