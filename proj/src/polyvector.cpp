#include "pnf/polyvector.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace pnf {

namespace {

/// Sorts idx in place, returns the permutation sign, or 0 on a repeat.
int sort_sign(PolyVector::IndexTuple& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

}  // namespace

PolyVector::PolyVector(int degree, const JetRing& ring) : degree_(degree), ring_(ring) {
    // Degrees above the variable count are allowed as types; every index
    // tuple then repeats, so such polyvectors are identically zero.
    if (degree < 0) fail(ErrorKind::structural, "negative polyvector degree");
}

PolyVector PolyVector::from_jet(const Jet& f) {
    PolyVector t(0, f.ring());
    t.add_term({}, f);
    return t;
}

PolyVector PolyVector::term(const JetRing& ring, const IndexTuple& idx, const Jet& f) {
    PolyVector t(static_cast<int>(idx.size()), ring);
    t.add_term(idx, f);
    return t;
}

PolyVector PolyVector::basis_field(const JetRing& ring, int var) {
    return term(ring, {var}, Jet::one(ring));
}

void PolyVector::add_term(const IndexTuple& idx, const Jet& f) {
    if (static_cast<int>(idx.size()) != degree_)
        fail(ErrorKind::structural, "index tuple size does not match polyvector degree");
    for (int i : idx)
        if (i < 0 || i >= ring_.nvars())
            fail(ErrorKind::structural, "polyvector index out of range");
    if (f.is_zero()) return;
    IndexTuple s = idx;
    int sign = sort_sign(s);
    if (sign == 0) return;
    Jet g = f.with_order(ring_.order);
    if (sign < 0) g = -g;
    auto [it, inserted] = terms_.emplace(std::move(s), g);
    if (!inserted) {
        it->second += g;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Jet PolyVector::coefficient(const IndexTuple& idx) const {
    IndexTuple s = idx;
    int sign = sort_sign(s);
    if (sign == 0) return Jet::zero(ring_);
    auto it = terms_.find(s);
    if (it == terms_.end()) return Jet::zero(ring_);
    return sign < 0 ? -it->second : it->second;
}

int PolyVector::min_coeff_degree() const {
    int m = ring_.order + 1;
    for (const auto& [idx, f] : terms_) m = std::min(m, f.min_degree());
    return m;
}

PolyVector PolyVector::with_order(int new_order) const {
    PolyVector r(degree_, JetRing{ring_.n_phase, ring_.n_param, new_order});
    for (const auto& [idx, f] : terms_) r.add_term(idx, f.with_order(new_order));
    return r;
}

bool PolyVector::equals_to_order(const PolyVector& o, int k) const {
    if (degree_ != o.degree_) return false;
    auto scan = [&](const PolyVector& a, const PolyVector& b) {
        for (const auto& [idx, f] : a.terms_)
            if (!f.equals_to_order(b.coefficient(idx), k)) return false;
        return true;
    };
    return scan(*this, o) && scan(o, *this);
}

PolyVector PolyVector::operator-() const {
    PolyVector r = *this;
    for (auto& [idx, f] : r.terms_) f = -f;
    return r;
}

PolyVector& PolyVector::operator+=(const PolyVector& o) {
    if (degree_ != o.degree_)
        fail(ErrorKind::structural, "adding polyvectors of different degree");
    if (o.ring_.order < ring_.order) *this = with_order(o.ring_.order);
    for (const auto& [idx, f] : o.terms_) add_term(idx, f);
    return *this;
}

PolyVector& PolyVector::operator-=(const PolyVector& o) {
    if (degree_ != o.degree_)
        fail(ErrorKind::structural, "subtracting polyvectors of different degree");
    if (o.ring_.order < ring_.order) *this = with_order(o.ring_.order);
    for (const auto& [idx, f] : o.terms_) add_term(idx, -f);
    return *this;
}

PolyVector operator*(const Jet& f, const PolyVector& t) {
    PolyVector r(t.degree_, JetRing{t.ring_.n_phase, t.ring_.n_param,
                                    std::min(f.order(), t.order())});
    for (const auto& [idx, g] : t.terms_) r.add_term(idx, f * g);
    return r;
}

PolyVector operator*(const Scalar& c, const PolyVector& t) {
    PolyVector r(t.degree_, t.ring_);
    if (c.is_zero()) return r;
    for (const auto& [idx, g] : t.terms_) r.add_term(idx, c * g);
    return r;
}

Jet PolyVector::apply(const Jet& f) const {
    if (degree_ != 1) fail(ErrorKind::structural, "apply: polyvector is not a vector field");
    int slack = std::min(1, std::min(min_coeff_degree(), ring_.order + 1));
    int out_order = std::min(ring_.order, f.order()) - 1 + slack;
    Jet r(JetRing{ring_.n_phase, ring_.n_param, out_order});
    for (const auto& [idx, g] : terms_)
        r += Jet::mul_to_order(g, f.derivative(idx[0]), out_order);
    return r;
}

PolyVector wedge(const PolyVector& a, const PolyVector& b) {
    if (a.degree() + b.degree() > a.ring().nvars())
        fail(ErrorKind::structural, "wedge degree exceeds variable count");
    PolyVector r(a.degree() + b.degree(),
                 JetRing{a.ring().n_phase, a.ring().n_param,
                         std::min(a.order(), b.order())});
    for (const auto& [ia, fa] : a.terms())
        for (const auto& [ib, fb] : b.terms()) {
            PolyVector::IndexTuple idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(idx, fa * fb);
        }
    return r;
}

PolyVector schouten(const PolyVector& a, const PolyVector& b) {
    const int k = a.degree(), l = b.degree();
    if (k + l < 1) fail(ErrorKind::structural, "schouten bracket of two functions");
    int slack = std::min({1, a.min_coeff_degree(), b.min_coeff_degree()});
    int out_order = std::min(a.order(), b.order()) - 1 + slack;
    PolyVector r(k + l - 1,
                 JetRing{a.ring().n_phase, a.ring().n_param, out_order});

    for (const auto& [ia, f] : a.terms())
        for (const auto& [ib, g] : b.terms()) {
            // f dI, g dJ  ->  f [g, dI] ^ dJ
            for (int m = 0; m < k; ++m) {
                Jet c = Jet::mul_to_order(f, g.derivative(ia[m]), out_order);
                if (c.is_zero()) continue;
                if (m % 2) c = -c;
                PolyVector::IndexTuple idx;
                idx.reserve(k - 1 + l);
                for (int t = 0; t < k; ++t)
                    if (t != m) idx.push_back(ia[t]);
                idx.insert(idx.end(), ib.begin(), ib.end());
                r.add_term(idx, c);
            }
            // (-1)^{kl} g [f, dJ] ^ dI
            for (int m = 0; m < l; ++m) {
                Jet c = Jet::mul_to_order(g, f.derivative(ib[m]), out_order);
                if (c.is_zero()) continue;
                int sign = ((k * l) % 2 ? -1 : 1) * (m % 2 ? -1 : 1);
                if (sign < 0) c = -c;
                PolyVector::IndexTuple idx;
                idx.reserve(l - 1 + k);
                for (int t = 0; t < l; ++t)
                    if (t != m) idx.push_back(ib[t]);
                idx.insert(idx.end(), ia.begin(), ia.end());
                r.add_term(idx, c);
            }
        }
    return r;
}

Jet poisson_bracket(const PolyVector& p, const Jet& f, const Jet& g) {
    if (p.degree() != 2) fail(ErrorKind::structural, "poisson_bracket: degree-2 field required");
    int out_order = std::min(p.order(), std::min(f.order(), g.order())) - 1 +
                    std::min(1, p.min_coeff_degree());
    Jet r(JetRing{p.ring().n_phase, p.ring().n_param, out_order});
    for (const auto& [idx, pij] : p.terms()) {
        int i = idx[0], j = idx[1];
        Jet t = Jet::mul_to_order(f.derivative(i), g.derivative(j), out_order) -
                Jet::mul_to_order(g.derivative(i), f.derivative(j), out_order);
        r += Jet::mul_to_order(pij, t, out_order);
    }
    return r;
}

PolyVector hamiltonian_field(const PolyVector& p, const Jet& f) {
    if (p.degree() != 2) fail(ErrorKind::structural, "hamiltonian_field: degree-2 field required");
    int out_order = std::min(p.order(), f.order()) - 1 + std::min(1, p.min_coeff_degree());
    PolyVector x(1, JetRing{p.ring().n_phase, p.ring().n_param, out_order});
    // {x_i, f} = sum_j P_ij d_j f
    for (const auto& [idx, pij] : p.terms()) {
        int i = idx[0], j = idx[1];
        x.add_term({i}, Jet::mul_to_order(pij, f.derivative(j), out_order));
        x.add_term({j}, -Jet::mul_to_order(pij, f.derivative(i), out_order));
    }
    return x;
}

PolyVector jacobi_defect(const PolyVector& p) {
    if (p.degree() != 2) fail(ErrorKind::structural, "jacobi_defect: degree-2 field required");
    return schouten(p, p);
}

std::map<PolyVector::IndexTuple, Jet> jacobi_component_sums(const PolyVector& p) {
    if (p.degree() != 2) fail(ErrorKind::structural, "jacobi sums: degree-2 field required");
    int nv = p.ring().nvars();
    int out_order = p.order() - 1 + std::min(1, p.min_coeff_degree());
    std::map<PolyVector::IndexTuple, Jet> sums;
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j)
            for (int k = j + 1; k < nv; ++k) {
                Jet s(JetRing{p.ring().n_phase, p.ring().n_param, out_order});
                for (int l = 0; l < nv; ++l) {
                    s += Jet::mul_to_order(p.coefficient({i, l}),
                                           p.coefficient({j, k}).derivative(l), out_order);
                    s += Jet::mul_to_order(p.coefficient({j, l}),
                                           p.coefficient({k, i}).derivative(l), out_order);
                    s += Jet::mul_to_order(p.coefficient({k, l}),
                                           p.coefficient({i, j}).derivative(l), out_order);
                }
                sums[{i, j, k}] = s;
            }
    return sums;
}

std::string PolyVector::str(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, f] : terms_) {
        if (!first) os << "  +  ";
        first = false;
        os << "[" << f.str(var_names) << "]";
        for (int i : idx) os << " d" << (i + 1);
    }
    return os.str();
}

}  // namespace pnf
