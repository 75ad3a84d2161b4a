#include "pnf/jet.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace pnf {

void Jet::check_same_vars(const Jet& o) const {
    if (!ring_.same_vars(o.ring_))
        fail(ErrorKind::structural, "jets live in different variable splits");
}

Jet Jet::constant(const JetRing& ring, Scalar c) {
    Jet f(ring);
    f.add_term(MultiIndex(ring.nvars()), c);
    return f;
}

Jet Jet::variable(const JetRing& ring, int var) {
    if (var < 0 || var >= ring.nvars())
        fail(ErrorKind::structural, "variable index out of range");
    Jet f(ring);
    f.add_term(MultiIndex::unit(ring.nvars(), var), Scalar(1));
    return f;
}

Jet Jet::monomial(const JetRing& ring, const MultiIndex& q, Scalar c) {
    if (static_cast<int>(q.size()) != ring.nvars())
        fail(ErrorKind::structural, "monomial length does not match ring");
    Jet f(ring);
    f.add_term(q, c);
    return f;
}

void Jet::add_term(const MultiIndex& q, const Scalar& c) {
    if (c.is_zero() || q.degree() > ring_.order) return;
    auto [it, inserted] = terms_.emplace(q, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Scalar Jet::coeff(const MultiIndex& q) const {
    auto it = terms_.find(q);
    return it == terms_.end() ? Scalar() : it->second;
}

Scalar Jet::value_at_zero() const { return coeff(MultiIndex(ring_.nvars())); }

int Jet::min_degree() const {
    if (terms_.empty()) return ring_.order + 1;
    return terms_.begin()->first.degree();  // graded order: first is minimal
}

int Jet::min_phase_degree() const {
    int m = ring_.order + 1;
    for (const auto& [q, c] : terms_)
        m = std::min(m, q.degree_front(ring_.n_phase));
    return m;
}

int Jet::max_degree() const {
    if (terms_.empty()) return 0;
    return terms_.rbegin()->first.degree();
}

int Jet::max_degree_in(int var) const {
    int m = 0;
    for (const auto& [q, c] : terms_) m = std::max(m, q[var]);
    return m;
}

bool Jet::depends_on(int var) const {
    for (const auto& [q, c] : terms_)
        if (q[var] != 0) return true;
    return false;
}

Jet Jet::with_order(int new_order) const {
    Jet r(JetRing{ring_.n_phase, ring_.n_param, new_order});
    for (const auto& [q, c] : terms_) r.add_term(q, c);
    return r;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& [q, c] : r.terms_) c = -c;
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    check_same_vars(o);
    if (o.ring_.order < ring_.order) {
        *this = with_order(o.ring_.order);
    }
    for (const auto& [q, c] : o.terms_) add_term(q, c);
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_same_vars(o);
    if (o.ring_.order < ring_.order) {
        *this = with_order(o.ring_.order);
    }
    for (const auto& [q, c] : o.terms_) add_term(q, -c);
    return *this;
}

Jet Jet::mul_to_order(const Jet& a, const Jet& b, int keep_order) {
    a.check_same_vars(b);
    Jet r(JetRing{a.ring_.n_phase, a.ring_.n_param, keep_order});
    for (const auto& [qa, ca] : a.terms_) {
        int da = qa.degree();
        if (da > keep_order) break;  // graded order: all later terms too big
        for (const auto& [qb, cb] : b.terms_) {
            if (da + qb.degree() > keep_order) break;
            r.add_term(qa + qb, ca * cb);
        }
    }
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    return Jet::mul_to_order(a, b, std::min(a.order(), b.order()));
}

Jet operator*(const Scalar& c, const Jet& a) {
    Jet r(a.ring());
    if (c.is_zero()) return r;
    for (const auto& [q, v] : a.terms()) r.add_term(q, c * v);
    return r;
}

Jet Jet::derivative(int var) const {
    if (var < 0 || var >= nvars()) fail(ErrorKind::structural, "derivative: bad variable");
    Jet r(ring_);
    for (const auto& [q, c] : terms_) {
        if (q[var] == 0) continue;
        MultiIndex qq = q;
        Scalar mult(static_cast<long>(qq[var]));
        qq[var] -= 1;
        r.add_term(qq, mult * c);
    }
    return r;
}

Jet Jet::antiderivative(int var) const {
    if (var < ring_.n_phase || var >= nvars())
        fail(ErrorKind::structural, "antiderivative: not a parameter variable");
    Jet r(ring_);
    for (const auto& [q, c] : terms_) {
        if (q.degree() >= ring_.order)
            fail(ErrorKind::truncation_loss,
                 "antiderivative of degree-" + std::to_string(q.degree()) +
                     " term exceeds truncation order " + std::to_string(ring_.order));
        MultiIndex qq = q;
        qq[var] += 1;
        r.add_term(qq, c / Scalar(static_cast<long>(qq[var])));
    }
    return r;
}

Jet Jet::compose(std::span<const Jet> subst, bool allow_constant_shift) const {
    if (static_cast<int>(subst.size()) != nvars())
        fail(ErrorKind::structural, "compose: substitution arity mismatch");
    JetRing target{0, 0, ring_.order};
    if (!subst.empty()) {
        target = subst[0].ring();
        for (const Jet& s : subst) {
            if (!s.ring().same_vars(target))
                fail(ErrorKind::structural, "compose: substituents in different rings");
            target.order = std::min(target.order, s.order());
            if (!allow_constant_shift && !s.value_at_zero().is_zero())
                fail(ErrorKind::structural,
                     "compose: substituent has a constant term (pass allow_constant_shift "
                     "to accept)");
        }
    }
    target.order = std::min(target.order, ring_.order);

    // Memoized powers subst[i]^k.
    std::vector<std::vector<Jet>> pw(subst.size());
    auto power = [&](std::size_t i, int k) -> const Jet& {
        auto& col = pw[i];
        if (col.empty()) col.push_back(Jet::one(target));
        while (static_cast<int>(col.size()) <= k) col.push_back(col.back() * subst[i]);
        return col[k];
    };

    Jet r(target);
    for (const auto& [q, c] : terms_) {
        Jet m = Jet::one(target);
        for (std::size_t i = 0; i < subst.size(); ++i)
            if (q[i] > 0) m = m * power(i, q[i]);
        r += c * m;
    }
    return r;
}

Jet Jet::exp() const {
    if (!value_at_zero().is_zero())
        fail(ErrorKind::domain, "exp of a jet with nonzero constant term");
    Jet acc = Jet::one(ring_);
    Jet term = Jet::one(ring_);
    for (int k = 1; k <= ring_.order; ++k) {
        term = term * *this;
        if (term.is_zero()) break;
        term = Scalar(1, k) * term;
        acc += term;
    }
    return acc;
}

Jet Jet::inverse() const {
    Scalar c0 = value_at_zero();
    if (c0.is_zero()) fail(ErrorKind::domain, "inverse of a jet vanishing at 0");
    Jet u = Scalar(Scalar(1) / c0) * *this;
    u.add_term(MultiIndex(nvars()), Scalar(-1));  // u = f/c0 - 1, vanishes at 0
    Jet acc = Jet::one(ring_);
    Jet term = Jet::one(ring_);
    for (int k = 1; k <= ring_.order; ++k) {
        term = term * u;
        if (term.is_zero()) break;
        acc += (k % 2 ? -term : term);
    }
    return (Scalar(1) / c0) * acc;
}

Jet Jet::divide_by_variable(int var) const {
    Jet r(ring_);
    for (const auto& [q, c] : terms_) {
        if (q[var] == 0)
            fail(ErrorKind::stage, "term " + q.str() + " not divisible by variable " +
                                       std::to_string(var + 1));
        MultiIndex qq = q;
        qq[var] -= 1;
        r.add_term(qq, c);
    }
    return r;
}

Jet Jet::set_variable_zero(int var) const {
    Jet r(ring_);
    for (const auto& [q, c] : terms_)
        if (q[var] == 0) r.add_term(q, c);
    return r;
}

Jet Jet::phase_coefficient(const MultiIndex& phase_q) const {
    Jet r(ring_);
    for (const auto& [q, c] : terms_) {
        bool match = true;
        for (int k = 0; k < ring_.n_phase; ++k)
            if (q[k] != phase_q[k]) { match = false; break; }
        if (!match) continue;
        MultiIndex qq = q;
        for (int k = 0; k < ring_.n_phase; ++k) qq[k] = 0;
        r.add_term(qq, c);
    }
    return r;
}

Jet Jet::extract_power(int var, int k) const {
    Jet r(ring_);
    for (const auto& [q, c] : terms_) {
        if (q[var] != k) continue;
        MultiIndex qq = q;
        qq[var] = 0;
        r.add_term(qq, c);
    }
    return r;
}

bool Jet::equals_to_order(const Jet& o, int k) const {
    check_same_vars(o);
    auto scan = [&](const Jet& a, const Jet& b) {
        for (const auto& [q, c] : a.terms_) {
            if (q.degree() > k) break;
            if (b.coeff(q) != c) return false;
        }
        return true;
    };
    return scan(*this, o) && scan(o, *this);
}

std::string Jet::str(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    auto vname = [&](int k) {
        if (k < static_cast<int>(var_names.size())) return var_names[k];
        return "x" + std::to_string(k + 1);
    };
    std::ostringstream os;
    bool first = true;
    for (const auto& [q, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (std::size_t k = 0; k < q.size(); ++k) {
            if (q[k] == 0) continue;
            os << "*" << vname(static_cast<int>(k));
            if (q[k] > 1) os << "^" << q[k];
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Jet& f) { return os << f.str(); }

}  // namespace pnf
