#pragma once

#include <random>

#include "pnf/poisson.hpp"

namespace pnf::testing {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    int uniform(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    }

    Scalar scalar(bool allow_imaginary = true) {
        Rational re(uniform(-4, 4), uniform(1, 3));
        Rational im(0);
        if (allow_imaginary && uniform(0, 3) == 0) im = Rational(uniform(-3, 3), uniform(1, 2));
        return Scalar(re, im);
    }

    Scalar nonzero_scalar(bool allow_imaginary = true) {
        while (true) {
            Scalar s = scalar(allow_imaginary);
            if (!s.is_zero()) return s;
        }
    }

    MultiIndex monomial(int nvars, int deg) {
        MultiIndex q(nvars);
        for (int k = 0; k < deg; ++k) q[uniform(0, nvars - 1)] += 1;
        return q;
    }

    Jet jet(const JetRing& ring, int terms, int min_deg = 0, int max_deg = -1) {
        if (max_deg < 0) max_deg = ring.order;
        Jet f(ring);
        for (int t = 0; t < terms; ++t)
            f.add_term(monomial(ring.nvars(), uniform(min_deg, max_deg)), scalar());
        return f;
    }

    PolyVector polyvector(const JetRing& ring, int degree, int entries, int coeff_terms = 2,
                          int min_deg = 0) {
        PolyVector t(degree, ring);
        for (int e = 0; e < entries; ++e) {
            std::vector<int> idx;
            while (static_cast<int>(idx.size()) < degree) {
                int v = uniform(0, ring.nvars() - 1);
                if (std::find(idx.begin(), idx.end(), v) == idx.end()) idx.push_back(v);
            }
            t.add_term(idx, jet(ring, coeff_terms, min_deg));
        }
        return t;
    }

    /// Identity-tangent diffeo with corrections of degree >= 2. When
    /// fix_parameters is set the last n_param components stay coordinates
    /// (the change is usable on Poisson structures without breaking the
    /// zero parameter-parameter brackets). Corrections of phase-degree
    /// exactly one are never generated: those change the linearization into
    /// a parameter-dependent one, which the pipelines reject as out-of-scope
    /// input. allow_pure_param adds phase-degree-zero corrections (handled
    /// by the origin translation, illegal as direct normalization input).
    DiffeoJet diffeo(const JetRing& ring, int terms_per_component = 2,
                     bool fix_parameters = false, bool allow_pure_param = true) {
        std::vector<Jet> comps;
        for (int i = 0; i < ring.nvars(); ++i) {
            Jet c = Jet::variable(ring, i);
            bool frozen = fix_parameters && i >= ring.n_phase;
            if (!frozen) {
                int added = 0;
                while (added < terms_per_component) {
                    MultiIndex q = monomial(ring.nvars(), uniform(2, ring.order));
                    int pd = q.degree_front(ring.n_phase);
                    if (pd == 1) continue;
                    if (pd == 0 && !allow_pure_param) continue;
                    c.add_term(q, scalar(false));
                    ++added;
                }
            }
            comps.push_back(c);
        }
        return DiffeoJet::make(std::move(comps));
    }
};

/// so(3)-type structure on three variables: {x1,x2}=x3, {x2,x3}=x1,
/// {x3,x1}=x2; a Poisson bivector with no parameter block.
inline PolyVector so3_bivector(int order) {
    JetRing ring{3, 0, order};
    PolyVector p(2, ring);
    p.add_term({0, 1}, Jet::variable(ring, 2));
    p.add_term({1, 2}, Jet::variable(ring, 0));
    p.add_term({2, 0}, Jet::variable(ring, 1));
    return p;
}

/// Commuting family Y_j = sum_l a_{j,l} S_l with invariant-monomial
/// coefficients and a(0) = Id; such families commute exactly and are their
/// own normal forms.
inline std::vector<PolyVector> invariant_combination_family(Rng& rng, const LinearFamily& s,
                                                            const JetRing& ring,
                                                            int extra_terms) {
    auto invariants = resonance_scan_serial(s, ResonanceKind::function, 1, ring.order);
    std::vector<PolyVector> fields;
    for (int j = 0; j < s.p(); ++j) {
        JetVec a(s.p(), Jet::zero(ring));
        a[j] = Jet::one(ring);
        if (!invariants.empty())
            for (int t = 0; t < extra_terms; ++t) {
                const auto& e = invariants[rng.uniform(0, invariants.size() - 1)];
                MultiIndex full(ring.nvars());
                for (int k = 0; k < s.n(); ++k) full[k] = e.q[k];
                // free parameter dependence on top of the invariant monomial
                for (int k = 0; k < rng.uniform(0, 1); ++k) {
                    int v = s.n() + rng.uniform(0, ring.n_param - 1);
                    if (full.degree() < ring.order) full[v] += 1;
                }
                a[rng.uniform(0, s.p() - 1)] +=
                    Jet::monomial(ring, full, rng.scalar(false));
            }
        PolyVector y(1, ring);
        for (int l = 0; l < s.p(); ++l) {
            PolyVector sl = s.s_field(l, ring);
            y += a[l] * sl;
        }
        fields.push_back(y);
    }
    return fields;
}

/// Resonant-only single field S + resonant slots with random coefficients.
inline PolyVector resonant_field(Rng& rng, const LinearFamily& s, const JetRing& ring,
                                 int extra_terms) {
    PolyVector y = s.s_field(0, ring);
    auto slots = resonance_scan_serial(s, ResonanceKind::vector, 2, ring.order);
    for (int t = 0; t < extra_terms && !slots.empty(); ++t) {
        const auto& e = slots[rng.uniform(0, slots.size() - 1)];
        MultiIndex full(ring.nvars());
        for (int k = 0; k < s.n(); ++k) full[k] = e.q[k];
        y.add_term({e.i}, Jet::monomial(ring, full, rng.scalar(false)));
    }
    return y;
}

/// Time-1 flow exp(W) of a field whose application raises the total degree
/// (components of the form f·X with f vanishing at 0 qualify). Any tensor
/// commuting with W is preserved by the result.
inline DiffeoJet exp_field_flow(const PolyVector& w) {
    const JetRing ring = w.ring();
    std::vector<Jet> comps;
    for (int i = 0; i < ring.nvars(); ++i) {
        Jet term = Jet::variable(ring, i);
        Jet acc = term;
        for (int k = 1; k <= ring.order; ++k) {
            Jet next(ring);
            for (int m = 0; m < ring.nvars(); ++m) {
                Jet wm = w.component(m);
                if (!wm.is_zero()) next += Jet::mul_to_order(wm, term.derivative(m), ring.order);
            }
            if (!next.is_zero() && next.min_degree() <= term.min_degree())
                fail(ErrorKind::structural, "flow exponential does not terminate");
            term = Scalar(1, k) * next;
            if (term.is_zero()) break;
            acc += term;
        }
        comps.push_back(acc);
    }
    return DiffeoJet::make(std::move(comps));
}

/// Diagonal exponential rescale x_i -> exp(gamma_i(x'')) x_i.
inline DiffeoJet exp_rescale(const JetRing& ring, const std::vector<Jet>& gammas) {
    std::vector<Jet> comps;
    for (int i = 0; i < ring.n_phase; ++i)
        comps.push_back(
            Jet::mul_to_order(gammas[i].exp(), Jet::variable(ring, i), ring.order));
    for (int k = ring.n_phase; k < ring.nvars(); ++k)
        comps.push_back(Jet::variable(ring, k));
    return DiffeoJet::make(std::move(comps));
}

}  // namespace pnf::testing
