#include "pnf/frobenius.hpp"

#include <algorithm>

namespace pnf {

namespace {

Jet rhs_component(const std::vector<JetMat>& theta, const std::vector<JetVec>& gamma,
                  std::size_t v_pos, const JetVec& beta, std::size_t row) {
    Jet r = gamma[v_pos][row];
    const JetMat& th = theta[v_pos];
    for (std::size_t l = 0; l < beta.size(); ++l)
        if (!th[row][l].is_zero() && !beta[l].is_zero()) r -= th[row][l] * beta[l];
    return r;
}

}  // namespace

JetVec frobenius_solve(const std::vector<JetMat>& theta, const std::vector<JetVec>& gamma,
                       const std::vector<int>& vars, int target_order) {
    if (theta.size() != vars.size() || gamma.size() != vars.size())
        fail(ErrorKind::structural, "frobenius_solve: one Theta and gamma per variable");
    const std::size_t m = vars.size();
    if (m == 0) fail(ErrorKind::structural, "frobenius_solve: no variables");
    const std::size_t dim = gamma[0].size();
    const JetRing data_ring = gamma[0][0].ring();

    // Compatibility first; it is what makes the monomial recursion closed.
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    Jet lhs = theta[b][i][j].derivative(vars[a]) -
                              theta[a][i][j].derivative(vars[b]);
                    Jet rhs = Jet::zero(data_ring);
                    for (std::size_t l = 0; l < dim; ++l)
                        rhs += theta[a][i][l] * theta[b][l][j] -
                               theta[b][i][l] * theta[a][l][j];
                    if (!lhs.equals_to_order(rhs, data_ring.order - 1))
                        fail(ErrorKind::stage, "matrix compatibility fails",
                             "frobenius_solve");
                }
                Jet lv = gamma[a][i].derivative(vars[b]) + jet_mat_apply(theta[b], gamma[a])[i];
                Jet rv = gamma[b][i].derivative(vars[a]) + jet_mat_apply(theta[a], gamma[b])[i];
                if (!lv.equals_to_order(rv, data_ring.order - 1))
                    fail(ErrorKind::stage, "right-hand-side compatibility fails",
                         "frobenius_solve");
            }
        }

    JetRing out_ring = data_ring;
    out_ring.order = target_order;
    JetVec beta(dim, Jet::zero(out_ring));

    // Degree-by-degree fill: the coefficient at tau (some var exponent > 0)
    // comes from the equation along the smallest such variable; the right
    // side only involves strictly smaller degrees, so junk above the data's
    // carried order never reaches the kept range.
    for (int deg = 1; deg <= target_order; ++deg) {
        std::vector<JetVec> rhs_cache;
        for (std::size_t v = 0; v < m; ++v) {
            JetVec rv;
            for (std::size_t row = 0; row < dim; ++row)
                rv.push_back(rhs_component(theta, gamma, v, beta, row));
            rhs_cache.push_back(std::move(rv));
        }
        for_each_monomial_of_degree(out_ring.nvars(), deg, [&](const MultiIndex& tau) {
            std::size_t v_pos = m;
            for (std::size_t v = 0; v < m; ++v)
                if (tau[vars[v]] > 0) { v_pos = v; break; }
            if (v_pos == m) return;  // no vars dependence: stays zero
            MultiIndex below = tau;
            below[vars[v_pos]] -= 1;
            for (std::size_t row = 0; row < dim; ++row) {
                Scalar c = rhs_cache[v_pos][row].coeff(below);
                if (!c.is_zero())
                    beta[row].add_term(tau, c / Scalar(static_cast<long>(tau[vars[v_pos]])));
            }
        });
    }

    // Every equation must hold to one degree below the data.
    for (std::size_t v = 0; v < m; ++v)
        for (std::size_t row = 0; row < dim; ++row) {
            Jet resid = beta[row].derivative(vars[v]) -
                        rhs_component(theta, gamma, v, beta, row);
            if (!resid.equals_to_order(Jet::zero(data_ring), data_ring.order - 1))
                fail(ErrorKind::stage, "solution does not satisfy its system",
                     "frobenius_solve");
        }
    return beta;
}

Jet poincare_solve(const JetVec& rhs, const std::vector<int>& vars, int target_order) {
    std::vector<JetMat> theta;
    std::vector<JetVec> gamma;
    for (const Jet& r : rhs) {
        theta.push_back(JetMat{{Jet::zero(r.ring())}});
        gamma.push_back(JetVec{r});
    }
    return frobenius_solve(theta, gamma, vars, target_order)[0];
}

std::vector<Jet> flow_series(const std::vector<Jet>& start, const PolyVector& field,
                             int var, int target_order) {
    const int nv = field.ring().nvars();
    if (static_cast<int>(start.size()) != nv)
        fail(ErrorKind::structural, "flow_series: start arity mismatch");
    JetRing ring = field.ring();
    ring.order = target_order;

    // psi = sum_k psi_k x_var^k; (k+1) psi_{k+1} = [field(psi)]_k. The
    // coefficient at x_var^k of the composite only uses psi_0..psi_k, so the
    // recursion is closed and exact to target_order.
    std::vector<std::vector<Jet>> coeffs;  // coeffs[k][component]
    std::vector<Jet> start_padded;
    for (const Jet& s : start) start_padded.push_back(s.with_order(target_order));
    coeffs.push_back(start_padded);

    std::vector<Jet> psi = start_padded;
    Jet var_jet = Jet::variable(ring, var);
    for (int k = 0; k + 1 <= target_order; ++k) {
        std::vector<Jet> fk(nv, Jet::zero(ring));
        for (int comp = 0; comp < nv; ++comp) {
            Jet fc = field.component(comp);
            if (fc.is_zero()) continue;
            fk[comp] = fc.with_order(target_order).compose(psi).extract_power(var, k);
        }
        std::vector<Jet> next(nv, Jet::zero(ring));
        for (int comp = 0; comp < nv; ++comp) next[comp] = Scalar(1, k + 1) * fk[comp];
        coeffs.push_back(next);
        // rebuild psi with the new coefficient layer
        psi = start_padded;
        Jet pw = Jet::one(ring);
        for (std::size_t kk = 1; kk < coeffs.size(); ++kk) {
            pw = Jet::mul_to_order(pw, var_jet, target_order);
            for (int comp = 0; comp < nv; ++comp)
                if (!coeffs[kk][comp].is_zero())
                    psi[comp] += Jet::mul_to_order(coeffs[kk][comp], pw, target_order);
        }
    }
    return psi;
}

DiffeoJet straighten_field(const PolyVector& a_tilde, int var,
                           const std::vector<PolyVector>& preserve, int target_order) {
    JetRing ring = a_tilde.ring();
    if (target_order > 0) {
        if (target_order > a_tilde.order() + 1)
            fail(ErrorKind::structural, "straighten_field: order raise beyond one degree");
        ring.order = target_order;
    }
    const int nv = ring.nvars(), n = ring.n_phase;
    if (var < n || var >= nv)
        fail(ErrorKind::structural, "straighten_field: var must be a parameter variable");
    // Shape check: d/dx_var plus phase components vanishing at x' = 0.
    for (int k = n; k < nv; ++k) {
        Jet expect = (k == var) ? Jet::one(ring) : Jet::zero(ring);
        if (a_tilde.component(k) != expect)
            fail(ErrorKind::stage, "field is not of the form d/dx_var + phase part",
                 "straighten_field");
    }
    for (int i = 0; i < n; ++i)
        if (a_tilde.component(i).min_phase_degree() < 1)
            fail(ErrorKind::stage, "phase components must vanish at x' = 0",
                 "straighten_field");
    for (const PolyVector& w : preserve) {
        PolyVector br = schouten(a_tilde, w);
        if (!br.equals_to_order(PolyVector(1, br.ring()), br.order()))
            fail(ErrorKind::stage, "preserve-list field does not commute with the input",
                 "straighten_field");
    }

    // psi(y) = flow of A~ for time y_var from (y with y_var = 0); then
    // G = psi^{-1} satisfies pushforward(G, A~) = d/dx_var.
    std::vector<Jet> start;
    for (int i = 0; i < nv; ++i) {
        Jet s = Jet::variable(ring, i);
        if (i == var) s = Jet::zero(ring);
        start.push_back(s);
    }
    std::vector<Jet> psi = flow_series(start, a_tilde, var, ring.order);
    DiffeoJet forward = DiffeoJet::make(std::move(psi));
    DiffeoJet g = forward.inverse();

    PolyVector straightened = pushforward(g, a_tilde);
    PolyVector target = PolyVector::basis_field(ring, var).with_order(straightened.order());
    if (!straightened.equals_to_order(target, straightened.order()))
        fail(ErrorKind::stage, "flow straightening did not close", "straighten_field");
    for (const PolyVector& w : preserve) {
        PolyVector moved = pushforward(g, w);
        if (!moved.equals_to_order(w.with_order(moved.order()), moved.order()))
            fail(ErrorKind::stage, "straightening failed to preserve a required field",
                 "straighten_field");
    }
    return g;
}

}  // namespace pnf
