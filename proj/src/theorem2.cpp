#include <algorithm>

#include "pnf/poisson.hpp"

namespace pnf {

namespace {

MultiIndex phase_of(const MultiIndex& q, int n) {
    MultiIndex u(n);
    for (int k = 0; k < n; ++k) u[k] = q[k];
    return u;
}

/// theta_{i,j}^l with [A~_i, X_j] = sum_l theta_{i,j}^l X_l, plus the
/// analogous gamma's from [A~_i, A~_j]. The brackets lose one carried degree
/// (the A~'s have a constant component), and the X-module division shifts
/// one more down, so these come out exact at their carried orders.
struct Connection {
    std::vector<std::vector<JetVec>> theta;  // theta[i][j] = p jets
    std::vector<std::vector<JetVec>> gamma;  // gamma[i][j] = p jets
};

Connection extract_connection(const std::vector<PolyVector>& a_tilde,
                              const std::vector<PolyVector>& xs, const JetMat& a,
                              const LinearFamily& s) {
    const int p = s.p();
    Connection c;
    c.theta.assign(p, std::vector<JetVec>(p));
    c.gamma.assign(p, std::vector<JetVec>(p));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            PolyVector br = schouten(a_tilde[i], xs[j]);
            std::string why;
            auto th = divide_by_x_module(s, a, br.with_order(br.order()), &why);
            if (!th)
                fail(ErrorKind::stage, "[A~_i, X_j] is not an X-combination: " + why,
                     "theorem2/theta");
            c.theta[i][j] = *th;
        }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            PolyVector br = schouten(a_tilde[i], a_tilde[j]);
            std::string why;
            auto ga = divide_by_x_module(s, a, br.with_order(br.order()), &why);
            if (!ga)
                fail(ErrorKind::stage, "[A~_i, A~_j] is not an X-combination: " + why,
                     "theorem2/gamma");
            c.gamma[i][j] = *ga;
        }
    return c;
}

void verify_connection_symmetries(const Connection& c, const LinearFamily& s,
                                  int check_order, std::vector<StageCheck>& checks) {
    const int p = s.p();
    bool theta_sym = true, gamma_sym = true, invariant = true;
    const JetRing ring = c.theta[0][0][0].ring();
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            for (int l = 0; l < p; ++l) {
                if (!c.theta[i][j][l].equals_to_order(c.theta[l][j][i], check_order))
                    theta_sym = false;
                if (!c.gamma[i][j][l].equals_to_order(c.gamma[l][j][i], check_order))
                    gamma_sym = false;
                for (int k = 0; k < p; ++k) {
                    PolyVector sk = s.s_field(k, ring);
                    if (!sk.apply(c.theta[i][j][l])
                             .equals_to_order(Jet::zero(ring), check_order - 1))
                        invariant = false;
                    if (!sk.apply(c.gamma[i][j][l])
                             .equals_to_order(Jet::zero(ring), check_order - 1))
                        invariant = false;
                }
            }
    checks.push_back({"theta_symmetry", theta_sym, ""});
    checks.push_back({"gamma_symmetry", gamma_sym, ""});
    checks.push_back({"connection_invariance", invariant, ""});
    if (!theta_sym || !gamma_sym)
        fail(ErrorKind::stage, "connection symmetry fails", "theorem2");
}

/// a_{i,k} extraction with invariant-support validation.
JetMat extract_a(const PoissonJet& p, const std::string& stage) {
    const int np = p.p();
    JetMat a(np, JetVec(np, Jet()));
    for (int k = 0; k < np; ++k) {
        std::string why;
        auto ak = divide_by_s_module(p.family(), p.hamiltonian(k), &why);
        if (!ak)
            fail(ErrorKind::stage, "hamiltonians are not S-combinations: " + why, stage);
        for (int l = 0; l < np; ++l) {
            for (const auto& [q, c] : (*ak)[l].terms())
                if (!p.family().resonant_function(phase_of(q, p.n())))
                    fail(ErrorKind::stage,
                         "hamiltonian coefficient carries non-invariant monomial " + q.str(),
                         stage);
            a[k][l] = (*ak)[l];
        }
    }
    return a;
}

/// Factorization of an invariant phase monomial over the generator list,
/// greedy in graded-lex order with backtracking. Returns exponents per
/// generator.
bool factor_invariant(const MultiIndex& q, const std::vector<MultiIndex>& gens,
                      std::size_t from, std::vector<int>& exps) {
    if (q.is_zero()) return true;
    for (std::size_t g = from; g < gens.size(); ++g) {
        if (!gens[g].divides(q)) continue;
        exps[g] += 1;
        if (factor_invariant(q.minus(gens[g]), gens, g, exps)) return true;
        exps[g] -= 1;
    }
    return false;
}

}  // namespace

Theorem2Result normalize_rank2p_theorem2(const PoissonJet& in, const PipelineOptions& opt) {
    const JetRing ring = in.ring();
    const int n = in.n(), p = in.p(), nv = ring.nvars(), order = ring.order;

    Theorem2Result result{in, DiffeoJet::identity(ring), {}, {}, {}, {}};

    if (n <= p + 1)
        fail(ErrorKind::hypothesis, "rank-2p normal form needs n > p + 1", "theorem2");
    if (!rank_condition_2p(in))
        fail(ErrorKind::hypothesis, "P^(p+1) is nonzero: rank exceeds 2p", "theorem2");

    PoissonJet current = in;
    DiffeoJet total = DiffeoJet::identity(ring);

    // Stage 1: Saito division of the phase-phase part.
    std::vector<PolyVector> xs = current.hamiltonians();
    PolyVector t(2, ring);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            t.add_term({i, j}, current.bracket(i, j));
    JetMat a = extract_a(current, "theorem2/saito");
    std::vector<PolyVector> a_fields;
    {
        StageRecord rec{"saito_division", DiffeoJet::identity(ring), {}};
        a_fields = saito_divide(t, xs, current.family());
        rec.checks.push_back({"reconstruction", true, ""});  // verified inside
        rec.checks.push_back({"divisors_commute_with_S", true, ""});
        result.stages.push_back(std::move(rec));
    }
    // A~_i = d/dx_{n+i} + A_i.
    auto make_a_tilde = [&](const std::vector<PolyVector>& af) {
        std::vector<PolyVector> at;
        for (int i = 0; i < p; ++i) {
            PolyVector v = af[i];
            v += PolyVector::basis_field(af[i].ring(), n + i).with_order(af[i].order());
            at.push_back(v);
        }
        return at;
    };
    std::vector<PolyVector> a_tilde = make_a_tilde(a_fields);
    {
        // P = sum_i X_i ^ A~_i must reproduce the structure.
        PolyVector rec_biv(2, ring);
        for (int i = 0; i < p; ++i) rec_biv += wedge(xs[i], a_tilde[i]);
        if (!rec_biv.equals_to_order(current.bivector(), order))
            fail(ErrorKind::stage, "X ^ A~ decomposition does not reproduce P", "theorem2");
    }

    // Induction over q: after stage q, A~_i = d/dx_{n+i} exactly for i <= q.
    for (int q = 0; q < p; ++q) {
        StageRecord rec{"straighten_" + std::to_string(q + 1), DiffeoJet::identity(ring), {}};
        Connection con = extract_connection(a_tilde, xs, a, current.family());
        int conn_order = con.theta[0][0][0].order();
        verify_connection_symmetries(con, current.family(), conn_order, rec.checks);

        // beta_q from the Frobenius system over the already-straightened
        // directions, then the corrected field A~_q - sum_j beta_j X_j.
        PolyVector corrected = a_tilde[q];
        if (q > 0) {
            std::vector<JetMat> thetas;
            std::vector<JetVec> gammas;
            std::vector<int> vars;
            for (int i = 0; i < q; ++i) {
                JetMat th(p, JetVec(p, Jet::zero(ring)));
                for (int k = 0; k < p; ++k)
                    for (int l = 0; l < p; ++l) th[k][l] = con.theta[i][l][k];
                thetas.push_back(std::move(th));
                gammas.push_back(con.gamma[i][q]);
                vars.push_back(n + i);
            }
            JetVec beta = frobenius_solve(thetas, gammas, vars,
                                          std::min(order, conn_order + 1));
            bool beta_invariant = true;
            for (int k = 0; k < p; ++k) {
                PolyVector sk = current.family().s_field(k, ring);
                for (const Jet& bq : beta)
                    if (!sk.apply(bq).equals_to_order(Jet::zero(ring), conn_order - 1))
                        beta_invariant = false;
            }
            rec.checks.push_back({"beta_invariant", beta_invariant, ""});
            if (!beta_invariant)
                fail(ErrorKind::stage, "S_k(beta) != 0", "theorem2");
            for (int j = 0; j < p; ++j) corrected -= beta[j] * xs[j];
            bool commutes = true;
            for (int i = 0; i < q; ++i) {
                PolyVector br = schouten(a_tilde[i], corrected);
                if (!br.equals_to_order(PolyVector(1, br.ring()), br.order()))
                    commutes = false;
            }
            rec.checks.push_back({"corrected_field_commutes", commutes, ""});
            if (!commutes)
                fail(ErrorKind::stage, "corrected field fails to commute", "theorem2");
        }

        // Straighten the corrected field, preserving S's and the previous
        // coordinate fields.
        std::vector<PolyVector> preserve;
        for (int k = 0; k < p; ++k) preserve.push_back(current.family().s_field(k, ring));
        for (int i = 0; i < q; ++i) preserve.push_back(a_tilde[i]);
        DiffeoJet g = straighten_field(corrected, n + q, preserve,
                                       std::min(order, corrected.order() + 1));
        rec.diffeo = g;

        PolyVector moved = pushforward(g, current.bivector()).with_order(order);
        current = PoissonJet::make(moved, current.family());
        total = compose(g, total);
        for (auto& at : a_tilde) at = pushforward(g, at);
        xs = current.hamiltonians();
        a = extract_a(current, "theorem2/straighten");

        // After straightening, A~_q = d/dx_{n+q} + sum_j c_{q,j} X_j.
        PolyVector residue = a_tilde[q];
        residue -= PolyVector::basis_field(ring, n + q).with_order(residue.order());
        std::string why;
        auto cq_opt = divide_by_x_module(current.family(), a, residue, &why);
        if (!cq_opt)
            fail(ErrorKind::stage, "straightened field residue is not an X-combination: " + why,
                 "theorem2");
        JetVec cq = *cq_opt;
        bool cq_zero = true;
        for (const Jet& c : cq)
            if (!c.is_zero()) cq_zero = false;
        rec.checks.push_back({"residue_in_x_module", true, ""});

        if (!cq_zero) {
            // Symmetric f-correction from the g_q potentials: g_{q,i} = 0
            // for i != q, dg_{q,q}/dx_{n+i} = -c_{q,i} (i < q).
            Connection con2 = extract_connection(a_tilde, xs, a, current.family());
            int c2_order = con2.theta[0][0][0].order();
            JetVec rhs;
            std::vector<int> vars;
            for (int i = 0; i < q; ++i) {
                rhs.push_back(-cq[i]);
                vars.push_back(n + i);
            }
            Jet gqq = vars.empty() ? Jet::zero(ring)
                                   : poincare_solve(rhs, vars, std::min(order, c2_order + 1));
            JetVec gq(p, Jet::zero(ring));
            gq[q] = gqq;
            // f_i = dg_q/dx_{n+i} - Theta_i g_q (i < q);
            // f_q = dg_q/dx_{n+q} - Theta_q g_q - c_q; f_i = 0 for i > q.
            std::vector<JetVec> f(p, JetVec(p, Jet::zero(ring)));
            for (int i = 0; i <= q; ++i) {
                for (int k = 0; k < p; ++k) {
                    Jet val = gq[k].derivative(n + i);
                    for (int l = 0; l < p; ++l) val -= con2.theta[i][l][k] * gq[l];
                    if (i == q) val -= cq[k];
                    f[i][k] = val;
                }
            }
            bool f_sym = true;
            for (int i = 0; i <= q; ++i)
                for (int l = 0; l <= q; ++l)
                    if (!f[i][l].equals_to_order(f[l][i], c2_order - 1)) f_sym = false;
            rec.checks.push_back({"f_symmetric", f_sym, ""});
            if (!f_sym)
                fail(ErrorKind::stage, "symmetric correction failed", "theorem2");
            // Symmetric completion: row l > q gets f_{l,i} := f_{i,l} so P is
            // untouched; later stages re-derive everything from P anyway.
            for (int i = 0; i <= q; ++i)
                for (int l = q + 1; l < p; ++l) f[l][i] = f[i][l];
            std::vector<PolyVector> b_fields;
            for (int i = 0; i < p; ++i) {
                PolyVector bi = a_tilde[i];
                for (int l = 0; l < p; ++l) bi += f[i][l] * xs[l];
                b_fields.push_back(bi);
            }
            // P must be unchanged by the symmetric modification.
            {
                PolyVector rebuilt(2, ring);
                for (int i = 0; i < p; ++i) rebuilt += wedge(xs[i], b_fields[i]);
                if (!rebuilt.equals_to_order(current.bivector(), rebuilt.order()))
                    fail(ErrorKind::stage, "f-correction altered the structure", "theorem2");
            }
            // Re-straighten fields 0..q sequentially.
            for (int i = 0; i <= q; ++i) {
                std::vector<PolyVector> keep;
                for (int k = 0; k < p; ++k)
                    keep.push_back(current.family().s_field(k, ring));
                for (int m = 0; m < i; ++m)
                    keep.push_back(PolyVector::basis_field(ring, n + m));
                DiffeoJet gi = straighten_field(b_fields[i], n + i, keep,
                                                std::min(order, b_fields[i].order() + 1));
                PolyVector moved2 = pushforward(gi, current.bivector()).with_order(order);
                current = PoissonJet::make(moved2, current.family());
                total = compose(gi, total);
                rec.diffeo = compose(gi, rec.diffeo);
                for (int m = 0; m < p; ++m) b_fields[m] = pushforward(gi, b_fields[m]);
            }
            a_tilde = b_fields;
            xs = current.hamiltonians();
            a = extract_a(current, "theorem2/fcorrection");
        }

        // The first q+1 decomposition fields are now exactly coordinate
        // fields.
        for (int i = 0; i <= q; ++i) {
            PolyVector expect = PolyVector::basis_field(ring, n + i)
                                    .with_order(a_tilde[i].order());
            if (!a_tilde[i].equals_to_order(expect, a_tilde[i].order()))
                fail(ErrorKind::stage,
                     "field " + std::to_string(i + 1) + " not straightened", "theorem2");
            a_tilde[i] = PolyVector::basis_field(ring, n + i);
        }
        result.stages.push_back(std::move(rec));
    }

    // All A~ straightened: the phase-phase part must now vanish.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!current.bracket(i, j).is_zero())
                fail(ErrorKind::stage, "phase-phase brackets survive the induction",
                     "theorem2");

    // Final stage: eliminate the parameter dependence of a_{i,k} through the
    // commuting Gamma_k = sum_i a_{i,k} d/dx_{n+i}, treating the invariant
    // monomials as base symbols w.
    result.invariants = invariant_generators(current.family(), order);
    const auto& gens = result.invariants.generators;
    const int t_count = static_cast<int>(gens.size());
    {
        StageRecord rec{"parameter_elimination", DiffeoJet::identity(ring), {}};

        // Gamma commutation, the structural source of this stage.
        bool gammas_commute = true;
        {
            std::vector<PolyVector> gammas;
            for (int k = 0; k < p; ++k) {
                PolyVector gk(1, ring);
                for (int i = 0; i < p; ++i) gk.add_term({n + i}, a[i][k]);
                gammas.push_back(gk);
            }
            for (int r = 0; r < p; ++r)
                for (int sgi = r + 1; sgi < p; ++sgi) {
                    PolyVector br = schouten(gammas[r], gammas[sgi]);
                    if (!br.equals_to_order(PolyVector(1, br.ring()), br.order()))
                        gammas_commute = false;
                }
        }
        rec.checks.push_back({"gamma_fields_commute", gammas_commute, ""});
        if (!gammas_commute)
            fail(ErrorKind::stage, "Gamma fields fail to commute", "theorem2");

        // b_{i,k}(w, x'') over the (w, x'') ring.
        JetRing wring{t_count, p, order};
        JetMat b(p, JetVec(p, Jet::zero(wring)));
        for (int i = 0; i < p; ++i)
            for (int k = 0; k < p; ++k)
                for (const auto& [q, c] : a[i][k].terms()) {
                    std::vector<int> exps(gens.size(), 0);
                    if (!factor_invariant(phase_of(q, n), gens, 0, exps))
                        fail(ErrorKind::stage,
                             "invariant monomial " + q.str() +
                                 " does not factor over the generators (raise the "
                                 "degree bound)",
                             "theorem2");
                    MultiIndex wq(wring.nvars());
                    for (int g2 = 0; g2 < t_count; ++g2) wq[g2] = exps[g2];
                    for (int m = 0; m < p; ++m) wq[t_count + m] = q[n + m];
                    b[i][k].add_term(wq, c);
                }

        // Flows of Gamma_k(w, .) from the origin with symbolic times s_k,
        // composed into Xi(s); then chi = Xi ∘ M(w)^{-1} x''.
        JetRing wsring{t_count, p, order};  // s plays the parameter block
        std::vector<Jet> point;
        for (int g2 = 0; g2 < t_count; ++g2) point.push_back(Jet::variable(wsring, g2));
        for (int m = 0; m < p; ++m) point.push_back(Jet::zero(wsring));
        for (int k = p - 1; k >= 0; --k) {
            // field on the (w,s) ring: components along the s-block given by
            // b(w, current point)'s columns.
            PolyVector field(1, wsring);
            for (int i = 0; i < p; ++i) {
                // substitute the current point into b[i][k]
                Jet comp = b[i][k];
                field.add_term({t_count + i}, comp);
            }
            point = flow_series(point, field, t_count + k, order);
        }
        // point now = Xi(w, s). M(w) = b(w, 0); chi = Xi ∘ (s = M^{-1} x'').
        JetMat m_of_w(p, JetVec(p, Jet::zero(wring)));
        for (int i = 0; i < p; ++i)
            for (int k = 0; k < p; ++k) {
                Jet val = Jet::zero(wring);
                for (const auto& [q, c] : b[i][k].terms()) {
                    bool pure_w = true;
                    for (int m = 0; m < p; ++m)
                        if (q[t_count + m] != 0) pure_w = false;
                    if (pure_w) val.add_term(q, c);
                }
                m_of_w[i][k] = val;
            }
        JetMat m_inv = jet_mat_inverse(m_of_w);
        // Xi ∘ (s = M^{-1} x'') as a (w, x'')-space map fixing w; the wanted
        // change is its inverse M(w) ∘ Xi^{-1}, which sends Gamma_k(w,.) to
        // the constant field Gamma_k(w, 0).
        std::vector<Jet> chi_subst;
        for (int g2 = 0; g2 < t_count; ++g2) chi_subst.push_back(Jet::variable(wring, g2));
        for (int k = 0; k < p; ++k) {
            Jet sk = Jet::zero(wring);
            for (int m = 0; m < p; ++m)
                sk += m_inv[k][m] * Jet::variable(wring, t_count + m);
            chi_subst.push_back(sk);
        }
        std::vector<Jet> ws_comps;
        for (int g2 = 0; g2 < t_count; ++g2) ws_comps.push_back(Jet::variable(wring, g2));
        for (int k = 0; k < p; ++k)
            ws_comps.push_back(point[t_count + k].compose(chi_subst));
        DiffeoJet chi_inverse_ws = DiffeoJet::make(std::move(ws_comps));
        DiffeoJet chi_ws = chi_inverse_ws.inverse();
        // Final diffeo on the real variables: phase identity, parameter
        // components chi_k with w <- invariant monomials, x'' <- x''.
        std::vector<Jet> real_subst;
        for (int g2 = 0; g2 < t_count; ++g2) {
            MultiIndex full(nv);
            for (int k2 = 0; k2 < n; ++k2) full[k2] = gens[g2][k2];
            real_subst.push_back(Jet::monomial(ring, full, Scalar(1)));
        }
        for (int m = 0; m < p; ++m) real_subst.push_back(Jet::variable(ring, n + m));
        std::vector<Jet> comps;
        for (int i = 0; i < n; ++i) comps.push_back(Jet::variable(ring, i));
        for (int k = 0; k < p; ++k)
            comps.push_back(chi_ws.component(t_count + k).compose(real_subst));
        DiffeoJet elim = DiffeoJet::make(std::move(comps));
        rec.diffeo = elim;

        PolyVector moved = pushforward(elim, current.bivector()).with_order(order);
        current = PoissonJet::make(moved, current.family());
        total = compose(elim, total);
        result.stages.push_back(std::move(rec));
    }

    // Output shape: X_k = sum_l b_{k,l}(invariant monomials) S_l with no
    // parameter dependence, phase-phase and parameter-parameter parts zero.
    result.b = extract_a(current, "theorem2/final");
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k)
            for (const auto& [q, c] : result.b[i][k].terms())
                if (q.degree() != q.degree_front(n))
                    fail(ErrorKind::stage,
                         "output coefficient still depends on the parameters at " + q.str(),
                         "theorem2");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!current.bracket(i, j).is_zero())
                fail(ErrorKind::stage, "output has phase-phase brackets", "theorem2");
    result.final_checks.push_back({"b_invariant_only", true, ""});

    PolyVector replay = pushforward(total, in.bivector());
    bool conj = replay.equals_to_order(current.bivector().with_order(replay.order()),
                                       replay.order());
    result.final_checks.push_back({"conjugacy_replay", conj, ""});
    if (!conj && !opt.force)
        fail(ErrorKind::stage, "composite diffeo does not replay the pipeline", "theorem2");

    result.out = current;
    result.diffeo = total;
    return result;
}

}  // namespace pnf
