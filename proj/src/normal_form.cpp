#include "pnf/normal_form.hpp"

namespace pnf {

FieldFamily FieldFamily::make(std::vector<PolyVector> fields, LinearFamily linear) {
    if (fields.empty() || static_cast<int>(fields.size()) != linear.p())
        fail(ErrorKind::constructor_check, "family size must match the eigenvalue rows");
    const JetRing ring = fields[0].ring();
    const int n = linear.n();
    if (ring.n_phase != n)
        fail(ErrorKind::constructor_check, "phase variable count must match lambda columns");
    for (int j = 0; j < linear.p(); ++j) {
        const PolyVector& x = fields[j];
        if (x.degree() != 1) fail(ErrorKind::constructor_check, "family members must be vector fields");
        if (!x.ring().same_vars(ring))
            fail(ErrorKind::constructor_check, "family members live in different rings");
        for (int k = n; k < ring.nvars(); ++k)
            if (!x.component(k).is_zero())
                fail(ErrorKind::constructor_check,
                     "field " + std::to_string(j + 1) + " has a parameter component");
        for (int i = 0; i < n; ++i) {
            Jet ci = x.component(i);
            if (ci.min_phase_degree() < 1)
                fail(ErrorKind::constructor_check,
                     "field " + std::to_string(j + 1) +
                         " does not vanish on the parameter axis");
            // Linear slice in x' must be exactly lambda_{j,i} x_i.
            for (const auto& [q, c] : ci.terms()) {
                if (q.degree_front(n) != 1) continue;
                MultiIndex expect = MultiIndex::unit(ring.nvars(), i);
                if (q != expect)
                    fail(ErrorKind::constructor_check,
                         "field " + std::to_string(j + 1) +
                             " has a non-diagonal or parameter-dependent linear part at " +
                             q.str());
            }
            if (ci.coeff(MultiIndex::unit(ring.nvars(), i)) != linear.lam(j, i))
                fail(ErrorKind::constructor_check,
                     "linear part of field " + std::to_string(j + 1) +
                         " does not match lambda");
        }
    }
    for (int a = 0; a < linear.p(); ++a)
        for (int b = a + 1; b < linear.p(); ++b) {
            PolyVector br = schouten(fields[a], fields[b]);
            if (!br.is_zero())
                fail(ErrorKind::hypothesis,
                     "fields " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                         " do not commute; bracket = " + br.str());
        }
    FieldFamily f;
    f.fields = std::move(fields);
    f.linear = std::move(linear);
    return f;
}

NormalizationResult normalize_family(const FieldFamily& f) {
    const JetRing ring = f.ring();
    const int n = f.linear.n(), p = f.linear.p(), nv = ring.nvars(), order = ring.order;

    // Phi starts as the identity; phi_i accumulates the phase corrections.
    std::vector<Jet> phi;
    for (int i = 0; i < nv; ++i) phi.push_back(Jet::variable(ring, i));
    // Normal forms start at the linear parts.
    std::vector<PolyVector> nf;
    for (int j = 0; j < p; ++j) nf.push_back(f.linear.s_field(j, ring));

    for (int deg = 2; deg <= order; ++deg) {
        // Defect E_j = NF_j ∘ Phi - DPhi · X_j, phase components.
        // Slots of phase degree `deg` are linear in the unknowns of this
        // degree; everything below must already vanish.
        std::vector<std::vector<Jet>> defect(p, std::vector<Jet>(n, Jet::zero(ring)));
        for (int j = 0; j < p; ++j) {
            for (int i = 0; i < n; ++i) {
                Jet e = nf[j].component(i).compose(phi);
                for (int m = 0; m < n; ++m) {
                    Jet xm = f.fields[j].component(m);
                    if (xm.is_zero()) continue;
                    e -= Jet::mul_to_order(phi[i].derivative(m), xm, order);
                }
                for (const auto& [q, c] : e.terms())
                    if (q.degree_front(n) < deg)
                        fail(ErrorKind::stage,
                             "normalization defect below current degree (internal)",
                             "normalize_family");
                defect[j][i] = e;
            }
        }
        for_each_monomial_of_degree(n, deg, [&](const MultiIndex& phase_q) {
            MultiIndex q_full(nv);
            for (int k = 0; k < n; ++k) q_full[k] = phase_q[k];
            for (int i = 0; i < n; ++i) {
                // e_{j,i,Q}(x'') and the constant divisors.
                JetVec e;
                for (int j = 0; j < p; ++j) e.push_back(defect[j][i].phase_coefficient(q_full));
                int jstar = -1;
                Vec divisors(p);
                for (int j = 0; j < p; ++j) {
                    divisors[j] = f.linear.pairing(phase_q, j) - f.linear.lam(j, i);
                    if (jstar < 0 && !divisors[j].is_zero()) jstar = j;
                }
                Jet phi_coeff = Jet::zero(ring);
                if (jstar >= 0)
                    phi_coeff = (Scalar(1) / divisors[jstar]) * e[jstar];
                if (!phi_coeff.is_zero()) {
                    Jet mono = Jet::monomial(ring, q_full, Scalar(1));
                    phi[i] += Jet::mul_to_order(phi_coeff, mono, order);
                }
                for (int j = 0; j < p; ++j) {
                    // Y_{j,i,Q} = divisor_j * phi_{i,Q} - e_{j,i,Q}
                    Jet y = divisors[j] * phi_coeff - e[j];
                    if (y.is_zero()) continue;
                    Jet mono = Jet::monomial(ring, q_full, Scalar(1));
                    nf[j].add_term({i}, Jet::mul_to_order(y, mono, order));
                }
            }
        });
    }

    NormalizationResult result;
    result.diffeo = DiffeoJet::make(std::move(phi));
    result.normal_forms = std::move(nf);
    result.resonance_support = resonant_monomials(f.linear, ResonanceKind::vector, order);

    // Joint-resonant support. For genuinely commuting input every surviving
    // slot is resonant for all j; a violation here means the commutativity
    // check was fooled or an internal bug slipped through.
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) {
            Jet ci = result.normal_forms[j].component(i);
            for (const auto& [q, c] : ci.terms()) {
                if (q.degree_front(n) < 2) continue;
                MultiIndex phase_q(n);
                for (int k = 0; k < n; ++k) phase_q[k] = q[k];
                if (!f.linear.resonant_vector(phase_q, i))
                    fail(ErrorKind::stage,
                         "normal form kept non-resonant slot " + phase_q.str() +
                             " -> x" + std::to_string(i + 1) + " (inconsistent family)",
                         "normalize_family");
            }
        }

    // Conjugacy re-verified through the independent pushforward path.
    for (int j = 0; j < p; ++j) {
        PolyVector via_push = pushforward(result.diffeo, f.fields[j]);
        if (!via_push.equals_to_order(result.normal_forms[j].with_order(via_push.order()),
                                      via_push.order()))
            fail(ErrorKind::stage,
                 "pushforward disagrees with the normalization recursion (internal)",
                 "normalize_family");
    }
    return result;
}

TheoremHypothesisCheck check_theorem_hypothesis(const NormalizationResult& r,
                                                const LinearFamily& s) {
    TheoremHypothesisCheck out;
    const int p = s.p();
    out.a.assign(p, JetVec(p, Jet()));
    for (int j = 0; j < p; ++j) {
        std::string why;
        auto aj = divide_by_s_module(s, r.normal_forms[j], &why);
        if (!aj) {
            out.reason = "normal form " + std::to_string(j + 1) + ": " + why;
            return out;
        }
        for (int l = 0; l < p; ++l) {
            // invariant support in the phase variables
            for (const auto& [q, c] : (*aj)[l].terms()) {
                MultiIndex phase_q(s.n());
                for (int k = 0; k < s.n(); ++k) phase_q[k] = q[k];
                if (!s.resonant_function(phase_q)) {
                    out.reason = "coefficient a[" + std::to_string(j + 1) + "][" +
                                 std::to_string(l + 1) + "] has non-invariant monomial " +
                                 q.str();
                    return out;
                }
            }
            Jet at0 = (*aj)[l].phase_coefficient(MultiIndex(s.n()));
            Jet expect = (j == l) ? Jet::one(at0.ring()) : Jet::zero(at0.ring());
            if (at0 != expect) {
                out.reason = "a(0,x'') is not the identity at entry (" +
                             std::to_string(j + 1) + "," + std::to_string(l + 1) + ")";
                return out;
            }
            out.a[j][l] = (*aj)[l];
        }
    }
    out.ok = true;
    return out;
}

}  // namespace pnf
