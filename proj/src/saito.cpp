#include "pnf/saito.hpp"

#include <map>

namespace pnf {

namespace {

std::vector<int> param_part(const MultiIndex& q, int n, int nv) {
    std::vector<int> s;
    s.reserve(nv - n);
    for (int k = n; k < nv; ++k) s.push_back(q[k]);
    return s;
}

MultiIndex phase_part(const MultiIndex& q, int n) {
    MultiIndex u(n);
    for (int k = 0; k < n; ++k) u[k] = q[k];
    return u;
}

}  // namespace

std::vector<PolyVector> saito_divide(const PolyVector& t, const std::vector<PolyVector>& x,
                                     const LinearFamily& s) {
    const JetRing ring = t.ring();
    const int n = s.n(), p = s.p(), nv = ring.nvars(), order = ring.order;
    if (t.degree() != 2) fail(ErrorKind::structural, "saito_divide: bivector expected");
    if (static_cast<int>(x.size()) != p)
        fail(ErrorKind::structural, "saito_divide: one field per family member");

    // Preconditions: phase-phase support, weight zero, min order 2 in x',
    // and T ^ X_1 ^ ... ^ X_p = 0.
    for (const auto& [idx, c] : t.terms()) {
        if (idx[1] >= n)
            fail(ErrorKind::stage, "bivector touches a parameter direction", "saito_divide");
        for (const auto& [q, coef] : c.terms()) {
            if (q.degree_front(n) < 2)
                fail(ErrorKind::stage, "bivector has x'-order below two", "saito_divide");
            if (!s.resonant_bivector(phase_part(q, n), idx[0], idx[1]))
                fail(ErrorKind::stage,
                     "bivector monomial " + q.str() + " at slot (" +
                         std::to_string(idx[0] + 1) + "," + std::to_string(idx[1] + 1) +
                         ") has nonzero weight",
                     "saito_divide");
        }
    }
    {
        PolyVector w = t;
        for (const PolyVector& xi : x) w = wedge(w, xi);
        if (!w.equals_to_order(PolyVector(w.degree(), w.ring()), w.order()))
            fail(ErrorKind::stage, "T ^ X_1 ^ ... ^ X_p is nonzero", "saito_divide");
    }

    // Zero-weight phase monomials per degree, reused across sigma groups.
    // Unknown order: graded-lex in R, then m, then i (canonical pivoting).
    struct Unknown {
        int i, m;
        MultiIndex r;
    };

    std::vector<PolyVector> a(p, PolyVector(1, ring));

    for (int deg = 2; deg <= order; ++deg) {
        // Residual slice at coefficient degree `deg`.
        PolyVector res = t;
        for (int i = 0; i < p; ++i) res -= wedge(x[i], a[i]);

        std::map<std::vector<int>, std::map<std::pair<std::vector<int>, MultiIndex>, Scalar>>
            groups;  // sigma -> ((a,b), U) -> coefficient
        for (const auto& [idx, c] : res.terms())
            for (const auto& [q, coef] : c.terms()) {
                if (q.degree() != deg) continue;
                groups[param_part(q, n, nv)][{{idx[0], idx[1]}, phase_part(q, n)}] = coef;
            }

        for (const auto& [sigma, rows] : groups) {
            int sdeg = 0;
            for (int v : sigma) sdeg += v;
            int rdeg = deg - 1 - sdeg;
            std::vector<Unknown> unknowns;
            if (rdeg >= 1)
                for_each_monomial_of_degree(n, rdeg, [&](const MultiIndex& r) {
                    for (int m = 0; m < n; ++m)
                        if (s.resonant_vector(r, m))
                            for (int i = 0; i < p; ++i) unknowns.push_back({i, m, r});
                });
            if (unknowns.empty())
                fail(ErrorKind::stage,
                     "no zero-weight slot can absorb the degree-" + std::to_string(deg) +
                         " residue",
                     "saito_divide");

            // Equations: all (slot, U) pairs reachable from the unknowns plus
            // the residual rows themselves.
            std::map<std::pair<std::vector<int>, MultiIndex>, std::size_t> row_of;
            for (const auto& [key, c] : rows) row_of.emplace(key, row_of.size());
            auto row_index = [&](int aa, int bb, const MultiIndex& u) {
                std::pair<std::vector<int>, MultiIndex> key{{aa, bb}, u};
                return row_of.emplace(key, row_of.size()).first->second;
            };
            // First pass: register all rows so the matrix size is known.
            for (const Unknown& u : unknowns)
                for (int l = 0; l < n; ++l) {
                    if (l == u.m || s.lam(u.i, l).is_zero()) continue;
                    MultiIndex target = u.r + MultiIndex::unit(n, l);
                    int aa = std::min(l, u.m), bb = std::max(l, u.m);
                    row_index(aa, bb, target);
                }
            Mat mat(row_of.size(), Vec(unknowns.size()));
            Vec rhs(row_of.size());
            for (const auto& [key, c] : rows) rhs[row_of[key]] = c;
            for (std::size_t col = 0; col < unknowns.size(); ++col) {
                const Unknown& u = unknowns[col];
                for (int l = 0; l < n; ++l) {
                    if (l == u.m || s.lam(u.i, l).is_zero()) continue;
                    MultiIndex target = u.r + MultiIndex::unit(n, l);
                    int aa = std::min(l, u.m), bb = std::max(l, u.m);
                    Scalar val = s.lam(u.i, l);
                    if (l > u.m) val = -val;  // d_l ^ d_m = -(d_a ^ d_b)
                    mat[row_index(aa, bb, target)][col] += val;
                }
            }
            auto sol = solve_linear(mat, rhs);
            if (!sol)
                fail(ErrorKind::stage,
                     "division system inconsistent at degree " + std::to_string(deg),
                     "saito_divide");
            for (std::size_t col = 0; col < unknowns.size(); ++col) {
                if ((*sol)[col].is_zero()) continue;
                const Unknown& u = unknowns[col];
                MultiIndex full(nv);
                for (int k = 0; k < n; ++k) full[k] = u.r[k];
                for (int k = n; k < nv; ++k) full[k] = sigma[k - n];
                a[u.i].add_term({u.m}, Jet::monomial(ring, full, (*sol)[col]));
            }
        }
    }

    // Reconstruction and the commutation property, re-verified.
    {
        PolyVector rec(2, ring);
        for (int i = 0; i < p; ++i) rec += wedge(x[i], a[i]);
        if (!rec.equals_to_order(t, order))
            fail(ErrorKind::stage, "reconstruction does not reproduce the bivector",
                 "saito_divide");
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                PolyVector br = schouten(s.s_field(j, ring), a[i]);
                if (!br.equals_to_order(PolyVector(1, br.ring()), br.order()))
                    fail(ErrorKind::stage, "divisor field does not commute with S",
                         "saito_divide");
            }
    }
    return a;
}

}  // namespace pnf
