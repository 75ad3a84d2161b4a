#include "pnf/jet_linalg.hpp"

#include <set>

namespace pnf {

JetMat jet_mat_identity(const JetRing& ring, int p) {
    JetMat m(p, JetVec(p, Jet::zero(ring)));
    for (int k = 0; k < p; ++k) m[k][k] = Jet::one(ring);
    return m;
}

JetVec jet_mat_apply(const JetMat& a, const JetVec& v) {
    JetVec r;
    r.reserve(a.size());
    for (const auto& row : a) {
        Jet acc = Jet::zero(row[0].ring());
        for (std::size_t j = 0; j < v.size(); ++j) acc += row[j] * v[j];
        r.push_back(acc);
    }
    return r;
}

JetMat jet_mat_mul(const JetMat& a, const JetMat& b) {
    std::size_t n = a.size(), m = b[0].size(), inner = b.size();
    JetMat r(n, JetVec(m, Jet::zero(a[0][0].ring())));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

JetMat jet_mat_transpose(const JetMat& a) {
    std::size_t n = a.size(), m = a[0].size();
    JetMat r(m, JetVec(n, Jet::zero(a[0][0].ring())));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) r[j][i] = a[i][j];
    return r;
}

JetMat jet_mat_inverse(const JetMat& a) {
    const std::size_t p = a.size();
    const JetRing ring = a[0][0].ring();
    Mat a0(p, Vec(p));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) a0[i][j] = a[i][j].value_at_zero();
    Mat a0inv = mat_inverse(a0);

    // F = A0^{-1} A - Id vanishes at 0, so the Neumann series ends.
    JetMat a0inv_jets(p, JetVec(p, Jet::zero(ring)));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            a0inv_jets[i][j] = Jet::constant(ring, a0inv[i][j]);
    JetMat f = jet_mat_mul(a0inv_jets, a);
    int min_deg = ring.order + 1;
    for (std::size_t i = 0; i < p; ++i) {
        f[i][i] -= Jet::one(ring);
        for (std::size_t j = 0; j < p; ++j)
            if (!f[i][j].is_zero()) min_deg = std::min(min_deg, f[i][j].min_degree());
    }
    if (min_deg < 1) fail(ErrorKind::structural, "jet matrix correction has a constant part");

    JetMat acc = jet_mat_identity(ring, static_cast<int>(p));
    JetMat pw = jet_mat_identity(ring, static_cast<int>(p));
    for (int k = 1; k * min_deg <= ring.order; ++k) {
        pw = jet_mat_mul(pw, f);
        bool zero = true;
        for (auto& row : pw)
            for (auto& e : row)
                if (!e.is_zero()) zero = false;
        if (zero) break;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                acc[i][j] += (k % 2 ? -pw[i][j] : pw[i][j]);
    }
    return jet_mat_mul(acc, a0inv_jets);
}

std::optional<JetVec> solve_lambda_system(const LinearFamily& s, const JetVec& h,
                                          std::string* why) {
    const int n = s.n(), p = s.p();
    const JetRing ring = h[0].ring();
    Mat lt(n, Vec(p));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < p; ++l) lt[i][l] = s.lam(l, i);

    std::set<MultiIndex> monomials;
    for (const Jet& hi : h)
        for (const auto& [q, c] : hi.terms()) monomials.insert(q);

    JetVec v(p, Jet::zero(ring));
    for (const MultiIndex& q : monomials) {
        Vec rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = h[i].coeff(q);
        auto sol = solve_linear(lt, rhs);
        if (!sol) {
            if (why) *why = "no S-combination matches coefficient at " + q.str();
            return std::nullopt;
        }
        for (int l = 0; l < p; ++l) v[l].add_term(q, (*sol)[l]);
    }
    return v;
}

std::optional<JetVec> divide_by_s_module(const LinearFamily& s, const PolyVector& v,
                                         std::string* why) {
    if (v.degree() != 1) fail(ErrorKind::structural, "S-module division needs a vector field");
    const JetRing ring = v.ring();
    for (int k = s.n(); k < ring.nvars(); ++k)
        if (!v.component(k).is_zero()) {
            if (why) *why = "field has a parameter component";
            return std::nullopt;
        }
    JetVec h;
    for (int i = 0; i < s.n(); ++i) {
        Jet vi = v.component(i);
        for (const auto& [q, c] : vi.terms())
            if (q[i] == 0) {
                if (why)
                    *why = "component " + std::to_string(i + 1) + " has term " + q.str() +
                           " without x" + std::to_string(i + 1);
                return std::nullopt;
            }
        h.push_back(vi.divide_by_variable(i));
    }
    return solve_lambda_system(s, h, why);
}

std::optional<JetVec> divide_by_x_module(const LinearFamily& s, const JetMat& a,
                                         const PolyVector& v, std::string* why) {
    auto w = divide_by_s_module(s, v, why);
    if (!w) return std::nullopt;
    // w_s = sum_l theta_l a_{l,s}  =>  theta = (A^T)^{-1} w
    JetMat at_inv = jet_mat_inverse(jet_mat_transpose(a));
    return jet_mat_apply(at_inv, *w);
}

}  // namespace pnf
