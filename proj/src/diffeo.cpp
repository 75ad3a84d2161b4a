#include "pnf/diffeo.hpp"

namespace pnf {

DiffeoJet DiffeoJet::make(std::vector<Jet> components, bool require_identity_tangent) {
    DiffeoJet d;
    if (components.empty()) fail(ErrorKind::structural, "diffeo with no components");
    d.ring_ = components[0].ring();
    if (static_cast<int>(components.size()) != d.ring_.nvars())
        fail(ErrorKind::structural, "diffeo component count does not match variables");
    for (const Jet& c : components) {
        if (!c.ring().same_vars(d.ring_))
            fail(ErrorKind::structural, "diffeo components in different rings");
        if (!c.value_at_zero().is_zero())
            fail(ErrorKind::structural, "diffeo does not fix the origin");
        d.ring_.order = std::min(d.ring_.order, c.order());
    }
    d.comp_ = std::move(components);
    for (Jet& c : d.comp_) c = c.with_order(d.ring_.order);
    Mat lin = d.linear_part();
    if (require_identity_tangent) {
        Mat id = mat_identity(lin.size());
        if (lin != id)
            fail(ErrorKind::structural, "diffeo is not tangent to the identity");
    } else {
        mat_inverse(lin);  // throws when the linear part is singular
    }
    return d;
}

DiffeoJet DiffeoJet::identity(const JetRing& ring) {
    std::vector<Jet> comps;
    for (int i = 0; i < ring.nvars(); ++i) comps.push_back(Jet::variable(ring, i));
    return make(std::move(comps));
}

DiffeoJet DiffeoJet::linear(const JetRing& ring, const Mat& matrix) {
    std::vector<Jet> comps;
    for (int i = 0; i < ring.nvars(); ++i) {
        Jet c(ring);
        for (int j = 0; j < ring.nvars(); ++j)
            c += matrix[i][j] * Jet::variable(ring, j);
        comps.push_back(c);
    }
    return make(std::move(comps), /*require_identity_tangent=*/false);
}

Mat DiffeoJet::linear_part() const {
    int nv = nvars();
    Mat lin(nv, Vec(nv));
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            lin[i][j] = comp_[i].coeff(MultiIndex::unit(nv, j));
    return lin;
}

bool DiffeoJet::is_identity_tangent() const {
    return linear_part() == mat_identity(nvars());
}

bool DiffeoJet::is_identity() const { return *this == identity(ring_); }

DiffeoJet DiffeoJet::inverse() const {
    int nv = nvars();
    Mat linv = mat_inverse(linear_part());
    DiffeoJet psi = DiffeoJet::linear(ring_, linv);
    // Newton: psi <- psi - L^{-1}(phi∘psi - id); gains at least one exact
    // degree per pass.
    for (int pass = 1; pass < ring_.order; ++pass) {
        std::vector<Jet> err(nv, Jet::zero(ring_));
        bool clean = true;
        for (int i = 0; i < nv; ++i) {
            err[i] = comp_[i].compose(psi.comp_) - Jet::variable(ring_, i);
            if (!err[i].is_zero()) clean = false;
        }
        if (clean) break;
        std::vector<Jet> next(nv, Jet::zero(ring_));
        for (int i = 0; i < nv; ++i) {
            next[i] = psi.comp_[i];
            for (int j = 0; j < nv; ++j)
                if (!linv[i][j].is_zero()) next[i] -= linv[i][j] * err[j];
        }
        psi.comp_ = std::move(next);
    }
    for (int i = 0; i < nv; ++i) {
        Jet check = comp_[i].compose(psi.comp_) - Jet::variable(ring_, i);
        if (!check.is_zero())
            fail(ErrorKind::structural, "diffeo inversion failed to close");
    }
    return psi;
}

DiffeoJet compose(const DiffeoJet& g, const DiffeoJet& f) {
    std::vector<Jet> comps;
    comps.reserve(g.nvars());
    for (int i = 0; i < g.nvars(); ++i) comps.push_back(g.component(i).compose(f.components()));
    return DiffeoJet::make(std::move(comps), /*require_identity_tangent=*/false);
}

Jet pullback(const DiffeoJet& phi, const Jet& f) { return f.compose(phi.components()); }

PolyVector pushforward(const DiffeoJet& phi, const PolyVector& t) {
    const int nv = phi.nvars();
    DiffeoJet inv = phi.inverse();
    int slack = std::min(1, t.min_coeff_degree());
    // Degree k of the result consumes DPhi entries up to k minus the least
    // coefficient degree, and DPhi is exact one below phi's carried order.
    int out_order = std::min(t.order(), phi.order() - 1 + slack);
    JetRing out_ring{phi.ring().n_phase, phi.ring().n_param, out_order};

    if (t.degree() == 0) {
        PolyVector r(0, out_ring);
        r.add_term({}, t.coefficient({}).compose(inv.components()).with_order(out_order));
        return r;
    }

    // Transformed basis slots: d/dx_i -> sum_m (dPhi_m/dx_i ∘ Phi^{-1}) d/dx_m.
    std::vector<PolyVector> slot(nv, PolyVector(1, out_ring));
    std::vector<bool> have(nv, false);
    auto transformed = [&](int i) -> const PolyVector& {
        if (!have[i]) {
            PolyVector v(1, out_ring);
            for (int m = 0; m < nv; ++m) {
                Jet jmi = phi.component(m).derivative(i);
                if (jmi.is_zero()) continue;
                v.add_term({m}, jmi.compose(inv.components()).with_order(out_order));
            }
            slot[i] = std::move(v);
            have[i] = true;
        }
        return slot[i];
    };

    PolyVector r(t.degree(), out_ring);
    for (const auto& [idx, f] : t.terms()) {
        PolyVector w = transformed(idx[0]);
        for (std::size_t k = 1; k < idx.size(); ++k) w = wedge(w, transformed(idx[k]));
        r += f.compose(inv.components()).with_order(out_order) * w;
    }
    return r;
}

}  // namespace pnf
