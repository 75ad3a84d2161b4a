#pragma once

#include <vector>

#include "pnf/linalg.hpp"
#include "pnf/polyvector.hpp"

namespace pnf {

/// Polynomial coordinate change fixing the origin, invertible to its
/// truncation order. Most pipeline changes are tangent to the identity;
/// linear reparametrizations (and the origin translation) carry a general
/// invertible linear part and are flagged as such.
class DiffeoJet {
  public:
    DiffeoJet() = default;

    /// Components y_i = comp[i](x). Checks: origin fixed, linear part
    /// invertible; when require_identity_tangent, linear part must be Id.
    static DiffeoJet make(std::vector<Jet> components, bool require_identity_tangent = true);
    static DiffeoJet identity(const JetRing& ring);
    static DiffeoJet linear(const JetRing& ring, const Mat& matrix);

    const JetRing& ring() const { return ring_; }
    int order() const { return ring_.order; }
    int nvars() const { return ring_.nvars(); }
    const Jet& component(int i) const { return comp_[i]; }
    const std::vector<Jet>& components() const { return comp_; }

    Mat linear_part() const;
    bool is_identity_tangent() const;
    bool is_identity() const;

    /// Formal inverse to the carried order (Newton iteration); the
    /// composition check inverse()∘this = id is verified internally.
    DiffeoJet inverse() const;

    friend bool operator==(const DiffeoJet& a, const DiffeoJet& b) {
        return a.comp_ == b.comp_;
    }

  private:
    JetRing ring_;
    std::vector<Jet> comp_;
};

/// g ∘ f (apply f first). Both must share the variable split.
DiffeoJet compose(const DiffeoJet& g, const DiffeoJet& f);

/// Pushforward Phi_* T = (wedge of DPhi-transformed slots) ∘ Phi^{-1}.
/// Each d/dx_i slot becomes the field with components (dPhi_m/dx_i)∘Phi^{-1};
/// coefficients compose with Phi^{-1}. The result's carried order drops by
/// one when T has coefficients with constant terms (one slot differentiation
/// then consumes the top stored degree of Phi).
PolyVector pushforward(const DiffeoJet& phi, const PolyVector& t);

/// Pullback of a function: f ∘ phi.
Jet pullback(const DiffeoJet& phi, const Jet& f);

}  // namespace pnf
