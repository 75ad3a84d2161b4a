#pragma once

#include "pnf/diffeo.hpp"
#include "pnf/jet_linalg.hpp"
#include "pnf/spectrum.hpp"

namespace pnf {

/// Commuting family of p vector fields over n phase + k parameter variables,
/// phase components only, vanishing on the parameter axis, with constant
/// diagonal linear parts S_j. Construction checks all of it, including
/// pairwise commutation.
struct FieldFamily {
    std::vector<PolyVector> fields;
    LinearFamily linear;

    static FieldFamily make(std::vector<PolyVector> fields, LinearFamily linear);

    int order() const { return fields[0].order(); }
    const JetRing& ring() const { return fields[0].ring(); }
};

struct NormalizationResult {
    DiffeoJet diffeo;                      // Phi with Phi_* X_j = NF_j
    std::vector<PolyVector> normal_forms;  // supported on jointly resonant slots
    ResonanceReport resonance_support;     // the slots available up to the order
};

/// Degree-by-degree Poincare-Dulac normalization of a commuting family with
/// parameters. Nonresonant slots are killed through the smallest j with a
/// nonzero divisor; resonant slots keep their coefficient. The conjugacy
/// Phi_* X_j = NF_j is re-verified through the independent pushforward path
/// before returning, as is the joint-resonant support of the output.
NormalizationResult normalize_family(const FieldFamily& f);

struct TheoremHypothesisCheck {
    bool ok = false;
    std::string reason;
    JetMat a;  // NF_j = sum_l a_{j,l} S_l on success, a(0,x'') = Id
};

/// Tests whether each normal form is an invariant-coefficient combination of
/// the S_l: NF_j = sum_l a_{j,l} S_l with every a_{j,l} supported on
/// invariant phase monomials (times free parameter dependence) and
/// a_{j,l}(0,x'') = delta_{j,l}. Returns the extracted matrix on success.
TheoremHypothesisCheck check_theorem_hypothesis(const NormalizationResult& r,
                                                const LinearFamily& s);

}  // namespace pnf
