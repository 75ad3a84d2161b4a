#pragma once

#include <map>
#include <utility>

#include "pnf/frobenius.hpp"
#include "pnf/normal_form.hpp"
#include "pnf/saito.hpp"

namespace pnf {

/// Poisson structure on C^{n+p} with semi-direct linear part
/// L = sum_k S_k(x') ^ d/dx_{n+k}. Construction validates: vanishing at the
/// origin, zero parameter-parameter brackets, the linear part against
/// lambda, and [P,P] = 0 to the representable order.
class PoissonJet {
  public:
    static PoissonJet make(PolyVector bivector, LinearFamily family);
    /// Skips the constructor checks; exists so tests can exercise the
    /// pipelines' internal consistency errors.
    static PoissonJet unchecked(PolyVector bivector, LinearFamily family);

    int n() const { return family_.n(); }
    int p() const { return family_.p(); }
    int order() const { return biv_.order(); }
    const JetRing& ring() const { return biv_.ring(); }
    const PolyVector& bivector() const { return biv_; }
    const LinearFamily& family() const { return family_; }

    /// {x_i, x_j} (0-based indices, any order, sign included).
    Jet bracket(int i, int j) const { return biv_.coefficient({i, j}); }
    /// X_k = hamiltonian of x_{n+k} (0-based k), phase components only.
    PolyVector hamiltonian(int k) const;
    std::vector<PolyVector> hamiltonians() const;
    /// The linear part L as a bivector.
    PolyVector linear_bivector() const;

  private:
    PolyVector biv_;
    LinearFamily family_;
};

/// Reads lambda off a bivector's linear part and validates the semi-direct
/// frame shape along the way.
LinearFamily extract_linear_family(const PolyVector& p, int n, int np);

struct StageCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct StageRecord {
    std::string name;
    DiffeoJet diffeo;
    std::vector<StageCheck> checks;
};

struct PipelineOptions {
    bool force = false;  // run on despite failed hypotheses, recording verdicts
};

// ---------------------------------------------------------------------------

struct ReduceResult {
    PoissonJet out;
    DiffeoJet diffeo;
    int translation_field = 0;  // which X_j backed the implicit-function solve
    std::vector<StageCheck> checks;
};

/// Origin translation x' -> x' - g(x'') with X_{j*}(g(x''), x'') = 0, then
/// verification that every hamiltonian vanishes on the parameter axis, has
/// constant diagonal linear part, and that the phase-phase brackets are of
/// x'-order >= 2.
ReduceResult reduce_poisson(const PoissonJet& in);

// ---------------------------------------------------------------------------

/// Quadratic bracket slices g_{i,j,Ei+Ej}(x'') for 0 <= i < j < n, as
/// parameter-only jets.
using BracketTable = std::map<std::pair<int, int>, Jet>;

BracketTable quadratic_slices(const PoissonJet& p);

struct CocycleVerdict {
    bool pass = true;
    int i = -1, j = -1, k = -1;  // first violating triple (0-based)
};

/// Checks Lambda_j(g_{k,i}) - Lambda_i(g_{k,j}) + Lambda_k(g_{j,i}) = 0 for
/// all triples, to one order below the slices' content.
CocycleVerdict cocycle_check(const BracketTable& g, const LinearFamily& s, int order);

// ---------------------------------------------------------------------------

struct RescaleResult {
    PoissonJet out;
    DiffeoJet diffeo;
    std::vector<int> phase_permutation;  // applied (and kept) when nontrivial
    std::vector<StageRecord> stages;
};

/// The p-stage exponential rescaling x_i = exp(gamma_{k,i}(y'')) y_i making
/// every quadratic bracket coefficient constant, and zero when one of its
/// indices is <= p. Applies (and keeps) a phase relabeling when the first p
/// Lambda columns are dependent, conjugates by the linear parameter change B
/// straightening them, and undoes B at the end.
RescaleResult rescale_quadratic_constants(const PoissonJet& in);

// ---------------------------------------------------------------------------

struct Theorem1Result {
    PoissonJet out;
    DiffeoJet diffeo;
    JetMat a;  // output hamiltonians: X_k = sum_l a_{k,l} S_l
    HypothesesReport hypotheses;
    TheoremHypothesisCheck nf_hypothesis;
    std::vector<StageRecord> stages;
    std::vector<StageCheck> final_checks;
};

/// Family normalization, resonant bracket-support verification (including
/// the Jacobi-expansion identity through the N/M operators), cocycle check,
/// then the quadratic rescaling; output verified against the first normal
/// form shape and reconjugated from the input through the composite diffeo.
Theorem1Result normalize_poisson_theorem1(const PoissonJet& in,
                                          const PipelineOptions& opt = {});

struct Theorem2Result {
    PoissonJet out;
    DiffeoJet diffeo;  // from the theorem-1 output to the final coordinates
    JetMat b;          // output X_k = sum_l b_{k,l}(invariant monomials) S_l
    InvariantRing invariants;
    std::vector<StageRecord> stages;
    std::vector<StageCheck> final_checks;
};

/// The rank-2p pipeline on a theorem-1 output: Saito division of the
/// phase-phase part, theta/gamma connection extraction, the q-induction
/// (Frobenius solve, correction, flow straightening, symmetric f/g
/// correction), and the final elimination of parameter dependence through
/// the commuting Gamma fields over the invariant-monomial base.
Theorem2Result normalize_rank2p_theorem2(const PoissonJet& in,
                                         const PipelineOptions& opt = {});

/// P^(p+1) wedge power; zero iff the structure has rank <= 2p at jet level.
bool rank_condition_2p(const PoissonJet& p);

}  // namespace pnf
