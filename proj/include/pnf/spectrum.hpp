#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pnf/linear_family.hpp"

namespace pnf {

enum class ResonanceKind { function, vector, bivector };

struct ResonanceEntry {
    MultiIndex q;
    int i = -1;  // target index (vector kind) / first index (bivector kind)
    int j = -1;  // second index (bivector kind)
};

struct ResonanceReport {
    ResonanceKind kind;
    int degree_bound = 0;
    std::vector<ResonanceEntry> entries;
};

/// Exhaustive enumeration of the exact resonance equations over
/// 2 <= |Q| <= d (functions: 1 <= |Q| <= d).
ResonanceReport resonant_monomials(const LinearFamily& s, ResonanceKind kind, int d);

struct HypothesisItem {
    bool pass = true;
    // first violating tuple when failing, witness per tuple omitted for brevity
    std::vector<int> counterexample;
};

struct NonResonanceVerdict {
    bool exact = false;   // kernel of lambda over Q is trivial: verdict unconditional
    int bound = 0;        // search bound used for the lattice scan
    std::vector<std::vector<int>> kernel_basis;    // primitive integer kernel vectors
    std::vector<std::vector<int>> violations;      // integer tuples q, q_i >= -1
    bool pass() const { return violations.empty(); }
};

struct HypothesesReport {
    HypothesisItem h1, h2, h3, h4;
    NonResonanceVerdict nonres;
    bool all_h_pass() const { return h1.pass && h2.pass && h3.pass && h4.pass; }
};

/// H1: for each i != k some j has lambda_{j,i} != lambda_{j,k}.
/// H2: for each i some j has lambda_{j,i} != 0.
/// H3: for each i <= k some j has lambda_{j,i} + lambda_{j,k} != 0.
/// H4: for each (i <= k, m) some j has lambda_{j,i} + lambda_{j,k} != lambda_{j,m}.
/// The non-resonance check covers integer tuples with q_i >= -1, at most two
/// entries equal to -1, up to the stated bound; exact when the rational
/// kernel of lambda is trivial.
HypothesesReport hypotheses_report(const LinearFamily& s, int d_nonres);

struct OmegaEntry {
    int k = 0;
    bool attained = false;             // false when every divisor vanished
    Rational omega2;                   // exact squared modulus of the minimizer
    double omega = 0.0;                // float rendering, diagnostic only
    MultiIndex argmin_q;
    int argmin_j = -1;
};

struct OmegaSequence {
    std::vector<OmegaEntry> entries;
    double brjuno_partial = 0.0;  // sum_{k<=kmax} -log(omega_k)/2^k, diagnostic
};

/// omega_k = min over 2 <= |Q| <= 2^k, 1 <= j <= n of max_i |(Q,lambda^i) -
/// lambda_{i,j}| restricted to nonzero values; comparisons use exact squared
/// moduli. Monotone non-increasing in k by construction.
OmegaSequence omega_sequence(const LinearFamily& s, int k_max);

/// Serial reference for the scan over one degree window (max_i |...|^2
/// minimizer over dmin <= |Q| <= dmax). Kept alongside the parallel kernel
/// for testing and benchmarking.
std::optional<OmegaEntry> omega_scan_serial(const LinearFamily& s, int dmin, int dmax);
std::optional<OmegaEntry> omega_scan_parallel(const LinearFamily& s, int dmin, int dmax);

struct InvariantRing {
    std::vector<MultiIndex> generators;
    int degree_bound = 0;
    bool complete = false;  // certified: every Hilbert-basis element is found
};

/// Minimal generating set (under componentwise divisibility) of the
/// solutions of (Q,lambda^j) = 0 for all j with 1 <= |Q| <= d. Completeness
/// is certified when the extreme rays of the solution cone are all found and
/// the sum of their primitive-point degrees is <= d (every Hilbert-basis
/// element is componentwise below a sum of independent extreme rays).
InvariantRing invariant_generators(const LinearFamily& s, int d);

/// Serial/parallel kernels behind resonant_monomials; both deterministic.
std::vector<ResonanceEntry> resonance_scan_serial(const LinearFamily& s,
                                                  ResonanceKind kind, int dmin, int dmax);
std::vector<ResonanceEntry> resonance_scan_parallel(const LinearFamily& s,
                                                    ResonanceKind kind, int dmin, int dmax);

/// Serial direct reference for the non-resonance check: every integer tuple
/// with entries >= -1, at most two equal to -1, 0 < |q|_1 <= bound that
/// annihilates all rows of lambda.
std::vector<std::vector<int>> nonresonance_direct_scan(const LinearFamily& s, int bound);

/// Number of monomials an omega_k scan of this k would visit (diagnostic).
double omega_enumeration_size(int n, int k);

}  // namespace pnf
