#pragma once

#include "pnf/jet_linalg.hpp"

namespace pnf {

/// Division of a zero-weight phase bivector T (T ^ X_1 ^ ... ^ X_p = 0,
/// checked) into T = sum_i X_i ^ A_i with phase fields A_i vanishing at
/// x' = 0 and commuting with every S_j. Solved per joint degree as an exact
/// linear system over the zero-weight monomial slots; among solutions the
/// canonical one with graded-lex pivoting (free unknowns zero) is returned.
/// The reconstruction is re-verified before returning.
std::vector<PolyVector> saito_divide(const PolyVector& t, const std::vector<PolyVector>& x,
                                     const LinearFamily& s);

}  // namespace pnf
