#pragma once

#include <optional>
#include <vector>

#include "pnf/scalar.hpp"

namespace pnf {

/// Dense exact matrix over the Gaussian rationals. Small sizes only.
using Mat = std::vector<std::vector<Scalar>>;
using Vec = std::vector<Scalar>;

Mat mat_identity(std::size_t n);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_apply(const Mat& a, const Vec& v);
std::size_t mat_rank(Mat a);

/// Exact inverse; throws a structural error when singular.
Mat mat_inverse(const Mat& a);

/// Solves A x = b exactly for possibly non-square A. Returns nullopt when
/// inconsistent. Underdetermined systems get the canonical solution with
/// all free variables (in column order) set to zero.
std::optional<Vec> solve_linear(Mat a, Vec b);

/// Right kernel basis of A (columns of the returned vectors index A's
/// columns), canonical: free variable k = 1, other free variables 0.
std::vector<Vec> kernel_basis(Mat a);

}  // namespace pnf
