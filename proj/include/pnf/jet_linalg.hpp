#pragma once

#include <optional>
#include <string>

#include "pnf/linear_family.hpp"

namespace pnf {

using JetMat = std::vector<std::vector<Jet>>;
using JetVec = std::vector<Jet>;

JetMat jet_mat_identity(const JetRing& ring, int p);
JetVec jet_mat_apply(const JetMat& a, const JetVec& v);
JetMat jet_mat_mul(const JetMat& a, const JetMat& b);
JetMat jet_mat_transpose(const JetMat& a);

/// Inverse of a jet matrix whose value at 0 is invertible; the correction
/// part must vanish at the origin so the Neumann series terminates.
JetMat jet_mat_inverse(const JetMat& a);

/// Solves sum_l lambda_{l,i} v_l = h_i (i = 1..n) for p jets v_l, one exact
/// linear solve per monomial. Returns nullopt with a reason when some
/// monomial's system is inconsistent.
std::optional<JetVec> solve_lambda_system(const LinearFamily& s, const JetVec& h,
                                          std::string* why = nullptr);

/// Writes a phase vector field V as sum_s v_s S_s. Fails when V has
/// parameter components, a component not divisible by its variable, or an
/// inconsistent monomial system.
std::optional<JetVec> divide_by_s_module(const LinearFamily& s, const PolyVector& v,
                                         std::string* why = nullptr);

/// Writes V as sum_l theta_l X_l where X_l = sum_s a_{l,s} S_s and a(0)=Id:
/// first divides by the S-module, then applies (A^T)^{-1}.
std::optional<JetVec> divide_by_x_module(const LinearFamily& s, const JetMat& a,
                                         const PolyVector& v, std::string* why = nullptr);

}  // namespace pnf
