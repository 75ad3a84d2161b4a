#pragma once

#include "pnf/diffeo.hpp"
#include "pnf/jet_linalg.hpp"

namespace pnf {

/// Solves the total differential system
///     d(beta)/dx_v = -Theta_v beta + gamma_v        (v in vars)
/// for a vector of jets, unique solution vanishing on {x_v = 0 : v in vars}.
/// Compatibility is checked first:
///     dTheta_j/dx_i - dTheta_i/dx_j = Theta_i Theta_j - Theta_j Theta_i
///     dgamma_i/dx_j + Theta_j gamma_i  symmetric in (i,j)
/// and each equation is re-verified to order-1 on the way out. The solution
/// is built degree-by-degree in the vars variables, so its carried order is
/// one above the data's (the recursion only reads strictly lower degrees).
JetVec frobenius_solve(const std::vector<JetMat>& theta, const std::vector<JetVec>& gamma,
                       const std::vector<int>& vars, int target_order);

/// Poincare-lemma special case: dG/dx_v = rhs_v with zero matrix part,
/// scalar unknown; same conventions.
Jet poincare_solve(const JetVec& rhs, const std::vector<int>& vars, int target_order);

/// Coefficient-wise flow series: solves d(psi)/dx_var = field(psi) with
/// psi|_{x_var=0} = start (a jet vector without x_var dependence), to
/// target_order. Used for straightening and for the invariant-base flows.
std::vector<Jet> flow_series(const std::vector<Jet>& start, const PolyVector& field,
                             int var, int target_order);

/// Straightens A~ = d/dx_{n+q} + (phase components vanishing at x'=0) to the
/// coordinate field: returns G with pushforward(G, A~) = d/dx_{n+q}, fixing
/// every parameter coordinate. Fields in `preserve` must commute with A~
/// (checked) and are preserved by G (verified). target_order may exceed the
/// field's carried order by one (the flow recursion reads one degree below
/// what it writes); 0 means the field's own order.
DiffeoJet straighten_field(const PolyVector& a_tilde, int var,
                           const std::vector<PolyVector>& preserve, int target_order = 0);

}  // namespace pnf
