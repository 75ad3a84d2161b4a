#pragma once

#include <vector>

#include "pnf/linalg.hpp"
#include "pnf/multi_index.hpp"
#include "pnf/polyvector.hpp"

namespace pnf {

/// The p x n eigenvalue matrix lambda defining the diagonal fields
/// S_j = sum_i lambda_{j,i} x_i d/dx_i and the parameter-direction fields
/// Lambda_i = sum_j lambda_{j,i} d/dx_{n+j}. Rows must be linearly
/// independent over C (checked by exact rank).
class LinearFamily {
  public:
    LinearFamily() = default;
    LinearFamily(int n, int p, Mat lambda);

    int n() const { return n_; }
    int p() const { return p_; }
    const Mat& lambda() const { return lambda_; }
    const Scalar& lam(int j, int i) const { return lambda_[j][i]; }

    /// (Q, lambda^j) = sum_i q_i lambda_{j,i}; Q over the n phase variables.
    Scalar pairing(const MultiIndex& q, int j) const;

    /// The p weights ((Q,lambda^j) - lambda_{j,i})_{j=1..p}.
    Vec weight(const MultiIndex& q, int i) const;

    bool resonant_function(const MultiIndex& q) const;       // (Q,l^j)=0 all j
    bool resonant_vector(const MultiIndex& q, int i) const;  // =lambda_{j,i} all j
    bool resonant_bivector(const MultiIndex& q, int i, int k) const;

    /// S_j as a vector field over a ring with >= n variables.
    PolyVector s_field(int j, const JetRing& ring) const;
    /// Lambda_i over an (n+p)-variable ring.
    PolyVector lambda_field(int i, const JetRing& ring) const;

  private:
    int n_ = 0, p_ = 0;
    Mat lambda_;
};

}  // namespace pnf
