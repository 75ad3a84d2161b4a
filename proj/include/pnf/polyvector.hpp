#pragma once

#include <map>
#include <string>
#include <vector>

#include "pnf/jet.hpp"

namespace pnf {

/// Antisymmetric contravariant tensor field of degree k with Jet
/// coefficients: sum of f_{i1..ik} d/dx_{i1} ^ ... ^ d/dx_{ik} over strictly
/// increasing index tuples. Degree 0 is a plain Jet, degree 1 a vector
/// field, degree 2 houses Poisson structures.
class PolyVector {
  public:
    using IndexTuple = std::vector<int>;
    using TermMap = std::map<IndexTuple, Jet>;

    PolyVector() = default;
    PolyVector(int degree, const JetRing& ring);

    static PolyVector from_jet(const Jet& f);  // degree 0
    /// f * d/dx_{i1} ^ ... (indices need not be sorted; the sign is folded in)
    static PolyVector term(const JetRing& ring, const IndexTuple& idx, const Jet& f);
    static PolyVector basis_field(const JetRing& ring, int var);  // d/dx_var

    int degree() const { return degree_; }
    const JetRing& ring() const { return ring_; }
    int order() const { return ring_.order; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Coefficient at a (possibly unsorted) index tuple, with sign; zero jet
    /// when absent or when the tuple has a repeat.
    Jet coefficient(const IndexTuple& idx) const;
    /// Degree-1 convenience: coefficient of d/dx_i.
    Jet component(int i) const { return coefficient({i}); }

    /// Smallest total degree over all coefficient terms; order+1 if zero.
    int min_coeff_degree() const;

    PolyVector with_order(int new_order) const;
    bool equals_to_order(const PolyVector& o, int k) const;

    PolyVector operator-() const;
    PolyVector& operator+=(const PolyVector& o);
    PolyVector& operator-=(const PolyVector& o);
    friend PolyVector operator+(PolyVector a, const PolyVector& b) { return a += b; }
    friend PolyVector operator-(PolyVector a, const PolyVector& b) { return a -= b; }
    friend PolyVector operator*(const Jet& f, const PolyVector& t);
    friend PolyVector operator*(const Scalar& c, const PolyVector& t);
    friend bool operator==(const PolyVector& a, const PolyVector& b) {
        return a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const PolyVector& a, const PolyVector& b) { return !(a == b); }

    /// Lie derivative of a function along a degree-1 field.
    Jet apply(const Jet& f) const;

    void add_term(const IndexTuple& idx, const Jet& f);

    std::string str(const std::vector<std::string>& var_names = {}) const;

  private:
    int degree_ = 0;
    JetRing ring_;
    TermMap terms_;
};

/// Exterior product with permutation-parity sign bookkeeping. Degree
/// overflow past the number of variables is rejected.
PolyVector wedge(const PolyVector& a, const PolyVector& b);

/// Schouten-Nijenhuis bracket, bilinear extension from decomposables of the
/// Lie bracket / Lie derivative. Signs follow the axiom set
///   [P,Q] = (-1)^{pq} [Q,P]
///   [P, Q^R] = [P,Q]^R + (-1)^{pq+q} Q^[P,R]
/// so that on decomposables
///   [f dI, g dJ] = f [g,dI]^dJ + (-1)^{kl} g [f,dJ]^dI,
///   [h, d_{j1}^...] = sum_m (-1)^{m-1} (d_{jm} h) d_{J minus jm}.
/// The result's carried order is min(orders) - 1, plus one degree back when
/// both arguments have all coefficients vanishing at the origin (the one
/// differentiation then never consumes the top stored degree).
PolyVector schouten(const PolyVector& a, const PolyVector& b);

/// <P, df ^ dg> for a bivector P.
Jet poisson_bracket(const PolyVector& p, const Jet& f, const Jet& g);

/// X_f = sum_i {x_i, f} d/dx_i.
PolyVector hamiltonian_field(const PolyVector& p, const Jet& f);

/// [P, P]; zero iff the Jacobi identity holds to the result's order.
PolyVector jacobi_defect(const PolyVector& p);

/// The componentwise Jacobi sums
///   sum_l ( P_il d_l P_jk + P_jl d_l P_ki + P_kl d_l P_ij )
/// for i<j<k, an independent route to the same vanishing condition.
std::map<PolyVector::IndexTuple, Jet> jacobi_component_sums(const PolyVector& p);

}  // namespace pnf
