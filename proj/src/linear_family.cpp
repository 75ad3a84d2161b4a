#include "pnf/linear_family.hpp"

namespace pnf {

LinearFamily::LinearFamily(int n, int p, Mat lambda)
    : n_(n), p_(p), lambda_(std::move(lambda)) {
    if (n <= 0 || p <= 0) fail(ErrorKind::constructor_check, "need n >= 1 and p >= 1");
    if (static_cast<int>(lambda_.size()) != p)
        fail(ErrorKind::constructor_check, "lambda must have p rows");
    for (const auto& row : lambda_)
        if (static_cast<int>(row.size()) != n)
            fail(ErrorKind::constructor_check, "lambda rows must have n entries");
    if (mat_rank(lambda_) != static_cast<std::size_t>(p))
        fail(ErrorKind::constructor_check,
             "eigenvalue rows are linearly dependent over C");
}

Scalar LinearFamily::pairing(const MultiIndex& q, int j) const {
    Scalar s;
    for (int i = 0; i < n_; ++i)
        if (q[i] != 0) s += Scalar(static_cast<long>(q[i])) * lambda_[j][i];
    return s;
}

Vec LinearFamily::weight(const MultiIndex& q, int i) const {
    if (i < 0 || i >= n_) fail(ErrorKind::structural, "weight: index out of range");
    if (static_cast<int>(q.size()) != n_)
        fail(ErrorKind::structural, "weight: Q must range over the phase variables");
    Vec w(p_);
    for (int j = 0; j < p_; ++j) w[j] = pairing(q, j) - lambda_[j][i];
    return w;
}

bool LinearFamily::resonant_function(const MultiIndex& q) const {
    for (int j = 0; j < p_; ++j)
        if (!pairing(q, j).is_zero()) return false;
    return true;
}

bool LinearFamily::resonant_vector(const MultiIndex& q, int i) const {
    for (int j = 0; j < p_; ++j)
        if (pairing(q, j) != lambda_[j][i]) return false;
    return true;
}

bool LinearFamily::resonant_bivector(const MultiIndex& q, int i, int k) const {
    for (int j = 0; j < p_; ++j)
        if (pairing(q, j) != lambda_[j][i] + lambda_[j][k]) return false;
    return true;
}

PolyVector LinearFamily::s_field(int j, const JetRing& ring) const {
    PolyVector s(1, ring);
    for (int i = 0; i < n_; ++i)
        s.add_term({i}, lam(j, i) * Jet::variable(ring, i));
    return s;
}

PolyVector LinearFamily::lambda_field(int i, const JetRing& ring) const {
    PolyVector v(1, ring);
    for (int j = 0; j < p_; ++j)
        v.add_term({n_ + j}, Jet::constant(ring, lam(j, i)));
    return v;
}

}  // namespace pnf
