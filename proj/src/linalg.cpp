#include "pnf/linalg.hpp"

#include "pnf/errors.hpp"

namespace pnf {

Mat mat_identity(std::size_t n) {
    Mat m(n, Vec(n));
    for (std::size_t k = 0; k < n; ++k) m[k][k] = Scalar(1);
    return m;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), inner = b.size();
    Mat r(n, Vec(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

Vec mat_apply(const Mat& a, const Vec& v) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    return r;
}

namespace {

struct Echelon {
    Mat m;                      // reduced row echelon form
    std::vector<int> pivot_of_row;  // column of each pivot row
};

Echelon rref(Mat a) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    Echelon e;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Scalar inv = Scalar(1) / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] = inv * a[r][j];
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Scalar f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        e.pivot_of_row.push_back(static_cast<int>(c));
        ++r;
    }
    e.m = std::move(a);
    return e;
}

}  // namespace

std::size_t mat_rank(Mat a) { return rref(std::move(a)).pivot_of_row.size(); }

Mat mat_inverse(const Mat& a) {
    std::size_t n = a.size();
    Mat aug(n, Vec(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = Scalar(1);
    }
    Echelon e = rref(std::move(aug));
    if (e.pivot_of_row.size() != n || e.pivot_of_row.back() >= static_cast<int>(n))
        fail(ErrorKind::structural, "singular matrix");
    for (std::size_t r = 0; r < n; ++r)
        if (e.pivot_of_row[r] != static_cast<int>(r))
            fail(ErrorKind::structural, "singular matrix");
    Mat inv(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.m[i][n + j];
    return inv;
}

std::optional<Vec> solve_linear(Mat a, Vec b) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
    Echelon e = rref(std::move(a));
    Vec x(cols);
    for (std::size_t r = 0; r < e.pivot_of_row.size(); ++r) {
        int c = e.pivot_of_row[r];
        if (c == static_cast<int>(cols)) return std::nullopt;  // 0 = nonzero
        x[c] = e.m[r][cols];
    }
    return x;
}

std::vector<Vec> kernel_basis(Mat a) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    Echelon e = rref(std::move(a));
    std::vector<bool> is_pivot(cols, false);
    for (int c : e.pivot_of_row) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec v(cols);
        v[free] = Scalar(1);
        for (std::size_t r = 0; r < e.pivot_of_row.size(); ++r)
            v[e.pivot_of_row[r]] = -e.m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace pnf
