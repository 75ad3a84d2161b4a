#include "pnf/spectrum.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pnf {

namespace {

bool entry_less(const ResonanceEntry& a, const ResonanceEntry& b) {
    if (a.q != b.q) return a.q < b.q;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
}

void test_monomial(const LinearFamily& s, ResonanceKind kind, const MultiIndex& q,
                   std::vector<ResonanceEntry>& out) {
    switch (kind) {
        case ResonanceKind::function:
            if (s.resonant_function(q)) out.push_back({q, -1, -1});
            break;
        case ResonanceKind::vector:
            for (int i = 0; i < s.n(); ++i)
                if (s.resonant_vector(q, i)) out.push_back({q, i, -1});
            break;
        case ResonanceKind::bivector:
            for (int i = 0; i < s.n(); ++i)
                for (int j = i + 1; j < s.n(); ++j)
                    if (s.resonant_bivector(q, i, j)) out.push_back({q, i, j});
            break;
    }
}

}  // namespace

std::vector<ResonanceEntry> resonance_scan_serial(const LinearFamily& s, ResonanceKind kind,
                                                  int dmin, int dmax) {
    std::vector<ResonanceEntry> out;
    for_each_monomial_up_to(s.n(), dmin, dmax,
                            [&](const MultiIndex& q) { test_monomial(s, kind, q, out); });
    std::sort(out.begin(), out.end(), entry_less);
    return out;
}

std::vector<ResonanceEntry> resonance_scan_parallel(const LinearFamily& s, ResonanceKind kind,
                                                    int dmin, int dmax) {
    const int n = s.n();
    if (n == 1) return resonance_scan_serial(s, kind, dmin, dmax);
    std::vector<ResonanceEntry> out;
    for (int d = dmin; d <= dmax; ++d) {
        // Split the shell |Q| = d on the first exponent; merge in q1 order so
        // the result does not depend on the thread count.
        std::vector<std::vector<ResonanceEntry>> buckets(d + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int q1 = 0; q1 <= d; ++q1) {
            std::vector<ResonanceEntry> local;
            for_each_monomial_of_degree(n - 1, d - q1, [&](const MultiIndex& rest) {
                std::vector<int> e(n);
                e[0] = q1;
                for (int k = 1; k < n; ++k) e[k] = rest[k - 1];
                test_monomial(s, kind, MultiIndex(e), local);
            });
            buckets[q1] = std::move(local);
        }
        for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end(), entry_less);
    return out;
}

ResonanceReport resonant_monomials(const LinearFamily& s, ResonanceKind kind, int d) {
    int dmin = (kind == ResonanceKind::function) ? 1 : 2;
    if (kind != ResonanceKind::function && d < 2)
        fail(ErrorKind::structural, "resonant_monomials: need degree bound >= 2");
    return ResonanceReport{kind, d, resonance_scan_parallel(s, kind, dmin, d)};
}

// ---------------------------------------------------------------------------
// omega_k

namespace {

struct OmegaBest {
    bool have = false;
    Rational val2;
    MultiIndex q;
    int j = -1;

    void offer(const Rational& v2, const MultiIndex& qq, int jj) {
        if (!have || v2 < val2 ||
            (v2 == val2 && (qq < q || (qq == q && jj < j)))) {
            have = true;
            val2 = v2;
            q = qq;
            j = jj;
        }
    }
    void merge(const OmegaBest& o) {
        if (o.have) offer(o.val2, o.q, o.j);
    }
};

void omega_test(const LinearFamily& s, const MultiIndex& q, OmegaBest& best) {
    for (int j = 0; j < s.n(); ++j) {
        bool nonzero = false;
        Rational m2;
        for (int i = 0; i < s.p(); ++i) {
            Scalar w = s.pairing(q, i) - s.lam(i, j);
            if (w.is_zero()) continue;
            Rational n2 = w.norm2();
            if (!nonzero || n2 > m2) m2 = n2;
            nonzero = true;
        }
        if (nonzero) best.offer(m2, q, j);
    }
}

OmegaEntry entry_from(const OmegaBest& b) {
    OmegaEntry e;
    e.attained = b.have;
    if (b.have) {
        e.omega2 = b.val2;
        e.omega = std::sqrt(b.val2.get_d());
        e.argmin_q = b.q;
        e.argmin_j = b.j;
    }
    return e;
}

}  // namespace

std::optional<OmegaEntry> omega_scan_serial(const LinearFamily& s, int dmin, int dmax) {
    OmegaBest best;
    for_each_monomial_up_to(s.n(), dmin, dmax,
                            [&](const MultiIndex& q) { omega_test(s, q, best); });
    if (!best.have) return std::nullopt;
    return entry_from(best);
}

std::optional<OmegaEntry> omega_scan_parallel(const LinearFamily& s, int dmin, int dmax) {
    const int n = s.n();
    if (n == 1) return omega_scan_serial(s, dmin, dmax);
    OmegaBest best;
    for (int d = dmin; d <= dmax; ++d) {
        std::vector<OmegaBest> parts(d + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int q1 = 0; q1 <= d; ++q1) {
            OmegaBest local;
            for_each_monomial_of_degree(n - 1, d - q1, [&](const MultiIndex& rest) {
                std::vector<int> e(n);
                e[0] = q1;
                for (int k = 1; k < n; ++k) e[k] = rest[k - 1];
                omega_test(s, MultiIndex(e), local);
            });
            parts[q1] = local;
        }
        for (const auto& part : parts) best.merge(part);
    }
    if (!best.have) return std::nullopt;
    return entry_from(best);
}

OmegaSequence omega_sequence(const LinearFamily& s, int k_max) {
    if (k_max < 1) fail(ErrorKind::structural, "omega_sequence: k_max >= 1 required");
    OmegaSequence seq;
    OmegaBest running;
    int covered = 1;  // degrees <= covered already scanned
    for (int k = 1; k <= k_max; ++k) {
        int top = 1 << k;
        if (top > covered) {
            auto part = omega_scan_parallel(s, std::max(2, covered + 1), top);
            if (part) {
                OmegaBest b;
                b.offer(part->omega2, part->argmin_q, part->argmin_j);
                running.merge(b);
            }
            covered = top;
        }
        OmegaEntry e = entry_from(running);
        e.k = k;
        seq.entries.push_back(e);
        if (e.attained && e.omega > 0)
            seq.brjuno_partial += -std::log(e.omega) / std::pow(2.0, k);
    }
    return seq;
}

// ---------------------------------------------------------------------------
// hypotheses (H) and non-resonance of the linear part

namespace {

/// Rational kernel of lambda seen as a real system (real and imaginary rows
/// stacked), returned as primitive integer vectors.
std::vector<std::vector<long>> integer_kernel_basis(const LinearFamily& s) {
    Mat m;
    for (int j = 0; j < s.p(); ++j) {
        Vec re_row(s.n()), im_row(s.n());
        bool has_im = false;
        for (int i = 0; i < s.n(); ++i) {
            re_row[i] = Scalar(s.lam(j, i).re);
            im_row[i] = Scalar(s.lam(j, i).im);
            if (sgn(s.lam(j, i).im) != 0) has_im = true;
        }
        m.push_back(std::move(re_row));
        if (has_im) m.push_back(std::move(im_row));
    }
    std::vector<std::vector<long>> basis;
    for (const Vec& v : kernel_basis(std::move(m))) {
        mpz_class l(1);
        for (const Scalar& c : v) l = lcm(l, c.re.get_den());
        mpz_class g(0);
        std::vector<mpz_class> ints;
        for (const Scalar& c : v) {
            mpz_class z = c.re.get_num() * (l / c.re.get_den());
            g = gcd(g, z);
            ints.push_back(z);
        }
        if (sgn(g) == 0) continue;
        std::vector<long> out;
        bool first_set = false;
        bool flip = false;
        for (mpz_class& z : ints) {
            z /= g;
            if (!first_set && sgn(z) != 0) {
                flip = sgn(z) < 0;
                first_set = true;
            }
            out.push_back(flip ? -z.get_si() : z.get_si());
        }
        basis.push_back(std::move(out));
    }
    return basis;
}

bool nonres_constraints_ok(const std::vector<int>& q) {
    int minus = 0, abs_sum = 0;
    for (int v : q) {
        if (v < -1) return false;
        if (v == -1) ++minus;
        abs_sum += std::abs(v);
    }
    return minus <= 2 && abs_sum > 0;
}

}  // namespace

HypothesesReport hypotheses_report(const LinearFamily& s, int d_nonres) {
    HypothesesReport rep;
    const int n = s.n(), p = s.p();
    auto exists_j = [&](auto&& pred) {
        for (int j = 0; j < p; ++j)
            if (pred(j)) return true;
        return false;
    };
    for (int i = 0; i < n && rep.h1.pass; ++i)
        for (int k = i + 1; k < n && rep.h1.pass; ++k)
            if (!exists_j([&](int j) { return s.lam(j, i) != s.lam(j, k); }))
                rep.h1 = {false, {i, k}};
    for (int i = 0; i < n && rep.h2.pass; ++i)
        if (!exists_j([&](int j) { return !s.lam(j, i).is_zero(); }))
            rep.h2 = {false, {i}};
    for (int i = 0; i < n && rep.h3.pass; ++i)
        for (int k = i; k < n && rep.h3.pass; ++k)
            if (!exists_j([&](int j) { return !(s.lam(j, i) + s.lam(j, k)).is_zero(); }))
                rep.h3 = {false, {i, k}};
    for (int i = 0; i < n && rep.h4.pass; ++i)
        for (int k = i; k < n && rep.h4.pass; ++k)
            for (int m = 0; m < n && rep.h4.pass; ++m)
                if (!exists_j([&](int j) {
                        return s.lam(j, i) + s.lam(j, k) != s.lam(j, m);
                    }))
                    rep.h4 = {false, {i, k, m}};

    // Non-resonance of the linear part: search the kernel lattice.
    rep.nonres.bound = d_nonres;
    auto basis = integer_kernel_basis(s);
    for (const auto& b : basis)
        rep.nonres.kernel_basis.emplace_back(b.begin(), b.end());
    if (basis.empty()) {
        rep.nonres.exact = true;
        return rep;
    }
    // Bounded scan over integer combinations of the kernel basis.
    std::size_t r = basis.size();
    std::vector<int> c(r, -d_nonres);
    while (true) {
        std::vector<int> q(n, 0);
        bool all_zero = true;
        for (std::size_t k = 0; k < r; ++k) {
            if (c[k] != 0) all_zero = false;
            for (int i = 0; i < n; ++i) q[i] += c[k] * static_cast<int>(basis[k][i]);
        }
        if (!all_zero && nonres_constraints_ok(q)) {
            int l1 = 0;
            for (int v : q) l1 += std::abs(v);
            if (l1 <= 3 * d_nonres) rep.nonres.violations.push_back(q);
        }
        std::size_t k = 0;
        while (k < r && c[k] == d_nonres) c[k++] = -d_nonres;
        if (k == r) break;
        ++c[k];
    }
    std::sort(rep.nonres.violations.begin(), rep.nonres.violations.end());
    rep.nonres.violations.erase(
        std::unique(rep.nonres.violations.begin(), rep.nonres.violations.end()),
        rep.nonres.violations.end());
    return rep;
}

std::vector<std::vector<int>> nonresonance_direct_scan(const LinearFamily& s, int bound) {
    std::vector<std::vector<int>> violations;
    std::vector<int> q(s.n(), 0);
    auto annihilates = [&]() {
        for (int j = 0; j < s.p(); ++j) {
            Scalar acc;
            for (int i = 0; i < s.n(); ++i)
                if (q[i] != 0) acc += Scalar(static_cast<long>(q[i])) * s.lam(j, i);
            if (!acc.is_zero()) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int pos, int budget) -> void {
        if (pos == s.n()) {
            if (nonres_constraints_ok(q) && annihilates()) violations.push_back(q);
            return;
        }
        for (int v = -1; v <= budget; ++v) {
            if (std::abs(v) > budget) continue;
            q[pos] = v;
            self(self, pos + 1, budget - std::abs(v));
        }
        q[pos] = 0;
    };
    rec(rec, 0, bound);
    std::sort(violations.begin(), violations.end());
    return violations;
}

double omega_enumeration_size(int n, int k) {
    double top = std::pow(2.0, k);
    double count = 1.0;
    for (int i = 1; i <= n; ++i) count *= (top + i) / i;
    return count;
}

// ---------------------------------------------------------------------------
// invariant ring

InvariantRing invariant_generators(const LinearFamily& s, int d) {
    if (d < 1) fail(ErrorKind::structural, "invariant_generators: d >= 1 required");
    InvariantRing ring;
    ring.degree_bound = d;

    std::vector<MultiIndex> sols;
    for_each_monomial_up_to(s.n(), 1, d, [&](const MultiIndex& q) {
        if (s.resonant_function(q)) sols.push_back(q);
    });
    std::sort(sols.begin(), sols.end());
    // A solution is a generator iff no smaller solution divides it (the
    // difference of two solutions in the orthant is again a solution).
    for (const MultiIndex& q : sols) {
        bool minimal = true;
        for (const MultiIndex& g : ring.generators)
            if (g.divides(q)) { minimal = false; break; }
        if (minimal) ring.generators.push_back(q);
    }

    // Completeness certificate via the extreme rays of ker(lambda) ∩ R^n_{>=0}:
    // candidate rays are the supports T with a one-dimensional restricted
    // kernel spanned by a positive vector.
    const int n = s.n();
    std::vector<std::vector<long>> rays;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> cols;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) cols.push_back(i);
        Mat m;
        for (int j = 0; j < s.p(); ++j) {
            Vec re_row(cols.size()), im_row(cols.size());
            for (std::size_t k = 0; k < cols.size(); ++k) {
                re_row[k] = Scalar(s.lam(j, cols[k]).re);
                im_row[k] = Scalar(s.lam(j, cols[k]).im);
            }
            m.push_back(std::move(re_row));
            m.push_back(std::move(im_row));
        }
        auto kb = kernel_basis(std::move(m));
        if (kb.size() != 1) continue;
        const Vec& v = kb[0];
        int sign = 0;
        bool pure = true;
        for (const Scalar& cv : v) {
            int sg = sgn(cv.re);
            if (sg == 0) { pure = false; break; }  // support smaller than T
            if (sign == 0) sign = sg;
            else if (sign != sg) { pure = false; break; }
        }
        if (!pure) continue;
        mpz_class l(1);
        for (const Scalar& cv : v) l = lcm(l, cv.re.get_den());
        std::vector<mpz_class> ints;
        mpz_class g(0);
        for (const Scalar& cv : v) {
            mpz_class z = cv.re.get_num() * (l / cv.re.get_den());
            if (sign < 0) z = -z;
            ints.push_back(z);
            g = gcd(g, z);
        }
        std::vector<long> ray(n, 0);
        for (std::size_t k = 0; k < cols.size(); ++k)
            ray[cols[k]] = mpz_class(ints[k] / g).get_si();
        if (std::find(rays.begin(), rays.end(), ray) == rays.end()) rays.push_back(ray);
    }
    long ray_degree_sum = 0;
    for (const auto& ray : rays)
        for (long v : ray) ray_degree_sum += v;
    ring.complete = ray_degree_sum <= d;
    return ring;
}

}  // namespace pnf
