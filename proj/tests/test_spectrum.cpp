#include "doctest.h"
#include "helpers.hpp"

using namespace pnf;
using pnf::testing::Rng;

namespace {
LinearFamily fam(std::vector<std::vector<long>> rows) {
    Mat m;
    for (auto& r : rows) {
        Vec v;
        for (long x : r) v.push_back(Scalar(x));
        m.push_back(v);
    }
    return LinearFamily(rows[0].size(), rows.size(), m);
}
}  // namespace

TEST_CASE("weights") {
    LinearFamily s = fam({{1, 2}});
    CHECK(s.weight(MultiIndex({2, 0}), 0) == Vec{Scalar(1)});
    CHECK(s.weight(MultiIndex({0, 1}), 1) == Vec{Scalar(0)});
    LinearFamily s13 = fam({{1, 3}});
    CHECK(s13.weight(MultiIndex({3, 0}), 1) == Vec{Scalar(0)});
    CHECK_THROWS_AS(s.weight(MultiIndex({1, 0}), 5), Error);
}

TEST_CASE("dependent eigenvalue rows are rejected") {
    CHECK_THROWS_AS(fam({{1, 2}, {2, 4}}), Error);
}

TEST_CASE("resonant monomial enumeration") {
    LinearFamily s13 = fam({{1, 3}});
    auto vec = resonant_monomials(s13, ResonanceKind::vector, 4);
    REQUIRE(vec.entries.size() == 1);
    CHECK(vec.entries[0].q == MultiIndex({3, 0}));
    CHECK(vec.entries[0].i == 1);

    auto biv = resonant_monomials(s13, ResonanceKind::bivector, 4);
    REQUIRE(biv.entries.size() == 2);
    CHECK(biv.entries[0].q == MultiIndex({1, 1}));
    CHECK(biv.entries[1].q == MultiIndex({4, 0}));

    auto fun = resonant_monomials(fam({{2, 3}}), ResonanceKind::function, 6);
    CHECK(fun.entries.empty());
}

TEST_CASE("the quadratic bivector slot Ei+Ej is always resonant") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        int n = rng.uniform(2, 4);
        Mat m(1, Vec(n));
        for (int i = 0; i < n; ++i) m[0][i] = rng.nonzero_scalar();
        LinearFamily s(n, 1, m);
        auto biv = resonant_monomials(s, ResonanceKind::bivector, 3);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                MultiIndex q(n);
                q[i] = 1;
                q[j] = 1;
                bool found = false;
                for (const auto& e : biv.entries)
                    if (e.q == q && e.i == i && e.j == j) found = true;
                CHECK(found);
            }
    }
}

TEST_CASE("vector resonance agrees with the bracket kernel") {
    // weight zero at (Q, i) iff [S_j, x^Q d_i] = 0 for every j: the two
    // routes must list the same slots.
    LinearFamily s = fam({{1, -1, 2}, {0, 1, 1}});
    JetRing ring{3, 0, 4};
    auto rep = resonant_monomials(s, ResonanceKind::vector, 4);
    for_each_monomial_up_to(3, 2, 4, [&](const MultiIndex& q) {
        for (int i = 0; i < 3; ++i) {
            bool listed = false;
            for (const auto& e : rep.entries)
                if (e.q == q && e.i == i) listed = true;
            bool kernel = true;
            for (int j = 0; j < 2; ++j) {
                PolyVector br =
                    schouten(s.s_field(j, ring),
                             PolyVector::term(ring, {i}, Jet::monomial(ring, q, Scalar(1))));
                if (!br.equals_to_order(PolyVector(1, br.ring()), br.order()))
                    kernel = false;
            }
            CHECK(listed == kernel);
        }
    });
}

TEST_CASE("hypotheses report") {
    auto h23 = hypotheses_report(fam({{2, 3}}), 4);
    CHECK(h23.all_h_pass());
    CHECK(h23.nonres.pass());

    auto h1m1 = hypotheses_report(fam({{1, -1}}), 4);
    CHECK(!h1m1.h3.pass);
    CHECK(h1m1.h3.counterexample == std::vector<int>{0, 1});

    auto h13 = hypotheses_report(fam({{1, 3}}), 4);
    CHECK(h13.all_h_pass());
    CHECK(!h13.nonres.pass());
    bool found = false;
    for (const auto& v : h13.nonres.violations)
        if (v == std::vector<int>{3, -1}) found = true;
    CHECK(found);
}

TEST_CASE("nonresonance: trivial kernel gives the exact verdict") {
    auto h = hypotheses_report(fam({{1, 2}, {1, 0}}), 4);
    CHECK(h.nonres.exact);
    CHECK(h.nonres.pass());
}

TEST_CASE("nonresonance lattice scan agrees with direct enumeration") {
    for (auto rows : std::vector<std::vector<std::vector<long>>>{
             {{1, 3}}, {{1, -1}}, {{2, 3}}, {{1, -1, 2}}, {{1, 2, 3}}}) {
        LinearFamily s = fam(rows);
        auto direct = nonresonance_direct_scan(s, 4);
        auto rep = hypotheses_report(s, 4);
        // every direct violation within the bound must be found by the scan
        for (const auto& v : direct) {
            int l1 = 0;
            for (int x : v) l1 += std::abs(x);
            if (l1 > rep.nonres.bound) continue;
            CHECK(std::find(rep.nonres.violations.begin(), rep.nonres.violations.end(), v) !=
                  rep.nonres.violations.end());
        }
        CHECK(direct.empty() == rep.nonres.pass());
    }
}

TEST_CASE("omega sequence") {
    auto w23 = omega_sequence(fam({{2, 3}}), 3);
    for (const auto& e : w23.entries) {
        CHECK(e.attained);
        CHECK(e.omega2 == Rational(1));
    }
    auto w1m1 = omega_sequence(fam({{1, -1}}), 3);
    for (const auto& e : w1m1.entries) CHECK(e.omega2 == Rational(1));

    // p = 2: brute-force oracle over all |Q| <= 4
    LinearFamily s = fam({{1, 2}, {1, 0}});
    auto seq = omega_sequence(s, 2);
    Rational best;
    bool have = false;
    for_each_monomial_up_to(2, 2, 4, [&](const MultiIndex& q) {
        for (int j = 0; j < 2; ++j) {
            Rational m2;
            bool nz = false;
            for (int i = 0; i < 2; ++i) {
                Scalar w = s.pairing(q, i) - s.lam(i, j);
                if (w.is_zero()) continue;
                if (!nz || w.norm2() > m2) m2 = w.norm2();
                nz = true;
            }
            if (nz && (!have || m2 < best)) { best = m2; have = true; }
        }
    });
    REQUIRE(have);
    CHECK(seq.entries[1].omega2 == best);
    // monotone non-increasing
    auto seq3 = omega_sequence(fam({{1, 3}}), 3);
    for (std::size_t k = 1; k < seq3.entries.size(); ++k)
        CHECK(!(seq3.entries[k].omega2 > seq3.entries[k - 1].omega2));
}

TEST_CASE("serial and parallel scans agree") {
    for (auto rows : std::vector<std::vector<std::vector<long>>>{
             {{2, 3}}, {{1, -1, 2}}, {{1, 2, 3}, {0, 1, 1}}}) {
        LinearFamily s = fam(rows);
        auto es = resonance_scan_serial(s, ResonanceKind::vector, 2, 6);
        auto ep = resonance_scan_parallel(s, ResonanceKind::vector, 2, 6);
        REQUIRE(es.size() == ep.size());
        for (std::size_t k = 0; k < es.size(); ++k) {
            CHECK(es[k].q == ep[k].q);
            CHECK(es[k].i == ep[k].i);
        }
        auto ws = omega_scan_serial(s, 2, 8);
        auto wp = omega_scan_parallel(s, 2, 8);
        REQUIRE(ws.has_value() == wp.has_value());
        if (ws) {
            CHECK(ws->omega2 == wp->omega2);
            CHECK(ws->argmin_q == wp->argmin_q);
            CHECK(ws->argmin_j == wp->argmin_j);
        }
    }
}

TEST_CASE("invariant generators") {
    auto r1 = invariant_generators(fam({{1, -1}}), 4);
    REQUIRE(r1.generators.size() == 1);
    CHECK(r1.generators[0] == MultiIndex({1, 1}));
    CHECK(r1.complete);

    auto r2 = invariant_generators(fam({{1, -1, 1}}), 4);
    REQUIRE(r2.generators.size() == 2);
    auto has = [&](std::vector<int> v) {
        return std::find(r2.generators.begin(), r2.generators.end(), MultiIndex(v)) !=
               r2.generators.end();
    };
    CHECK(has({1, 1, 0}));
    CHECK(has({0, 1, 1}));
    CHECK(r2.complete);

    auto r3 = invariant_generators(fam({{2, 3}}), 6);
    CHECK(r3.generators.empty());
    CHECK(r3.complete);

    // every generator annihilates all rows; no generator divides another
    LinearFamily s = fam({{1, -1, 2}});
    auto r4 = invariant_generators(s, 5);
    for (const auto& g : r4.generators) {
        CHECK(s.resonant_function(g));
        for (const auto& h : r4.generators)
            if (&g != &h) CHECK(!g.divides(h));
    }
    CHECK(r4.complete);  // rays (1,1,0) deg 2, (0,2,1) deg 3: sum 5 <= 5
}

TEST_CASE("hypotheses bound the invariant generator degrees") {
    // H2 rules out degree-1 generators, H3 degree-2 ones.
    Rng rng(5);
    int tried = 0;
    while (tried < 25) {
        int n = rng.uniform(2, 4);
        Mat m(1, Vec(n));
        for (int i = 0; i < n; ++i) m[0][i] = Scalar(rng.uniform(-5, 5));
        bool all_zero = true;
        for (int i = 0; i < n; ++i)
            if (!m[0][i].is_zero()) all_zero = false;
        if (all_zero) continue;
        ++tried;
        LinearFamily s(n, 1, m);
        auto h = hypotheses_report(s, 2);
        auto ring = invariant_generators(s, 4);
        for (const auto& g : ring.generators) {
            if (h.h2.pass) CHECK(g.degree() >= 2);
            if (h.h2.pass && h.h3.pass) CHECK(g.degree() >= 3);
        }
    }
}
