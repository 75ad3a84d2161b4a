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

TEST_CASE("quadratic slot with nonzero divisor is killed") {
    // X = 2 x1 d1 + 3 x2 d2 + x1^2 d1: the slot (2,0)->1 has divisor
    // (2,0)·(2,3) - 2 = 2, so phi_1 = x1 - x1^2/2 removes it; verified by
    // pushforward: (1 - x1)(2x1 + x1^2) ∘ (x1 + x1^2/2 + ...) = 2 y1.
    JetRing R{2, 0, 2};
    LinearFamily s = fam({{2, 3}});
    PolyVector x = s.s_field(0, R);
    x.add_term({0}, Jet::variable(R, 0) * Jet::variable(R, 0));
    auto res = normalize_family(FieldFamily::make({x}, s));
    PolyVector expect = s.s_field(0, R);
    CHECK(res.normal_forms[0].equals_to_order(expect, 2));
    Jet phi1 = res.diffeo.component(0);
    Jet want = Jet::variable(R, 0) -
               Scalar(1, 2) * (Jet::variable(R, 0) * Jet::variable(R, 0));
    CHECK(phi1 == want);
}

TEST_CASE("a family already in normal form is a fixed point") {
    JetRing R{2, 1, 4};
    LinearFamily s = fam({{2, 3}});
    PolyVector x = s.s_field(0, R);
    auto res = normalize_family(FieldFamily::make({x}, s));
    CHECK(res.diffeo.is_identity());
    CHECK(res.normal_forms[0].equals_to_order(x, 4));
}

TEST_CASE("resonant slots survive unchanged") {
    // lambda = (1,3): (3,0)·(1,3) = 3 = lambda_2, so x1^3 d2 stays.
    JetRing R{2, 0, 4};
    LinearFamily s = fam({{1, 3}});
    PolyVector x = s.s_field(0, R);
    Jet res_term = Jet::monomial(R, MultiIndex({3, 0}), Scalar(1));
    x.add_term({1}, res_term);
    auto res = normalize_family(FieldFamily::make({x}, s));
    CHECK(res.diffeo.is_identity());
    CHECK(res.normal_forms[0].component(1).coeff(MultiIndex({3, 0})) == Scalar(1));
}

TEST_CASE("family construction rejects bad input") {
    JetRing R{2, 1, 3};
    LinearFamily s = fam({{2, 3}});
    // wrong linear part
    PolyVector bad = fam({{2, 4}}).s_field(0, R);
    CHECK_THROWS_AS(FieldFamily::make({bad}, s), Error);
    // parameter component
    PolyVector leak = s.s_field(0, R);
    leak.add_term({2}, Jet::variable(R, 0) * Jet::variable(R, 0));
    CHECK_THROWS_AS(FieldFamily::make({leak}, s), Error);
    // fields that fail to vanish on the parameter axis belong to the
    // origin-translation stage, not here
    PolyVector off = s.s_field(0, R);
    off.add_term({0}, Jet::variable(R, 2) * Jet::variable(R, 2));
    CHECK_THROWS_AS(FieldFamily::make({off}, s), Error);
    PolyVector lin = s.s_field(0, R);
    lin.add_term({0}, Jet::variable(R, 2));
    CHECK_THROWS_AS(FieldFamily::make({lin}, s), Error);
}

TEST_CASE("non-commuting families are refused with the offending pair") {
    JetRing R{2, 0, 3};
    LinearFamily s = fam({{1, 0}, {0, 1}});
    PolyVector x1 = s.s_field(0, R);
    x1.add_term({0}, Jet::monomial(R, MultiIndex({0, 2}), Scalar(1)));  // x2^2 d1
    PolyVector x2 = s.s_field(1, R);
    try {
        FieldFamily::make({x1, x2}, s);
        FAIL("expected a hypothesis error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis);
        CHECK(std::string(e.what()).find("commute") != std::string::npos);
    }
}

TEST_CASE("random conjugates of resonant forms re-normalize cleanly") {
    Rng rng(1234);
    JetRing R{2, 1, 5};
    LinearFamily s = fam({{1, 3}});
    for (int trial = 0; trial < 8; ++trial) {
        PolyVector y = pnf::testing::resonant_field(rng, s, R, 2);
        // conjugate by a random phase change with parameter-dependent
        // coefficients (parameters themselves stay put)
        DiffeoJet phi = rng.diffeo(R, 2, true, false);
        PolyVector x = pushforward(phi, y).with_order(R.order);
        auto res = normalize_family(FieldFamily::make({x}, s));
        // support is resonant-only (construction-verified too) and the
        // conjugacy holds through the independent pushforward path; both
        // re-checked here at full order
        PolyVector via = pushforward(res.diffeo, x);
        CHECK(via.equals_to_order(res.normal_forms[0].with_order(via.order()),
                                  via.order()));
        for (int i = 0; i < 2; ++i) {
            Jet ci = res.normal_forms[0].component(i);
            for (const auto& [q, c] : ci.terms()) {
                if (q.degree_front(2) < 2) continue;
                MultiIndex ph(2);
                ph[0] = q[0];
                ph[1] = q[1];
                CHECK(s.resonant_vector(ph, i));
            }
        }
    }
}

TEST_CASE("normalization is deterministic") {
    Rng rng(555);
    JetRing R{2, 1, 4};
    LinearFamily s = fam({{1, 3}});
    PolyVector y = pnf::testing::resonant_field(rng, s, R, 2);
    DiffeoJet phi = rng.diffeo(R, 2, true, false);
    PolyVector x = pushforward(phi, y).with_order(R.order);
    auto r1 = normalize_family(FieldFamily::make({x}, s));
    auto r2 = normalize_family(FieldFamily::make({x}, s));
    CHECK(r1.diffeo == r2.diffeo);
    CHECK(r1.normal_forms[0] == r2.normal_forms[0]);
}

TEST_CASE("two commuting fields with parameters") {
    Rng rng(99);
    JetRing R{3, 2, 4};
    LinearFamily s = fam({{1, -1, 2}, {1, 1, 1}});
    for (int trial = 0; trial < 4; ++trial) {
        auto family = pnf::testing::invariant_combination_family(rng, s, R, 2);
        DiffeoJet phi = rng.diffeo(R, 1, true, false);
        std::vector<PolyVector> moved;
        for (auto& y : family) moved.push_back(pushforward(phi, y).with_order(R.order));
        auto res = normalize_family(FieldFamily::make(moved, s));
        for (int j = 0; j < 2; ++j) {
            PolyVector via = pushforward(res.diffeo, moved[j]);
            CHECK(via.equals_to_order(res.normal_forms[j].with_order(via.order()),
                                      via.order()));
        }
        // normal forms still commute
        PolyVector br = schouten(res.normal_forms[0], res.normal_forms[1]);
        CHECK(br.equals_to_order(PolyVector(1, br.ring()), br.order()));
    }
}

TEST_CASE("setting parameters to zero commutes with normalization") {
    // The divisors are parameter-free, so restricting x'' = 0 before or
    // after normalizing gives the same phase-space result.
    Rng rng(42);
    JetRing R{2, 1, 4};
    JetRing R0{2, 1, 4};
    LinearFamily s = fam({{1, 3}});
    PolyVector y = pnf::testing::resonant_field(rng, s, R, 2);
    DiffeoJet phi = rng.diffeo(R, 2, true, false);
    PolyVector x = pushforward(phi, y).with_order(R.order);

    auto full = normalize_family(FieldFamily::make({x}, s));
    // restrict afterwards
    PolyVector after(1, R0);
    for (int i = 0; i < 2; ++i)
        after.add_term({i}, full.normal_forms[0].component(i).set_variable_zero(2));
    // restrict before
    PolyVector xr(1, R0);
    for (int i = 0; i < 2; ++i) xr.add_term({i}, x.component(i).set_variable_zero(2));
    auto reduced = normalize_family(FieldFamily::make({xr}, s));
    CHECK(reduced.normal_forms[0].equals_to_order(after, R.order));
}

TEST_CASE("normal-form hypothesis check") {
    JetRing R{2, 1, 4};
    LinearFamily s = fam({{1, -1}});
    // NF = (1 + x1 x2) S: a = 1 + u with the invariant u = x1 x2
    PolyVector y = s.s_field(0, R);
    Jet u = Jet::monomial(R, MultiIndex({1, 1, 0}), Scalar(1));
    y += u * s.s_field(0, R);
    NormalizationResult nr{DiffeoJet::identity(R), {y},
                           resonant_monomials(s, ResonanceKind::vector, 4)};
    auto check = check_theorem_hypothesis(nr, s);
    REQUIRE(check.ok);
    CHECK(check.a[0][0] == Jet::one(R) + u);

    // S1 alone
    NormalizationResult triv{DiffeoJet::identity(R), {s.s_field(0, R)},
                             resonant_monomials(s, ResonanceKind::vector, 4)};
    auto check2 = check_theorem_hypothesis(triv, s);
    REQUIRE(check2.ok);
    CHECK(check2.a[0][0] == Jet::one(R));

    // lambda = (1,3), NF = S + x1^3 d2: not an S-multiple
    LinearFamily s13 = fam({{1, 3}});
    PolyVector bad = s13.s_field(0, R);
    bad.add_term({1}, Jet::monomial(R, MultiIndex({3, 0, 0}), Scalar(1)));
    NormalizationResult nb{DiffeoJet::identity(R), {bad},
                           resonant_monomials(s13, ResonanceKind::vector, 4)};
    CHECK(!check_theorem_hypothesis(nb, s13).ok);
}
