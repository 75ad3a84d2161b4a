#include "doctest.h"
#include "helpers.hpp"

using namespace pnf;
using pnf::testing::Rng;
using pnf::testing::so3_bivector;

namespace {
const JetRing R4{4, 0, 5};
Jet X(int i) { return Jet::variable(R4, i); }
PolyVector D(int i) { return PolyVector::basis_field(R4, i); }

PolyVector rnd_pv_deg(Rng& rng, const JetRing& ring, int deg) {
    return rng.polyvector(ring, deg, 2, 2);
}
}  // namespace

TEST_CASE("wedge basics") {
    PolyVector d12 = wedge(D(0), D(1));
    CHECK(d12.coefficient({0, 1}) == Jet::one(R4));
    CHECK(wedge(D(1), D(0)) == -d12);
    PolyVector a = X(0) * D(0), b = X(1) * D(1);
    CHECK(wedge(a, b).coefficient({0, 1}) == X(0) * X(1));
    CHECK(wedge(a, a).is_zero());
    // degree overflow is rejected
    PolyVector big = wedge(wedge(d12, D(2)), D(3));
    CHECK_THROWS_AS(wedge(big, D(0)), Error);
}

TEST_CASE("schouten bracket on vector fields is the Lie bracket") {
    // [x1 d1, x1^2 d1] = x1^2 d1   (hand check: x1*(2x1) - x1^2*1 = x1^2)
    PolyVector a = X(0) * D(0);
    PolyVector b = (X(0) * X(0)) * D(0);
    PolyVector br = schouten(a, b);
    CHECK(br.component(0).equals_to_order((X(0) * X(0)).with_order(br.order()), br.order()));
    // constant bivector brackets to zero with itself
    PolyVector p = wedge(D(0), D(1));
    CHECK(schouten(p, p).is_zero());
}

TEST_CASE("weights of diagonal fields on bivector monomials") {
    // [S, x^Q d_i ^ d_j] = ((Q,lambda) - lambda_i - lambda_j) x^Q d_i ^ d_j.
    // Instance lambda = (1,2), Q = (2,1), (i,j) = (1,2): (2+2) - 1 - 2 = 1.
    JetRing R{2, 0, 6};
    LinearFamily s(2, 1, Mat{{Scalar(1), Scalar(2)}});
    PolyVector S = s.s_field(0, R);
    Jet mono = Jet::monomial(R, MultiIndex({2, 1}), Scalar(1));
    PolyVector t = PolyVector::term(R, {0, 1}, mono);
    PolyVector br = schouten(S, t);
    CHECK(br.equals_to_order(t.with_order(br.order()), br.order()));

    // across all |Q| <= 5
    Rng rng(11);
    for (int rep = 0; rep < 3; ++rep) {
        Mat lam{{rng.nonzero_scalar(), rng.nonzero_scalar()}};
        LinearFamily sr(2, 1, lam);
        PolyVector Sr = sr.s_field(0, R);
        for_each_monomial_up_to(2, 0, 5, [&](const MultiIndex& q) {
            Jet m = Jet::monomial(R, q, Scalar(1));
            PolyVector tq = PolyVector::term(R, {0, 1}, m);
            PolyVector lhs = schouten(Sr, tq);
            Scalar w = sr.pairing(q, 0) - sr.lam(0, 0) - sr.lam(0, 1);
            PolyVector rhs = w * tq;
            CHECK(lhs.equals_to_order(rhs.with_order(lhs.order()), lhs.order()));
        });
    }
}

TEST_CASE("poisson bracket with the canonical and so(3) structures") {
    JetRing R2{2, 0, 4};
    PolyVector can = wedge(PolyVector::basis_field(R2, 0), PolyVector::basis_field(R2, 1));
    Jet x = Jet::variable(R2, 0), y = Jet::variable(R2, 1);
    Jet one = Jet::one(R2).with_order(poisson_bracket(can, x, y).order());
    CHECK(poisson_bracket(can, x, y) == one);
    CHECK(poisson_bracket(can, x, x).is_zero());

    PolyVector so3 = so3_bivector(4);
    JetRing R3 = so3.ring();
    Jet x1 = Jet::variable(R3, 0), x2 = Jet::variable(R3, 1), x3 = Jet::variable(R3, 2);
    Jet br = poisson_bracket(so3, x1, x2);
    CHECK(br.equals_to_order(x3, br.order()));
}

TEST_CASE("hamiltonian fields") {
    JetRing R2{2, 0, 4};
    PolyVector can = wedge(PolyVector::basis_field(R2, 0), PolyVector::basis_field(R2, 1));
    Jet x = Jet::variable(R2, 0), y = Jet::variable(R2, 1);
    PolyVector xf = hamiltonian_field(can, y);
    CHECK(xf.component(0).equals_to_order(Jet::one(R2), xf.order()));
    CHECK(xf.component(1).is_zero());
    CHECK(hamiltonian_field(can, Jet::one(R2)).is_zero());

    // so(3), f = x3: components {x_i, x3}: {x1,x3} = -x2, {x2,x3} = x1.
    PolyVector so3 = so3_bivector(4);
    JetRing R3 = so3.ring();
    PolyVector xf3 = hamiltonian_field(so3, Jet::variable(R3, 2));
    CHECK(xf3.component(0).equals_to_order(-Jet::variable(R3, 1), xf3.order()));
    CHECK(xf3.component(1).equals_to_order(Jet::variable(R3, 0), xf3.order()));
    CHECK(xf3.component(2).is_zero());
    // the Casimir x1^2+x2^2+x3^2 generates nothing
    Jet cas = Jet::zero(R3);
    for (int i = 0; i < 3; ++i) cas += Jet::variable(R3, i) * Jet::variable(R3, i);
    CHECK(hamiltonian_field(so3, cas).is_zero());
}

TEST_CASE("hamiltonian identity: X_f(g) = {g, f}") {
    // With X_f = sum {x_i, f} d_i and {f,g} = <P, df ^ dg>, the Lie
    // derivative of g along X_f equals the bracket with g first.
    Rng rng(404);
    PolyVector so3 = so3_bivector(5);
    JetRing R3 = so3.ring();
    for (int trial = 0; trial < 50; ++trial) {
        Jet f = rng.jet(R3, 3), g = rng.jet(R3, 3);
        PolyVector xf = hamiltonian_field(so3, f);
        Jet lie = xf.apply(g);
        Jet expect = poisson_bracket(so3, g, f);
        int k = std::min(lie.order(), expect.order());
        CHECK(lie.equals_to_order(expect, k));
    }
}

TEST_CASE("jacobi defect and the componentwise sums") {
    PolyVector so3 = so3_bivector(4);
    CHECK(jacobi_defect(so3).is_zero());
    for (const auto& [idx, s] : jacobi_component_sums(so3)) CHECK(s.is_zero());

    JetRing R2{2, 0, 4};
    PolyVector can = wedge(PolyVector::basis_field(R2, 0), PolyVector::basis_field(R2, 1));
    CHECK(jacobi_defect(can).is_zero());

    // x1 d1^d2 + x2 d2^d3 fails: the (1,2,3) sum is x1
    JetRing R3{3, 0, 4};
    PolyVector bad(2, R3);
    bad.add_term({0, 1}, Jet::variable(R3, 0));
    bad.add_term({1, 2}, Jet::variable(R3, 1));
    CHECK(!jacobi_defect(bad).is_zero());
    auto sums = jacobi_component_sums(bad);
    Jet s123 = sums.at({0, 1, 2});
    CHECK(s123.equals_to_order(Jet::variable(R3, 0).with_order(s123.order()), s123.order()));
}

TEST_CASE("defect vanishes iff every componentwise sum vanishes") {
    Rng rng(777);
    JetRing R3{3, 1, 4};
    int nonzero_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        PolyVector p = rng.polyvector(R3, 2, 3, 2, 1);
        PolyVector defect = jacobi_defect(p);
        bool sums_zero = true;
        int k = defect.order();
        for (const auto& [idx, s] : jacobi_component_sums(p))
            if (!s.equals_to_order(Jet::zero(R3), k)) sums_zero = false;
        CHECK(defect.equals_to_order(PolyVector(3, defect.ring()), k) == sums_zero);
        if (!sums_zero) ++nonzero_seen;
    }
    CHECK(nonzero_seen > 10);  // random bivectors are rarely Poisson
}

TEST_CASE("schouten axioms on random polyvectors") {
    Rng rng(90210);
    JetRing R{3, 1, 5};
    int checked = 0;
    while (checked < 120) {
        int dp = rng.uniform(0, 2), dq = rng.uniform(0, 2), dr = rng.uniform(0, 2);
        if (dp + dq < 1) continue;
        PolyVector P = rnd_pv_deg(rng, R, dp), Q = rnd_pv_deg(rng, R, dq),
                   Rv = rnd_pv_deg(rng, R, dr);
        {
            PolyVector lhs = schouten(P, Q);
            PolyVector rhs = schouten(Q, P);
            if ((dp * dq) % 2) rhs = -rhs;
            int k = std::min(lhs.order(), rhs.order());
            CHECK(lhs.equals_to_order(rhs.with_order(k), k));
        }
        if (dq + dr <= R.nvars() && dp + dq + dr - 1 <= R.nvars() && dp + dr >= 1) {
            PolyVector lhs = schouten(P, wedge(Q, Rv));
            PolyVector t2 = wedge(Q, schouten(P, Rv));
            if ((dp * dq + dq) % 2) t2 = -t2;
            PolyVector rhs = wedge(schouten(P, Q), Rv) + t2;
            int k = std::min(lhs.order(), rhs.order());
            CHECK(lhs.equals_to_order(rhs.with_order(k), k));
        }
        if (dq + dr >= 1 && dr + dp >= 1 && dp + dq + dr >= 2 &&
            dp + dq + dr - 2 <= R.nvars() &&
            (dp == 1 || dq == 1 || dr == 1)) {  // graded Jacobi on (1,1,1), (1,1,2), ...
            PolyVector t1 = schouten(P, schouten(Q, Rv));
            PolyVector t2 = schouten(Q, schouten(Rv, P));
            PolyVector t3 = schouten(Rv, schouten(P, Q));
            if ((dp * (dr - 1)) % 2) t1 = -t1;
            if ((dq * (dp - 1)) % 2) t2 = -t2;
            if ((dr * (dq - 1)) % 2) t3 = -t3;
            PolyVector sum = t1 + t2 + t3;
            int k = std::min({t1.order(), t2.order(), t3.order()});
            CHECK(sum.equals_to_order(PolyVector(sum.degree(), sum.ring()), k));
        }
        ++checked;
    }
}

TEST_CASE("brackets of functions only are rejected") {
    JetRing R{2, 0, 3};
    PolyVector f = PolyVector::from_jet(Jet::variable(R, 0));
    CHECK_THROWS_AS(schouten(f, f), Error);
}
