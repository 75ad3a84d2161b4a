#include "doctest.h"
#include "helpers.hpp"

using namespace pnf;
using pnf::testing::Rng;

namespace {
const JetRing R3{2, 1, 4};
Jet X(int i) { return Jet::variable(R3, i); }
}  // namespace

TEST_CASE("diffeo construction rules") {
    CHECK(DiffeoJet::identity(R3).is_identity());
    // must fix the origin
    std::vector<Jet> shifted{X(0) + Jet::one(R3), X(1), X(2)};
    CHECK_THROWS_AS(DiffeoJet::make(shifted), Error);
    // singular linear part
    Mat sing{{Scalar(1), Scalar(0), Scalar(0)},
             {Scalar(2), Scalar(0), Scalar(0)},
             {Scalar(0), Scalar(0), Scalar(1)}};
    CHECK_THROWS_AS(DiffeoJet::linear(R3, sing), Error);
    // non-identity tangent requires the flag
    std::vector<Jet> scaled{Scalar(2) * X(0), X(1), X(2)};
    CHECK_THROWS_AS(DiffeoJet::make(scaled), Error);
    CHECK(DiffeoJet::make(scaled, false).linear_part()[0][0] == Scalar(2));
}

TEST_CASE("inversion") {
    CHECK(DiffeoJet::identity(R3).inverse().is_identity());
    // y = x + x^2 inverts to x - x^2 + 2x^3 at order 3
    JetRing R1{1, 0, 3};
    Jet x = Jet::variable(R1, 0);
    DiffeoJet phi = DiffeoJet::make({x + x * x});
    Jet inv = phi.inverse().component(0);
    CHECK(inv == x - x * x + Scalar(2) * (x * x * x));
    // linear diag(2,3) inverts to diag(1/2,1/3)
    JetRing R2{2, 0, 3};
    Mat d{{Scalar(2), Scalar(0)}, {Scalar(0), Scalar(3)}};
    DiffeoJet lin = DiffeoJet::linear(R2, d);
    Mat li = lin.inverse().linear_part();
    CHECK(li[0][0] == Scalar(1, 2));
    CHECK(li[1][1] == Scalar(1, 3));

    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        DiffeoJet f = rng.diffeo(R3);
        DiffeoJet g = f.inverse();
        CHECK(compose(f, g).is_identity());
        CHECK(compose(g, f).is_identity());
    }
}

TEST_CASE("pushforward basics") {
    Rng rng(15);
    PolyVector t = rng.polyvector(R3, 2, 2);
    PolyVector moved = pushforward(DiffeoJet::identity(R3), t);
    CHECK(moved.equals_to_order(t.with_order(moved.order()), moved.order()));

    // linear diag(2,1): each d-slot of d1^d2 scales by the matrix column,
    // so the bivector picks up the factor 2 (= {y1,y2} of the new frame).
    JetRing R2{2, 0, 4};
    Mat d{{Scalar(2), Scalar(0)}, {Scalar(0), Scalar(1)}};
    DiffeoJet lin = DiffeoJet::linear(R2, d);
    PolyVector biv = wedge(PolyVector::basis_field(R2, 0), PolyVector::basis_field(R2, 1));
    PolyVector moved2 = pushforward(lin, biv);
    CHECK(moved2.coefficient({0, 1})
              .equals_to_order(Jet::constant(R2, Scalar(2)), moved2.order()));
    // independent route: {y1, y2} = {2 x1, x2} ∘ inverse = 2 {x1, x2}
    Jet via_bracket = poisson_bracket(biv, Scalar(2) * Jet::variable(R2, 0),
                                      Jet::variable(R2, 1));
    CHECK(via_bracket.equals_to_order(Jet::constant(R2, Scalar(2)).with_order(via_bracket.order()),
                                      via_bracket.order()));
}

TEST_CASE("pushforward of a field, two computation routes") {
    // direct formula vs conjugation of the derivation on coordinates:
    // (Phi_* X)(g) = X(g ∘ Phi) ∘ Phi^{-1}.
    JetRing R1{1, 0, 4};
    Jet x = Jet::variable(R1, 0);
    DiffeoJet phi = DiffeoJet::make({x + x * x});
    PolyVector t = PolyVector::term(R1, {0}, x);
    PolyVector via_formula = pushforward(phi, t);
    DiffeoJet inv = phi.inverse();
    Jet g = x;  // coordinate function
    Jet via_derivation = t.apply(pullback(phi, g)).compose(inv.components());
    CHECK(via_formula.component(0)
              .equals_to_order(via_derivation, std::min(via_formula.order(),
                                                        via_derivation.order())));
}

TEST_CASE("pushforward functoriality and bracket equivariance") {
    Rng rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        DiffeoJet f = rng.diffeo(R3), g = rng.diffeo(R3);
        PolyVector a = rng.polyvector(R3, 1, 2, 2, 1);
        PolyVector b = rng.polyvector(R3, 1, 2, 2, 1);
        DiffeoJet fg = compose(f, g);
        PolyVector lhs = pushforward(fg, a);
        PolyVector rhs = pushforward(f, pushforward(g, a));
        int k = std::min(lhs.order(), rhs.order());
        CHECK(lhs.equals_to_order(rhs.with_order(k), k));

        // pushforward commutes with the bracket
        PolyVector br = pushforward(f, schouten(a, b));
        PolyVector br2 = schouten(pushforward(f, a), pushforward(f, b));
        k = std::min(br.order(), br2.order());
        CHECK(br.equals_to_order(br2.with_order(k), k));
    }
}

TEST_CASE("pullback respects products") {
    Rng rng(37);
    DiffeoJet f = rng.diffeo(R3);
    Jet a = rng.jet(R3, 3), b = rng.jet(R3, 3);
    CHECK(pullback(f, a * b) == pullback(f, a) * pullback(f, b));
}
