#include <doctest.h>

#include "tx/errors.hpp"
#include "tx/fixtures.hpp"

using namespace tx;

namespace {
AlgebraPtr two_loops() {  // k<x, y> / (x, y)^2, wild growth of resolutions
    QuiverPresentation q;
    q.vertices = 1;
    q.arrows = {{"x", 0, 0}, {"y", 0, 0}};
    q.nilpotency = 2;
    return std::make_shared<const Algebra>(Algebra::from_quiver(q));
}
}  // namespace

TEST_CASE("minimal resolution of k over k[x]/(x^3)") {
    auto A = truncated_polynomial(3);
    auto S = simple_modules(A)[0];
    auto R = minimal_projective_resolution(A, S, 4);
    for (int i = 0; i <= 4; ++i) CHECK(R.Q.term(-i).size() == 1);
    // differentials alternate x, x^2
    CHECK(R.Q.diff(-1).at(0, 0) == A->element("x"));
    CHECK(R.Q.diff(-2).at(0, 0) == A->element("x^2"));
    CHECK(R.Q.diff(-3).at(0, 0) == A->element("x"));
    CHECK_NOTHROW(R.Q.check());
}

TEST_CASE("term cap raises LengthExceeded") {
    auto A = two_loops();
    auto S = simple_modules(A)[0];
    auto R = minimal_projective_resolution(A, S, 3);
    CHECK(R.Q.term(-3).size() == 8);
    CHECK_THROWS_AS(minimal_projective_resolution(A, S, 3, 4), LengthExceeded);
}

TEST_CASE("Ext oracle") {
    auto A = truncated_polynomial(2);
    auto S = simple_modules(A)[0];
    auto E = ext_oracle(A, S, S, 5);
    for (int i = 0; i <= 5; ++i) CHECK(E.dim(i) == 1);

    auto N = nakayama2();
    auto Ss = simple_modules(N);
    auto E00 = ext_oracle(N, Ss[0], Ss[0], 4);
    auto E01 = ext_oracle(N, Ss[0], Ss[1], 4);
    CHECK(E00.dims == std::map<int, int>{{0, 1}, {2, 1}, {4, 1}});
    CHECK(E01.dims == std::map<int, int>{{1, 1}, {3, 1}});

    auto W = two_loops();
    auto T = simple_modules(W)[0];
    CHECK(ext_oracle(W, T, T, 3).dims == std::map<int, int>{{0, 1}, {1, 2}, {2, 4}, {3, 8}});
}

TEST_CASE("fixtures are valid periodic resolutions") {
    for (const auto& name : fixture_names()) {
        CAPTURE(name);
        auto f = fixture(name);
        for (const auto& R : f.resolutions) {
            CHECK_NOTHROW(validate_periodic(R.algebra, R.M, R.P, R.alpha, R.beta, R.n));
            CHECK(R.P.lo() == -(R.n - 1));
        }
    }
    CHECK_THROWS_AS(fixture("NO_SUCH"), ParseError);
}

TEST_CASE("validate_periodic rejects a wrong beta and a wrong n") {
    auto R = fixture_jordan3();
    Mat bad = R.beta.scaled(Scalar(0));
    CHECK_THROWS_AS(validate_periodic(R.algebra, R.M, R.P, R.alpha, bad, R.n), Error);
    CHECK_THROWS_AS(validate_periodic(R.algebra, R.M, R.P, R.alpha, R.beta, R.n + 1), Error);
}

TEST_CASE("Yoneda classes") {
    CHECK_FALSE(yoneda_class(fixture_jordan3()).is_zero);
    CHECK_FALSE(yoneda_class(fixture_dual_numbers()).is_zero);
    auto G = fixture_gamma_itself();
    CHECK(yoneda_class(G).is_zero);
    CHECK(ext_oracle(G.algebra, G.M, G.M, G.n).dim(G.n) == 0);
}

TEST_CASE("rescaled beta: lambda = [g_n] with theta' = lambda theta") {
    auto R = fixture_jordan3();
    auto R3 = rescale(R, Scalar(3));
    auto c = compare_classes(R, R3);
    CHECK(c.kind == ClassComparison::ScalarMultiple);
    CHECK(c.lambda == Scalar(1, 3));
    CHECK(c.str() == "Scalar(1/3)");
    CHECK(compare_classes(R, R).kind == ClassComparison::Equal);
    auto G = fixture_gamma_itself();
    CHECK(compare_classes(G, rescale(G, Scalar(5))).kind == ClassComparison::BothZero);
}

TEST_CASE("periodic quasi-isomorphism gives cohomology isomorphisms") {
    auto R = fixture_pagoda_con(3);
    auto Rp = rescale(R, Scalar(-2));
    auto q = periodic_quasi_iso(R, Rp);
    CHECK_FALSE(q.cohomology_maps.empty());
    for (const auto& [k, m] : q.cohomology_maps) {
        CAPTURE(k);
        CHECK(m.rows() == m.cols());
        CHECK(inverse(m).has_value());
    }
}

TEST_CASE("split acyclic padding keeps the periodic data valid") {
    auto R = fixture_jordan3();
    auto Rp = pad_split_acyclic(R, 0, 0);
    CHECK(Rp.P.term(0).size() == 2);
    CHECK(Rp.P.term(-1).size() == 2);
    CHECK_THROWS_AS(pad_split_acyclic(R, 0, 1), ShapeError);
}
