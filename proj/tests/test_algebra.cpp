#include <doctest.h>

#include "tx/errors.hpp"
#include "tx/fixtures.hpp"

using namespace tx;

namespace {
AlgebraPtr quiver_algebra(int vertices, const std::vector<QuiverPresentation::Arrow>& arrows,
                          const std::vector<std::string>& relations, int nilpotency = 0) {
    QuiverPresentation q;
    q.vertices = vertices;
    q.arrows = arrows;
    q.nilpotency = nilpotency;
    for (const auto& r : relations) q.relations.push_back(q.parse_expression(r));
    return std::make_shared<const Algebra>(Algebra::from_quiver(q));
}
}  // namespace

TEST_CASE("truncated polynomial rings") {
    for (int m = 2; m <= 4; ++m) {
        auto A = truncated_polynomial(m);
        CHECK(A->dim() == m);
        CHECK(A->num_vertices() == 1);
        CHECK_NOTHROW(A->check_axioms());
        CHECK(A->radical().dim() == m - 1);
    }
    auto A = truncated_polynomial(3);
    CHECK(A->mul(A->element("x"), A->element("x^2")) == zero_vec(3));
    CHECK(A->element_str(A->mul(A->element("x"), A->element("x"))) == "x^2");
}

TEST_CASE("paths compose left to right") {
    auto A = quiver_algebra(3, {{"a", 0, 1}, {"b", 1, 2}}, {});
    CHECK(A->dim() == 6);
    Vec ab = A->mul(A->element("a"), A->element("b"));
    CHECK(ab == A->element("a b"));
    CHECK(is_zero(A->mul(A->element("b"), A->element("a"))));
    // a lies in e_0 A e_1
    Vec a = A->element("a");
    CHECK(A->mul(A->vertex(0), a) == a);
    CHECK(A->mul(a, A->vertex(1)) == a);
}

TEST_CASE("Nakayama algebra with both zero relations") {
    auto A = nakayama2();
    CHECK(A->dim() == 4);
    CHECK_NOTHROW(A->check_axioms());
    auto S = simple_modules(A);
    REQUIRE(S.size() == 2);
    for (const auto& s : S) CHECK(s.dim == 1);
    CHECK(RightModule::regular_projective(A, 0).dim == 2);
}

TEST_CASE("commutativity relation") {
    auto A = quiver_algebra(1, {{"x", 0, 0}, {"y", 0, 0}}, {"x y - y x", "x^2", "y^2"});
    CHECK(A->dim() == 4);
    CHECK(A->mul(A->element("x"), A->element("y")) == A->element("y x"));
}

TEST_CASE("nilpotency bound truncates an otherwise infinite algebra") {
    auto A = quiver_algebra(1, {{"x", 0, 0}}, {}, 4);
    CHECK(A->dim() == 4);
    CHECK_THROWS_AS(quiver_algebra(1, {{"x", 0, 0}}, {}), InfiniteDimensional);
}

TEST_CASE("malformed relations are rejected") {
    QuiverPresentation q;
    q.vertices = 2;
    q.arrows = {{"a", 0, 1}, {"b", 1, 0}};
    CHECK_THROWS_AS(q.parse_expression("a a"), BadRelation);  // not a path
    CHECK_THROWS_AS(q.parse_expression("a z"), ParseError);
}

TEST_CASE("hom spaces between modules") {
    auto A = truncated_polynomial(3);
    auto P = RightModule::regular_projective(A, 0);
    auto S = simple_modules(A)[0];
    CHECK(hom_basis(P, P).size() == 3);
    CHECK(hom_basis(P, S).size() == 1);
    CHECK(hom_basis(S, P).size() == 1);  // onto the socle
    for (const auto& f : hom_basis(P, S)) CHECK(is_module_map(P, S, f));
}

TEST_CASE("idempotent quotient") {
    auto A = quiver_algebra(2, {{"a", 1, 0}, {"b", 0, 1}}, {"a b"});
    CHECK(A->dim() == 5);  // e0 e1 a b ba
    auto q = quotient_by_idempotent(A, vertex_idempotent(*A, {0}));
    CHECK(q.quotient->dim() == 1);
    CHECK(q.vertex_map == std::vector<int>{-1, 0});
    auto full = quotient_by_idempotent(A, vertex_idempotent(*A, {0, 1}));
    CHECK(full.degenerate);
    auto none = quotient_by_idempotent(A, vertex_idempotent(*A, {}));
    CHECK(none.quotient->dim() == 5);
}

TEST_CASE("i* on projectives") {
    auto A = quiver_algebra(2, {{"a", 1, 0}, {"b", 0, 1}}, {"a b"});
    auto q = quotient_by_idempotent(A, vertex_idempotent(*A, {0}));
    auto P1 = restrict_scalars(q, RightModule::regular_projective(A, 1));
    CHECK(P1.algebra == q.quotient);
    CHECK(P1.dim == 1);
    CHECK(restrict_scalars(q, RightModule::regular_projective(A, 0)).dim == 0);
    CHECK(restrict_scalars(q, std::vector<int>{0, 1, 1}) == std::vector<int>{0, 0});
    CHECK_THROWS_AS(restrict_scalars(q, simple_modules(A)[0]), NotProjective);
}
