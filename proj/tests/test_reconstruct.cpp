#include <doctest.h>

#include "tx/errors.hpp"
#include "tx/fixtures.hpp"
#include "tx/io.hpp"
#include "tx/reconstruct.hpp"

using namespace tx;

namespace {
using Dims = std::map<int, int>;

// A = k(0 ⇄ 1)/(ab), a: 1 -> 0, b: 0 -> 1; S_1 has Q = e1A --b--> e0A --a--> e1A
IdempotentSetup finite_setup(const std::string& d2, const std::string& d1) {
    auto j = io::parse_text(R"({
      "name": "two-cycle",
      "algebra": {"quiver": {"vertices": 2,
                             "arrows": [{"name": "a", "src": 1, "tgt": 0}, {"name": "b", "src": 0, "tgt": 1}],
                             "relations": ["a b"]}},
      "e": [0], "simples": [1],
      "resolutions": [{"terms": [{"degree": -2, "summands": [1]}, {"degree": -1, "summands": [0]},
                                 {"degree": 0, "summands": [1]}],
                       "differentials": [{"degree": -2, "matrix": [["D2"]]}, {"degree": -1, "matrix": [["D1"]]}]}]
    })", "test");
    if (d2.empty())
        j["resolutions"][0]["differentials"].erase(0);
    else
        j["resolutions"][0]["differentials"][0]["matrix"][0][0] = d2;
    j["resolutions"][0]["differentials"].back()["matrix"][0][0] = d1;
    return io::parse_setup(j);
}
}  // namespace

TEST_CASE("pagoda setups: n = 4 and N has one dimension in degrees 0..3") {
    for (int m = 2; m <= 4; ++m) {
        CAPTURE(m);
        auto vs = validate_setup(setup_pagoda(m));
        CHECK(vs.n == 4);
        CHECK(vs.symbolic());
        CHECK(vs.Acon->dim() == m);
        auto c = compare_theorem(vs, 4);
        Dims want{{0, 1}, {1, 1}, {2, 1}, {3, 1}};
        CHECK(c.N_dims.at({0, 0}) == want);
        CHECK(c.route_a.at({0, 0}) == want);
        CHECK(c.route_a_next == c.route_a);
        CHECK(c.ext_A.at({0, 0}) == want);
        CHECK(c.ok());
        CHECK_NOTHROW(enforce(c));
    }
}

TEST_CASE("Nakayama setup: mixed pairs") {
    auto vs = validate_setup(setup_nakayama2());
    CHECK(vs.t() == 2);
    CHECK(vs.n == 2);
    auto c = compare_theorem(vs, 4);
    CHECK(c.N_dims.at({0, 0}) == Dims{{0, 1}});
    CHECK(c.N_dims.at({1, 1}) == Dims{{0, 1}});
    CHECK(c.N_dims.at({0, 1}) == Dims{{1, 1}});
    CHECK(c.N_dims.at({1, 0}) == Dims{{1, 1}});
    CHECK(c.route_a == c.N_dims);
    CHECK(c.ok());
}

TEST_CASE("predicted dims use the Ext oracle over Acon") {
    auto vs = validate_setup(setup_pagoda(3));
    auto p = predicted_dims(vs);
    auto E = ext_oracle(vs.Acon, vs.P[0].M, vs.P[0].M, vs.n - 1);
    CHECK(p.ext_con.at({0, 0}) == E.dims);
}

TEST_CASE("finite instance: the full phi witness") {
    auto vs = validate_setup(setup_finite_instance());
    CHECK_FALSE(vs.symbolic());
    CHECK(vs.n == 3);
    auto c = compare_theorem(vs, 5);
    CHECK(c.N_dims.at({0, 0}) == Dims{{0, 1}, {2, 1}});
    REQUIRE(c.phi_checked);
    CHECK(c.phi_functor.ok);
    CHECK(c.phi_unital.ok);
    CHECK(c.phi_linear.ok);
    CHECK(c.istar_dg.ok);
    CHECK(c.ok());
}

TEST_CASE("explicit Q agrees with the computed minimal resolution") {
    auto a = validate_setup(finite_setup("b", "a"));
    auto b = validate_setup(setup_finite_instance());
    CHECK(a.n == b.n);
    CHECK(compare_theorem(a, 4).N_dims == compare_theorem(b, 4).N_dims);
}

TEST_CASE("fault injection: wrong Q differential") {
    // d_{-2} = 0: not exact in degree -2
    CHECK_THROWS_AS(validate_setup(finite_setup("", "a")), PatternViolation);
    // symbolic carrier: x in place of x^2 makes i*Q fail to be a complex over k[x]/(x^3)
    auto s = setup_pagoda(3);
    s.Qsym[0].d[-2] = {{"x"}};
    CHECK_THROWS_AS(validate_setup(s), PatternViolation);
}

TEST_CASE("fault injection: e = 0 over k[x]/(x^2)") {
    IdempotentSetup s;
    s.name = "dual numbers, e = 0";
    s.A = truncated_polynomial(2);
    s.simples = {0};
    s.max_length = 6;
    // computed resolution never terminates
    CHECK_THROWS_AS(validate_setup(s), Error);
    // the length-1 complex e A --x--> e A is not a resolution
    ProjComplex Q;
    Q.algebra = s.A;
    Q.terms[-1] = {0};
    Q.terms[0] = {0};
    ModMap d(1, 1, 2);
    d.at(0, 0) = s.A->element("x");
    Q.d[-1] = d;
    s.Q = {Q};
    CHECK_THROWS_AS(validate_setup(s), PatternViolation);
}

TEST_CASE("fault injection: an idempotent that is not a vertex sum") {
    auto j = io::parse_text(R"({"algebra": {"quiver": {"vertices": 1, "arrows": [{"name": "x", "src": 0, "tgt": 0}],
                                                       "relations": ["x^2"]}},
                                "idempotent": ["1", "1"], "simples": [0]})",
                            "test");
    CHECK_THROWS_AS(io::parse_setup(j), NotIdempotent);
}

TEST_CASE("search: tiny bounds give no hits") {
    for (int arrows : {0, 1}) {
        SearchBounds b;
        b.vertices = 1;
        b.arrows = arrows;
        b.nilpotency = 3;
        auto r = instance_search(b);
        CHECK(r.hits.empty());
        CHECK(r.exhausted);
    }
}

TEST_CASE("search: two vertices find the two-cycle") {
    SearchBounds b;
    b.vertices = 2;
    b.arrows = 2;
    b.nilpotency = 3;
    b.max_hits = -1;
    auto r = instance_search(b);
    REQUIRE(r.hits.size() == 2);
    for (const auto& h : r.hits) {
        CHECK(h.n == 3);
        auto c = compare_theorem(validate_setup(h.setup), 4);
        CHECK(c.phi_checked);
        CHECK(c.ok());
    }
    b.threads = 2;
    auto r2 = instance_search(b);
    REQUIRE(r2.hits.size() == r.hits.size());
    for (size_t i = 0; i < r.hits.size(); ++i) CHECK(r2.hits[i].description == r.hits[i].description);
    CHECK(r2.candidates == r.candidates);
}

TEST_CASE("padding by a split acyclic summand does not change N") {
    auto R = fixture_jordan3();
    auto z = padding_invariance(R, pad_split_acyclic(R, 0, 0), 5);
    CHECK(z.functor.ok);
    CHECK(z.functor.max_arity == 5);
    CHECK(z.unital.ok);
    CHECK(z.linear.ok);
    CHECK(z.N_dims == z.Npad_dims);
    CHECK(z.ok());
}

namespace {
// matrix of x |-> image on a local Acon = k[x]/(x^m), extended multiplicatively
Mat poly_automorphism(const Algebra& A, const std::string& image) {
    Mat m(A.dim(), A.dim());
    Vec x = A.element(image);
    Vec pow = A.unit();
    std::vector<Vec> images;
    for (int k = 0; k < A.dim(); ++k) {
        images.push_back(pow);
        pow = A.mul(pow, x);
    }
    // basis of k[x]/(x^m) is 1, x, ..., x^{m-1} up to order: locate each power
    for (int k = 0; k < A.dim(); ++k) {
        Vec xk = k == 0 ? A.unit() : A.element(k == 1 ? "x" : "x^" + std::to_string(k));
        int col = -1;
        for (int i = 0; i < A.dim(); ++i)
            if (xk == unit_vec(A.dim(), i)) col = i;
        REQUIRE(col >= 0);
        for (int r = 0; r < A.dim(); ++r) m(r, col) = images[k][r];
    }
    return m;
}
}  // namespace

TEST_CASE("locality reduction: an automorphism of k[x]/(x^3)") {
    auto vs = validate_setup(setup_pagoda(3));
    for (const char* image : {"x", "2 x", "x + x^2", "-x + 3 x^2"}) {
        CAPTURE(image);
        auto r = locality_reduction(vs, vs, poly_automorphism(*vs.Acon, image), 4);
        CHECK(r.iso.ok);
        CHECK(r.chain_iso.ok);
        CHECK(r.conj_dg.ok);
        CHECK(r.functor.ok);
        CHECK(r.unital.ok);
        CHECK(r.linear.ok);
        CHECK(r.ok());
    }
}

TEST_CASE("locality reduction: two different algebras with Acon = k") {
    SearchBounds b;
    b.vertices = 3;
    b.arrows = 3;
    b.nilpotency = 3;
    b.max_hits = -1;
    auto res = instance_search(b);
    auto two = validate_setup(setup_finite_instance());
    int compared = 0;
    for (const auto& h : res.hits) {
        auto vs = validate_setup(h.setup);
        if (vs.setup.A->num_vertices() != 3 || vs.Acon->dim() != 1) continue;
        CAPTURE(h.description);
        auto r = locality_reduction(two, vs, Mat::identity(1), 5);
        CHECK(r.ok());
        CHECK(r.NA_dims == std::map<int, int>{{0, 1}, {2, 1}});
        ++compared;
    }
    CHECK(compared > 0);
}

TEST_CASE("locality reduction rejects a map that is not an isomorphism") {
    auto vs = validate_setup(setup_pagoda(3));
    auto r = locality_reduction(vs, vs, poly_automorphism(*vs.Acon, "x^2"), 3);
    CHECK_FALSE(r.iso.ok);
    CHECK_FALSE(r.ok());
    auto two = validate_setup(setup_finite_instance());
    CHECK_FALSE(locality_reduction(vs, two, Mat::identity(1), 3).iso.ok);
}

TEST_CASE("split P (zero middle term): zero class, lift still a quasi-isomorphism") {
    auto vs = validate_setup(setup_finite_instance());
    const auto& R = vs.P[0];
    CHECK(R.P.term(-1).empty());
    CHECK(yoneda_class(R).is_zero);
    auto Rp = rescale(R, Scalar(2));
    auto g = lift_identity(R, Rp);
    std::string why;
    CHECK(is_lift(R, Rp, g, &why));
    CHECK(inverse(g.gn).has_value());
    auto q = periodic_quasi_iso(R, Rp);
    for (const auto& [k, m] : q.cohomology_maps) CHECK(inverse(m).has_value());
}
