#include <doctest.h>

#include "tx/complexes.hpp"
#include "tx/errors.hpp"
#include "tx/fixtures.hpp"

using namespace tx;

namespace {
// e A --(elements)--> e A --> ... over a local algebra, top term in degree 0
ProjComplex local_chain(const AlgebraPtr& A, const std::vector<std::string>& diffs) {
    ProjComplex P;
    P.algebra = A;
    int n = static_cast<int>(diffs.size());
    for (int j = 0; j <= n; ++j) P.terms[-j] = {0};
    for (int j = 1; j <= n; ++j) {
        ModMap d(1, 1, A->dim());
        d.at(0, 0) = A->element(diffs[j - 1]);
        P.d[-j] = d;
    }
    return P;
}
}  // namespace

TEST_CASE("d squared must vanish") {
    auto A = truncated_polynomial(3);
    CHECK_NOTHROW(local_chain(A, {"x^2", "x"}).check());
    CHECK_THROWS_AS(local_chain(A, {"x", "x"}).check(), NotComplex);
}

TEST_CASE("underlying cohomology of e A --x--> e A over the dual numbers") {
    auto P = local_chain(truncated_polynomial(2), {"x"});
    P.check();
    auto H = cohomology(underlying_complex(P)).dims();
    CHECK(H.dims == std::map<int, int>{{-1, 1}, {0, 1}});
}

TEST_CASE("cohomology of End(P), hand-computed") {
    // Hom^-1 = 2, Hom^0 = 4, Hom^1 = 2; delta has rank 1 out of degrees -1 and 0
    auto P = local_chain(truncated_polynomial(2), {"x"});
    auto hc = hom_complex(P, P);
    std::map<int, int> dims;
    for (auto [k, v] : hc.complex.dims)
        if (v) dims[k] = v;
    CHECK(dims == std::map<int, int>{{-1, 2}, {0, 4}, {1, 2}});
    CHECK(cohomology(hc.complex).dims().dims == std::map<int, int>{{-1, 1}, {0, 2}, {1, 1}});
}

TEST_CASE("cone of the identity is acyclic") {
    auto P = local_chain(truncated_polynomial(3), {"x^2", "x"});
    auto C = cone(P, P, identity_map(P));
    CHECK_NOTHROW(C.check());
    CHECK(cohomology(underlying_complex(C)).dims().total() == 0);
    CHECK(cohomology(hom_complex(C, C).complex).dims().total() == 0);
}

TEST_CASE("hom_delta is a differential and kills the identity") {
    auto A = truncated_polynomial(3);
    auto P = local_chain(A, {"x^2", "x"});
    CHECK(hom_delta(*A, P, P, identity_map(P)).is_zero());
    for (int deg = -2; deg <= 2; ++deg) {
        auto H = hom_space(P, P, deg);
        for (int i = 0; i < H.dim(); ++i) {
            GradedMap f = H.basis_map(i);
            GradedMap df = hom_delta(*A, P, P, f);
            CHECK(hom_delta(*A, P, P, df).is_zero());
            CHECK(graded_equal(H.element(H.coords(f)), f));
        }
    }
}

TEST_CASE("shift, truncation and direct sums") {
    auto A = truncated_polynomial(2);
    auto P = local_chain(A, {"x"});
    auto S = shift(P, 1);
    CHECK(S.lo() == P.lo() - 1);
    CHECK(S.hi() == P.hi() - 1);
    auto T = brutal_truncate(P, -1, true);
    CHECK(T.terms.size() == 1);
    auto D = direct_sum(P, P);
    CHECK(D.term(0).size() == 2);
    CHECK_NOTHROW(D.check());
    CHECK(cohomology(underlying_complex(D)).dims().total() == 4);
    CHECK(same_complex(P, local_chain(A, {"x"})));
}

TEST_CASE("End category of two objects is a DG category") {
    auto A = truncated_polynomial(3);
    auto E = end_category({local_chain(A, {"x^2", "x"}), local_chain(A, {"x"})});
    CHECK(E.dga.nobj == 2);
    CHECK(E.dga.check_axioms() == "");
    // blocks are hom complexes
    auto hc = hom_complex(E.objects[1], E.objects[0]);
    auto blk = E.dga.block_complex(1, 0);
    CHECK(cohomology(blk).dims().dims == cohomology(hc.complex).dims().dims);
}

TEST_CASE("module maps between projectives") {
    auto A = truncated_polynomial(3);
    ModMap f(1, 1, A->dim());
    f.at(0, 0) = A->element("x");
    ModMap g = compose(*A, f, f);
    CHECK(g.at(0, 0) == A->element("x^2"));
    CHECK(compose(*A, g, f).is_zero());
    Mat lin = linear_matrix(*A, {0}, {0}, f);
    CHECK(rank(lin) == 2);
    CHECK(from_linear(*A, {0}, {0}, lin) == f);
}
