#include <doctest.h>

#include "tx/ainfty.hpp"
#include "tx/fixtures.hpp"
#include "tx/trivext.hpp"

using namespace tx;

namespace {
Transfer model(const PeriodicResolution& R, int K) { return transfer_minimal_model(end_dga(R.P).dga(), K); }

// first arity >= 3 carrying a nonzero product
int first_higher(const AInfCat& A) {
    for (int k = 3; k <= A.K; ++k)
        if (!A.m[k].empty()) return k;
    return 0;
}
}  // namespace

TEST_CASE("DG algebras are A-infinity algebras with m_k = 0 for k > 2") {
    auto E = end_dga(fixture_jordan3().P);
    AInfCat D = from_dga(E.dga(), 4);
    CHECK(stasheff_check(D).ok);
    CHECK(D.m[3].empty());
}

TEST_CASE("transferred models satisfy the Stasheff identities") {
    for (const char* name : {"DUAL_NUMBERS", "JORDAN3", "GAMMA_ITSELF", "NAKAYAMA2"}) {
        CAPTURE(name);
        auto f = fixture(name);
        std::vector<ProjComplex> objs;
        for (const auto& R : f.resolutions) objs.push_back(R.P);
        auto E = end_category(objs);
        Transfer T = transfer_minimal_model(E.dga, 5);
        CHECK(T.H->is_minimal());
        CHECK(check_splitting(E.dga, T.S).ok);
        CHECK(stasheff_check(*T.H).ok);
        CHECK(strict_unitality_check(*T.H).ok);
        CHECK(m2_representative_check(E.dga, T).ok);
        CHECK(is_identity_functor(*compose_functors(T.Pfun, T.Ifun)).ok);
        CHECK(functor_check(*T.Ifun).ok);
        CHECK(functor_check(*T.Pfun).ok);
    }
}

TEST_CASE("JORDAN3 model: dims and a nonzero higher product") {
    Transfer T = model(fixture_jordan3(), 4);
    CHECK(block_dims(*T.H) == std::map<std::pair<int, int>, std::map<int, int>>{{{0, 0}, {{-1, 1}, {0, 2}, {1, 1}}}});
    CHECK(first_higher(*T.H) == 4);
}

TEST_CASE("fault injection: a corrupted m_3 breaks Stasheff") {
    // JORDAN3 has m_3 = 0; set m_3(a, b, a) = 1 with |a| = 1, |b| = -1.
    // In arity 4 on (a, b, a, a) only m_2(m_3(a, b, a), a) = a survives.
    Transfer T = model(fixture_jordan3(), 4);
    CHECK(T.H->m[3].empty());
    CHECK(stasheff_check(*T.H).ok);
    AInfCat bad = *T.H;
    int a = -1, b = -1;
    for (int i = 0; i < bad.dim(); ++i) {
        if (bad.deg[i] == 1) a = i;
        if (bad.deg[i] == -1) b = i;
    }
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    bad.m[3][{a, b, a}] = bad.units[0];
    bad.index();
    auto r = stasheff_check(bad);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.failure.empty());
}

TEST_CASE("fault injection: F_2 nonzero on a unit breaks functor unitality") {
    Transfer T = model(fixture_jordan3(), 3);
    auto F = materialize(*identity_functor(T.H, 3));
    CHECK(functor_unitality_check(*F).ok);
    int u = T.H->unit_indices().at(0);
    REQUIRE(u >= 0);
    int j = -1;
    for (int i = 0; i < T.H->dim(); ++i)
        if (T.H->deg[i] == 1) j = i;
    REQUIRE(j >= 0);
    SparseVec out;
    out.add(u, Scalar(1));  // |u| + |a_j| - 1 = 0
    F->table[{u, j}] = out;
    CHECK_FALSE(functor_unitality_check(*F).ok);
}

TEST_CASE("strictification and the unitally positive part") {
    for (const char* name : {"JORDAN3", "NAKAYAMA2", "GAMMA_ITSELF"}) {
        CAPTURE(name);
        auto f = fixture(name);
        std::vector<ProjComplex> objs;
        for (const auto& R : f.resolutions) objs.push_back(R.P);
        Transfer T = transfer_minimal_model(end_category(objs).dga, 5);
        auto S = strictify_units(T.H);
        CHECK(strict_unitality_check(*S.A).ok);
        Positive N = unitally_positive(*S.A);
        CHECK(stasheff_check(*N.N).ok);
        CHECK(strict_unitality_check(*N.N).ok);
        for (int i = 0; i < N.N->dim(); ++i) CHECK(N.N->deg[i] >= 0);
    }
}

TEST_CASE("positive part dims") {
    Transfer T = model(fixture_jordan3(), 4);
    Positive N = unitally_positive(*strictify_units(T.H).A);
    CHECK(block_dims(*N.N) == std::map<std::pair<int, int>, std::map<int, int>>{{{0, 0}, {{0, 1}, {1, 1}}}});
}

TEST_CASE("inverse of an A-infinity isomorphism") {
    Transfer T = model(fixture_jordan3(), 4);
    // a gauge push gives A' and phi : A' -> A with phi_1 = id
    std::map<Tuple, SparseVec> higher;
    int j = -1;
    for (int i = 0; i < T.H->dim(); ++i)
        if (T.H->deg[i] == 1) j = i;
    REQUIRE(j >= 0);
    SparseVec v;
    v.add(j, Scalar(3));  // phi_2(a_j, a_j) = 3 a_j: bar degree |a|+|a|-1 = 1
    higher[{j, j}] = v;
    AInfCat Ap = gauge(*T.H, higher);
    CHECK(stasheff_check(Ap).ok);
    auto phi = std::make_shared<TableFunctor>();
    phi->source = std::make_shared<AInfCat>(Ap);
    phi->target = T.H;
    phi->obj = {0};
    phi->K = 4;
    for (int i = 0; i < T.H->dim(); ++i) {
        SparseVec e;
        e.add(i, Scalar(1));
        phi->table[{i}] = e;
    }
    phi->table[{j, j}] = v;
    CHECK(functor_check(*phi).ok);
    CHECK(linear_part_invertible(*phi).ok);
    auto inv = ainfty_inverse(*phi);
    CHECK(is_identity_functor(*compose_functors(phi, inv)).ok);
    CHECK(is_identity_functor(*compose_functors(inv, phi)).ok);
}
