#include <doctest.h>

#include "tx/errors.hpp"
#include "tx/fixtures.hpp"
#include "tx/trivext.hpp"

using namespace tx;

namespace {
struct Built {
    std::shared_ptr<PeriodicContext> ctx;
    std::unique_ptr<TrivExt> T;
    EndP E;
};
Built build(const PeriodicResolution& R) {
    Built b{std::make_shared<PeriodicContext>(R), nullptr, end_dga(R.P)};
    b.T = std::make_unique<TrivExt>(b.ctx);
    return b;
}
}  // namespace

TEST_CASE("T is a DG algebra on every fixture") {
    for (const auto& name : fixture_names()) {
        for (const auto& R : fixture(name).resolutions) {
            CAPTURE(name);
            auto b = build(R);
            auto ax = trivext_axioms(*b.T, -R.n, R.n);
            CHECK(ax.ok());
            CHECK(ax.checked > 0);
            CHECK(sigma_tau_check(*b.ctx, 3).ok());
        }
    }
}

TEST_CASE("F and G are inverse quasi-isomorphisms") {
    for (const auto& name : fixture_names()) {
        for (const auto& R : fixture(name).resolutions) {
            CAPTURE(name);
            auto b = build(R);
            auto q = quasi_iso_check(*b.T, b.E, -R.n, R.n);
            CHECK(q.ok());
            for (const auto& [k, m] : q.HG) {
                REQUIRE(q.HF.count(k));
                CHECK(q.HF.at(k) * m == Mat::identity(m.cols()));
            }
        }
    }
}

TEST_CASE("cohomology table goldens") {
    // JORDAN3: Ext = (1, 1), rank(∘d0) = 0, so H = (1, 2, 1) on -1..1
    auto j = build(fixture_jordan3());
    auto tj = cohomology_table(*j.T, j.E, -2, 2);
    CHECK(tj.ext == std::vector<int>{1, 1});
    CHECK(tj.T_dims == std::map<int, int>{{-1, 1}, {0, 2}, {1, 1}});
    CHECK(tj.ok());
    // PAGODA_CON(3): n = 4, Ext^m = 1 for m = 0..3
    auto p = build(fixture_pagoda_con(3));
    auto tp = cohomology_table(*p.T, p.E, -3, 3);
    CHECK(tp.ext == std::vector<int>{1, 1, 1, 1});
    CHECK(tp.T_dims == std::map<int, int>{{-3, 1}, {-2, 1}, {-1, 1}, {0, 2}, {1, 1}, {2, 1}, {3, 1}});
    CHECK(tp.ok());
}

TEST_CASE("Ext in the table comes from the long-resolution oracle") {
    for (const auto& name : fixture_names()) {
        for (const auto& R : fixture(name).resolutions) {
            CAPTURE(name);
            auto b = build(R);
            auto t = cohomology_table(*b.T, b.E, 0, 0);
            auto E = ext_oracle(R.algebra, R.M, R.M, R.n - 1);
            for (int m = 0; m < R.n; ++m) CHECK(t.ext[m] == E.dim(m));
        }
    }
}

TEST_CASE("predicted table formula") {
    // n = 2, Ext = (1, 1), no image: a = (1, 1); H^k = a_k + a_{k+1}
    CHECK(predicted_table(2, {1, 1}, 0, -2, 2) == std::map<int, int>{{-1, 1}, {0, 2}, {1, 1}});
    // the image of ∘d0 joins a_{n-1}
    CHECK(predicted_table(1, {1}, 1, -1, 1) == std::map<int, int>{{0, 4}});  // n = 1: a_0 counted twice
}

TEST_CASE("window independence") {
    auto R = fixture_pagoda_con(2);
    auto b = build(R);
    for (int i = -4; i <= 4; ++i) {
        CAPTURE(i);
        int L = std::max(min_window(R.n, i), min_window(R.n, i - R.n + 1));
        for (bool minus : {false, true}) {
            int deg = minus ? i - R.n + 1 : i;
            auto a = commutant_solve(*b.ctx, L, deg, minus);
            auto c = commutant_solve(*b.ctx, L + 1, deg, minus);
            CHECK(a.first_row_rank == c.first_row_rank);
            CHECK(a.first_row_rank == a.first_row_dim);
        }
    }
}

TEST_CASE("windows below the minimum are refused") {
    auto b = build(fixture_jordan3());
    CHECK_THROWS_AS(sigma_tau_check(*b.ctx, 1), WindowTooSmall);
    CHECK_THROWS_AS(commutant_solve(*b.ctx, 1, -6, false), WindowTooSmall);
}

TEST_CASE("unit and xi on T") {
    auto b = build(fixture_jordan3());
    const TrivExt& T = *b.T;
    TElem one = T.unit();
    for (int j = -2; j <= 2; ++j)
        for (int k = 0; k < T.dim(j); ++k) {
            TElem x = T.basis(j, k);
            CHECK(T.equal(T.mul(one, x), x));
            CHECK(T.equal(T.mul(x, one), x));
            CHECK(T.is_zero(T.xi(T.xi(x))));
        }
    CHECK(T.is_zero(T.xi(one)));
}
