#include <doctest.h>

#include <random>

#include "tx/errors.hpp"
#include "tx/linalg.hpp"

using namespace tx;

namespace {
struct Rationals {
    Rationals() { Field::use_rationals(); }
    ~Rationals() { Field::use_rationals(); }
};

Mat from_rows(const std::vector<std::vector<int>>& rows) {
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = Scalar(rows[i][j]);
    return m;
}
}  // namespace

TEST_CASE("scalar parsing and arithmetic") {
    Rationals q;
    CHECK(Scalar::parse("6/4") == Scalar(3, 2));
    CHECK(Scalar::parse("-7").str() == "-7");
    CHECK((Scalar(1, 3) + Scalar(1, 6)).str() == "1/2");
    CHECK((Scalar(2, 3) / Scalar(4)).str() == "1/6");
    CHECK_THROWS_AS(Scalar::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Scalar::parse("x"), ParseError);
}

TEST_CASE("scalar promotes past 64 bits and comes back") {
    Rationals q;
    Scalar big(1);
    for (int i = 0; i < 40; ++i) big *= Scalar(1000);
    CHECK_FALSE(big.is_small());
    Scalar back = big;
    for (int i = 0; i < 40; ++i) back /= Scalar(1000);
    CHECK(back.is_one());
    CHECK(back.is_small());
}

TEST_CASE("prime field") {
    Rationals guard;
    Field::use_prime(7);
    CHECK(Field::name() == "F_7");
    CHECK(Scalar(3) * Scalar(5) == Scalar(1));
    CHECK(Scalar(1, 3) == Scalar(5));
    CHECK(rank(from_rows({{1, 2}, {3, 6}})) == 1);
    CHECK(rank(from_rows({{1, 0}, {0, 7}})) == 1);  // 7 = 0
}

TEST_CASE("rank, kernel, image") {
    Rationals q;
    Mat m = from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(m) == 2);
    auto k = kernel_basis(m);
    REQUIRE(k.size() == 1);
    CHECK(is_zero(m.apply(k[0])));
    CHECK(image_basis(m).size() == 2);
}

TEST_CASE("rref is canonical") {
    Rationals q;
    Mat a = from_rows({{2, 4}, {1, 3}});
    Mat b = from_rows({{1, 3}, {0, 1}});
    CHECK(rref(a).R == rref(b).R);
}

TEST_CASE("solve and inverse") {
    Rationals q;
    Mat m = from_rows({{2, 1}, {1, 1}});
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(*inv * m == Mat::identity(2));
    CHECK_FALSE(inverse(from_rows({{1, 2}, {2, 4}})));
    Vec b{Scalar(3), Scalar(2)};
    auto x = solve(m, b);
    REQUIRE(x);
    CHECK(m.apply(*x) == b);
    CHECK_FALSE(solve(from_rows({{1, 1}, {1, 1}}), Vec{Scalar(0), Scalar(1)}));
}

TEST_CASE("subspace membership and coordinates") {
    Rationals q;
    Subspace s(3, {Vec{Scalar(1), Scalar(1), Scalar(0)}, Vec{Scalar(0), Scalar(1), Scalar(1)}});
    CHECK(s.dim() == 2);
    Vec v{Scalar(1), Scalar(2), Scalar(1)};
    CHECK(s.contains(v));
    CHECK_FALSE(s.contains(Vec{Scalar(0), Scalar(0), Scalar(1)}));
    Vec c = s.coords(v);
    Vec back = zero_vec(3);
    for (int i = 0; i < s.dim(); ++i) axpy(back, c[i], s.basis()[i]);
    CHECK(back == v);
}

TEST_CASE("randomized: rank-nullity and solvability") {
    Rationals q;
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> dim(1, 5), val(-3, 3);
    for (int t = 0; t < 200; ++t) {
        int r = dim(rng), c = dim(rng);
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = Scalar(val(rng));
        CHECK(rank(m) + static_cast<int>(kernel_basis(m).size()) == c);
        Vec x(c);
        for (int j = 0; j < c; ++j) x[j] = Scalar(val(rng));
        auto y = solve(m, m.apply(x));
        REQUIRE(y);
        CHECK(m.apply(*y) == m.apply(x));
    }
}
