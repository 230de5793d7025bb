#include <doctest.h>

#include <cmath>
#include <vector>

#include "dso/random.hpp"
#include "oracle.hpp"

TEST_CASE("random stream matches the raw-engine replica")
{
    dso::Random rng(123);
    oracle::Stream ref(123);
    for (int i = 0; i < 1000; ++i) {
        CHECK(rng.uniform() == ref.u());
        CHECK(rng.index(7) == ref.idx(7));
        CHECK(rng.normal() == ref.g());
    }
}

TEST_CASE("uniform stays in [0,1) and index in range")
{
    dso::Random rng(9);
    std::vector<int> hist(5, 0);
    for (int i = 0; i < 50000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const auto k = rng.index(5);
        REQUIRE(k < 5);
        ++hist[k];
    }
    for (int h : hist) {
        CHECK(h == doctest::Approx(10000).epsilon(0.05));
    }
}

TEST_CASE("normal draws have unit moments")
{
    dso::Random rng(77);
    const int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("same seed, same sequence; split streams differ")
{
    dso::Random a(5);
    dso::Random b(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next() == b.next());
    }
    auto c = a.split();
    auto d = b.split();
    CHECK(c.next() == d.next());
    CHECK(c.next() != a.next());
}
