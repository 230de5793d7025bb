#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "dso/evaluate.hpp"
#include "oracle.hpp"

using namespace dso;

namespace {

// Owns everything an EvalContext points at.
struct Fixture {
    Fixture(Matrix cbc_, Vector gbc_, Vector lb_, Vector ub_)
        : cbc(std::move(cbc_)), gbc(std::move(gbc_)), prev(Matrix::Zero(cbc.rows(), cbc.cols())), lb(std::move(lb_)),
          ub(std::move(ub_)), interval(ub - lb)
    {
        Vector values = Vector::LinSpaced(cbc.rows(), 0.0, static_cast<double>(cbc.rows() - 1));
        pbest = make_pbest_model(cbc, values, interval, 0.25);
    }

    EvalContext ctx(std::size_t drone, std::span<const std::vector<std::size_t>> perms = {}) const
    {
        return EvalContext{cbc, gbc, prev, lb, ub, interval, pbest, Constants{}, drone, perms};
    }

    Matrix cbc;
    Vector gbc;
    Matrix prev;
    Vector lb;
    Vector ub;
    Vector interval;
    PBestModel pbest;
};

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) {
        out[i++] = x;
    }
    return out;
}

Fixture small_fixture()
{
    Matrix cbc(3, 2);
    cbc << 0.0, 0.0, 1.0, -1.0, 2.0, 3.0;
    return Fixture(cbc, vec({1.0, 2.0}), vec({-5.0, -5.0}), vec({5.0, 5.0}));
}

} // namespace

TEST_CASE("global-best perturbation arithmetic")
{
    auto fx = small_fixture();
    Random rng(0);
    const auto out = evaluate(parse_firmware("(+ GBC (* C1 (- GBC CBCd)))"), fx.ctx(0), rng);
    CHECK(out[0] == doctest::Approx(1.5));
    CHECK(out[1] == doctest::Approx(3.0));
}

TEST_CASE("scalar constants broadcast over every coordinate")
{
    Matrix cbc(1, 2);
    cbc << 0.1, 0.1;
    Fixture fx(cbc, vec({0, 0}), vec({-1, -1}), vec({1, 1}));
    Random rng(0);
    const auto out = evaluate(parse_firmware("(+ CBCd C2)"), fx.ctx(0), rng);
    CHECK(out[0] == doctest::Approx(0.5));
    CHECK(out[1] == doctest::Approx(0.5));
}

TEST_CASE("broadcast matches a per-component oracle")
{
    Random data(4);
    Matrix cbc(4, 6);
    for (Eigen::Index i = 0; i < cbc.size(); ++i) {
        cbc.data()[i] = data.uniform(-3, 3);
    }
    Fixture fx(cbc, Vector::Zero(6), Vector::Constant(6, -3), Vector::Constant(6, 3));
    for (const char* text : {"(+ CBCd (+ C3 matInterval))", "(+ CBCd (* C1 matInterval))"}) {
        Random rng(0);
        const auto out = evaluate(parse_firmware(text), fx.ctx(2), rng);
        for (Eigen::Index j = 0; j < 6; ++j) {
            const double s = std::string(text).find("C3") != std::string::npos ? 0.9 + 6.0 : 0.5 * 6.0;
            CHECK(out[j] == doctest::Approx(cbc(2, j) + s));
        }
    }
}

TEST_CASE("protected division")
{
    CHECK(protected_div(6.0, 3.0) == 2.0);
    CHECK(protected_div(5.0, 0.0) == 5.0);
    CHECK(protected_div(5.0, 1e-13) == 5.0);
    CHECK(protected_div(5.0, -1e-13) == 5.0);
    CHECK(protected_div(1.0, 1e-12) == doctest::Approx(1e12));
    Eigen::ArrayXd a(2);
    Eigen::ArrayXd b(2);
    a << 2, 4;
    b << 1, 0;
    const auto r = protected_div(a, b);
    CHECK(r[0] == 2.0);
    CHECK(r[1] == 4.0);
}

TEST_CASE("rand/1 replays against independently drawn permutations")
{
    auto fx = small_fixture();
    const auto f = rand1_firmware();
    REQUIRE(permutation_slots(f) == 3);

    for (std::uint64_t seed : {1u, 7u, 99u}) {
        Random rng(seed);
        const auto perms = draw_permutations(3, 3, rng);

        // Fisher-Yates straight on the engine
        oracle::Stream ref(seed);
        std::vector<std::vector<std::size_t>> expect(3, std::vector<std::size_t>(3));
        for (auto& p : expect) {
            std::iota(p.begin(), p.end(), 0);
            for (std::size_t i = 3; i > 1; --i) {
                std::swap(p[i - 1], p[ref.idx(i)]);
            }
        }
        REQUIRE(perms == expect);

        for (std::size_t d = 0; d < 3; ++d) {
            const auto out = evaluate(f, fx.ctx(d, perms), rng);
            const Vector r1 = fx.cbc.row(static_cast<Eigen::Index>(expect[0][d])).transpose();
            const Vector r2 = fx.cbc.row(static_cast<Eigen::Index>(expect[1][d])).transpose();
            const Vector r3 = fx.cbc.row(static_cast<Eigen::Index>(expect[2][d])).transpose();
            const Vector want = r1 + 0.5 * (r2 - r3);
            CHECK((out - want).norm() == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("PermCBC without a batch permutation draws rows left to right")
{
    auto fx = small_fixture();
    Random rng(17);
    oracle::Stream ref(17);
    const auto out = evaluate(rand1_firmware(), fx.ctx(0), rng);
    const auto a = ref.idx(3);
    const auto b = ref.idx(3);
    const auto c = ref.idx(3);
    const Vector want = fx.cbc.row(static_cast<Eigen::Index>(a)).transpose() +
                        0.5 * (fx.cbc.row(static_cast<Eigen::Index>(b)) - fx.cbc.row(static_cast<Eigen::Index>(c)))
                                  .transpose();
    CHECK((out - want).norm() == doctest::Approx(0.0));
}

TEST_CASE("stochastic scalars draw once per occurrence")
{
    auto fx = small_fixture();
    Random rng(5);
    oracle::Stream ref(5);
    const auto out = evaluate(parse_firmware("(+ CBCd (* U01 (+ G01 absG0501)))"), fx.ctx(1), rng);
    const double u = ref.u();
    const double g = ref.g();
    const double h = std::abs(0.5 + 0.1 * ref.g());
    CHECK(out[0] == doctest::Approx(1.0 + u * (g + h)));
    CHECK(out[1] == doctest::Approx(-1.0 + u * (g + h)));
}

TEST_CASE("terminal semantics")
{
    auto fx = small_fixture();
    fx.prev.row(1) << 4.0, 4.0;
    Random rng(0);
    auto eval = [&](const char* text, std::size_t d) { return evaluate(parse_firmware(text), fx.ctx(d), rng); };

    auto shift = eval("(+ CBCd Shift)", 1);
    CHECK(shift[0] == doctest::Approx(4.0));
    CHECK(shift[1] == doctest::Approx(4.0));
    // zero previous trial before the first move
    auto first = eval("(+ CBCd Shift)", 2);
    CHECK(first[0] == doctest::Approx(0.0));
    CHECK(first[1] == doctest::Approx(0.0));

    auto opp = eval("(+ OppCBC (neg C3))", 1);
    CHECK(opp[0] == doctest::Approx(-1.0 - 0.9));
    CHECK(opp[1] == doctest::Approx(1.0 - 0.9));

    auto avg = eval("(+ CBCd (avg2 matInterval (abs (neg C1))))", 0);
    CHECK(avg[0] == doctest::Approx(0.5 * (10.0 + 0.5)));

    auto pb = eval("(+ PBestCBC (* C1 C2))", 0);
    // p-best with 3 rows at fraction 0.25 holds rows 0 and 1
    const bool row0 = std::abs(pb[0] - 0.2) < 1e-12 && std::abs(pb[1] - 0.2) < 1e-12;
    const bool row1 = std::abs(pb[0] - 1.2) < 1e-12 && std::abs(pb[1] + 0.8) < 1e-12;
    CHECK((row0 || row1));
}

TEST_CASE("evaluation is deterministic for a fixed stream")
{
    auto fx = small_fixture();
    const auto f = parse_firmware("(+ MVNS (* Step (pdiv G01 U051)))");
    Random a(3);
    Random b(3);
    for (std::size_t d = 0; d < 3; ++d) {
        const auto x = evaluate(f, fx.ctx(d), a);
        const auto y = evaluate(f, fx.ctx(d), b);
        CHECK(x == y);
    }
}

TEST_CASE("non-finite results are reported as faults")
{
    Matrix cbc(2, 2);
    cbc << 1e200, 1.0, 2.0, 2.0;
    Fixture fx(cbc, vec({0, 0}), vec({-1, -1}), vec({1, 1}));
    Random rng(0);
    const auto f = parse_firmware("(+ CBCd (* CBCd CBCd))");
    CHECK_FALSE(evaluate_checked(f, fx.ctx(0), rng).has_value());
    const auto ok = evaluate_checked(f, fx.ctx(1), rng);
    REQUIRE(ok.has_value());
    CHECK((*ok)[0] == doctest::Approx(6.0));
}
