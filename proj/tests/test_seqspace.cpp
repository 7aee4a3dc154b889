#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dyadic/errors.hpp"
#include "dyadic/seqspace.hpp"
#include "dyadic/square_function.hpp"
#include "support.hpp"

#include <cmath>

using namespace dyadic;

namespace {

const ProductLattice kLine(DyadicLattice1D(-2, 2, 0));

DyadicSequence seq(std::initializer_list<std::pair<const Cell, double>> entries) {
    return DyadicSequence{kLine, entries};
}

} // namespace

TEST_CASE("tl norm of single and disjoint entries") {
    CHECK(tl_norm(seq({{Cell{0, {0}}, 1.0}}), 0.0, 2.0, 1.0) == 1.0);
    CHECK(tl_norm(seq({{Cell{1, {0}}, 1.0}}), 0.0, 2.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(tl_norm(seq({{Cell{0, {0}}, 1.0}, {Cell{0, {3}}, 1.0}}), 0.0, 2.0, 1.0) == 2.0);
    CHECK(tl_norm(seq({}), 0.0, 2.0, 1.0) == 0.0);
    CHECK(tl_norm(seq({{Cell{0, {0}}, 1.0}}), 0.0, 2.0, kInfinity) == 1.0);
    CHECK_THROWS_AS(tl_norm(seq({{Cell{0, {0}}, 1.0}}), 0.0, 0.5, 1.0), UsageError);
    CHECK_THROWS_AS(tl_norm(seq({{Cell{3, {0}}, 1.0}}), 0.0, 2.0, 1.0), UsageError);
}

TEST_CASE("pairing") {
    const auto s = seq({{Cell{0, {0}}, 1.0}});
    CHECK(pairing(s, s) == 1.0);
    CHECK(pairing(s, seq({{Cell{0, {1}}, 1.0}})) == 0.0);
}

TEST_CASE("duality on independent random pairs") {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto s = random_sequence(kLine, 77, 2 * i, 24);
        const auto t = random_sequence(kLine, 77, 2 * i + 1, 24);
        const double bound = tl_norm(s, 0.0, 2.0, 1.0) * tl_norm(t, 0.0, 2.0, kInfinity);
        CHECK(std::abs(pairing(s, t)) <= bound);
        if (bound > 0.0) worst = std::max(worst, std::abs(pairing(s, t)) / bound);
    }
    MESSAGE("largest pairing / (tl_1 tl_inf): " << worst);
}

TEST_CASE("almost diagonal constants") {
    CubeMatrix I{kLine, {}};
    for (int k = -2; k <= 2; ++k) {
        for (std::int64_t j = 0; j < 3; ++j) I.entries[{Cell{k, {j}}, Cell{k, {j}}}] = 1.0;
    }
    for (double eps : {0.1, 0.5, 1.0, 3.0}) CHECK(almost_diagonal_constant(I, eps) == 1.0);

    const auto s = seq({{Cell{0, {0}}, 1.0}, {Cell{0, {1}}, 2.0}, {Cell{-1, {5}}, -1.0}});
    // parent-child geometry: centers l_R / 4 apart, side ratio 1/2
    const double want = std::pow(2.0, -0.5) / (std::pow(1.25, -2.0) * 0.5);
    CHECK(almost_diagonal_constant(children_sum_matrix(s), 1.0) == doctest::Approx(want).epsilon(1e-14));
    CHECK_THROWS_AS(almost_diagonal_constant(I, 0.0), UsageError);
}

TEST_CASE("all-ones matrices are not almost diagonal") {
    const ProductLattice L(DyadicLattice1D(-4, 2, 0));
    auto ones = [&](int kmin) {
        CubeMatrix A{L, {}};
        std::vector<Cell> cubes;
        for (int k = kmin; k <= 2; ++k) {
            for (std::int64_t j = 0; j < (std::int64_t{1} << (2 - k)); ++j) cubes.push_back(Cell{k, {j}});
        }
        for (const auto& Q : cubes) {
            for (const auto& P : cubes) A.entries[{Q, P}] = 1.0;
        }
        return almost_diagonal_constant(A, 1.0);
    };
    const double c4 = ones(-1), c6 = ones(-3);
    CHECK(std::isfinite(c4));
    CHECK(c6 >= 2.0 * c4);
}

TEST_CASE("children sum operator") {
    auto r = apply_children_sum_T(seq({{Cell{0, {0}}, 1.0}}));
    CHECK(r.result.entries.at(Cell{1, {0}}) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
    r = apply_children_sum_T(seq({{Cell{0, {0}}, 1.0}, {Cell{0, {1}}, 1.0}}));
    CHECK(r.result.entries.at(Cell{1, {0}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    r = apply_children_sum_T(seq({{Cell{2, {0}}, 1.0}}));
    CHECK(r.dropped == 1);
    CHECK(r.result.entries.empty());
}

TEST_CASE("children sum operator is bounded on random sequences") {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto s = random_sequence(kLine, 5, i, 32);
        const double den = tl_norm(s, 0.0, 2.0, 1.0);
        if (den > 0.0) worst = std::max(worst, tl_norm(apply_children_sum_T(s).result, 0.0, 2.0, 1.0) / den);
    }
    MESSAGE("largest tl(Ts) / tl(s): " << worst);
    CHECK(std::isfinite(worst));
    CHECK(worst > 0.0);
}

TEST_CASE("sequences of the haar atom") {
    const auto h = testing::haar();
    const ProductLattice L(DyadicLattice1D(-1, 2, 0));
    const auto [a, b] = sequences_a_b(h, L);
    REQUIRE(a.entries.size() == 1);
    CHECK(a.entries.at(Cell{0, {0}}) == 1.0);
    REQUIRE(b.entries.size() == 2);
    CHECK(b.entries.at(Cell{-1, {0}}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(b.entries.at(Cell{-1, {1}}) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
    CHECK(tl_norm(b, 0.0, 2.0, 1.0) == doctest::Approx(lp_norm(square_function_S(h, L), 1.0)).epsilon(1e-15));
    CHECK(tl_norm(b, 0.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("property: norm identities and entrywise domination") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto f = testing::random_signal_1d(seed, 12, -3, static_cast<std::int64_t>(seed) - 4);
        const ProductLattice L(DyadicLattice1D(-3, 2, static_cast<std::int64_t>(seed * 3)));
        const auto c = seqspace_check(f, L, seed, 5);
        CHECK(c.tl_a == doctest::Approx(c.tilde_l1).epsilon(1e-12));
        CHECK(c.tl_b == doctest::Approx(c.s_l1).epsilon(1e-12));
        CHECK(c.domination_constant == 1.0);
        CHECK(c.domination_excess <= 1e-14);
        CHECK(c.identity_constant == 1.0);
    }
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto f = testing::random_signal({seed}, {5, 4}, -2, {0, -1});
        const std::int64_t s[] = {static_cast<std::int64_t>(seed), 2};
        const auto c = seqspace_check(f, LatticeShape::one_parameter(2, -2, 1).with_shifts(s), seed, 5);
        CHECK(c.tl_a == doctest::Approx(c.tilde_l1).epsilon(1e-12));
        CHECK(c.tl_b == doctest::Approx(c.s_l1).epsilon(1e-12));
        CHECK(c.domination_constant == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(c.domination_excess <= 1e-14);
    }
}

TEST_CASE("property: tl_norm is a norm") {
    for (std::uint64_t i = 0; i < 30; ++i) {
        const auto s = random_sequence(kLine, 11, 3 * i, 16);
        const auto t = random_sequence(kLine, 11, 3 * i + 1, 16);
        for (double p : {1.0, 2.0, kInfinity}) {
            const double lhs = tl_norm(combine(1.0, s, 1.0, t), 0.0, 2.0, p);
            CHECK(lhs <= (tl_norm(s, 0.0, 2.0, p) + tl_norm(t, 0.0, 2.0, p)) * (1.0 + 1e-10));
            CHECK(tl_norm(combine(-2.5, s, 0.0, t), 0.0, 2.0, p) ==
                  doctest::Approx(2.5 * tl_norm(s, 0.0, 2.0, p)).epsilon(1e-10));
        }
        const double a = tl_norm(combine(1.0, s, 1.0, t), 0.5, 1.0, 2.0);
        CHECK(a <= (tl_norm(s, 0.5, 1.0, 2.0) + tl_norm(t, 0.5, 1.0, 2.0)) * (1.0 + 1e-10));
    }
}
