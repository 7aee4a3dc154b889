#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dyadic/bmo.hpp"
#include "dyadic/errors.hpp"
#include "support.hpp"

#include <cmath>

using namespace dyadic;

namespace {

// Mean oscillation over every interval of a 1D lattice between scales m and K, by hand.
double brute_dyadic(const GridFunction& f, const DyadicLattice1D& L) {
    double best = 0.0;
    const auto lo = f.box().origin[0], hi = lo + f.box().extent[0];
    for (int k = L.mesh_exponent; k <= L.top_scale; ++k) {
        for (std::int64_t j = L.index_of_mesh_cell(lo, k); j <= L.index_of_mesh_cell(hi - 1, k); ++j) {
            const auto a = L.first_mesh_cell(j, k), b = a + L.block(k);
            double mean = 0.0;
            for (auto i = a; i < b; ++i) {
                const std::int64_t c[] = {i};
                mean += f.value_at(c);
            }
            mean /= static_cast<double>(b - a);
            double osc = 0.0;
            for (auto i = a; i < b; ++i) {
                const std::int64_t c[] = {i};
                osc += std::abs(f.value_at(c) - mean);
            }
            best = std::max(best, osc / static_cast<double>(b - a));
        }
    }
    return best;
}

} // namespace

TEST_CASE("zero signal") {
    const GridFunction z(Box({-4}, {8}), -2);
    CHECK(bmo_norm(z).norm == 0.0);
    CHECK(bmo_norm(z, DyadicLattice1D(-2, 1, 0)).norm == 0.0);
}

TEST_CASE("indicator of [0,1) in dyadic mode") {
    std::vector<double> v(64, 0.0);
    for (int i = 32; i < 40; ++i) v[i] = 1.0;
    const auto f = make_grid_function(std::move(v), -3, -32);
    const DyadicLattice1D L(-3, 2, 0);
    const auto r = bmo_norm(f, L);
    CHECK(r.norm == 0.5);
    CHECK(r.norm == brute_dyadic(f, L));
    CHECK(r.witness.scale == 1);
    CHECK(r.witness.corner == std::vector<std::int64_t>{0});
    CHECK(r.witness_side == 16);
    // the larger intervals: [0,4) gives 3/8, [0,8) gives 7/32
    CHECK(bmo_norm(f, DyadicLattice1D(-3, 3, 0)).norm == 0.5);
    CHECK(bmo_norm(f).norm >= r.norm);
}

TEST_CASE("all-mode report fields") {
    const auto h = testing::haar(-3);
    const auto r = bmo_norm(h);
    CHECK(r.norm == 1.0);
    CHECK(r.witness_side == 2);
    CHECK(r.witness.scale == -3);
    REQUIRE(r.omitted_bound.has_value());
    CHECK(*r.omitted_bound == doctest::Approx(2.0 / (17.0 / 8.0)).epsilon(1e-14));
    CHECK(r.scanned > 0);
    CHECK_THROWS_AS(bmo_norm(h, std::int64_t{0}), UsageError);
}

TEST_CASE("family of identical members") {
    const auto f = testing::random_signal_1d(3, 16, -3, -8);
    const DyadicLattice1D L(-3, 1, 2);
    const auto g = (1.0 / bmo_norm(f, L).norm) * f;
    const auto res = average_dyadic_bmo_family({{g, L}, {g, L}, {g, L}}, {0.25, 0.25, 0.5});
    CHECK(max_abs_difference(res.average, g) < 1e-15);
    CHECK(res.ratio >= 1.0);
    CHECK(res.max_member_norm == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("family of per-lattice haar functions over every shift") {
    const int m = -3, K = 1;
    std::vector<BmoFamilyMember> family;
    for (const auto& L : enumerate_shifts(m, K)) {
        // haar function of the scale-0 interval of L containing 0
        const auto j = L.index_of_mesh_cell(0, 0);
        const auto a = L.first_mesh_cell(j, 0);
        const auto n = L.block(0);
        std::vector<double> v(static_cast<std::size_t>(n), 1.0);
        for (auto i = n / 2; i < n; ++i) v[static_cast<std::size_t>(i)] = -1.0;
        family.push_back({make_grid_function(std::move(v), m, a), L});
    }
    const std::vector<double> w(family.size(), 1.0 / static_cast<double>(family.size()));
    const auto res = average_dyadic_bmo_family(family, w);
    MESSAGE("BMO / max dyadic BMO ratio: " << res.ratio);
    CHECK(std::isfinite(res.ratio));
    CHECK(res.ratio > 0.0);
    CHECK(res.max_member_norm == 1.0);
}

TEST_CASE("zero family") {
    const GridFunction z(Box({0}, {8}), -3);
    const auto res = average_dyadic_bmo_family({{z, DyadicLattice1D(-3, 0, 0)}, {z, DyadicLattice1D(-3, 0, 3)}},
                                               {0.5, 0.5});
    CHECK(lp_norm(res.average, 1.0) == 0.0);
    CHECK(res.report.norm == 0.0);
    CHECK(res.ratio == 0.0);
}

TEST_CASE("family input checks") {
    const auto h = testing::haar(-3);
    const DyadicLattice1D L(-3, 0, 0);
    CHECK_THROWS_AS(average_dyadic_bmo_family({}, {}), UsageError);
    CHECK_THROWS_AS(average_dyadic_bmo_family({{h, L}}, {0.5}), UsageError);
    CHECK_THROWS_AS(average_dyadic_bmo_family({{3.0 * h, L}}, {1.0}), UsageError);
}

TEST_CASE("property: dyadic mode never exceeds all mode") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto f = testing::random_signal_1d(seed, 10 + static_cast<std::int64_t>(seed), -3,
                                                 static_cast<std::int64_t>(seed) - 6, seed % 2 == 0);
        const auto all = bmo_norm(f, std::int64_t{64}).norm;
        for (const auto& L : enumerate_shifts(-3, 2)) {
            const auto d = bmo_norm(f, L);
            CHECK(d.norm <= all);
            CHECK(d.norm == doctest::Approx(brute_dyadic(f, L)).epsilon(1e-13));
        }
    }
    const auto g = testing::random_signal({7}, {5, 4}, -2, {0, -1});
    const auto all = bmo_norm(g).norm;
    for (const auto& L : enumerate_product_lattices(LatticeShape::one_parameter(2, -2, 1))) CHECK(bmo_norm(g, L).norm <= all);
}

TEST_CASE("property: shift covariance") {
    const auto f = testing::random_signal_1d(9, 13, -3, -2, false);
    for (std::int64_t u = -9; u <= 9; u += 3) {
        const std::int64_t off[] = {u};
        const DyadicLattice1D L(-3, 2, 5), Lu(-3, 2, 5 + u);
        CHECK(bmo_norm(translate(f, off), Lu).norm == bmo_norm(f, L).norm);
    }
}
