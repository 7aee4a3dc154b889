#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dyadic/errors.hpp"
#include "dyadic/kernel.hpp"
#include "dyadic/martingale.hpp"

#include <cmath>

using namespace dyadic;

namespace {

// Delta_k applied to the normalized indicator of the mesh-2^mf cell around y.
double slice_oracle(const DyadicLattice1D& L, int mf, double y, double x, int k) {
    const auto cell = static_cast<std::int64_t>(std::floor(y / pow2(mf)));
    const auto f = make_grid_function({pow2(-mf)}, mf, cell);
    const auto shift = L.shift << (L.mesh_exponent - mf);
    const auto d = diff_D(f, DyadicLattice1D(mf, L.top_scale, shift), k);
    const std::int64_t c[] = {static_cast<std::int64_t>(std::floor(x / pow2(mf)))};
    return d.value_at(c);
}

} // namespace

TEST_CASE("kernel slice on the standard lattice") {
    const DyadicLattice1D L(-3, 2, 0);
    const auto row = kernel_slice(L, 0.3, 0.7);
    REQUIRE(row.size() == 5); // k = -2..2
    CHECK(row[1] == 0.0);    // k = -1
    CHECK(row[2] == -1.0);   // k = 0
    CHECK(row[3] == 0.5);    // k = 1
    CHECK(row[4] == 0.25);   // k = 2
    CHECK_THROWS_AS(kernel_slice(L, 0.3, 0.3), UsageError);
}

TEST_CASE("kernel slice against differences of shrinking indicators") {
    for (std::int64_t s : {0, 3, 7}) {
        const DyadicLattice1D L(-3, 2, s);
        for (auto [y, x] : {std::pair{0.3, 0.7}, std::pair{-0.9, 1.4}, std::pair{0.05, -0.45}}) {
            const auto row = kernel_slice(L, y, x);
            for (int mf : {-4, -5, -6}) {
                for (int k = -2; k <= 2; ++k) {
                    CHECK(slice_oracle(L, mf, y, x, k) == doctest::Approx(row[k + 2]).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("kernel norm size") {
    const auto family = ShiftSet::all(-6, 6);
    const double v = kernel_norm(0.7, 0.3, family);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    for (int e = -2; e < 2; ++e) {
        const double r = kernel_norm(pow2(e + 1), 0.0, family) / kernel_norm(pow2(e), 0.0, family);
        CHECK(r >= 0.25);
        CHECK(r <= 1.0);
    }
    const auto fits = kernel_exponents(family);
    CHECK(fits.size.slope == doctest::Approx(-1.0).epsilon(0.15));
    CHECK(fits.size.points.size() == 5);
}

TEST_CASE("kernel homogeneity under dyadic dilation") {
    for (auto [x, y] : {std::pair{0.7, 0.3}, std::pair{-1.25, 0.5}, std::pair{2.0, 0.0}}) {
        const double a = kernel_norm(x, y, ShiftSet::all(-4, 3));
        const double b = kernel_norm(2 * x, 2 * y, ShiftSet::all(-3, 4));
        CHECK(b == doctest::Approx(a / 2).epsilon(1e-14));
    }
}

TEST_CASE("kernel smoothness") {
    const auto family = ShiftSet::all(-6, 6);
    CHECK(kernel_smoothness(1.0, 1.0, 0.0, family) == 0.0);
    CHECK_THROWS_AS(kernel_smoothness(1.6, 1.0, 0.0, family), UsageError);
    const auto fits = kernel_exponents(family);
    CHECK(fits.smoothness_dx.slope == doctest::Approx(1.0).epsilon(0.2));
    CHECK(fits.smoothness_distance.slope == doctest::Approx(-3.0).epsilon(0.1));
    CHECK(fits.smoothness_dx.points.size() >= 4);
    CHECK(fits.smoothness_distance.points.size() >= 4);
}

TEST_CASE("log-log fit") {
    const auto fit = fit_loglog({{1.0, 3.0}, {2.0, 12.0}, {4.0, 48.0}});
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK_THROWS_AS(fit_loglog({{1.0, 1.0}}), UsageError);
    CHECK_THROWS_AS(fit_loglog({{1.0, 1.0}, {2.0, 0.0}}), DataError);
}

TEST_CASE("T(1): cube equal to a top-scale lattice cube") {
    // Q = [0, 2^k0) with K = k0 on the standard lattice
    for (int k0 = 1; k0 <= 3; ++k0) {
        const auto r = check_T1(ShiftSet::single(DyadicLattice1D(-4, k0, 0)), {k0}, 0.25, 0.75, pow2(k0 - 1));
        CHECK(r.forward[0] == 0.0);
        CHECK(r.adjoint[0] == 0.0);
        CHECK(r.tilde_adjoint_phi[0] == 0.0);
    }
}

TEST_CASE("T(1): sequences over growing cubes") {
    const auto r = check_T1(ShiftSet::all(-4, 2), {0, 1, 2, 3, 4, 5}, -0.25, 0.25);
    for (std::size_t i = 1; i < r.cube_scales.size(); ++i) {
        CHECK(r.forward[i] <= r.forward[i - 1]);
        CHECK(r.adjoint[i] <= r.adjoint[i - 1]);
        CHECK(r.tilde_adjoint_phi[i] <= r.tilde_adjoint_phi[i - 1]);
    }
    // every scale-2 interval meeting the window lies inside Q once the side reaches 2^4
    CHECK(r.forward[4] == 0.0);
    CHECK(r.adjoint[4] == 0.0);
    CHECK(r.tilde_adjoint_phi[4] == 0.0);
    CHECK(r.forward[0] > 0.0);
    // without phi the child-slot adjoint does not see the cancellation
    CHECK(r.tilde_adjoint[5] > 0.0);
}

TEST_CASE("T(1) input checks") {
    const auto fam = ShiftSet::all(-4, 2);
    CHECK_THROWS_AS(check_T1(fam, {}, -0.25, 0.25), UsageError);
    CHECK_THROWS_AS(check_T1(fam, {0}, -0.6, 0.25), UsageError);
    CHECK_THROWS_AS(check_T1(fam, {1}, -0.3, 0.25), UsageError);
}

TEST_CASE("property: support of the kernel slice") {
    for (const auto& L : enumerate_shifts(-3, 2)) {
        for (int t = 0; t < 40; ++t) {
            const double y = -2.0 + 0.1037 * t, x = 1.7 - 0.0913 * t;
            if (x == y) continue;
            const auto row = kernel_slice(L, y, x);
            for (int k = -2; k <= 2; ++k) {
                if (pow2(k) < std::abs(x - y)) CHECK(row[k + 2] == 0.0);
            }
        }
    }
}
