#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/rng.hpp"

#include <cstdint>
#include <vector>

namespace testing {

inline dyadic::GridFunction haar(int m = -1) {
    const auto n = std::size_t{1} << (-m);
    std::vector<double> v(n, 1.0);
    for (std::size_t i = n / 2; i < n; ++i) v[i] = -1.0;
    return dyadic::make_grid_function(std::move(v), m);
}

// Uniform values in [-1, 1); mean removed when asked.
inline dyadic::GridFunction random_signal(std::uint64_t seed, std::vector<std::int64_t> extent, int m,
                                          std::vector<std::int64_t> origin, bool mean_zero = true) {
    const dyadic::CounterRng rng(seed, 0);
    std::size_t n = 1;
    for (auto e : extent) n *= static_cast<std::size_t>(e);
    std::vector<double> v(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 2.0 * rng.uniform(i) - 1.0;
        mean += v[i];
    }
    mean /= static_cast<double>(n);
    if (mean_zero) {
        for (auto& x : v) x -= mean;
    }
    return dyadic::make_grid_function(std::move(v), std::move(extent), m, std::move(origin));
}

inline dyadic::GridFunction random_signal_1d(std::uint64_t seed, std::int64_t cells, int m, std::int64_t origin = 0,
                                             bool mean_zero = true) {
    return random_signal(seed, {cells}, m, {origin}, mean_zero);
}

} // namespace testing
