#pragma once

// Deterministic parallel helpers: work is split into chunks whose layout
// depends only on the problem size, and chunk results are combined in index
// order, so the output does not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dyadic::detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1U, std::thread::hardware_concurrency());
}

/// Calls fn(i) exactly once for every i in [0, n).
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(resolve_threads(threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Per-point running mean and sum of squared deviations.
struct Moments {
    std::size_t count = 0;
    std::vector<double> mean;
    std::vector<double> m2;

    void add(const std::vector<double>& y) {
        if (mean.empty()) {
            mean.assign(y.size(), 0.0);
            m2.assign(y.size(), 0.0);
        }
        ++count;
        const double inv = 1.0 / static_cast<double>(count);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double d = y[i] - mean[i];
            mean[i] += d * inv;
            m2[i] += d * (y[i] - mean[i]);
        }
    }

    void merge(const Moments& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
        const double n = na + nb;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double d = o.mean[i] - mean[i];
            mean[i] += d * nb / n;
            m2[i] += o.m2[i] + d * d * na * nb / n;
        }
        count += o.count;
    }
};

/// Moments of sample(i, out) over i in [0, n); `out` is resized to `points`.
inline Moments chunked_moments(std::size_t n, std::size_t points, unsigned threads,
                               const std::function<void(std::size_t, std::vector<double>&)>& sample) {
    const std::size_t chunk = std::max<std::size_t>(32, (n + 255) / 256);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    std::vector<Moments> parts(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::vector<double> y(points);
        const std::size_t end = std::min(n, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) {
            std::fill(y.begin(), y.end(), 0.0);
            sample(i, y);
            parts[c].add(y);
        }
    });
    Moments total;
    for (const auto& p : parts) total.merge(p);
    if (total.mean.empty()) {
        total.mean.assign(points, 0.0);
        total.m2.assign(points, 0.0);
    }
    return total;
}

} // namespace dyadic::detail
