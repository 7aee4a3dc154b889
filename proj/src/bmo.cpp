#include "dyadic/bmo.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/martingale.hpp"
#include "martingale_ops.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dyadic {

namespace {

struct Best {
    double norm = -1.0;
    std::vector<std::int64_t> corner;
    std::int64_t side = 0;
    std::size_t scanned = 0;
};

double fiber_distance(std::span<const double> v, const std::vector<double>& mean) {
    if (v.size() == 1) return std::abs(v[0] - mean[0]);
    double s = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c) s += (v[c] - mean[c]) * (v[c] - mean[c]);
    return std::sqrt(s);
}

double fiber_length(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Scan every cube of one side length; ties keep the first cube in row-major
// corner order.
Best scan_side(const GridFunction& f, std::int64_t side) {
    const Box& box = f.box();
    const std::size_t n = box.dim();
    const std::size_t vd = f.value_dim();
    std::vector<std::int64_t> lo(n), hi(n), corner(n);
    for (std::size_t a = 0; a < n; ++a) {
        lo[a] = box.origin[a] - side + 1;
        hi[a] = box.origin[a] + box.extent[a];
        corner[a] = lo[a];
    }
    double volume = 1.0;
    for (std::size_t a = 0; a < n; ++a) volume *= static_cast<double>(side);

    Best best;
    std::vector<std::int64_t> clo(n), chi(n), cell(n);
    std::vector<double> mean(vd);
    while (true) {
        std::size_t inside = 1;
        for (std::size_t a = 0; a < n; ++a) {
            clo[a] = std::max(corner[a], box.origin[a]);
            chi[a] = std::min(corner[a] + side, box.origin[a] + box.extent[a]);
            inside *= static_cast<std::size_t>(chi[a] - clo[a]);
        }
        auto for_inside = [&](auto&& fn) {
            cell = clo;
            while (true) {
                fn(f.at(box.offset(cell)));
                std::size_t a = n;
                bool done = true;
                while (a-- > 0) {
                    if (++cell[a] < chi[a]) {
                        done = false;
                        break;
                    }
                    cell[a] = clo[a];
                }
                if (done) return;
            }
        };
        std::fill(mean.begin(), mean.end(), 0.0);
        for_inside([&](std::span<const double> v) {
            for (std::size_t c = 0; c < vd; ++c) mean[c] += v[c];
        });
        for (auto& v : mean) v /= volume;
        double osc = 0.0;
        for_inside([&](std::span<const double> v) { osc += fiber_distance(v, mean); });
        osc += (volume - static_cast<double>(inside)) * fiber_length(mean);
        osc /= volume;
        ++best.scanned;
        if (osc > best.norm) {
            best.norm = osc;
            best.corner = corner;
            best.side = side;
        }

        std::size_t a = n;
        bool done = true;
        while (a-- > 0) {
            if (++corner[a] < hi[a]) {
                done = false;
                break;
            }
            corner[a] = lo[a];
        }
        if (done) break;
    }
    return best;
}

} // namespace

BmoReport bmo_norm(const GridFunction& f, std::optional<std::int64_t> max_side, unsigned threads) {
    const auto largest = *std::max_element(f.box().extent.begin(), f.box().extent.end());
    const std::int64_t smax = max_side.value_or(2 * largest);
    if (smax < 1) throw UsageError("BMO scan needs a positive maximal side");
    std::vector<Best> per_side(static_cast<std::size_t>(smax));
    detail::parallel_for(per_side.size(), threads,
                         [&](std::size_t i) { per_side[i] = scan_side(f, static_cast<std::int64_t>(i) + 1); });
    BmoReport r;
    Best best;
    for (const auto& b : per_side) {
        r.scanned += b.scanned;
        if (b.norm > best.norm) best = b;
    }
    r.norm = std::max(0.0, best.norm);
    r.witness = Cell{f.mesh_exponent(), best.corner};
    r.witness_side = best.side;
    double volume = 1.0;
    for (std::size_t a = 0; a < f.dim(); ++a) volume *= static_cast<double>(smax + 1) * f.mesh();
    r.omitted_bound = 2.0 * lp_norm(f, 1.0) / volume;
    return r;
}

BmoReport bmo_norm(const GridFunction& f, const ProductLattice& L) {
    require_aligned(f, L);
    if (!L.one_parameter()) throw UsageError("dyadic BMO expects a one-parameter lattice");
    const int m = L.mesh_exponent(), K = L.top_scale(0);
    const Box hull = lattice_hull(f.box(), L, {K});
    const GridFunction work = f.embedded(hull);
    const std::size_t vd = f.value_dim();
    const std::size_t n = f.dim();

    BmoReport r;
    r.norm = -1.0;
    std::vector<std::int64_t> cell(n);
    for (int k = m; k <= K; ++k) {
        const Box hk = lattice_hull(f.box(), L, {k});
        std::size_t cubes = 1;
        for (std::size_t a = 0; a < n; ++a) cubes *= static_cast<std::size_t>(hk.extent[a] / L.factor(a).block(k));
        r.scanned += cubes;

        std::vector<double> mean(work.values().begin(), work.values().end());
        detail::group_average(mean, hull, vd, L, 0, k);
        std::vector<double> dev(hull.cell_count());
        for (std::size_t i = 0; i < dev.size(); ++i) {
            dev[i] = fiber_distance(work.at(i), std::vector<double>(mean.begin() + static_cast<std::ptrdiff_t>(i * vd),
                                                                    mean.begin() + static_cast<std::ptrdiff_t>((i + 1) * vd)));
        }
        detail::group_average(dev, hull, 1, L, 0, k);
        for (std::size_t i = 0; i < dev.size(); ++i) {
            if (dev[i] > r.norm) {
                std::size_t off = i;
                for (std::size_t a = n; a-- > 0;) {
                    const auto e = static_cast<std::size_t>(hull.extent[a]);
                    cell[a] = hull.origin[a] + static_cast<std::int64_t>(off % e);
                    off /= e;
                }
                r.norm = dev[i];
                r.witness.scale = k;
                r.witness.corner.assign(n, 0);
                for (std::size_t a = 0; a < n; ++a) r.witness.corner[a] = L.factor(a).index_of_mesh_cell(cell[a], k);
                r.witness_side = L.factor(0).block(k);
            }
        }
    }
    r.norm = std::max(0.0, r.norm);
    return r;
}

BmoFamilyResult average_dyadic_bmo_family(const std::vector<BmoFamilyMember>& family,
                                          const std::vector<double>& weights, std::optional<std::int64_t> max_side) {
    if (family.empty()) throw UsageError("BMO family is empty");
    if (weights.size() != family.size()) throw UsageError("one weight per family member is required");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw UsageError("family weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw UsageError("family weights must sum to 1");

    BmoFamilyResult out;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const double norm = bmo_norm(family[i].f, family[i].lattice).norm;
        if (norm > 1.0 + 1e-12) {
            throw UsageError("family member " + std::to_string(i) + " has dyadic BMO norm " + std::to_string(norm) +
                             " > 1");
        }
        out.max_member_norm = std::max(out.max_member_norm, norm);
    }
    GridFunction avg = weights[0] * family[0].f;
    for (std::size_t i = 1; i < family.size(); ++i) avg = combine(1.0, avg, weights[i], family[i].f);
    out.report = bmo_norm(avg, max_side);
    out.ratio = out.max_member_norm > 0.0 ? out.report.norm / out.max_member_norm : 0.0;
    out.average = std::move(avg);
    return out;
}

} // namespace dyadic
