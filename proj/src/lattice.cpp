#include "dyadic/lattice.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace dyadic {

DyadicLattice1D::DyadicLattice1D(int m, int K, std::int64_t s)
    : mesh_exponent(m), top_scale(K), shift(0) {
    if (K <= m) {
        throw UsageError("lattice requires K > m (got m=" + std::to_string(m) + ", K=" +
                         std::to_string(K) + ")");
    }
    if (K - m > 62) throw UsageError("lattice scale range K - m exceeds 62");
    shift = floor_mod(s, period());
}

double DyadicLattice1D::left_edge(std::int64_t j, int k) const {
    return static_cast<double>(first_mesh_cell(j, k)) * pow2(mesh_exponent);
}

std::int64_t DyadicLattice1D::index_containing(double x, int k) const {
    // Work in mesh units so that mesh-aligned points are classified exactly.
    const double u = x * pow2(-mesh_exponent) - static_cast<double>(shift);
    return static_cast<std::int64_t>(std::floor(u / static_cast<double>(block(k))));
}

Cell Cell::parent() const {
    Cell p{scale + 1, corner};
    for (auto& j : p.corner) j = floor_div(j, 2);
    return p;
}

std::vector<Cell> Cell::children() const {
    const std::size_t n = corner.size();
    std::vector<Cell> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t slot = 0; slot < (std::size_t{1} << n); ++slot) {
        Cell c{scale - 1, corner};
        for (std::size_t a = 0; a < n; ++a) {
            const auto bit = static_cast<std::int64_t>((slot >> (n - 1 - a)) & 1U);
            c.corner[a] = 2 * corner[a] + bit;
        }
        out.push_back(std::move(c));
    }
    return out;
}

bool Cell::contains(const Cell& other) const {
    if (other.scale > scale || other.corner.size() != corner.size()) return false;
    const int d = scale - other.scale;
    for (std::size_t a = 0; a < corner.size(); ++a) {
        if (floor_div(other.corner[a], std::int64_t{1} << d) != corner[a]) return false;
    }
    return true;
}

ProductLattice::ProductLattice(DyadicLattice1D axis) : ProductLattice(std::vector{axis}) {}

ProductLattice::ProductLattice(std::vector<DyadicLattice1D> factors, std::vector<std::size_t> group_sizes)
    : factors_(std::move(factors)), group_sizes_(std::move(group_sizes)) {
    if (factors_.empty()) throw UsageError("product lattice needs at least one factor");
    if (group_sizes_.empty()) group_sizes_ = {factors_.size()};
    if (std::accumulate(group_sizes_.begin(), group_sizes_.end(), std::size_t{0}) != factors_.size() ||
        std::find(group_sizes_.begin(), group_sizes_.end(), std::size_t{0}) != group_sizes_.end()) {
        throw UsageError("parameter group sizes must be positive and sum to the factor count");
    }
    const int m = factors_.front().mesh_exponent;
    std::size_t axis = 0;
    for (std::size_t g = 0; g < group_sizes_.size(); ++g) {
        group_first_.push_back(axis);
        const int K = factors_[axis].top_scale;
        for (std::size_t i = 0; i < group_sizes_[g]; ++i, ++axis) {
            if (factors_[axis].mesh_exponent != m) {
                throw UsageError("all lattice factors must share the mesh exponent");
            }
            if (factors_[axis].top_scale != K) {
                throw UsageError("factors of one parameter group must share the top scale");
            }
            axis_group_.push_back(g);
        }
    }
}

ProductLattice ProductLattice::multi_parameter(std::vector<DyadicLattice1D> factors) {
    std::vector<std::size_t> groups(factors.size(), 1);
    return ProductLattice(std::move(factors), std::move(groups));
}

LatticeShape LatticeShape::one_parameter(std::size_t dim, int m, int K) {
    return LatticeShape{m, {K}, {dim}};
}

LatticeShape LatticeShape::multi_parameter(int m, std::vector<int> top_scales) {
    std::vector<std::size_t> groups(top_scales.size(), 1);
    return LatticeShape{m, std::move(top_scales), std::move(groups)};
}

LatticeShape LatticeShape::of(const ProductLattice& L) {
    LatticeShape s{L.mesh_exponent(), {}, L.group_sizes()};
    for (std::size_t g = 0; g < L.group_count(); ++g) s.top_scales.push_back(L.top_scale(g));
    return s;
}

std::size_t LatticeShape::dim() const {
    return std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0});
}

int LatticeShape::top_scale_of_axis(std::size_t axis) const {
    for (std::size_t g = 0; g < group_sizes.size(); ++g) {
        if (axis < group_sizes[g]) return top_scales[g];
        axis -= group_sizes[g];
    }
    throw UsageError("axis out of range");
}

std::uint64_t LatticeShape::shift_count() const {
    int bits = 0;
    for (std::size_t a = 0; a < dim(); ++a) bits += top_scale_of_axis(a) - mesh_exponent;
    if (bits >= 62) return std::uint64_t{1} << 62;
    return std::uint64_t{1} << bits;
}

ProductLattice LatticeShape::with_shifts(std::span<const std::int64_t> shifts) const {
    if (shifts.size() != dim()) throw UsageError("shift tuple length does not match lattice dimension");
    if (top_scales.size() != group_sizes.size()) throw UsageError("lattice shape: one top scale per group");
    std::vector<DyadicLattice1D> f;
    for (std::size_t a = 0; a < dim(); ++a) f.emplace_back(mesh_exponent, top_scale_of_axis(a), shifts[a]);
    return ProductLattice(std::move(f), group_sizes);
}

DyadicLattice1D sample_lattice(std::uint64_t seed, std::uint64_t stream, int m, int K) {
    if (K <= m) {
        throw UsageError("sample_lattice requires K > m (got m=" + std::to_string(m) + ", K=" +
                         std::to_string(K) + ")");
    }
    if (K - m > 30) throw UsageError("sample_lattice requires K - m <= 30");
    const CounterRng rng(seed, stream);

    // Left endpoint of I_k in mesh units. For m < 0 the unit interval
    // I_0 = [x - 1, x) is placed by x drawn on the mesh; for m >= 0 the
    // mesh-scale interval starts at the origin.
    std::int64_t left;
    int first_bit_scale;
    if (m < 0) {
        const std::int64_t x_cells = static_cast<std::int64_t>(rng(0) >> (64 + m));
        left = x_cells - (std::int64_t{1} << (-m));
        first_bit_scale = 1;
    } else {
        left = -1;
        first_bit_scale = m + 1;
    }
    // xi_k = -1 attaches the left neighbour, moving the left endpoint by 2^{k-1}.
    for (int k = first_bit_scale; k <= K; ++k) {
        const bool xi_negative = (rng(static_cast<std::uint64_t>(k)) >> 63) != 0;
        if (xi_negative) left -= std::int64_t{1} << (k - 1 - m);
    }
    return DyadicLattice1D(m, K, left);
}

std::vector<DyadicLattice1D> enumerate_shifts(int m, int K) {
    if (K <= m) throw UsageError("enumerate_shifts requires K > m");
    if (K - m > 20) {
        throw InfeasibleError("enumerate_shifts: 2^" + std::to_string(K - m) +
                              " lattices requested, limit is 2^20");
    }
    std::vector<DyadicLattice1D> out;
    const std::int64_t n = std::int64_t{1} << (K - m);
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t s = 0; s < n; ++s) out.emplace_back(m, K, s);
    return out;
}

ProductLattice sample_product_lattice(std::uint64_t seed, std::span<const std::uint64_t> streams,
                                      const LatticeShape& shape) {
    if (streams.size() != shape.dim()) throw UsageError("one stream per axis is required");
    std::set<std::uint64_t> distinct(streams.begin(), streams.end());
    if (distinct.size() != streams.size()) {
        throw UsageError("sample_product_lattice: stream identifiers must be pairwise distinct");
    }
    std::vector<DyadicLattice1D> f;
    for (std::size_t a = 0; a < shape.dim(); ++a) {
        f.push_back(sample_lattice(seed, streams[a], shape.mesh_exponent, shape.top_scale_of_axis(a)));
    }
    return ProductLattice(std::move(f), shape.group_sizes);
}

std::vector<ProductLattice> enumerate_product_lattices(const LatticeShape& shape, std::uint64_t limit) {
    const std::uint64_t count = shape.shift_count();
    if (count > limit) {
        throw InfeasibleError("exact enumeration needs " + std::to_string(count) +
                              " shift combinations, limit is " + std::to_string(limit));
    }
    const std::size_t n = shape.dim();
    std::vector<std::int64_t> period(n), shifts(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        period[a] = std::int64_t{1} << (shape.top_scale_of_axis(a) - shape.mesh_exponent);
    }
    std::vector<ProductLattice> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
        out.push_back(shape.with_shifts(shifts));
        for (std::size_t a = n; a-- > 0;) {
            if (++shifts[a] < period[a]) break;
            shifts[a] = 0;
        }
    }
    return out;
}

Cell cube_containing(const ProductLattice& L, std::span<const double> point, int k) {
    if (point.size() != L.dim()) throw UsageError("cube_containing: point dimension mismatch");
    Cell c{k, std::vector<std::int64_t>(L.dim())};
    for (std::size_t a = 0; a < L.dim(); ++a) {
        const auto& f = L.factor(a);
        if (!f.carries(k)) {
            throw UsageError("cube_containing: scale " + std::to_string(k) + " outside carried range [" +
                             std::to_string(f.mesh_exponent) + ", " + std::to_string(f.top_scale) + "]");
        }
        c.corner[a] = f.index_containing(point[a], k);
    }
    return c;
}

Cell cube_containing(const DyadicLattice1D& L, double x, int k) {
    return cube_containing(ProductLattice(L), std::span<const double>(&x, 1), k);
}

std::vector<double> cube_corner(const ProductLattice& L, const Cell& c) {
    std::vector<double> out(L.dim());
    for (std::size_t a = 0; a < L.dim(); ++a) out[a] = L.factor(a).left_edge(c.corner[a], c.scale);
    return out;
}

double cube_side(const ProductLattice&, const Cell& c) { return pow2(c.scale); }

} // namespace dyadic
