#pragma once

#include "dyadic/grid.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace dyadic {

/// Shift of the standard dyadic lattice by `shift * 2^m`, carrying the
/// interval scales k in [m, K]. The scale-k intervals are
/// [j 2^k + shift 2^m, (j+1) 2^k + shift 2^m).
struct DyadicLattice1D {
    int mesh_exponent = 0;
    int top_scale = 1;
    std::int64_t shift = 0;

    DyadicLattice1D() = default;
    /// Throws UsageError unless K > m and K - m <= 62; the shift is reduced
    /// modulo the period 2^{K-m}.
    DyadicLattice1D(int m, int K, std::int64_t shift = 0);

    std::int64_t period() const { return std::int64_t{1} << (top_scale - mesh_exponent); }
    bool carries(int k) const { return k >= mesh_exponent && k <= top_scale; }

    /// Mesh cells per scale-k interval.
    std::int64_t block(int k) const { return std::int64_t{1} << (k - mesh_exponent); }
    /// Index of the scale-k interval containing mesh cell `i`.
    std::int64_t index_of_mesh_cell(std::int64_t i, int k) const {
        return floor_div(i - shift, block(k));
    }
    std::int64_t first_mesh_cell(std::int64_t j, int k) const { return j * block(k) + shift; }
    double offset() const { return static_cast<double>(shift) * pow2(mesh_exponent); }
    double left_edge(std::int64_t j, int k) const;
    /// Index of the scale-k interval containing the real point x (half-open).
    std::int64_t index_containing(double x, int k) const;

    friend bool operator==(const DyadicLattice1D&, const DyadicLattice1D&) = default;
};

/// A cube of a lattice: scale k and per-axis interval indices.
struct Cell {
    int scale = 0;
    std::vector<std::int64_t> corner;

    auto operator<=>(const Cell&) const = default;
    bool operator==(const Cell&) const = default;

    Cell parent() const;
    /// The 2^N children, lexicographic by axis with the low half first.
    std::vector<Cell> children() const;
    bool contains(const Cell& other) const;
};

/// Product of one-dimensional lattices. Axes are partitioned into parameter
/// groups; inside a group a "cube" has one common scale on every axis, and
/// distinct groups carry independent scales (rectangles). One group means
/// the ordinary one-parameter lattice on R^N.
class ProductLattice {
public:
    ProductLattice() = default;
    ProductLattice(DyadicLattice1D axis); // NOLINT: a 1D lattice is a 1-factor product
    ProductLattice(std::vector<DyadicLattice1D> factors, std::vector<std::size_t> group_sizes = {});

    static ProductLattice multi_parameter(std::vector<DyadicLattice1D> factors);

    std::size_t dim() const { return factors_.size(); }
    std::size_t group_count() const { return group_sizes_.size(); }
    std::size_t group_size(std::size_t g) const { return group_sizes_[g]; }
    std::size_t group_first_axis(std::size_t g) const { return group_first_[g]; }
    std::size_t group_of_axis(std::size_t axis) const { return axis_group_[axis]; }
    const std::vector<std::size_t>& group_sizes() const { return group_sizes_; }

    const DyadicLattice1D& factor(std::size_t axis) const { return factors_[axis]; }
    const std::vector<DyadicLattice1D>& factors() const { return factors_; }

    int mesh_exponent() const { return factors_.front().mesh_exponent; }
    int top_scale(std::size_t g) const { return factors_[group_first_[g]].top_scale; }
    bool one_parameter() const { return group_sizes_.size() == 1; }

    friend bool operator==(const ProductLattice&, const ProductLattice&) = default;

private:
    std::vector<DyadicLattice1D> factors_;
    std::vector<std::size_t> group_sizes_;
    std::vector<std::size_t> group_first_;
    std::vector<std::size_t> axis_group_;
};

/// Scale parameters shared by a family of product lattices.
struct LatticeShape {
    int mesh_exponent = 0;
    std::vector<int> top_scales;          // one per parameter group
    std::vector<std::size_t> group_sizes; // axes per group

    static LatticeShape one_parameter(std::size_t dim, int m, int K);
    static LatticeShape multi_parameter(int m, std::vector<int> top_scales);
    static LatticeShape of(const ProductLattice& L);

    std::size_t dim() const;
    int top_scale_of_axis(std::size_t axis) const;
    /// Number of distinct shift tuples, saturating at 2^62.
    std::uint64_t shift_count() const;
    ProductLattice with_shifts(std::span<const std::int64_t> shifts) const;
};

/// One random lattice: x(omega) on the mesh and the parent-choice bits
/// xi_1..xi_K, reduced to the induced shift. Deterministic in (seed, stream).
DyadicLattice1D sample_lattice(std::uint64_t seed, std::uint64_t stream, int m, int K);

/// All 2^{K-m} lattices in ascending shift order; requires K - m <= 20.
std::vector<DyadicLattice1D> enumerate_shifts(int m, int K);

/// Independent per-axis lattices, one stream per axis.
ProductLattice sample_product_lattice(std::uint64_t seed, std::span<const std::uint64_t> streams,
                                      const LatticeShape& shape);

/// Every shift tuple of the shape (axis 0 slowest); throws InfeasibleError
/// above `limit` combinations.
std::vector<ProductLattice> enumerate_product_lattices(const LatticeShape& shape,
                                                       std::uint64_t limit = std::uint64_t{1} << 24);

/// The scale-k cube (one-parameter lattice) containing a point.
Cell cube_containing(const ProductLattice& L, std::span<const double> point, int k);
Cell cube_containing(const DyadicLattice1D& L, double x, int k);

/// Left edges (per axis) and side length of a cube.
std::vector<double> cube_corner(const ProductLattice& L, const Cell& c);
double cube_side(const ProductLattice& L, const Cell& c);

} // namespace dyadic
