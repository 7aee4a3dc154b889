#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dyadic {

/// Floor division for signed integers (rounds toward negative infinity).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

/// 2^e as a double; exact for every exponent the workbench uses.
double pow2(int e);

/// Axis-aligned block of mesh cells. Coordinates are integers in units of the
/// mesh, so `origin` and `extent` describe [origin, origin + extent) per axis.
struct Box {
    std::vector<std::int64_t> origin;
    std::vector<std::int64_t> extent;

    Box() = default;
    Box(std::vector<std::int64_t> origin, std::vector<std::int64_t> extent);

    std::size_t dim() const { return extent.size(); }
    std::size_t cell_count() const;

    /// Row-major offset of a global cell; the cell must lie in the box.
    std::size_t offset(std::span<const std::int64_t> cell) const;
    bool contains_cell(std::span<const std::int64_t> cell) const;
    bool contains(const Box& other) const;

    Box padded(std::span<const std::int64_t> per_axis) const;
    Box padded(std::int64_t cells) const;
    Box translated(std::span<const std::int64_t> offset_cells) const;

    friend bool operator==(const Box&, const Box&) = default;
};

/// Smallest box containing both arguments.
Box bounding_box(const Box& a, const Box& b);

/// Piecewise-constant function on a uniform dyadic grid (cell side 2^m),
/// identically zero outside its box. Each cell carries `value_dim` reals.
class GridFunction {
public:
    GridFunction() = default;
    /// Zero function.
    GridFunction(Box box, int mesh_exponent, std::size_t value_dim = 1);
    /// Takes ownership of row-major values; throws DataError on shape
    /// mismatch or a non-finite entry.
    GridFunction(Box box, int mesh_exponent, std::size_t value_dim, std::vector<double> values);

    const Box& box() const { return box_; }
    std::size_t dim() const { return box_.dim(); }
    int mesh_exponent() const { return mesh_exponent_; }
    std::size_t value_dim() const { return value_dim_; }
    std::size_t cell_count() const { return box_.cell_count(); }

    double mesh() const;
    double cell_volume() const;

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    std::span<const double> at(std::size_t cell) const {
        return {values_.data() + cell * value_dim_, value_dim_};
    }
    std::span<double> at(std::size_t cell) {
        return {values_.data() + cell * value_dim_, value_dim_};
    }

    /// Component of the value at a global cell; zero outside the box.
    double value_at(std::span<const std::int64_t> cell, std::size_t component = 0) const;

    /// Euclidean norm of the fiber stored at a cell offset.
    double fiber_norm(std::size_t cell) const;

    /// Same function represented on another box (zero-extended, or cropped
    /// when the target does not cover the support).
    GridFunction embedded(const Box& target) const;

private:
    Box box_;
    int mesh_exponent_ = 0;
    std::size_t value_dim_ = 1;
    std::vector<double> values_;
};

/// Builds a GridFunction from a dense row-major array of `extent` cells.
GridFunction make_grid_function(std::vector<double> values, std::vector<std::int64_t> extent,
                                int mesh_exponent, std::vector<std::int64_t> origin,
                                std::size_t value_dim = 1);

/// One-dimensional convenience: extent is inferred from the value count.
GridFunction make_grid_function(std::vector<double> values, int mesh_exponent,
                                std::int64_t origin = 0, std::size_t value_dim = 1);

/// L^p norm (fiber norm is Euclidean); p = infinity gives the max.
double lp_norm(const GridFunction& f, double p);

/// Exact translation by whole mesh cells.
GridFunction translate(const GridFunction& f, std::span<const std::int64_t> offset_cells);

/// Integral of each component.
std::vector<double> integral(const GridFunction& f);

/// L^2 inner product (summed over components).
double inner_product(const GridFunction& a, const GridFunction& b);

/// Pointwise linear combination alpha*a + beta*b on the bounding box.
GridFunction combine(double alpha, const GridFunction& a, double beta, const GridFunction& b);
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& f);

/// Max absolute componentwise difference over the union of the boxes.
double max_abs_difference(const GridFunction& a, const GridFunction& b);

/// Outer product g(x1) h(x2) of two one-dimensional scalar functions.
GridFunction tensor_product(const GridFunction& g, const GridFunction& h);

/// Axis-swapped copy of a two-dimensional function.
GridFunction transposed(const GridFunction& f);

} // namespace dyadic
