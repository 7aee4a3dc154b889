#include "dyadic/grid.hpp"

#include "dyadic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace dyadic {

double pow2(int e) { return std::ldexp(1.0, e); }

Box::Box(std::vector<std::int64_t> o, std::vector<std::int64_t> e)
    : origin(std::move(o)), extent(std::move(e)) {
    if (origin.size() != extent.size() || extent.empty()) {
        throw DataError("box origin and extent must have the same nonzero length");
    }
    for (std::size_t a = 0; a < extent.size(); ++a) {
        if (extent[a] < 1) {
            throw DataError("box extent along axis " + std::to_string(a) + " must be >= 1");
        }
    }
}

std::size_t Box::cell_count() const {
    std::size_t n = 1;
    for (auto e : extent) n *= static_cast<std::size_t>(e);
    return n;
}

std::size_t Box::offset(std::span<const std::int64_t> cell) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < extent.size(); ++a) {
        idx = idx * static_cast<std::size_t>(extent[a]) + static_cast<std::size_t>(cell[a] - origin[a]);
    }
    return idx;
}

bool Box::contains_cell(std::span<const std::int64_t> cell) const {
    for (std::size_t a = 0; a < extent.size(); ++a) {
        if (cell[a] < origin[a] || cell[a] >= origin[a] + extent[a]) return false;
    }
    return true;
}

bool Box::contains(const Box& other) const {
    if (other.dim() != dim()) return false;
    for (std::size_t a = 0; a < extent.size(); ++a) {
        if (other.origin[a] < origin[a]) return false;
        if (other.origin[a] + other.extent[a] > origin[a] + extent[a]) return false;
    }
    return true;
}

Box Box::padded(std::span<const std::int64_t> per_axis) const {
    Box out = *this;
    for (std::size_t a = 0; a < extent.size(); ++a) {
        out.origin[a] -= per_axis[a];
        out.extent[a] += 2 * per_axis[a];
    }
    return out;
}

Box Box::padded(std::int64_t cells) const {
    std::vector<std::int64_t> pad(dim(), cells);
    return padded(pad);
}

Box Box::translated(std::span<const std::int64_t> offset_cells) const {
    Box out = *this;
    for (std::size_t a = 0; a < extent.size(); ++a) out.origin[a] += offset_cells[a];
    return out;
}

Box bounding_box(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) throw UsageError("bounding_box: dimension mismatch");
    Box out = a;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        auto lo = std::min(a.origin[i], b.origin[i]);
        auto hi = std::max(a.origin[i] + a.extent[i], b.origin[i] + b.extent[i]);
        out.origin[i] = lo;
        out.extent[i] = hi - lo;
    }
    return out;
}

GridFunction::GridFunction(Box box, int mesh_exponent, std::size_t value_dim)
    : box_(std::move(box)), mesh_exponent_(mesh_exponent), value_dim_(value_dim) {
    if (value_dim_ == 0) throw DataError("value_dim must be positive");
    values_.assign(box_.cell_count() * value_dim_, 0.0);
}

GridFunction::GridFunction(Box box, int mesh_exponent, std::size_t value_dim, std::vector<double> values)
    : box_(std::move(box)), mesh_exponent_(mesh_exponent), value_dim_(value_dim), values_(std::move(values)) {
    if (value_dim_ == 0) throw DataError("value_dim must be positive");
    if (values_.size() != box_.cell_count() * value_dim_) {
        std::ostringstream os;
        os << "shape mismatch: expected " << box_.cell_count() * value_dim_ << " values, got "
           << values_.size();
        throw DataError(os.str());
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("non-finite value at index " + std::to_string(i));
        }
    }
}

double GridFunction::mesh() const { return pow2(mesh_exponent_); }

double GridFunction::cell_volume() const {
    return pow2(mesh_exponent_ * static_cast<int>(dim()));
}

double GridFunction::value_at(std::span<const std::int64_t> cell, std::size_t component) const {
    if (!box_.contains_cell(cell)) return 0.0;
    return values_[box_.offset(cell) * value_dim_ + component];
}

double GridFunction::fiber_norm(std::size_t cell) const {
    if (value_dim_ == 1) return std::abs(values_[cell]);
    double s = 0.0;
    for (double v : at(cell)) s += v * v;
    return std::sqrt(s);
}

namespace {

// Calls fn(src_offset, dst_offset) for every cell in the intersection.
template <class Fn>
void for_each_common_cell(const Box& src, const Box& dst, Fn&& fn) {
    const std::size_t n = src.dim();
    std::vector<std::int64_t> lo(n), hi(n);
    for (std::size_t a = 0; a < n; ++a) {
        lo[a] = std::max(src.origin[a], dst.origin[a]);
        hi[a] = std::min(src.origin[a] + src.extent[a], dst.origin[a] + dst.extent[a]);
        if (lo[a] >= hi[a]) return;
    }
    std::vector<std::int64_t> cell = lo;
    while (true) {
        fn(src.offset(cell), dst.offset(cell));
        std::size_t a = n;
        while (a > 0) {
            --a;
            if (++cell[a] < hi[a]) break;
            cell[a] = lo[a];
            if (a == 0) return;
        }
    }
}

void require_compatible(const GridFunction& a, const GridFunction& b, const char* what) {
    if (a.dim() != b.dim() || a.mesh_exponent() != b.mesh_exponent() || a.value_dim() != b.value_dim()) {
        throw UsageError(std::string(what) + ": incompatible grid functions");
    }
}

} // namespace

GridFunction GridFunction::embedded(const Box& target) const {
    if (target.dim() != dim()) throw UsageError("embedded: dimension mismatch");
    GridFunction out(target, mesh_exponent_, value_dim_);
    const std::size_t d = value_dim_;
    for_each_common_cell(box_, target, [&](std::size_t s, std::size_t t) {
        std::copy_n(values_.data() + s * d, d, out.values_.data() + t * d);
    });
    return out;
}

GridFunction make_grid_function(std::vector<double> values, std::vector<std::int64_t> extent,
                                int mesh_exponent, std::vector<std::int64_t> origin,
                                std::size_t value_dim) {
    return GridFunction(Box(std::move(origin), std::move(extent)), mesh_exponent, value_dim,
                        std::move(values));
}

GridFunction make_grid_function(std::vector<double> values, int mesh_exponent, std::int64_t origin,
                                std::size_t value_dim) {
    if (value_dim == 0 || values.size() % value_dim != 0 || values.empty()) {
        throw DataError("value count is not a positive multiple of value_dim");
    }
    auto n = static_cast<std::int64_t>(values.size() / value_dim);
    return make_grid_function(std::move(values), {n}, mesh_exponent, {origin}, value_dim);
}

double lp_norm(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw UsageError("lp_norm: p must be >= 1");
    const std::size_t n = f.cell_count();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, f.fiber_norm(i));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = f.fiber_norm(i);
        s += (p == 1.0) ? v : (p == 2.0 ? v * v : std::pow(v, p));
    }
    s *= f.cell_volume();
    if (p == 1.0) return s;
    if (p == 2.0) return std::sqrt(s);
    return std::pow(s, 1.0 / p);
}

GridFunction translate(const GridFunction& f, std::span<const std::int64_t> offset_cells) {
    if (offset_cells.size() != f.dim()) throw UsageError("translate: offset dimension mismatch");
    std::vector<double> v(f.values().begin(), f.values().end());
    return GridFunction(f.box().translated(offset_cells), f.mesh_exponent(), f.value_dim(), std::move(v));
}

std::vector<double> integral(const GridFunction& f) {
    std::vector<double> s(f.value_dim(), 0.0);
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
        auto v = f.at(i);
        for (std::size_t c = 0; c < s.size(); ++c) s[c] += v[c];
    }
    for (auto& x : s) x *= f.cell_volume();
    return s;
}

double inner_product(const GridFunction& a, const GridFunction& b) {
    require_compatible(a, b, "inner_product");
    const std::size_t d = a.value_dim();
    double s = 0.0;
    for_each_common_cell(a.box(), b.box(), [&](std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < d; ++c) s += a.values()[i * d + c] * b.values()[j * d + c];
    });
    return s * a.cell_volume();
}

GridFunction combine(double alpha, const GridFunction& a, double beta, const GridFunction& b) {
    require_compatible(a, b, "combine");
    Box box = bounding_box(a.box(), b.box());
    GridFunction out(box, a.mesh_exponent(), a.value_dim());
    const std::size_t d = a.value_dim();
    auto dst = out.values();
    for_each_common_cell(a.box(), box, [&](std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < d; ++c) dst[j * d + c] += alpha * a.values()[i * d + c];
    });
    for_each_common_cell(b.box(), box, [&](std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < d; ++c) dst[j * d + c] += beta * b.values()[i * d + c];
    });
    return out;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) { return combine(1.0, a, 1.0, b); }
GridFunction operator-(const GridFunction& a, const GridFunction& b) { return combine(1.0, a, -1.0, b); }

GridFunction operator*(double c, const GridFunction& f) {
    GridFunction out = f;
    for (auto& v : out.values()) v *= c;
    return out;
}

double max_abs_difference(const GridFunction& a, const GridFunction& b) {
    GridFunction d = a - b;
    double m = 0.0;
    for (double v : d.values()) m = std::max(m, std::abs(v));
    return m;
}

GridFunction tensor_product(const GridFunction& g, const GridFunction& h) {
    if (g.dim() != 1 || h.dim() != 1 || g.value_dim() != 1 || h.value_dim() != 1 ||
        g.mesh_exponent() != h.mesh_exponent()) {
        throw UsageError("tensor_product: expects two scalar 1D functions on the same mesh");
    }
    Box box({g.box().origin[0], h.box().origin[0]}, {g.box().extent[0], h.box().extent[0]});
    std::vector<double> v(box.cell_count());
    const auto n1 = static_cast<std::size_t>(g.box().extent[0]);
    const auto n2 = static_cast<std::size_t>(h.box().extent[0]);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) v[i * n2 + j] = g.values()[i] * h.values()[j];
    return GridFunction(box, g.mesh_exponent(), 1, std::move(v));
}

GridFunction transposed(const GridFunction& f) {
    if (f.dim() != 2) throw UsageError("transposed: expects a 2D function");
    const auto n1 = static_cast<std::size_t>(f.box().extent[0]);
    const auto n2 = static_cast<std::size_t>(f.box().extent[1]);
    const std::size_t d = f.value_dim();
    Box box({f.box().origin[1], f.box().origin[0]}, {f.box().extent[1], f.box().extent[0]});
    std::vector<double> v(f.values().size());
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            for (std::size_t c = 0; c < d; ++c) v[(j * n1 + i) * d + c] = f.values()[(i * n2 + j) * d + c];
    return GridFunction(box, f.mesh_exponent(), d, std::move(v));
}

} // namespace dyadic
