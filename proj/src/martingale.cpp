#include "dyadic/martingale.hpp"

#include "dyadic/errors.hpp"
#include "martingale_ops.hpp"

#include <cmath>
#include <string>

namespace dyadic {

namespace detail {

void block_average_axis(std::span<double> data, const Box& box, std::size_t value_dim, std::size_t axis,
                        std::int64_t block, std::int64_t shift) {
    if (block <= 1) return;
    const auto n = static_cast<std::size_t>(box.extent[axis]);
    std::size_t inner = 1;
    for (std::size_t b = axis + 1; b < box.dim(); ++b) inner *= static_cast<std::size_t>(box.extent[b]);
    const std::size_t outer = box.cell_count() / (n * inner);
    const std::size_t stride = inner * value_dim;
    const double inv = 1.0 / static_cast<double>(block);
    const std::int64_t origin = box.origin[axis];

    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = (o * n * inner + in) * value_dim;
            for (std::size_t c = 0; c < value_dim; ++c) {
                std::size_t i = 0;
                while (i < n) {
                    const std::int64_t g = origin + static_cast<std::int64_t>(i);
                    const std::int64_t j = floor_div(g - shift, block);
                    const std::int64_t end_global = j * block + shift + block;
                    const std::size_t end =
                        std::min(n, static_cast<std::size_t>(end_global - origin));
                    double s = 0.0;
                    for (std::size_t t = i; t < end; ++t) s += data[base + t * stride + c];
                    const double avg = s * inv;
                    for (std::size_t t = i; t < end; ++t) data[base + t * stride + c] = avg;
                    i = end;
                }
            }
        }
    }
}

void group_average(std::span<double> data, const Box& box, std::size_t value_dim, const ProductLattice& L,
                   std::size_t group, int k) {
    const std::size_t first = L.group_first_axis(group);
    for (std::size_t a = first; a < first + L.group_size(group); ++a) {
        const auto& f = L.factor(a);
        block_average_axis(data, box, value_dim, a, f.block(k), f.shift);
    }
}

std::vector<double> squared_norms(std::span<const double> data, std::size_t value_dim) {
    std::vector<double> out(data.size() / value_dim, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < value_dim; ++c) s += data[i * value_dim + c] * data[i * value_dim + c];
        out[i] = s;
    }
    return out;
}

} // namespace detail

void require_aligned(const GridFunction& f, const ProductLattice& L) {
    if (f.dim() != L.dim()) {
        throw UsageError("grid function has dimension " + std::to_string(f.dim()) + " but lattice has " +
                         std::to_string(L.dim()));
    }
    if (f.mesh_exponent() != L.mesh_exponent()) {
        throw UsageError("misaligned mesh: grid mesh exponent " + std::to_string(f.mesh_exponent()) +
                         " vs lattice mesh exponent " + std::to_string(L.mesh_exponent()));
    }
}

namespace {

void check_scales(const ProductLattice& L, const ScaleIndex& k, bool difference) {
    if (k.size() != L.group_count()) throw UsageError("scale index needs one entry per parameter group");
    const int m = L.mesh_exponent();
    for (std::size_t g = 0; g < k.size(); ++g) {
        const int lo = difference ? m + 1 : m;
        if (k[g] < lo || k[g] > L.top_scale(g)) {
            throw UsageError("scale " + std::to_string(k[g]) + " outside carried range [" + std::to_string(lo) +
                             ", " + std::to_string(L.top_scale(g)) + "]");
        }
    }
}

} // namespace

Box lattice_hull(const Box& box, const ProductLattice& L, const ScaleIndex& k) {
    Box out = box;
    for (std::size_t a = 0; a < L.dim(); ++a) {
        const auto& f = L.factor(a);
        const int ka = k[L.group_of_axis(a)];
        const auto lo = f.first_mesh_cell(f.index_of_mesh_cell(box.origin[a], ka), ka);
        const auto hi =
            f.first_mesh_cell(f.index_of_mesh_cell(box.origin[a] + box.extent[a] - 1, ka) + 1, ka);
        out.origin[a] = lo;
        out.extent[a] = hi - lo;
    }
    return out;
}

Box shift_padded_box(const Box& box, const LatticeShape& shape) {
    std::vector<std::int64_t> pad(shape.dim());
    for (std::size_t a = 0; a < pad.size(); ++a) {
        pad[a] = std::int64_t{1} << (shape.top_scale_of_axis(a) - shape.mesh_exponent);
    }
    return box.padded(pad);
}

GridFunction average_E(const GridFunction& f, const ProductLattice& L, const ScaleIndex& k) {
    require_aligned(f, L);
    check_scales(L, k, false);
    GridFunction out = f.embedded(lattice_hull(f.box(), L, k));
    for (std::size_t g = 0; g < L.group_count(); ++g) {
        detail::group_average(out.values(), out.box(), out.value_dim(), L, g, k[g]);
    }
    return out;
}

GridFunction average_E(const GridFunction& f, const ProductLattice& L, int k) {
    return average_E(f, L, ScaleIndex(L.group_count(), k));
}

GridFunction diff_D(const GridFunction& f, const ProductLattice& L, const ScaleIndex& k) {
    require_aligned(f, L);
    check_scales(L, k, true);
    GridFunction out = f.embedded(lattice_hull(f.box(), L, k));
    std::vector<double> next(out.values().size());
    for (std::size_t g = 0; g < L.group_count(); ++g) {
        auto cur = out.values();
        detail::group_average(cur, out.box(), out.value_dim(), L, g, k[g] - 1);
        std::copy(cur.begin(), cur.end(), next.begin());
        detail::group_average(next, out.box(), out.value_dim(), L, g, k[g]);
        for (std::size_t i = 0; i < cur.size(); ++i) cur[i] -= next[i];
    }
    return out;
}

GridFunction diff_D(const GridFunction& f, const ProductLattice& L, int k) {
    return diff_D(f, L, ScaleIndex(L.group_count(), k));
}

GridFunction local_diff(const GridFunction& f, const ProductLattice& L, const Cell& Q) {
    require_aligned(f, L);
    if (!L.one_parameter()) throw UsageError("local_diff expects a one-parameter lattice");
    if (Q.corner.size() != L.dim()) throw UsageError("cube dimension does not match the lattice");
    check_scales(L, {Q.scale}, true);
    GridFunction d = diff_D(f, L, Q.scale);
    std::vector<std::int64_t> origin(L.dim()), extent(L.dim());
    for (std::size_t a = 0; a < L.dim(); ++a) {
        origin[a] = L.factor(a).first_mesh_cell(Q.corner[a], Q.scale);
        extent[a] = L.factor(a).block(Q.scale);
    }
    return d.embedded(Box(origin, extent));
}

GridFunction MartingaleDecomposition::reconstruct() const {
    GridFunction sum = top;
    for (const auto& [k, d] : diffs) sum = sum + d;
    for (const auto& [k, d] : mixed) sum = sum + d;
    return sum;
}

double MartingaleDecomposition::energy() const {
    double e = inner_product(top, top);
    for (const auto& [k, d] : diffs) e += inner_product(d, d);
    for (const auto& [k, d] : mixed) e += inner_product(d, d);
    return e;
}

MartingaleDecomposition decompose(const GridFunction& f, const ProductLattice& L) {
    require_aligned(f, L);
    ScaleIndex top_index(L.group_count());
    for (std::size_t g = 0; g < L.group_count(); ++g) top_index[g] = L.top_scale(g);
    const Box box = lattice_hull(f.box(), L, top_index);
    const GridFunction work = f.embedded(box);

    MartingaleDecomposition out;
    out.lattice = L;
    std::vector<double> data(work.values().begin(), work.values().end());
    detail::for_each_martingale_term(
        std::move(data), box, f.value_dim(), L, true, [&](const ScaleIndex& k, std::span<const double> v) {
            GridFunction term(box, f.mesh_exponent(), f.value_dim(), std::vector<double>(v.begin(), v.end()));
            bool all_top = true, any_top = false;
            for (int kg : k) {
                all_top = all_top && kg == kTopTerm;
                any_top = any_top || kg == kTopTerm;
            }
            if (all_top) {
                out.top = std::move(term);
            } else if (any_top) {
                out.mixed.emplace(k, std::move(term));
            } else {
                out.diffs.emplace(k, std::move(term));
            }
        });
    return out;
}

} // namespace dyadic
