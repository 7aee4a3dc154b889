#include "dyadic/square_function.hpp"

#include "dyadic/errors.hpp"
#include "martingale_ops.hpp"
#include "parallel.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace dyadic {

namespace {

bool same_shape(const LatticeShape& a, const LatticeShape& b) {
    return a.mesh_exponent == b.mesh_exponent && a.top_scales == b.top_scales && a.group_sizes == b.group_sizes;
}

void require_shape(const GridFunction& f, const LatticeShape& shape) {
    if (f.dim() != shape.dim()) throw UsageError("grid function dimension does not match the lattice shape");
    if (f.mesh_exponent() != shape.mesh_exponent) {
        throw UsageError("misaligned mesh: grid mesh exponent " + std::to_string(f.mesh_exponent()) +
                         " vs lattice mesh exponent " + std::to_string(shape.mesh_exponent));
    }
}

// Sum over the carried terms of |Delta_k f|^2 (or E_k |Delta_k f|^2) for f
// already embedded in a box containing its scale-K hull.
std::vector<double> squared_sum(const GridFunction& work, const ProductLattice& L, bool tilde) {
    std::vector<double> acc(work.cell_count(), 0.0);
    const Box& box = work.box();
    std::vector<double> data(work.values().begin(), work.values().end());
    detail::for_each_martingale_term(std::move(data), box, work.value_dim(), L, false,
                                     [&](const ScaleIndex& k, std::span<const double> d) {
                                         auto sq = detail::squared_norms(d, work.value_dim());
                                         if (tilde) {
                                             for (std::size_t g = 0; g < L.group_count(); ++g) {
                                                 detail::group_average(sq, box, 1, L, g, k[g]);
                                             }
                                         }
                                         for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sq[i];
                                     });
    return acc;
}

GridFunction square_root_field(const Box& box, int m, std::vector<double> sq) {
    for (auto& v : sq) v = std::sqrt(v);
    return GridFunction(box, m, 1, std::move(sq));
}

GridFunction square_function_impl(const GridFunction& f, const ProductLattice& L, bool tilde) {
    require_aligned(f, L);
    const Box box = shift_padded_box(f.box(), LatticeShape::of(L));
    return square_root_field(box, f.mesh_exponent(), squared_sum(f.embedded(box), L, tilde));
}

void check_weights(const std::vector<ProductLattice>& lattices, const std::vector<double>& weights) {
    if (lattices.empty()) throw UsageError("at least one lattice is required");
    if (weights.size() != lattices.size()) throw UsageError("one weight per lattice is required");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw UsageError("lattice weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw UsageError("lattice weights must sum to 1 (got " + std::to_string(sum) + ")");
    const auto shape = LatticeShape::of(lattices.front());
    for (const auto& L : lattices) {
        if (!same_shape(shape, LatticeShape::of(L))) throw UsageError("all lattices must share (m, K) and groups");
    }
}

void check_phi(const std::vector<int>& phi, std::size_t dim) {
    if (phi.size() != (std::size_t{1} << dim)) {
        throw UsageError("phi needs one sign per child slot (" + std::to_string(std::size_t{1} << dim) + ")");
    }
    long sum = 0;
    for (int v : phi) {
        if (v != 1 && v != -1) throw UsageError("phi entries must be +1 or -1");
        sum += v;
    }
    if (sum != 0) throw UsageError("phi must have zero sum (integral of phi = 0 required)");
}

std::vector<std::int64_t> unravel(const Box& box, std::size_t offset) {
    std::vector<std::int64_t> cell(box.dim());
    for (std::size_t a = box.dim(); a-- > 0;) {
        const auto e = static_cast<std::size_t>(box.extent[a]);
        cell[a] = box.origin[a] + static_cast<std::int64_t>(offset % e);
        offset /= e;
    }
    return cell;
}

// Writes the child-slot vector of the term with scale index k at `cell`.
// `diff` must contain every child of the cube containing `cell`.
void tilde_vector_at(const GridFunction& diff, const ProductLattice& L, const ScaleIndex& k,
                     std::span<const std::int64_t> cell, const std::vector<int>* phi, std::span<double> out) {
    const std::size_t n = L.dim();
    const std::size_t vd = diff.value_dim();
    const std::size_t slots = std::size_t{1} << n;
    std::vector<std::int64_t> parent(n);
    std::size_t own_slot = 0;
    for (std::size_t a = 0; a < n; ++a) {
        const auto& f = L.factor(a);
        const int ka = k[L.group_of_axis(a)];
        parent[a] = f.index_of_mesh_cell(cell[a], ka);
        const auto bit = static_cast<std::size_t>(floor_mod(f.index_of_mesh_cell(cell[a], ka - 1), 2));
        own_slot |= bit << (n - 1 - a);
    }
    const double sign = phi ? static_cast<double>((*phi)[own_slot]) : 1.0;
    const double scale = sign * std::pow(2.0, -0.5 * static_cast<double>(n));
    std::vector<std::int64_t> rep(n);
    for (std::size_t c = 0; c < slots; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            const auto& f = L.factor(a);
            const int ka = k[L.group_of_axis(a)];
            const auto bit = static_cast<std::int64_t>((c >> (n - 1 - a)) & 1U);
            rep[a] = f.first_mesh_cell(2 * parent[a] + bit, ka - 1);
        }
        for (std::size_t j = 0; j < vd; ++j) out[c * vd + j] = scale * diff.value_at(rep, j);
    }
}

std::vector<std::int64_t> shift_tuple(const LatticeShape& shape, std::uint64_t index) {
    const std::size_t n = shape.dim();
    std::vector<std::int64_t> s(n);
    for (std::size_t a = n; a-- > 0;) {
        const auto period = std::uint64_t{1} << (shape.top_scale_of_axis(a) - shape.mesh_exponent);
        s[a] = static_cast<std::int64_t>(index % period);
        index /= period;
    }
    return s;
}

struct SampleSource {
    LatticeShape shape;
    RandomizedParams params;
    std::size_t count = 0;

    ProductLattice lattice(std::size_t i) const {
        if (params.mode == SampleMode::Exact) return shape.with_shifts(shift_tuple(shape, i));
        std::vector<std::uint64_t> streams(shape.dim());
        for (std::size_t a = 0; a < streams.size(); ++a) streams[a] = i * shape.dim() + a;
        return sample_product_lattice(params.seed, streams, shape);
    }
};

SampleSource make_source(const GridFunction& f, const LatticeShape& shape, const RandomizedParams& params) {
    require_shape(f, shape);
    if (!(params.moment >= 1.0 && params.moment <= 2.0)) {
        throw UsageError("moment p must lie in [1, 2] (got " + std::to_string(params.moment) + ")");
    }
    SampleSource src{shape, params, 0};
    if (params.mode == SampleMode::Exact) {
        const auto count = shape.shift_count();
        const auto limit = std::uint64_t{1} << 24;
        if (count > limit) {
            throw InfeasibleError("exact enumeration needs " + std::to_string(count) +
                                  " shift combinations, limit is " + std::to_string(limit));
        }
        src.count = static_cast<std::size_t>(count);
    } else {
        if (params.samples < 2) throw UsageError("Monte Carlo mode needs at least 2 samples");
        src.count = params.samples;
    }
    return src;
}

void power_in_place(std::vector<double>& sq, double p) {
    if (p == 2.0) return;
    for (auto& v : sq) v = std::pow(v, 0.5 * p);
}

} // namespace

GridFunction square_function_S(const GridFunction& f, const ProductLattice& L) {
    return square_function_impl(f, L, false);
}

GridFunction square_function_tilde(const GridFunction& f, const ProductLattice& L) {
    return square_function_impl(f, L, true);
}

GridFunction SquareFunctionField::pointwise_norm() const {
    std::vector<double> acc(box.cell_count(), 0.0);
    for (std::size_t s = 0; s < sample_count(); ++s) {
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto& e = entry(s, t);
            const auto sq = detail::squared_norms(e.values(), e.value_dim());
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weights[s] * sq[i];
        }
    }
    return square_root_field(box, mesh_exponent, std::move(acc));
}

SquareFunctionField vectorized_S(const GridFunction& f, const std::vector<ProductLattice>& lattices,
                                 const std::vector<double>& weights) {
    check_weights(lattices, weights);
    SquareFunctionField field;
    field.box = shift_padded_box(f.box(), LatticeShape::of(lattices.front()));
    field.mesh_exponent = f.mesh_exponent();
    field.weights = weights;
    const GridFunction work = f.embedded(field.box);
    for (std::size_t s = 0; s < lattices.size(); ++s) {
        require_aligned(f, lattices[s]);
        std::vector<double> data(work.values().begin(), work.values().end());
        detail::for_each_martingale_term(std::move(data), field.box, f.value_dim(), lattices[s], false,
                                         [&](const ScaleIndex& k, std::span<const double> d) {
                                             if (s == 0) field.terms.push_back(k);
                                             field.entries.emplace_back(field.box, f.mesh_exponent(), f.value_dim(),
                                                                        std::vector<double>(d.begin(), d.end()));
                                         });
    }
    return field;
}

SquareFunctionField vectorized_tilde(const GridFunction& f, const std::vector<ProductLattice>& lattices,
                                     const std::vector<double>& weights, const std::optional<std::vector<int>>& phi) {
    check_weights(lattices, weights);
    if (phi) check_phi(*phi, f.dim());
    SquareFunctionField field;
    field.box = shift_padded_box(f.box(), LatticeShape::of(lattices.front()));
    field.mesh_exponent = f.mesh_exponent();
    field.weights = weights;
    field.slots = std::size_t{1} << f.dim();
    const std::size_t vd = f.value_dim() * field.slots;
    const GridFunction work = f.embedded(field.box);
    const std::vector<int>* phi_ptr = phi ? &*phi : nullptr;
    for (std::size_t s = 0; s < lattices.size(); ++s) {
        const auto& L = lattices[s];
        require_aligned(f, L);
        std::vector<double> data(work.values().begin(), work.values().end());
        detail::for_each_martingale_term(
            std::move(data), field.box, f.value_dim(), L, false, [&](const ScaleIndex& k, std::span<const double> d) {
                if (s == 0) field.terms.push_back(k);
                const GridFunction diff(field.box, f.mesh_exponent(), f.value_dim(),
                                        std::vector<double>(d.begin(), d.end()));
                GridFunction entry(field.box, f.mesh_exponent(), vd);
                for (std::size_t i = 0; i < entry.cell_count(); ++i) {
                    tilde_vector_at(diff, L, k, unravel(field.box, i), phi_ptr, entry.at(i));
                }
                field.entries.push_back(std::move(entry));
            });
    }
    return field;
}

Eigen::MatrixXd tilde_cube_matrix(const ProductLattice& L, const Cell& Q, const std::optional<std::vector<int>>& phi) {
    if (!L.one_parameter()) throw UsageError("tilde_cube_matrix expects a one-parameter lattice");
    if (Q.corner.size() != L.dim()) throw UsageError("cube dimension does not match the lattice");
    if (phi) check_phi(*phi, L.dim());
    const std::size_t n = L.dim();
    std::vector<std::int64_t> origin(n), extent(n);
    for (std::size_t a = 0; a < n; ++a) {
        origin[a] = L.factor(a).first_mesh_cell(Q.corner[a], Q.scale);
        extent[a] = L.factor(a).block(Q.scale);
    }
    const Box box(origin, extent);
    const std::size_t cells = box.cell_count();
    const std::size_t slots = std::size_t{1} << n;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cells * slots),
                                              static_cast<Eigen::Index>(cells));
    const ScaleIndex k{Q.scale};
    const std::vector<int>* phi_ptr = phi ? &*phi : nullptr;
    std::vector<double> column(slots);
    for (std::size_t y = 0; y < cells; ++y) {
        GridFunction indicator(box, L.mesh_exponent());
        indicator.values()[y] = 1.0;
        const GridFunction d = local_diff(indicator, L, Q);
        for (std::size_t x = 0; x < cells; ++x) {
            tilde_vector_at(d, L, k, unravel(box, x), phi_ptr, column);
            for (std::size_t c = 0; c < slots; ++c) {
                M(static_cast<Eigen::Index>(x * slots + c), static_cast<Eigen::Index>(y)) = column[c];
            }
        }
    }
    return M;
}

std::string to_string(SampleMode mode) { return mode == SampleMode::Exact ? "exact" : "mc"; }

RandomizedField randomized_sq_mean(const GridFunction& f, const LatticeShape& shape, const RandomizedParams& params) {
    const SampleSource src = make_source(f, shape, params);
    const Box box = shift_padded_box(f.box(), shape);
    const GridFunction work = f.embedded(box);
    const double p = params.moment;
    const auto moments = detail::chunked_moments(src.count, box.cell_count(), params.threads,
                                                 [&](std::size_t i, std::vector<double>& y) {
                                                     y = squared_sum(work, src.lattice(i), false);
                                                     power_in_place(y, p);
                                                 });
    RandomizedField out;
    out.samples = src.count;
    out.mean_power = GridFunction(box, f.mesh_exponent(), 1, moments.mean);
    std::vector<double> value = moments.mean;
    for (auto& v : value) v = std::pow(v, 1.0 / p);
    out.value = GridFunction(box, f.mesh_exponent(), 1, std::move(value));
    std::vector<double> se(box.cell_count(), 0.0);
    if (params.mode == SampleMode::MonteCarlo) {
        const double n = static_cast<double>(src.count);
        for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::sqrt(moments.m2[i] / (n - 1.0) / n);
    }
    out.std_error = GridFunction(box, f.mesh_exponent(), 1, std::move(se));
    return out;
}

std::optional<double> truncation_tail_bound(const GridFunction& f, const LatticeShape& shape) {
    require_shape(f, shape);
    const double l1 = lp_norm(f, 1.0);
    for (double c : integral(f)) {
        if (std::abs(c) > 1e-12 * std::max(l1, 1e-300)) return std::nullopt;
    }
    double tail = 0.0;
    for (std::size_t a = 0; a < f.dim(); ++a) {
        const int L = static_cast<int>(std::ceil(std::log2(static_cast<double>(f.box().extent[a])))) + f.mesh_exponent();
        tail += pow2(L - shape.top_scale_of_axis(a)) * l1;
    }
    return tail;
}

H1Report randomized_h1_norm(const GridFunction& f, const LatticeShape& shape, const RandomizedParams& params) {
    const auto field = randomized_sq_mean(f, shape, params);
    H1Report r;
    r.mode = params.mode;
    r.samples = field.samples;
    r.seed = params.seed;
    r.moment = params.moment;
    r.tail_bound = truncation_tail_bound(f, shape);
    const double vol = f.cell_volume();
    for (double v : field.value.values()) r.norm += v * vol;
    if (params.mode == SampleMode::MonteCarlo) {
        const SampleSource src = make_source(f, shape, params);
        const Box& box = field.value.box();
        const GridFunction work = f.embedded(box);
        const double p = params.moment;
        std::vector<double> grad(box.cell_count(), 0.0);
        for (std::size_t i = 0; i < grad.size(); ++i) {
            const double M = field.mean_power.values()[i];
            if (M > 0.0) grad[i] = vol * std::pow(M, 1.0 / p - 1.0) / p;
        }
        std::vector<double> z(src.count, 0.0);
        detail::parallel_for(src.count, params.threads, [&](std::size_t i) {
            auto y = squared_sum(work, src.lattice(i), false);
            power_in_place(y, p);
            z[i] = std::inner_product(grad.begin(), grad.end(), y.begin(), 0.0);
        });
        detail::Moments zm;
        for (double v : z) zm.add({v});
        const double n = static_cast<double>(src.count);
        r.std_error = std::sqrt(zm.m2[0] / (n - 1.0) / n);
    }
    return r;
}

GridFunction translation_average_oracle(const GridFunction& f, const ProductLattice& L) {
    require_aligned(f, L);
    const auto shape = LatticeShape::of(L);
    const auto count = shape.shift_count();
    const auto limit = std::uint64_t{1} << 24;
    if (count > limit) {
        throw InfeasibleError("translation average needs " + std::to_string(count) + " translations, limit is " +
                              std::to_string(limit));
    }
    const Box box = shift_padded_box(f.box(), shape);
    const auto moments = detail::chunked_moments(
        static_cast<std::size_t>(count), box.cell_count(), 0, [&](std::size_t i, std::vector<double>& y) {
            auto u = shift_tuple(shape, i);
            std::vector<std::int64_t> minus_u(u.size());
            for (std::size_t a = 0; a < u.size(); ++a) minus_u[a] = -u[a];
            const GridFunction s = translate(square_function_S(translate(f, minus_u), L), u).embedded(box);
            for (std::size_t c = 0; c < y.size(); ++c) y[c] = s.values()[c] * s.values()[c];
        });
    return square_root_field(box, f.mesh_exponent(), moments.mean);
}

} // namespace dyadic
