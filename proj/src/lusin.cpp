#include "dyadic/lusin.hpp"

#include "dyadic/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dyadic {

namespace {

constexpr double kSamplesPerHeight = 8.0;

struct Line {
    std::int64_t origin = 0;
    std::int64_t count = 0;
};

struct YGrid {
    double y0 = 0.0;
    double dy = 0.0;
    std::size_t count = 0;
    double at(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
};

// Uniform points covering [lo - t, hi + t] with spacing at most t / rho.
YGrid cone_grid(double lo, double hi, double t) {
    const double range = hi - lo + 2.0 * t;
    const auto n = static_cast<std::size_t>(std::ceil(range * kSamplesPerHeight / t)) + 1;
    return {lo - t, range / static_cast<double>(n - 1), n};
}

// Exact integrals of the piecewise-linear interpolant over [x - t, x + t] for
// every output cell center x.
Eigen::SparseMatrix<double, Eigen::RowMajor> cone_weights(const Line& out, double h, const YGrid& g, double t) {
    std::vector<Eigen::Triplet<double>> trip;
    for (std::int64_t c = 0; c < out.count; ++c) {
        const double x = (static_cast<double>(out.origin + c) + 0.5) * h;
        const double a = x - t, b = x + t;
        const auto j0 = static_cast<std::size_t>(std::max(0.0, std::floor((a - g.y0) / g.dy)));
        const auto j1 = std::min(g.count - 1, static_cast<std::size_t>(std::ceil((b - g.y0) / g.dy)));
        for (std::size_t j = j0; j < j1; ++j) {
            const double lo = g.at(j), hi = g.at(j + 1);
            const double alpha = std::max(lo, a), beta = std::min(hi, b);
            if (beta <= alpha) continue;
            const double sa = (alpha - lo) / g.dy, sb = (beta - lo) / g.dy;
            const double w1 = 0.5 * g.dy * (sb * sb - sa * sa);
            const double w0 = (beta - alpha) - w1;
            trip.emplace_back(static_cast<int>(c), static_cast<int>(j), w0);
            trip.emplace_back(static_cast<int>(c), static_cast<int>(j + 1), w1);
        }
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> W(static_cast<Eigen::Index>(out.count),
                                                   static_cast<Eigen::Index>(g.count));
    W.setFromTriplets(trip.begin(), trip.end());
    return W;
}

// Derivative kernels of the Poisson integral of the cell [a, b) at (y, t).
inline void cell_gradient(double a, double b, double y, double t, double& gy, double& gt) {
    const double da = a - y, db = b - y;
    const double qa = 1.0 / (t * t + da * da), qb = 1.0 / (t * t + db * db);
    gy = (t * qa - t * qb) * std::numbers::inv_pi;
    gt = (da * qa - db * qb) * std::numbers::inv_pi;
}

void require_scalar_1d_axis(const GridFunction& f) {
    if (f.value_dim() != 1) throw UsageError("Lusin square functions expect scalar signals");
}

void check_quadrature(const GridFunction& f, std::size_t axis, const ConeQuadrature& q) {
    if (!(q.t_min > 0.0)) throw UsageError("cone quadrature needs t_min > 0");
    if (q.t_min < 0.5 * f.mesh()) {
        throw UsageError("cone quadrature needs t_min >= mesh / 2 on axis " + std::to_string(axis));
    }
    if (q.nodes.empty() || q.nodes.size() != q.weights.size()) throw UsageError("cone quadrature has no nodes");
}

struct AxisTerm {
    std::vector<Eigen::MatrixXd> ops;                 // each rows x n_in
    Eigen::SparseMatrix<double, Eigen::RowMajor> W; // n_out x rows; empty means identity
    bool identity = false;
    double scale = 1.0;
};

struct AxisPlan {
    Line out;
    std::vector<AxisTerm> terms;
};

AxisPlan lusin_plan(const Line& in, int m, std::int64_t pad, const ConeQuadrature& q) {
    const double h = pow2(m);
    AxisPlan plan;
    plan.out = {in.origin - pad, in.count + 2 * pad};
    const double lo = static_cast<double>(plan.out.origin) * h;
    const double hi = static_cast<double>(plan.out.origin + plan.out.count) * h;
    for (std::size_t node = 0; node < q.nodes.size(); ++node) {
        const double t = q.nodes[node];
        const YGrid g = cone_grid(lo, hi, t);
        AxisTerm term;
        Eigen::MatrixXd gy(static_cast<Eigen::Index>(g.count), static_cast<Eigen::Index>(in.count));
        Eigen::MatrixXd gt(gy.rows(), gy.cols());
        for (std::size_t j = 0; j < g.count; ++j) {
            const double y = g.at(j);
            for (std::int64_t i = 0; i < in.count; ++i) {
                const double a = static_cast<double>(in.origin + i) * h;
                cell_gradient(a, a + h, y, t, gy(static_cast<Eigen::Index>(j), i), gt(static_cast<Eigen::Index>(j), i));
            }
        }
        term.ops = {std::move(gy), std::move(gt)};
        term.W = cone_weights(plan.out, h, g, t);
        term.scale = q.weights[node];
        plan.terms.push_back(std::move(term));
    }
    return plan;
}

AxisPlan dyadic_plan(const Line& in, int m, int K, const std::vector<std::int64_t>& shifts, bool random) {
    if (K <= m) throw UsageError("dyadic axis requires K > m");
    const std::int64_t P = std::int64_t{1} << (K - m);
    std::vector<std::int64_t> list = shifts;
    if (random && list.empty()) {
        for (std::int64_t s = 0; s < P; ++s) list.push_back(s);
    }
    if (list.empty()) throw UsageError("dyadic axis needs a lattice shift");
    AxisPlan plan;
    plan.out = {in.origin - P, in.count + 2 * P};
    const double weight = 1.0 / static_cast<double>(list.size());
    for (std::int64_t s : list) {
        const DyadicLattice1D L(m, K, s);
        for (int k = m + 1; k <= K; ++k) {
            const std::int64_t b1 = L.block(k - 1), b0 = L.block(k);
            Eigen::MatrixXd op = Eigen::MatrixXd::Zero(plan.out.count, in.count);
            for (std::int64_t j = 0; j < plan.out.count; ++j) {
                const std::int64_t jg = plan.out.origin + j;
                for (std::int64_t i = 0; i < in.count; ++i) {
                    const std::int64_t ig = in.origin + i;
                    double v = 0.0;
                    if (floor_div(jg - L.shift, b1) == floor_div(ig - L.shift, b1)) v += 1.0 / static_cast<double>(b1);
                    if (floor_div(jg - L.shift, b0) == floor_div(ig - L.shift, b0)) v -= 1.0 / static_cast<double>(b0);
                    op(j, i) = v;
                }
            }
            AxisTerm term;
            term.ops = {std::move(op)};
            term.identity = true;
            term.scale = weight;
            plan.terms.push_back(std::move(term));
        }
    }
    return plan;
}

AxisPlan plan_for(const GridFunction& f, std::size_t axis, const AxisChoice& choice) {
    const Line in{f.box().origin[axis], f.box().extent[axis]};
    switch (choice.kind) {
    case AxisChoice::Kind::Lusin: {
        const ConeQuadrature q = choice.quad ? *choice.quad : default_quadrature(f, axis);
        check_quadrature(f, axis, q);
        return lusin_plan(in, f.mesh_exponent(), lusin_padding(f, axis, q), q);
    }
    case AxisChoice::Kind::DyadicFixed:
    case AxisChoice::Kind::DyadicRandom:
        if (choice.mesh_exponent != f.mesh_exponent()) {
            throw UsageError("misaligned mesh on axis " + std::to_string(axis) + ": signal " +
                             std::to_string(f.mesh_exponent()) + ", lattice " + std::to_string(choice.mesh_exponent));
        }
        return dyadic_plan(in, choice.mesh_exponent, choice.top_scale, choice.shifts,
                           choice.kind == AxisChoice::Kind::DyadicRandom);
    }
    throw UsageError("invalid axis choice");
}

} // namespace

ConeQuadrature make_cone_quadrature(double t_min, double t_max, int nodes_per_octave) {
    if (!(t_min > 0.0)) throw UsageError("cone quadrature needs t_min > 0");
    if (!(t_max > t_min)) throw UsageError("cone quadrature needs t_max > t_min");
    if (nodes_per_octave < 1) throw UsageError("cone quadrature needs at least one node per octave");
    ConeQuadrature q{t_min, t_max, nodes_per_octave, {}, {}};
    const double octaves = std::log2(t_max / t_min);
    const auto n = std::max(1, static_cast<int>(std::ceil(octaves * nodes_per_octave - 1e-9)));
    const double delta = std::log(t_max / t_min) / n;
    for (int c = 0; c < n; ++c) {
        const double t = t_min * std::exp((c + 0.5) * delta);
        q.nodes.push_back(t);
        q.weights.push_back(t * 2.0 * std::sinh(0.5 * delta));
    }
    return q;
}

ConeQuadrature default_quadrature(const GridFunction& f, std::size_t axis, int nodes_per_octave) {
    const double side = static_cast<double>(f.box().extent[axis]) * f.mesh();
    return make_cone_quadrature(f.mesh(), 2.0 * side, nodes_per_octave);
}

ExtensionValue extension_at(const GridFunction& f, double y, double t) {
    if (f.dim() != 1) throw UsageError("extension_at expects a 1D signal");
    require_scalar_1d_axis(f);
    if (!(t > 0.0)) throw UsageError("Poisson extension needs t > 0");
    const double h = f.mesh();
    ExtensionValue v;
    for (std::int64_t i = 0; i < f.box().extent[0]; ++i) {
        const double c = f.values()[static_cast<std::size_t>(i)];
        if (c == 0.0) continue;
        const double a = static_cast<double>(f.box().origin[0] + i) * h;
        double gy = 0.0, gt = 0.0;
        cell_gradient(a, a + h, y, t, gy, gt);
        v.u += c * (std::atan((a + h - y) / t) - std::atan((a - y) / t)) * std::numbers::inv_pi;
        v.du_dy += c * gy;
        v.du_dt += c * gt;
    }
    return v;
}

std::int64_t lusin_padding(const GridFunction& f, std::size_t, const ConeQuadrature& quad) {
    return static_cast<std::int64_t>(std::ceil(quad.t_max / f.mesh()));
}

HarmonicExtension poisson_extend(const GridFunction& f, const ConeQuadrature& quad) {
    if (f.dim() != 1) throw UsageError("poisson_extend expects one axis per parameter (1D signal)");
    require_scalar_1d_axis(f);
    check_quadrature(f, 0, quad);
    HarmonicExtension ext;
    const auto pad = lusin_padding(f, 0, quad);
    const double h = f.mesh();
    for (std::int64_t c = -pad; c < f.box().extent[0] + pad; ++c) {
        ext.y.push_back((static_cast<double>(f.box().origin[0] + c) + 0.5) * h);
    }
    ext.t = quad.nodes;
    for (double t : ext.t) {
        for (double y : ext.y) {
            const auto v = extension_at(f, y, t);
            ext.u.push_back(v.u);
            ext.du_dy.push_back(v.du_dy);
            ext.du_dt.push_back(v.du_dt);
        }
    }
    return ext;
}

GridFunction lusin_square_function(const GridFunction& f, const ConeQuadrature& quad) {
    if (f.dim() != 1) throw UsageError("lusin_square_function expects a 1D signal");
    require_scalar_1d_axis(f);
    check_quadrature(f, 0, quad);
    const double h = f.mesh();
    const auto pad = lusin_padding(f, 0, quad);
    const Line in{f.box().origin[0], f.box().extent[0]};
    const Line out{in.origin - pad, in.count + 2 * pad};
    const double lo = static_cast<double>(out.origin) * h;
    const double hi = static_cast<double>(out.origin + out.count) * h;

    // Only cells where f jumps contribute: u is a sum of edge terms.
    std::vector<std::pair<double, double>> edges; // (position, jump)
    for (std::int64_t i = 0; i <= in.count; ++i) {
        const double left = i > 0 ? f.values()[static_cast<std::size_t>(i - 1)] : 0.0;
        const double right = i < in.count ? f.values()[static_cast<std::size_t>(i)] : 0.0;
        if (right != left) edges.emplace_back(static_cast<double>(in.origin + i) * h, right - left);
    }

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(out.count);
    for (std::size_t node = 0; node < quad.nodes.size(); ++node) {
        const double t = quad.nodes[node];
        const YGrid g = cone_grid(lo, hi, t);
        Eigen::VectorXd sq(static_cast<Eigen::Index>(g.count));
        for (std::size_t j = 0; j < g.count; ++j) {
            const double y = g.at(j);
            double gy = 0.0, gt = 0.0;
            for (const auto& [e, jump] : edges) {
                const double d = e - y;
                const double q = 1.0 / (t * t + d * d);
                gy += jump * t * q;
                gt += jump * d * q;
            }
            gy *= std::numbers::inv_pi;
            gt *= std::numbers::inv_pi;
            sq(static_cast<Eigen::Index>(j)) = gy * gy + gt * gt;
        }
        acc += quad.weights[node] * (cone_weights(out, h, g, t) * sq);
    }
    std::vector<double> v(acc.data(), acc.data() + acc.size());
    for (auto& x : v) x = std::sqrt(std::max(0.0, x));
    return GridFunction(Box({out.origin}, {out.count}), f.mesh_exponent(), 1, std::move(v));
}

GridFunction lusin_square_function(const GridFunction& f) {
    if (f.dim() != 1) throw UsageError("lusin_square_function expects a 1D signal");
    return lusin_square_function(f, default_quadrature(f));
}

double lusin_tail_estimate(const GridFunction& f, const ConeQuadrature& quad) {
    if (f.dim() != 1) throw UsageError("lusin_tail_estimate expects a 1D signal");
    const double h = f.mesh();
    const double center = (static_cast<double>(f.box().origin[0]) + 0.5 * static_cast<double>(f.box().extent[0])) * h;
    double m1 = 0.0;
    for (std::int64_t i = 0; i < f.box().extent[0]; ++i) {
        const double x = (static_cast<double>(f.box().origin[0] + i) + 0.5) * h;
        m1 += std::abs(f.values()[static_cast<std::size_t>(i)]) * (std::abs(x - center) + 0.5 * h) * h;
    }
    const double c = 2.0 * std::numbers::sqrt2 * std::numbers::inv_pi;
    const double length = static_cast<double>(f.box().extent[0] + 2 * lusin_padding(f, 0, quad)) * h;
    return c * m1 / (std::numbers::sqrt2 * quad.t_max * quad.t_max) * length;
}

AxisChoice AxisChoice::lusin(std::optional<ConeQuadrature> quad) {
    AxisChoice c;
    c.kind = Kind::Lusin;
    c.quad = std::move(quad);
    return c;
}

AxisChoice AxisChoice::dyadic_fixed(const DyadicLattice1D& L) {
    AxisChoice c;
    c.kind = Kind::DyadicFixed;
    c.mesh_exponent = L.mesh_exponent;
    c.top_scale = L.top_scale;
    c.shifts = {L.shift};
    return c;
}

AxisChoice AxisChoice::dyadic_random(int m, int K, std::vector<std::int64_t> shifts) {
    AxisChoice c;
    c.kind = Kind::DyadicRandom;
    c.mesh_exponent = m;
    c.top_scale = K;
    c.shifts = std::move(shifts);
    return c;
}

GridFunction mixed_square_function(const GridFunction& f, const AxisChoice& axis0, const AxisChoice& axis1) {
    if (f.dim() != 2) throw UsageError("mixed square functions expect exactly two axes (got " + std::to_string(f.dim()) + ")");
    require_scalar_1d_axis(f);
    const AxisPlan p0 = plan_for(f, 0, axis0);
    const AxisPlan p1 = plan_for(f, 1, axis1);
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> F(f.values().data(), f.box().extent[0], f.box().extent[1]);

    RowMat total = RowMat::Zero(p0.out.count, p1.out.count);
    for (const auto& t0 : p0.terms) {
        std::vector<Eigen::MatrixXd> B;
        for (const auto& op : t0.ops) B.emplace_back(op * F);
        const Eigen::Index rows0 = B.front().rows();
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows0, p1.out.count);
        for (const auto& t1 : p1.terms) {
            Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(rows0, t1.ops.front().rows());
            for (const auto& b : B) {
                for (const auto& op : t1.ops) sq += (b * op.transpose()).array().square().matrix();
            }
            if (t1.identity) {
                acc += t1.scale * sq;
            } else {
                acc += t1.scale * (sq * t1.W.transpose());
            }
        }
        if (t0.identity) {
            total += t0.scale * acc;
        } else {
            total += t0.scale * (t0.W * acc);
        }
    }
    std::vector<double> v(static_cast<std::size_t>(total.size()));
    for (Eigen::Index i = 0; i < total.rows(); ++i) {
        for (Eigen::Index j = 0; j < total.cols(); ++j) {
            v[static_cast<std::size_t>(i * total.cols() + j)] = std::sqrt(std::max(0.0, total(i, j)));
        }
    }
    return GridFunction(Box({p0.out.origin, p1.out.origin}, {p0.out.count, p1.out.count}), f.mesh_exponent(), 1,
                        std::move(v));
}

GridFunction multiparam_lusin(const GridFunction& f, const std::optional<ConeQuadrature>& quad0,
                              const std::optional<ConeQuadrature>& quad1) {
    if (f.dim() != 2) throw UsageError("multiparam_lusin expects exactly two axes (got " + std::to_string(f.dim()) + ")");
    return mixed_square_function(f, AxisChoice::lusin(quad0), AxisChoice::lusin(quad1));
}

} // namespace dyadic
