#include "dyadic/kernel.hpp"

#include "dyadic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dyadic {

ShiftSet ShiftSet::all(int m, int K) {
    if (K <= m) throw UsageError("shift set requires K > m");
    return ShiftSet{m, K, {}};
}

ShiftSet ShiftSet::single(const DyadicLattice1D& L) { return ShiftSet{L.mesh_exponent, L.top_scale, {L.shift}}; }

std::vector<DyadicLattice1D> ShiftSet::lattices() const {
    if (shifts.empty()) return enumerate_shifts(mesh_exponent, top_scale);
    std::vector<DyadicLattice1D> out;
    for (auto s : shifts) out.emplace_back(mesh_exponent, top_scale, s);
    return out;
}

double ShiftSet::weight() const {
    if (shifts.empty()) return std::ldexp(1.0, mesh_exponent - top_scale);
    return 1.0 / static_cast<double>(shifts.size());
}

std::vector<double> kernel_slice(const DyadicLattice1D& L, double y, double x) {
    if (x == y) throw UsageError("kernel is not evaluated on the diagonal x = y");
    std::vector<double> row;
    for (int k = L.mesh_exponent + 1; k <= L.top_scale; ++k) {
        double v = 0.0;
        if (L.index_containing(x, k - 1) == L.index_containing(y, k - 1)) v += pow2(1 - k);
        if (L.index_containing(x, k) == L.index_containing(y, k)) v -= pow2(-k);
        row.push_back(v);
    }
    return row;
}

KernelSlice kernel_slices(const ShiftSet& family, double y, double x) {
    KernelSlice s{x, y, family.mesh_exponent, family.top_scale, {}, {}, {}};
    const double w = family.weight();
    for (const auto& L : family.lattices()) {
        s.shifts.push_back(L.shift);
        s.weights.push_back(w);
        s.rows.push_back(kernel_slice(L, y, x));
    }
    return s;
}

double kernel_norm(double x, double y, const ShiftSet& family) {
    if (x == y) throw UsageError("kernel is not evaluated on the diagonal x = y");
    const double w = family.weight();
    double sum = 0.0;
    for (const auto& L : family.lattices()) {
        for (double v : kernel_slice(L, y, x)) sum += w * v * v;
    }
    return std::sqrt(sum);
}

double kernel_smoothness(double x, double x0, double y, const ShiftSet& family) {
    if (x == x0) return 0.0;
    if (std::abs(y - x0) < 2.0 * std::abs(x - x0)) {
        throw UsageError("smoothness regime needs |y - x0| >= 2 |x - x0| (ratio " +
                         std::to_string(std::abs(y - x0) / std::abs(x - x0)) + ")");
    }
    const double w = family.weight();
    double sum = 0.0;
    for (const auto& L : family.lattices()) {
        const auto a = kernel_slice(L, y, x);
        const auto b = kernel_slice(L, y, x0);
        for (std::size_t i = 0; i < a.size(); ++i) sum += w * (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(sum);
}

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw UsageError("log-log fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [a, b] : points) {
        if (!(a > 0.0) || !(b > 0.0)) throw DataError("log-log fit needs positive coordinates");
        const double lx = std::log(a), ly = std::log(b);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw DataError("log-log fit needs distinct abscissae");
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.points = points;
    return fit;
}

namespace {

std::int64_t to_cells(double v, int m, const char* what) {
    const double c = v * pow2(-m);
    if (c != std::floor(c)) throw UsageError(std::string(what) + " must be aligned with the mesh");
    return static_cast<std::int64_t>(c);
}

std::int64_t overlap(std::int64_t a0, std::int64_t a1, std::int64_t b0, std::int64_t b1) {
    return std::max<std::int64_t>(0, std::min(a1, b1) - std::max(a0, b0));
}

} // namespace

KernelExponents kernel_exponents(const ShiftSet& family) {
    if (family.mesh_exponent > -6 || family.top_scale < 3) {
        throw UsageError("kernel regression windows need m <= -6 and K >= 3");
    }
    KernelExponents out;
    std::vector<std::pair<double, double>> pts;
    for (int e = -2; e <= 2; ++e) pts.emplace_back(pow2(e), kernel_norm(pow2(e), 0.0, family));
    out.size = fit_loglog(pts);
    pts.clear();
    for (int e = -6; e <= -3; ++e) {
        const double d = kernel_smoothness(1.0 + pow2(e), 1.0, 0.0, family);
        pts.emplace_back(pow2(e), d * d);
    }
    out.smoothness_dx = fit_loglog(pts);
    pts.clear();
    for (int e = -1; e <= 2; ++e) {
        const double d = kernel_smoothness(pow2(e) + pow2(-5), pow2(e), 0.0, family);
        pts.emplace_back(pow2(e), d * d);
    }
    out.smoothness_distance = fit_loglog(pts);
    return out;
}

T1Report check_T1(const ShiftSet& family, const std::vector<int>& cube_scales, double window_lo, double window_hi,
                  double center) {
    if (cube_scales.empty()) throw UsageError("check_T1 needs at least one cube size");
    const int m = family.mesh_exponent;
    const std::int64_t w0 = to_cells(window_lo, m, "window"), w1 = to_cells(window_hi, m, "window");
    const std::int64_t c = to_cells(center, m, "cube center");
    if (w1 <= w0) throw UsageError("window must be nonempty");
    const int smallest = *std::min_element(cube_scales.begin(), cube_scales.end());
    if (smallest - 1 < m) throw UsageError("cube side must be at least two mesh cells");
    const std::int64_t r = std::int64_t{1} << (smallest - 1 - m);
    if (!(c - r < w0 && w1 < c + r)) {
        throw UsageError("window must lie strictly inside the smallest cube");
    }

    const auto lattices = family.lattices();
    const double w = family.weight();
    const double sw = std::sqrt(w);
    const double norm_slot = std::numbers::sqrt2 / 2.0;
    T1Report rep;
    for (int j : cube_scales) {
        const std::int64_t half = std::int64_t{1} << (j - 1 - m);
        const std::int64_t q0 = c - half, q1 = c + half;
        double forward = 0.0, adjoint = 0.0, tilde = 0.0, tilde_phi = 0.0;
        for (std::int64_t x = w0; x < w1; ++x) {
            double field = 0.0;
            for (const auto& L : lattices) {
                for (int k = m + 1; k <= L.top_scale; ++k) {
                    const std::int64_t b1 = L.block(k - 1), b0 = L.block(k);
                    const std::int64_t J = L.index_of_mesh_cell(x, k);
                    const std::int64_t p0 = L.first_mesh_cell(J, k);
                    const std::int64_t child = L.index_of_mesh_cell(x, k - 1);
                    const std::int64_t s0 = L.first_mesh_cell(child, k - 1);
                    const double d = static_cast<double>(overlap(s0, s0 + b1, q0, q1)) / static_cast<double>(b1) -
                                     static_cast<double>(overlap(p0, p0 + b0, q0, q1)) / static_cast<double>(b0);
                    field += w * d * d;
                    adjoint = std::max(adjoint, sw * std::abs(d));

                    const std::int64_t lo_child = L.first_mesh_cell(2 * J, k - 1);
                    const std::int64_t hi_child = L.first_mesh_cell(2 * J + 1, k - 1);
                    const auto ov_lo = static_cast<double>(overlap(lo_child, lo_child + b1, q0, q1));
                    const auto ov_hi = static_cast<double>(overlap(hi_child, hi_child + b1, q0, q1));
                    for (std::int64_t slot = 0; slot < 2; ++slot) {
                        const bool in_slot = floor_mod(child, 2) == slot;
                        const double g = (in_slot ? 1.0 / static_cast<double>(b1) : 0.0) - 1.0 / static_cast<double>(b0);
                        tilde = std::max(tilde, sw * norm_slot * std::abs((ov_lo + ov_hi) * g));
                        tilde_phi = std::max(tilde_phi, sw * norm_slot * std::abs((ov_lo - ov_hi) * g));
                    }
                }
            }
            forward = std::max(forward, std::sqrt(field));
        }
        rep.cube_scales.push_back(j);
        rep.forward.push_back(forward);
        rep.adjoint.push_back(adjoint);
        rep.tilde_adjoint.push_back(tilde);
        rep.tilde_adjoint_phi.push_back(tilde_phi);
    }
    return rep;
}

} // namespace dyadic
