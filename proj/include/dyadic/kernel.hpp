#pragma once

#include "dyadic/lattice.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace dyadic {

/// A weighted family of 1D lattices sharing (m, K); no shifts listed means
/// every shift in [0, 2^{K-m}) with uniform weight.
struct ShiftSet {
    int mesh_exponent = 0;
    int top_scale = 1;
    std::vector<std::int64_t> shifts;

    static ShiftSet all(int m, int K);
    static ShiftSet single(const DyadicLattice1D& L);
    std::vector<DyadicLattice1D> lattices() const;
    double weight() const;
};

/// Delta_k delta_y(x) for k = m+1..K (index k - m - 1), in closed form
/// 1_{Q_{k-1}(y)}(x) / 2^{k-1} - 1_{Q_k(y)}(x) / 2^k.
std::vector<double> kernel_slice(const DyadicLattice1D& L, double y, double x);

struct KernelSlice {
    double x = 0.0;
    double y = 0.0;
    int mesh_exponent = 0;
    int top_scale = 1;
    std::vector<std::int64_t> shifts;
    std::vector<double> weights;
    std::vector<std::vector<double>> rows; // one per shift
};

KernelSlice kernel_slices(const ShiftSet& family, double y, double x);

/// [sum_shifts w sum_k |Delta_k delta_y(x)|^2]^{1/2}.
double kernel_norm(double x, double y, const ShiftSet& family);

/// [sum_shifts w sum_k |Delta_k delta_y(x) - Delta_k delta_y(x0)|^2]^{1/2};
/// requires |y - x0| >= 2 |x - x0|.
double kernel_smoothness(double x, double x0, double y, const ShiftSet& family);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::pair<double, double>> points;
};

/// Least squares line through (ln a, ln b); needs at least two points with
/// positive coordinates.
SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& points);

struct KernelExponents {
    SlopeFit size;                // kernel_norm vs |x - y|, y = 0, |x - y| = 2^-2..2^2
    SlopeFit smoothness_dx;       // squared smoothness vs |x - x0|, x0 = 1, y = 0, |x - x0| = 2^-6..2^-3
    SlopeFit smoothness_distance; // squared smoothness vs |x0 - y|, |x - x0| = 2^-5, |x0 - y| = 2^-1..2^2
};

/// Requires m <= -6 and K >= 3 so every abscissa is resolved.
KernelExponents kernel_exponents(const ShiftSet& family);

struct T1Report {
    std::vector<int> cube_scales;
    std::vector<double> forward;           // sup over window of the field norm of S 1_Q
    std::vector<double> adjoint;           // sup of S*(1_Q e) over basis fibers e
    std::vector<double> tilde_adjoint;     // same for the child-slot field
    std::vector<double> tilde_adjoint_phi; // child-slot field modified by phi = (+1, -1)
};

/// Cubes Q_j = [center - 2^{j-1}, center + 2^{j-1}) for j in cube_scales; the
/// window [window_lo, window_hi) must be mesh aligned and lie strictly inside
/// the smallest cube.
T1Report check_T1(const ShiftSet& family, const std::vector<int>& cube_scales, double window_lo, double window_hi,
                  double center = 0.0);

} // namespace dyadic
