#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dyadic {

/// Log-spaced cone heights on [t_min, t_max]. Node c sits at the log-midpoint
/// of its cell and carries the exact length of that cell, so the weights sum
/// to t_max - t_min.
struct ConeQuadrature {
    double t_min = 0.0;
    double t_max = 0.0;
    int nodes_per_octave = 4;
    std::vector<double> nodes;
    std::vector<double> weights;
};

ConeQuadrature make_cone_quadrature(double t_min, double t_max, int nodes_per_octave = 4);

/// t_min = mesh, t_max = 2 * box side along `axis`.
ConeQuadrature default_quadrature(const GridFunction& f, std::size_t axis = 0, int nodes_per_octave = 4);

struct ExtensionValue {
    double u = 0.0;
    double du_dy = 0.0;
    double du_dt = 0.0;
};

/// Poisson extension of a 1D step function at (y, t), integrated exactly cell by cell.
ExtensionValue extension_at(const GridFunction& f, double y, double t);

/// u and its gradient at the cell centers of the Lusin output box, per node.
struct HarmonicExtension {
    std::vector<double> y;
    std::vector<double> t;
    std::vector<double> u, du_dy, du_dt; // node-major

    double at(const std::vector<double>& field, std::size_t node, std::size_t j) const {
        return field[node * y.size() + j];
    }
};

HarmonicExtension poisson_extend(const GridFunction& f, const ConeQuadrature& quad);

/// Cells added on each side of the signal box so the output covers every
/// point whose cone meets the support.
std::int64_t lusin_padding(const GridFunction& f, std::size_t axis, const ConeQuadrature& quad);

/// S^L f(x) = (int over the truncated cone |y - x| < t of |grad u|^2 dy dt)^{1/2}, 1D.
GridFunction lusin_square_function(const GridFunction& f, const ConeQuadrature& quad);
GridFunction lusin_square_function(const GridFunction& f);

/// Estimate of the L^1 mass lost above t_max: (2 sqrt 2 / pi) M_1 / (sqrt 2 t_max^2)
/// times the output length, with M_1 the first absolute moment about the box center.
double lusin_tail_estimate(const GridFunction& f, const ConeQuadrature& quad);

/// Per-axis square function used by the two-parameter engine.
struct AxisChoice {
    enum class Kind { Lusin, DyadicFixed, DyadicRandom };
    Kind kind = Kind::Lusin;
    std::optional<ConeQuadrature> quad;  // Lusin; defaults from the signal
    int mesh_exponent = 0;               // dyadic
    int top_scale = 1;                   // dyadic
    std::vector<std::int64_t> shifts;    // dyadic; random with none listed means all shifts

    static AxisChoice lusin(std::optional<ConeQuadrature> quad = std::nullopt);
    static AxisChoice dyadic_fixed(const DyadicLattice1D& L);
    static AxisChoice dyadic_random(int m, int K, std::vector<std::int64_t> shifts = {});
};

/// Pointwise norm of the tensor field (axis 0 choice) x (axis 1 choice) on a 2D signal.
GridFunction mixed_square_function(const GridFunction& f, const AxisChoice& axis0, const AxisChoice& axis1);

/// Two-parameter Lusin function: Lusin on both axes.
GridFunction multiparam_lusin(const GridFunction& f, const std::optional<ConeQuadrature>& quad0 = std::nullopt,
                              const std::optional<ConeQuadrature>& quad1 = std::nullopt);

} // namespace dyadic
