#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/martingale.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dyadic {

/// S f(x) = (sum_k |Delta_k f(x)|^2)^{1/2} over the carried scales; in
/// multi-parameter mode the sum runs over scale multi-indices. The result is
/// scalar and lives on shift_padded_box(f.box(), shape of L).
GridFunction square_function_S(const GridFunction& f, const ProductLattice& L);

/// S~ f(x) = (sum_k E_k |Delta_k f|^2 (x))^{1/2}, same box as square_function_S.
GridFunction square_function_tilde(const GridFunction& f, const ProductLattice& L);

/// Vector-valued square function sampled on a weighted family of lattices.
/// entry(sample, term) holds value_dim = slots * f.value_dim components.
struct SquareFunctionField {
    Box box;
    int mesh_exponent = 0;
    std::size_t slots = 1;
    std::vector<double> weights;
    std::vector<ScaleIndex> terms;
    std::vector<GridFunction> entries; // sample-major

    std::size_t sample_count() const { return weights.size(); }
    const GridFunction& entry(std::size_t sample, std::size_t term) const {
        return entries[sample * terms.size() + term];
    }
    /// [sum_w w sum_k |entry|^2]^{1/2} per point.
    GridFunction pointwise_norm() const;
};

SquareFunctionField vectorized_S(const GridFunction& f, const std::vector<ProductLattice>& lattices,
                                 const std::vector<double>& weights);

/// Child-slot vectorization: on the scale-k cube Q containing x the entry is
/// 2^{-N/2} (value of Delta_Q f on each child), optionally times phi on the
/// child of Q containing x. phi must be +-1 with zero sum over the 2^N slots.
SquareFunctionField vectorized_tilde(const GridFunction& f, const std::vector<ProductLattice>& lattices,
                                     const std::vector<double>& weights,
                                     const std::optional<std::vector<int>>& phi = std::nullopt);

/// Matrix of f|_Q -> (vectorized S~ term on Q) for one cube of a one-parameter
/// lattice. Rows are (mesh cell x of Q, slot c) with c fastest, columns are
/// mesh cells y of Q, both in row-major cell order.
Eigen::MatrixXd tilde_cube_matrix(const ProductLattice& L, const Cell& Q,
                                  const std::optional<std::vector<int>>& phi = std::nullopt);

enum class SampleMode { Exact, MonteCarlo };

std::string to_string(SampleMode mode);

struct RandomizedParams {
    SampleMode mode = SampleMode::Exact;
    std::uint64_t seed = 0;
    std::size_t samples = 0; // Monte Carlo only
    double moment = 2.0;     // inner exponent p in [1, 2]
    unsigned threads = 0;    // 0: hardware concurrency
};

struct RandomizedField {
    GridFunction mean_power; // E S^p per point
    GridFunction value;      // (E S^p)^{1/p}
    GridFunction std_error;  // standard error of mean_power (zero in exact mode)
    std::size_t samples = 0;
};

/// Average of S_{D(w)} f^p over every shift tuple of the shape (exact) or
/// over sampled lattices (Monte Carlo; sample i, axis a uses stream i*dim + a).
RandomizedField randomized_sq_mean(const GridFunction& f, const LatticeShape& shape, const RandomizedParams& params);

struct H1Report {
    double norm = 0.0;
    SampleMode mode = SampleMode::Exact;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double moment = 2.0;
    std::optional<double> std_error;  // Monte Carlo, delta method
    std::optional<double> tail_bound; // absent when f has nonzero mean
};

/// Integral of (E S^p)^{1/p}.
H1Report randomized_h1_norm(const GridFunction& f, const LatticeShape& shape, const RandomizedParams& params);

/// sum over axes of 2^{L_a - K_a} ||f||_1 with 2^{L_a} the box side, or none
/// when the mean of f is nonzero.
std::optional<double> truncation_tail_bound(const GridFunction& f, const LatticeShape& shape);

/// Average over mesh translations u in [0, 2^{K-m})^N of S_L(f(. + u))(x - u)^2,
/// square-rooted.
GridFunction translation_average_oracle(const GridFunction& f, const ProductLattice& L);

} // namespace dyadic
