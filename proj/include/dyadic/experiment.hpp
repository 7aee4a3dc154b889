#pragma once

#include "dyadic/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dyadic {

/// Base atoms on [0, 1) with 8 cells (mesh 2^-3): "haar" and "sine"
/// (sin(2 pi x) at cell centers, odd about 1/2 so the mean is exactly 0).
GridFunction base_atom(const std::string& name, int mesh_exponent = -3);

struct Atom {
    std::string family;
    int index = 0;
    std::int64_t translate = 0; // mesh cells
    int dilate = 0;             // lambda = 2^dilate
    GridFunction f;
};

/// translates x dilates copies of a base atom: f_lambda(x) = lambda f(lambda x)
/// re-meshed at m - j, then moved by whole cells.
std::vector<Atom> atom_family(const std::string& base, int translates = 8, int dilates = 3);

struct EquivalenceConfig {
    int top_offset = 6;         // K - m for the 1D dyadic methods
    int product_top_offset = 4; // K - m per axis in the two-parameter run
    int nodes_per_octave = 4;
    std::vector<std::string> methods{"randomized-exact", "lusin", "dyadic-fixed"};
    unsigned threads = 0;
};

struct EquivalenceRow {
    std::string family;
    int atom = 0;
    std::int64_t translate = 0;
    int dilate = 0;
    std::string method;
    double norm = 0.0;
};

struct RatioSummary {
    std::string family;
    std::string numerator;
    std::string denominator;
    double min = 0.0;
    double max = 0.0;
};

struct EquivalenceResult {
    std::vector<EquivalenceRow> rows;
    std::vector<RatioSummary> ratios;
};

/// One row per (atom, method); ratios of every method pair per family.
EquivalenceResult run_equivalence(const std::vector<Atom>& atoms, const EquivalenceConfig& config);

/// Norm of a 1D atom under one method: dyadic-fixed (standard lattice),
/// randomized-exact, or lusin.
double atom_norm(const GridFunction& f, const std::string& method, const EquivalenceConfig& config);

struct ProductCheck {
    std::string label;
    double exact_2d = 0.0, exact_product = 0.0;
    double lusin_2d = 0.0, lusin_product = 0.0;
};

/// Two-parameter norms of g (x) h against products of the 1D norms.
ProductCheck product_atom_check(const std::string& label, const GridFunction& g, const GridFunction& h,
                                const EquivalenceConfig& config);

/// The six product atoms of the two-parameter run (mesh 2^-2).
std::vector<std::pair<std::string, std::pair<GridFunction, GridFunction>>> product_atoms();

std::string equivalence_csv(const EquivalenceResult& result, const std::vector<ProductCheck>& products = {});

} // namespace dyadic
