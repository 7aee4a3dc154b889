#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dyadic {

/// Mean oscillation sup |Q|^{-1} int_Q |f - f_Q| over a finite scan set.
/// Dyadic mode: witness is a lattice cube (scale, interval indices). All mode:
/// witness.scale is the mesh exponent and the corner is its first mesh cell.
struct BmoReport {
    double norm = 0.0;
    Cell witness;
    std::int64_t witness_side = 0; // mesh cells
    std::size_t scanned = 0;
    std::optional<double> omitted_bound; // all mode: bound on cubes larger than the scan
};

/// All mesh-aligned cubes meeting the box with side 1..max_side cells
/// (default twice the largest box extent).
BmoReport bmo_norm(const GridFunction& f, std::optional<std::int64_t> max_side = std::nullopt,
                   unsigned threads = 0);

/// Every cube of a one-parameter lattice with scale in [m, K] meeting the box.
BmoReport bmo_norm(const GridFunction& f, const ProductLattice& L);

struct BmoFamilyMember {
    GridFunction f;
    ProductLattice lattice;
};

struct BmoFamilyResult {
    GridFunction average;
    BmoReport report;
    double max_member_norm = 0.0; // max of the members' dyadic norms
    double ratio = 0.0;           // report.norm / max_member_norm (0 when every member vanishes)
};

/// f = sum w f_i with every member in the unit ball of its own dyadic BMO.
BmoFamilyResult average_dyadic_bmo_family(const std::vector<BmoFamilyMember>& family,
                                          const std::vector<double>& weights,
                                          std::optional<std::int64_t> max_side = std::nullopt);

} // namespace dyadic
