#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"

#include <limits>
#include <map>
#include <vector>

namespace dyadic {

/// One scale per parameter group (a single entry for one-parameter lattices).
using ScaleIndex = std::vector<int>;

/// Marks the top average E_K of a group inside a decomposition index.
inline constexpr int kTopTerm = std::numeric_limits<int>::max();

/// Throws UsageError unless f lives on the lattice mesh with matching dimension.
void require_aligned(const GridFunction& f, const ProductLattice& L);

/// Union of the cells of scale k[g] (per group) meeting the box.
Box lattice_hull(const Box& box, const ProductLattice& L, const ScaleIndex& k);

/// Box padded by 2^{K_g - m} cells per axis: contains the scale-K hull of the
/// box for every shift of the shape, so all shifted square functions share it.
Box shift_padded_box(const Box& box, const LatticeShape& shape);

/// E_k f: cell averages over the scale-k cubes (rectangles); the result is
/// returned on the scale-k hull of f's box.
GridFunction average_E(const GridFunction& f, const ProductLattice& L, const ScaleIndex& k);
GridFunction average_E(const GridFunction& f, const ProductLattice& L, int k);

/// Delta_k f = E_{k-1} f - E_k f, taken as a product over parameter groups.
GridFunction diff_D(const GridFunction& f, const ProductLattice& L, const ScaleIndex& k);
GridFunction diff_D(const GridFunction& f, const ProductLattice& L, int k);

/// 1_Q * Delta_k f for a cube Q of scale k (one-parameter lattice); the
/// result lives on the mesh cells of Q.
GridFunction local_diff(const GridFunction& f, const ProductLattice& L, const Cell& Q);

/// f = sum over terms, each term a product over groups of Delta_k or E_K.
struct MartingaleDecomposition {
    ProductLattice lattice;
    std::map<ScaleIndex, GridFunction> diffs; // every group a difference
    GridFunction top;                         // every group at E_K
    std::map<ScaleIndex, GridFunction> mixed; // multi-parameter only: some groups at E_K (kTopTerm)

    GridFunction reconstruct() const;
    /// Sum of squared L^2 norms of all terms.
    double energy() const;
};

MartingaleDecomposition decompose(const GridFunction& f, const ProductLattice& L);

} // namespace dyadic
