#pragma once

// Internal in-place kernels shared by the martingale and square-function code.

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/martingale.hpp"

#include <span>
#include <vector>

namespace dyadic::detail {

/// Replaces every value along `axis` by the average over its block of
/// `block` cells; blocks start at global mesh indices congruent to `shift`.
/// Cells of a block outside the box count as zero, so the box must contain
/// the support of the result.
void block_average_axis(std::span<double> data, const Box& box, std::size_t value_dim, std::size_t axis,
                        std::int64_t block, std::int64_t shift);

/// E^g_k in place on the axes of group g.
void group_average(std::span<double> data, const Box& box, std::size_t value_dim, const ProductLattice& L,
                   std::size_t group, int k);

/// Squared fiber norms.
std::vector<double> squared_norms(std::span<const double> data, std::size_t value_dim);

/// Visits every product over groups of Delta_k (k in (m, K_g]) and, when
/// `with_top`, E_K (index kTopTerm). `data` must live on a box containing the
/// scale-K hull. visit(const ScaleIndex&, std::span<const double>).
template <class Visit>
void for_each_martingale_term(std::vector<double> data, const Box& box, std::size_t value_dim,
                              const ProductLattice& L, bool with_top, Visit&& visit) {
    ScaleIndex index(L.group_count());
    auto recurse = [&](auto&& self, std::vector<double> cur, std::size_t g) -> void {
        const int m = L.mesh_exponent();
        const int K = L.top_scale(g);
        std::vector<double> diff(cur.size());
        for (int k = m + 1; k <= K; ++k) {
            std::vector<double> next = cur;
            group_average(next, box, value_dim, L, g, k);
            for (std::size_t i = 0; i < cur.size(); ++i) diff[i] = cur[i] - next[i];
            index[g] = k;
            if (g + 1 == L.group_count()) {
                visit(static_cast<const ScaleIndex&>(index), std::span<const double>(diff));
            } else {
                self(self, diff, g + 1);
            }
            cur = std::move(next);
        }
        if (with_top) {
            index[g] = kTopTerm;
            if (g + 1 == L.group_count()) {
                visit(static_cast<const ScaleIndex&>(index), std::span<const double>(cur));
            } else {
                self(self, std::move(cur), g + 1);
            }
        }
    };
    recurse(recurse, std::move(data), 0);
}

} // namespace dyadic::detail
