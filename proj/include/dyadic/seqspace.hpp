#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace dyadic {

/// Finitely supported s = {s_Q} over the cubes of a one-parameter lattice.
struct DyadicSequence {
    ProductLattice lattice;
    std::map<Cell, double> entries;

    /// Throws UsageError when a cube lies outside the carried scales.
    void validate() const;
};

DyadicSequence combine(double alpha, const DyadicSequence& s, double beta, const DyadicSequence& t);

/// `count` entries with scales uniform in [m, K], cubes inside the scale-K
/// cube at the origin and values uniform in [-1, 1]; deterministic in (seed, stream).
DyadicSequence random_sequence(const ProductLattice& L, std::uint64_t seed, std::uint64_t stream, std::size_t count);

/// Entries with their absolute values.
DyadicSequence abs(const DyadicSequence& s);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// || (sum_Q (|Q|^{-alpha/N} |s_Q| |Q|^{-1/2} 1_Q)^q)^{1/q} ||_{L^p}, exact on
/// the common refinement. p = infinity uses
/// sup_P (|P|^{-1} int_P sum_{Q in P} (...)^q)^{1/q} over the cubes P
/// containing a support cube.
double tl_norm(const DyadicSequence& s, double alpha, double q, double p);

/// sum_Q s_Q t_Q.
double pairing(const DyadicSequence& s, const DyadicSequence& t);

struct CubeMatrix {
    ProductLattice lattice;
    std::map<std::pair<Cell, Cell>, double> entries; // (Q, P) -> a_{Q,P}
};

/// Smallest C with |a_{Q,P}| <= C (1 + |x_P - x_Q| / max(l_P, l_Q))^{-N-eps}
/// min((l_Q/l_P)^{(N+eps)/2}, (l_P/l_Q)^{(N+eps)/2}) on the support.
double almost_diagonal_constant(const CubeMatrix& A, double eps);

/// Matrix of T restricted to the columns in the support of s.
CubeMatrix children_sum_matrix(const DyadicSequence& s);

struct ChildrenSum {
    DyadicSequence result;
    std::size_t dropped = 0; // entries at the top scale, which has no parent
};

/// (Ts)_R = 2^{-N/2} sum over the children Q of R of s_Q.
ChildrenSum apply_children_sum_T(const DyadicSequence& s);

struct SequencePair {
    DyadicSequence a; // a_Q = |Q|^{1/2} (E_Q |Delta_Q f|^2)^{1/2}, Q of scale k in (m, K]
    DyadicSequence b; // b_Q = |Q|^{1/2} Delta_R f on Q, Q a child of R
};

/// Coefficient sequences of S~f and Sf, scaled so that tl_norm(a, 0, 2, 1)
/// equals ||S~f||_1 and tl_norm(b, 0, 2, 1) equals ||Sf||_1.
SequencePair sequences_a_b(const GridFunction& f, const ProductLattice& L);

struct SeqspaceCheck {
    double tl_a = 0.0, tilde_l1 = 0.0; // tl_norm(a, 0, 2, 1) and ||S~f||_1
    double tl_b = 0.0, s_l1 = 0.0;     // tl_norm(b, 0, 2, 1) and ||Sf||_1
    double domination_constant = 1.0;  // 2^{(N-1)/2}
    double domination_excess = 0.0;    // max_R a_R - constant (T|b|)_R; <= 0 when dominated
    double t_ratio_min = 0.0, t_ratio_max = 0.0; // tl(Ts) / tl(s) over random sequences
    std::size_t sequences = 0;
    double identity_constant = 0.0; // almost_diagonal_constant of the identity on supp a
};

/// The sequence-space pipeline for one signal: norms of a and b, entrywise
/// a <= 2^{(N-1)/2} T|b|, and the ratio of T on `count` random sequences.
SeqspaceCheck seqspace_check(const GridFunction& f, const ProductLattice& L, std::uint64_t seed,
                             std::size_t count = 100, std::size_t entries = 32);

} // namespace dyadic
