#include "dyadic/seqspace.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/martingale.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/square_function.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace dyadic {

void DyadicSequence::validate() const {
    if (!lattice.one_parameter()) throw UsageError("dyadic sequences live on one-parameter lattices");
    const int m = lattice.mesh_exponent(), K = lattice.top_scale(0);
    for (const auto& [Q, v] : entries) {
        if (Q.corner.size() != lattice.dim()) throw UsageError("sequence cube has the wrong dimension");
        if (Q.scale < m || Q.scale > K) {
            throw UsageError("sequence cube scale " + std::to_string(Q.scale) + " outside carried range [" +
                             std::to_string(m) + ", " + std::to_string(K) + "]");
        }
        if (!std::isfinite(v)) throw DataError("non-finite sequence entry");
    }
}

namespace {

void require_same_lattice(const DyadicSequence& s, const DyadicSequence& t) {
    if (!(s.lattice == t.lattice)) throw UsageError("sequences live on different lattices");
}

double volume(int k, std::size_t n) { return pow2(k * static_cast<int>(n)); }

std::vector<double> center(const ProductLattice& L, const Cell& Q) {
    auto c = cube_corner(L, Q);
    for (auto& x : c) x += pow2(Q.scale - 1);
    return c;
}

} // namespace

DyadicSequence combine(double alpha, const DyadicSequence& s, double beta, const DyadicSequence& t) {
    require_same_lattice(s, t);
    DyadicSequence out{s.lattice, {}};
    for (const auto& [Q, v] : s.entries) out.entries[Q] += alpha * v;
    for (const auto& [Q, v] : t.entries) out.entries[Q] += beta * v;
    return out;
}

DyadicSequence random_sequence(const ProductLattice& L, std::uint64_t seed, std::uint64_t stream, std::size_t count) {
    DyadicSequence s{L, {}};
    s.validate();
    const CounterRng rng(seed, stream);
    const int m = L.mesh_exponent(), K = L.top_scale(0);
    std::uint64_t draw = 0;
    for (std::size_t e = 0; e < count; ++e) {
        const int k = m + static_cast<int>(rng(draw++) % static_cast<std::uint64_t>(K - m + 1));
        Cell Q{k, std::vector<std::int64_t>(L.dim())};
        const auto range = std::uint64_t{1} << (K - k);
        for (auto& j : Q.corner) j = static_cast<std::int64_t>(rng(draw++) % range);
        s.entries[Q] = 2.0 * rng.uniform(draw++) - 1.0;
    }
    return s;
}

DyadicSequence abs(const DyadicSequence& s) {
    DyadicSequence out = s;
    for (auto& [Q, v] : out.entries) v = std::abs(v);
    return out;
}

double tl_norm(const DyadicSequence& s, double alpha, double q, double p) {
    if (!(q >= 1.0)) throw UsageError("tl_norm: q must be >= 1");
    if (!(p >= 1.0)) throw UsageError("tl_norm: p must be >= 1");
    s.validate();
    if (s.entries.empty()) return 0.0;
    const std::size_t n = s.lattice.dim();
    const double N = static_cast<double>(n);
    // |Q|^{-alpha/N} |s_Q| |Q|^{-1/2}
    auto height = [&](const Cell& Q, double v) {
        return std::pow(2.0, -Q.scale * alpha) * std::abs(v) * std::pow(2.0, -0.5 * Q.scale * N);
    };
    auto power = [&](double x) { return std::isinf(q) ? x : std::pow(x, q); };
    auto root = [&](double x) { return std::isinf(q) ? x : std::pow(x, 1.0 / q); };
    auto add = [&](double& acc, double term) { acc = std::isinf(q) ? std::max(acc, term) : acc + term; };

    if (std::isinf(p)) {
        const int K = s.lattice.top_scale(0);
        std::set<Cell> candidates;
        for (const auto& [Q, v] : s.entries) {
            Cell P = Q;
            candidates.insert(P);
            while (P.scale < K) {
                P = P.parent();
                candidates.insert(P);
            }
        }
        double best = 0.0;
        for (const auto& P : candidates) {
            double acc = 0.0;
            for (const auto& [Q, v] : s.entries) {
                if (!P.contains(Q)) continue;
                const double h = height(Q, v);
                if (std::isinf(q)) {
                    acc = std::max(acc, h);
                } else {
                    acc += power(h) * volume(Q.scale, n);
                }
            }
            const double val = std::isinf(q) ? acc : root(acc / volume(P.scale, n));
            best = std::max(best, val);
        }
        return best;
    }

    int kmin = s.entries.begin()->first.scale;
    for (const auto& [Q, v] : s.entries) kmin = std::min(kmin, Q.scale);
    std::map<std::vector<std::int64_t>, double> fine;
    for (const auto& [Q, v] : s.entries) {
        const std::int64_t r = std::int64_t{1} << (Q.scale - kmin);
        std::vector<std::int64_t> lo(n), cell(n);
        for (std::size_t a = 0; a < n; ++a) lo[a] = Q.corner[a] * r;
        cell = lo;
        const double term = power(height(Q, v));
        while (true) {
            add(fine[cell], term);
            std::size_t a = n;
            bool done = true;
            while (a-- > 0) {
                if (++cell[a] < lo[a] + r) {
                    done = false;
                    break;
                }
                cell[a] = lo[a];
            }
            if (done) break;
        }
    }
    const double vol = volume(kmin, n);
    double total = 0.0;
    for (const auto& [cell, acc] : fine) {
        const double g = root(acc);
        total += (p == 1.0 ? g : std::pow(g, p)) * vol;
    }
    return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

double pairing(const DyadicSequence& s, const DyadicSequence& t) {
    require_same_lattice(s, t);
    double sum = 0.0;
    for (const auto& [Q, v] : s.entries) {
        auto it = t.entries.find(Q);
        if (it != t.entries.end()) sum += v * it->second;
    }
    return sum;
}

double almost_diagonal_constant(const CubeMatrix& A, double eps) {
    if (!(eps > 0.0)) throw UsageError("almost_diagonal_constant: eps must be > 0");
    const double N = static_cast<double>(A.lattice.dim());
    double C = 0.0;
    for (const auto& [key, a] : A.entries) {
        const auto& [Q, P] = key;
        const auto xq = center(A.lattice, Q);
        const auto xp = center(A.lattice, P);
        double d2 = 0.0;
        for (std::size_t i = 0; i < xq.size(); ++i) d2 += (xq[i] - xp[i]) * (xq[i] - xp[i]);
        const double lq = pow2(Q.scale), lp = pow2(P.scale);
        const double decay = std::pow(1.0 + std::sqrt(d2) / std::max(lq, lp), -N - eps);
        const double ratio = std::pow(std::min(lq / lp, lp / lq), 0.5 * (N + eps));
        C = std::max(C, std::abs(a) / (decay * ratio));
    }
    return C;
}

CubeMatrix children_sum_matrix(const DyadicSequence& s) {
    s.validate();
    CubeMatrix T{s.lattice, {}};
    const double c = std::pow(2.0, -0.5 * static_cast<double>(s.lattice.dim()));
    const int K = s.lattice.top_scale(0);
    for (const auto& [Q, v] : s.entries) {
        if (Q.scale < K) T.entries[{Q.parent(), Q}] = c;
    }
    return T;
}

ChildrenSum apply_children_sum_T(const DyadicSequence& s) {
    s.validate();
    ChildrenSum out{DyadicSequence{s.lattice, {}}, 0};
    const double c = std::pow(2.0, -0.5 * static_cast<double>(s.lattice.dim()));
    const int K = s.lattice.top_scale(0);
    for (const auto& [Q, v] : s.entries) {
        if (Q.scale >= K) {
            ++out.dropped;
            continue;
        }
        out.result.entries[Q.parent()] += c * v;
    }
    return out;
}

SequencePair sequences_a_b(const GridFunction& f, const ProductLattice& L) {
    require_aligned(f, L);
    if (!L.one_parameter()) throw UsageError("sequences_a_b expects a one-parameter lattice");
    if (f.value_dim() != 1) throw UsageError("sequences_a_b expects a scalar signal");
    const std::size_t n = L.dim();
    const double N = static_cast<double>(n);
    SequencePair out{DyadicSequence{L, {}}, DyadicSequence{L, {}}};
    for (int k = L.mesh_exponent() + 1; k <= L.top_scale(0); ++k) {
        const GridFunction d = diff_D(f, L, k);
        const Box& box = d.box();
        std::map<Cell, double> child;
        std::vector<std::int64_t> cell(n);
        for (std::size_t i = 0; i < box.cell_count(); ++i) {
            std::size_t off = i;
            for (std::size_t a = n; a-- > 0;) {
                const auto e = static_cast<std::size_t>(box.extent[a]);
                cell[a] = box.origin[a] + static_cast<std::int64_t>(off % e);
                off /= e;
            }
            Cell Q{k - 1, std::vector<std::int64_t>(n)};
            for (std::size_t a = 0; a < n; ++a) Q.corner[a] = L.factor(a).index_of_mesh_cell(cell[a], k - 1);
            const double v = d.values()[i];
            auto [it, inserted] = child.emplace(Q, v);
            if (!inserted && std::abs(it->second - v) > 1e-12 * (1.0 + std::abs(v))) {
                throw std::logic_error("martingale difference is not constant on a child cube");
            }
        }
        std::map<Cell, double> parent_sq;
        for (const auto& [Q, v] : child) {
            parent_sq[Q.parent()] += v * v;
            if (v != 0.0) out.b.entries[Q] = std::pow(2.0, 0.5 * (k - 1) * N) * v;
        }
        for (const auto& [R, sq] : parent_sq) {
            if (sq != 0.0) out.a.entries[R] = std::pow(2.0, 0.5 * k * N) * std::sqrt(sq * std::pow(2.0, -N));
        }
    }
    return out;
}

SeqspaceCheck seqspace_check(const GridFunction& f, const ProductLattice& L, std::uint64_t seed, std::size_t count,
                             std::size_t entries) {
    SeqspaceCheck out;
    const auto [a, b] = sequences_a_b(f, L);
    out.tl_a = tl_norm(a, 0.0, 2.0, 1.0);
    out.tl_b = tl_norm(b, 0.0, 2.0, 1.0);
    out.tilde_l1 = lp_norm(square_function_tilde(f, L), 1.0);
    out.s_l1 = lp_norm(square_function_S(f, L), 1.0);
    out.domination_constant = std::pow(2.0, 0.5 * (static_cast<double>(L.dim()) - 1.0));
    const auto Tb = apply_children_sum_T(abs(b)).result;
    out.domination_excess = a.entries.empty() ? 0.0 : -INFINITY;
    for (const auto& [R, v] : a.entries) {
        auto it = Tb.entries.find(R);
        const double rhs = it == Tb.entries.end() ? 0.0 : out.domination_constant * it->second;
        out.domination_excess = std::max(out.domination_excess, v - rhs);
    }
    out.t_ratio_min = INFINITY;
    for (std::size_t i = 0; i < count; ++i) {
        const auto s = random_sequence(L, seed, i, entries);
        const double den = tl_norm(s, 0.0, 2.0, 1.0);
        if (den == 0.0) continue;
        const double r = tl_norm(apply_children_sum_T(s).result, 0.0, 2.0, 1.0) / den;
        out.t_ratio_min = std::min(out.t_ratio_min, r);
        out.t_ratio_max = std::max(out.t_ratio_max, r);
        ++out.sequences;
    }
    if (out.sequences == 0) out.t_ratio_min = 0.0;
    CubeMatrix I{L, {}};
    for (const auto& [Q, v] : a.entries) I.entries[{Q, Q}] = 1.0;
    for (const auto& [Q, v] : b.entries) I.entries[{Q, Q}] = 1.0;
    out.identity_constant = almost_diagonal_constant(I, 0.5);
    return out;
}

} // namespace dyadic
