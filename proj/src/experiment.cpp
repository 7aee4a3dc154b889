#include "dyadic/experiment.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/lusin.hpp"
#include "dyadic/square_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

namespace dyadic {

GridFunction base_atom(const std::string& name, int mesh_exponent) {
    if (mesh_exponent > -1) throw UsageError("base atoms need at least two cells (mesh exponent <= -1)");
    const auto n = std::size_t{1} << (-mesh_exponent);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n / 2; ++i) {
        if (name == "haar") {
            v[i] = 1.0;
        } else if (name == "sine") {
            v[i] = std::sin(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
        } else {
            throw UsageError("unknown base atom '" + name + "' (expected haar or sine)");
        }
        v[n - 1 - i] = -v[i];
    }
    return make_grid_function(std::move(v), mesh_exponent);
}

std::vector<Atom> atom_family(const std::string& base, int translates, int dilates) {
    if (translates < 1 || dilates < 1) throw UsageError("atom family needs at least one translate and one dilate");
    const GridFunction b = base_atom(base);
    std::vector<Atom> out;
    int index = 0;
    for (int j = 0; j < dilates; ++j) {
        const double lambda = pow2(j);
        for (int t = 0; t < translates; ++t) {
            std::vector<double> v(b.values().begin(), b.values().end());
            for (auto& x : v) x *= lambda;
            out.push_back({base, index++, t, j, make_grid_function(std::move(v), b.mesh_exponent() - j, t)});
        }
    }
    return out;
}

double atom_norm(const GridFunction& f, const std::string& method, const EquivalenceConfig& config) {
    const int m = f.mesh_exponent();
    const int K = m + config.top_offset;
    if (method == "dyadic-fixed") return lp_norm(square_function_S(f, DyadicLattice1D(m, K, 0)), 1.0);
    if (method == "randomized-exact") {
        RandomizedParams p;
        p.threads = config.threads;
        return randomized_h1_norm(f, LatticeShape::one_parameter(f.dim(), m, K), p).norm;
    }
    if (method == "lusin") {
        return lp_norm(lusin_square_function(f, default_quadrature(f, 0, config.nodes_per_octave)), 1.0);
    }
    throw UsageError("unknown method '" + method + "' (expected dyadic-fixed, randomized-exact or lusin)");
}

EquivalenceResult run_equivalence(const std::vector<Atom>& atoms, const EquivalenceConfig& config) {
    EquivalenceResult res;
    std::map<std::string, std::vector<std::map<std::string, double>>> by_family;
    for (const auto& a : atoms) {
        std::map<std::string, double> norms;
        for (const auto& method : config.methods) {
            const double v = atom_norm(a.f, method, config);
            norms[method] = v;
            res.rows.push_back({a.family, a.index, a.translate, a.dilate, method, v});
        }
        by_family[a.family].push_back(norms);
        by_family["all"].push_back(norms);
    }
    for (const auto& [family, list] : by_family) {
        if (family == "all" && by_family.size() == 2) continue;
        for (std::size_t i = 0; i < config.methods.size(); ++i) {
            for (std::size_t j = i + 1; j < config.methods.size(); ++j) {
                RatioSummary r{family, config.methods[i], config.methods[j], INFINITY, 0.0};
                for (const auto& norms : list) {
                    const double q = norms.at(config.methods[i]) / norms.at(config.methods[j]);
                    r.min = std::min(r.min, q);
                    r.max = std::max(r.max, q);
                }
                res.ratios.push_back(r);
            }
        }
    }
    return res;
}

std::vector<std::pair<std::string, std::pair<GridFunction, GridFunction>>> product_atoms() {
    const GridFunction h = base_atom("haar", -2);
    const GridFunction s = base_atom("sine", -2);
    const std::int64_t two[] = {2};
    const std::int64_t one[] = {1};
    return {
        {"haar*haar", {h, h}},
        {"haar*sine", {h, s}},
        {"sine*haar", {s, h}},
        {"sine*sine", {s, s}},
        {"haar*haar(+2)", {h, translate(h, two)}},
        {"sine(+1)*haar", {translate(s, one), h}},
    };
}

ProductCheck product_atom_check(const std::string& label, const GridFunction& g, const GridFunction& h,
                                const EquivalenceConfig& config) {
    const int m = g.mesh_exponent();
    const int K = m + config.product_top_offset;
    const GridFunction f = tensor_product(g, h);
    RandomizedParams p;
    p.threads = config.threads;
    ProductCheck c;
    c.label = label;
    c.exact_2d = randomized_h1_norm(f, LatticeShape::multi_parameter(m, {K, K}), p).norm;
    const auto shape1 = LatticeShape::one_parameter(1, m, K);
    c.exact_product = randomized_h1_norm(g, shape1, p).norm * randomized_h1_norm(h, shape1, p).norm;
    const auto q0 = default_quadrature(f, 0, config.nodes_per_octave);
    const auto q1 = default_quadrature(f, 1, config.nodes_per_octave);
    c.lusin_2d = lp_norm(multiparam_lusin(f, q0, q1), 1.0);
    c.lusin_product = lp_norm(lusin_square_function(g, q0), 1.0) * lp_norm(lusin_square_function(h, q1), 1.0);
    return c;
}

std::string equivalence_csv(const EquivalenceResult& result, const std::vector<ProductCheck>& products) {
    std::ostringstream os;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "kind,family,atom,translate,dilate,method,value\n";
    for (const auto& r : result.rows) {
        os << "norm," << r.family << ',' << r.atom << ',' << r.translate << ',' << r.dilate << ',' << r.method << ','
           << num(r.norm) << '\n';
    }
    for (const auto& p : products) {
        os << "product," << p.label << ",,,,randomized-exact-2d," << num(p.exact_2d) << '\n';
        os << "product," << p.label << ",,,,randomized-exact-product," << num(p.exact_product) << '\n';
        os << "product," << p.label << ",,,,lusin-2d," << num(p.lusin_2d) << '\n';
        os << "product," << p.label << ",,,,lusin-product," << num(p.lusin_product) << '\n';
    }
    for (const auto& r : result.ratios) {
        os << "ratio_min," << r.family << ",,,," << r.numerator << '/' << r.denominator << ',' << num(r.min) << '\n';
        os << "ratio_max," << r.family << ",,,," << r.numerator << '/' << r.denominator << ',' << num(r.max) << '\n';
    }
    return os.str();
}

} // namespace dyadic
