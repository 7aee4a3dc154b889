#include "dyadic/cli.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/experiment.hpp"
#include "dyadic/signal_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

namespace dyadic {

using nlohmann::json;

json lattice_to_json(const DyadicLattice1D& L) {
    return {{"m", L.mesh_exponent}, {"K", L.top_scale}, {"shift", L.shift}};
}

json bmo_report_to_json(const BmoReport& r) {
    json j;
    j["norm"] = r.norm;
    j["witness"] = {{"scale", r.witness.scale}, {"corner", r.witness.corner}, {"side", r.witness_side}};
    j["scanned"] = r.scanned;
    j["omitted_bound"] = r.omitted_bound ? json(*r.omitted_bound) : json(nullptr);
    return j;
}

json slope_fit_to_json(const SlopeFit& fit) {
    json pts = json::array();
    for (const auto& [x, y] : fit.points) pts.push_back({x, y});
    return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"points", pts}};
}

json sequence_to_json(const DyadicSequence& s) {
    json entries = json::array();
    for (const auto& [Q, v] : s.entries) entries.push_back({{"scale", Q.scale}, {"corner", Q.corner}, {"value", v}});
    return {{"dim", s.lattice.dim()}, {"entries", entries}};
}

json quadrature_to_json(const ConeQuadrature& q) {
    return {{"t_min", q.t_min}, {"t_max", q.t_max}, {"nodes_per_octave", q.nodes_per_octave}, {"nodes", q.nodes.size()}};
}

json h1_report_to_json(const H1Report& r) {
    return {{"norm", r.norm},
            {"mode", to_string(r.mode)},
            {"samples", r.samples},
            {"seed", r.seed},
            {"moment", r.moment},
            {"std_error", r.std_error ? json(*r.std_error) : json(nullptr)},
            {"tail_bound", r.tail_bound ? json(*r.tail_bound) : json(nullptr)}};
}

namespace {

struct Common {
    std::string out;
    unsigned threads = 0;
};

struct SignalOpts {
    std::string signal;
    int K = 0;
    int params = 1;
    std::vector<std::int64_t> shift;
    std::string method;
    std::size_t samples = 1024;
    std::uint64_t seed = 0;
    double moment = 2.0;
    int nodes_per_octave = 4;
};

void emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.out, std::ios::binary);
    if (!file) throw DataError("cannot open output file '" + c.out + "'");
    file << text;
    if (!file) throw DataError("failed writing output file '" + c.out + "'");
}

LatticeShape shape_for(const GridFunction& f, const SignalOpts& o) {
    const int m = f.mesh_exponent();
    if (o.K <= m) {
        throw UsageError("--K " + std::to_string(o.K) + " must exceed the signal mesh exponent " + std::to_string(m));
    }
    if (o.params == 1) return LatticeShape::one_parameter(f.dim(), m, o.K);
    if (o.params != 2) throw UsageError("--params must be 1 or 2");
    if (f.dim() != 2) throw UsageError("--params 2 needs a two-dimensional signal");
    return LatticeShape::multi_parameter(m, {o.K, o.K});
}

ProductLattice fixed_lattice(const GridFunction& f, const SignalOpts& o) {
    const LatticeShape shape = shape_for(f, o);
    std::vector<std::int64_t> shifts = o.shift;
    if (shifts.empty()) shifts.assign(f.dim(), 0);
    if (shifts.size() == 1 && f.dim() > 1) shifts.assign(f.dim(), shifts[0]);
    if (shifts.size() != f.dim()) throw UsageError("--shift needs one value per axis");
    return shape.with_shifts(shifts);
}

RandomizedParams randomized_params(const SignalOpts& o, const Common& c, SampleMode mode) {
    RandomizedParams p;
    p.mode = mode;
    p.seed = o.seed;
    p.samples = mode == SampleMode::MonteCarlo ? o.samples : 0;
    p.moment = o.moment;
    p.threads = c.threads;
    return p;
}

json config_json(const GridFunction& f, const SignalOpts& o) {
    return {{"signal", o.signal}, {"m", f.mesh_exponent()}, {"K", o.K},     {"dims", f.dim()},
            {"params", o.params}, {"method", o.method},      {"seed", o.seed}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void add_signal_opts(CLI::App* sub, SignalOpts& o, bool need_K = true) {
    sub->add_option("--signal", o.signal, "Signal file (grid function JSON)")->required();
    auto* k = sub->add_option("--K", o.K, "Top carried scale");
    if (need_K) k->required();
    sub->add_option("--params", o.params, "1: one-parameter, 2: two-parameter (2D signals)")
        ->check(CLI::IsMember({1, 2}));
    sub->add_option("--shift", o.shift, "Lattice shift in mesh cells, per axis");
    sub->add_option("--samples", o.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed of every random stream");
    sub->add_option("--moment", o.moment, "Inner exponent p in [1, 2]");
    sub->add_option("--nodes-per-octave", o.nodes_per_octave, "Cone quadrature density")
        ->check(CLI::PositiveNumber);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

const char* kCsvHelp =
    "CSV columns: kind,family,atom,translate,dilate,method,value\n"
    "  kind=norm       one row per (atom, method)\n"
    "  kind=product    two-parameter runs (--params 2): method is randomized-exact-2d,\n"
    "                  randomized-exact-product, lusin-2d or lusin-product\n"
    "  kind=ratio_min, ratio_max   per family, method is numerator/denominator";

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dyadic square functions, randomized H1 norms and companion checks", "dyadic-cli"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--out", common.out, "Write the report to this file instead of stdout");
    app.add_option("--threads", common.threads, "Worker threads (0: hardware concurrency)");

    std::function<std::string()> action;
    const std::string command_echo = [&] {
        std::string s = "dyadic-cli";
        for (const auto& a : args) s += " " + a;
        return s;
    }();
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&](json j) {
        j["command"] = command_echo;
        j["wall_time_s"] = seconds_since(t0);
        return j.dump(2) + "\n";
    };

    // sample-lattice
    std::uint64_t lat_seed = 0;
    int lat_m = 0, lat_K = 0;
    std::size_t lat_dims = 1;
    auto* sl = app.add_subcommand("sample-lattice", "Draw one random dyadic lattice per axis");
    sl->add_option("--seed", lat_seed, "Seed");
    sl->add_option("--m", lat_m, "Mesh exponent")->required();
    sl->add_option("--K", lat_K, "Top carried scale")->required();
    sl->add_option("--dims", lat_dims, "Number of axes")->check(CLI::Range(1, 16));
    sl->callback([&] {
        action = [&] {
            if (lat_K <= lat_m) {
                throw UsageError("--K " + std::to_string(lat_K) + " must exceed --m " + std::to_string(lat_m));
            }
            json axes = json::array();
            for (std::size_t a = 0; a < lat_dims; ++a) {
                json ax = lattice_to_json(sample_lattice(lat_seed, a, lat_m, lat_K));
                ax["stream"] = a;
                axes.push_back(ax);
            }
            return json{{"seed", lat_seed}, {"m", lat_m}, {"K", lat_K}, {"dims", lat_dims}, {"axes", axes}}
                .dump(2) +
                "\n";
        };
    });

    // square-function
    SignalOpts sq;
    sq.method = "S";
    auto* sf = app.add_subcommand("square-function", "Pointwise square function of a signal");
    add_signal_opts(sf, sq, false);
    sf->add_option("--method", sq.method, "S, tilde, lusin, randomized-exact or randomized-mc")
        ->check(CLI::IsMember({"S", "tilde", "lusin", "randomized-exact", "randomized-mc"}));
    sf->callback([&] {
        action = [&] {
            const GridFunction f = read_signal_file(sq.signal);
            json j;
            j["config"] = config_json(f, sq);
            GridFunction field;
            if (sq.method == "S" || sq.method == "tilde") {
                const ProductLattice L = fixed_lattice(f, sq);
                field = sq.method == "S" ? square_function_S(f, L) : square_function_tilde(f, L);
            } else if (sq.method == "lusin") {
                if (sq.params == 2) {
                    field = multiparam_lusin(f, default_quadrature(f, 0, sq.nodes_per_octave),
                                             default_quadrature(f, 1, sq.nodes_per_octave));
                } else {
                    const auto q = default_quadrature(f, 0, sq.nodes_per_octave);
                    field = lusin_square_function(f, q);
                    j["quadrature"] = quadrature_to_json(q);
                }
            } else {
                const auto mode = sq.method == "randomized-mc" ? SampleMode::MonteCarlo : SampleMode::Exact;
                const auto r = randomized_sq_mean(f, shape_for(f, sq), randomized_params(sq, common, mode));
                field = r.value;
                j["samples"] = r.samples;
                if (mode == SampleMode::MonteCarlo) j["std_error"] = signal_to_json(r.std_error);
            }
            j["method"] = sq.method;
            j["field"] = signal_to_json(field);
            return finish(j);
        };
    });

    // h1-norm
    SignalOpts h1;
    h1.method = "randomized-exact";
    auto* hn = app.add_subcommand("h1-norm", "H1 norm of a signal");
    add_signal_opts(hn, h1, false);
    hn->add_option("--method", h1.method, "dyadic-fixed, randomized-exact, randomized-mc or lusin")
        ->check(CLI::IsMember({"dyadic-fixed", "randomized-exact", "randomized-mc", "lusin"}));
    hn->callback([&] {
        action = [&] {
            const GridFunction f = read_signal_file(h1.signal);
            json j;
            if (h1.method == "dyadic-fixed") {
                const ProductLattice L = fixed_lattice(f, h1);
                j = {{"norm", lp_norm(square_function_S(f, L), 1.0)},
                     {"mode", "fixed"},
                     {"samples", 1},
                     {"seed", h1.seed},
                     {"std_error", nullptr},
                     {"tail_bound", truncation_tail_bound(f, LatticeShape::of(L))
                                        ? json(*truncation_tail_bound(f, LatticeShape::of(L)))
                                        : json(nullptr)}};
            } else if (h1.method == "lusin") {
                double norm = 0.0;
                json tail = nullptr;
                if (h1.params == 2) {
                    if (f.dim() != 2) throw UsageError("--params 2 needs a two-dimensional signal");
                    norm = lp_norm(multiparam_lusin(f, default_quadrature(f, 0, h1.nodes_per_octave),
                                                    default_quadrature(f, 1, h1.nodes_per_octave)),
                                   1.0);
                } else {
                    const auto q = default_quadrature(f, 0, h1.nodes_per_octave);
                    norm = lp_norm(lusin_square_function(f, q), 1.0);
                    tail = lusin_tail_estimate(f, q);
                    j["quadrature"] = quadrature_to_json(q);
                }
                j.update(json{{"norm", norm},
                              {"mode", "quadrature"},
                              {"samples", nullptr},
                              {"seed", h1.seed},
                              {"std_error", nullptr},
                              {"tail_bound", tail}});
            } else {
                const auto mode = h1.method == "randomized-mc" ? SampleMode::MonteCarlo : SampleMode::Exact;
                j = h1_report_to_json(randomized_h1_norm(f, shape_for(f, h1), randomized_params(h1, common, mode)));
            }
            j["method"] = h1.method;
            j["config"] = config_json(f, h1);
            return finish(j);
        };
    });

    // bmo-norm
    SignalOpts bm;
    bm.method = "all";
    std::int64_t max_side = 0;
    auto* bn = app.add_subcommand("bmo-norm", "BMO norm over all cubes or one dyadic lattice");
    bn->add_option("--signal", bm.signal, "Signal file (grid function JSON)")->required();
    bn->add_option("--method", bm.method, "all or dyadic")->check(CLI::IsMember({"all", "dyadic"}));
    bn->add_option("--K", bm.K, "Top carried scale (dyadic)");
    bn->add_option("--shift", bm.shift, "Lattice shift in mesh cells, per axis (dyadic)");
    bn->add_option("--max-side", max_side, "Largest cube side in mesh cells (all; default twice the box)");
    bn->callback([&] {
        action = [&] {
            const GridFunction f = read_signal_file(bm.signal);
            json j;
            if (bm.method == "all") {
                j = bmo_report_to_json(
                    bmo_norm(f, max_side > 0 ? std::optional<std::int64_t>(max_side) : std::nullopt, common.threads));
            } else {
                j = bmo_report_to_json(bmo_norm(f, fixed_lattice(f, bm)));
            }
            j["method"] = bm.method;
            j["config"] = config_json(f, bm);
            return finish(j);
        };
    });

    // kernel-check
    int km = -6, kK = 6;
    bool single = false;
    auto* kc = app.add_subcommand("kernel-check", "Log-log slopes of the vector kernel size and smoothness");
    kc->add_option("--m", km, "Mesh exponent");
    kc->add_option("--K", kK, "Top carried scale");
    kc->add_flag("--single", single, "Standard lattice only instead of every shift");
    kc->callback([&] {
        action = [&] {
            const ShiftSet family = single ? ShiftSet::single(DyadicLattice1D(km, kK, 0)) : ShiftSet::all(km, kK);
            const KernelExponents e = kernel_exponents(family);
            return finish({{"config", {{"m", km}, {"K", kK}, {"shifts", single ? "single" : "all"}}},
                           {"size", slope_fit_to_json(e.size)},
                           {"smoothness_dx", slope_fit_to_json(e.smoothness_dx)},
                           {"smoothness_distance", slope_fit_to_json(e.smoothness_distance)}});
        };
    });

    // seqspace-check
    SignalOpts sc;
    std::size_t seq_count = 100, seq_entries = 32;
    auto* ss = app.add_subcommand("seqspace-check", "Sequence-space pipeline of a signal");
    ss->add_option("--signal", sc.signal, "Signal file (grid function JSON)")->required();
    ss->add_option("--K", sc.K, "Top carried scale")->required();
    ss->add_option("--shift", sc.shift, "Lattice shift in mesh cells, per axis");
    ss->add_option("--seed", sc.seed, "Seed of the random sequences");
    ss->add_option("--sequences", seq_count, "Random sequences for the ratio of T");
    ss->add_option("--entries", seq_entries, "Entries per random sequence");
    ss->callback([&] {
        action = [&] {
            const GridFunction f = read_signal_file(sc.signal);
            const SeqspaceCheck r = seqspace_check(f, fixed_lattice(f, sc), sc.seed, seq_count, seq_entries);
            return finish({{"config", config_json(f, sc)},
                           {"tl_a", r.tl_a},
                           {"tilde_l1", r.tilde_l1},
                           {"tl_b", r.tl_b},
                           {"s_l1", r.s_l1},
                           {"domination_constant", r.domination_constant},
                           {"domination_excess", r.domination_excess},
                           {"dominated", r.domination_excess <= 1e-12 * std::max(1.0, r.tl_a)},
                           {"t_ratio", {{"min", r.t_ratio_min}, {"max", r.t_ratio_max}, {"sequences", r.sequences}}},
                           {"identity_constant", r.identity_constant}});
        };
    });

    // equivalence-experiment
    std::string families = "haar,sine", methods = "randomized-exact,lusin,dyadic-fixed", format = "csv";
    int eq_params = 1, translates = 8, dilates = 3;
    EquivalenceConfig eq;
    auto* ee = app.add_subcommand("equivalence-experiment", "Norms of atom families under several methods");
    ee->footer(kCsvHelp);
    ee->add_option("--families", families, "Comma-separated base atoms (haar, sine)");
    ee->add_option("--methods", methods, "Comma-separated: randomized-exact, lusin, dyadic-fixed");
    ee->add_option("--params", eq_params, "2 adds the two-parameter product atoms")->check(CLI::IsMember({1, 2}));
    ee->add_option("--translates", translates, "Translates per dilate")->check(CLI::PositiveNumber);
    ee->add_option("--dilates", dilates, "Dyadic dilates")->check(CLI::PositiveNumber);
    ee->add_option("--nodes-per-octave", eq.nodes_per_octave, "Cone quadrature density")->check(CLI::PositiveNumber);
    ee->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    ee->callback([&] {
        action = [&] {
            eq.methods = split_list(methods);
            eq.threads = common.threads;
            if (eq.methods.empty()) throw UsageError("--methods is empty");
            std::vector<Atom> atoms;
            for (const auto& fam : split_list(families)) {
                auto a = atom_family(fam, translates, dilates);
                atoms.insert(atoms.end(), a.begin(), a.end());
            }
            if (atoms.empty()) throw UsageError("--families is empty");
            const EquivalenceResult res = run_equivalence(atoms, eq);
            std::vector<ProductCheck> products;
            if (eq_params == 2) {
                for (const auto& [label, gh] : product_atoms()) {
                    products.push_back(product_atom_check(label, gh.first, gh.second, eq));
                }
            }
            if (format == "csv") return equivalence_csv(res, products);
            json rows = json::array(), ratios = json::array(), prods = json::array();
            for (const auto& r : res.rows) {
                rows.push_back({{"family", r.family},
                                {"atom", r.atom},
                                {"translate", r.translate},
                                {"dilate", r.dilate},
                                {"method", r.method},
                                {"value", r.norm}});
            }
            for (const auto& r : res.ratios) {
                ratios.push_back({{"family", r.family},
                                  {"numerator", r.numerator},
                                  {"denominator", r.denominator},
                                  {"min", r.min},
                                  {"max", r.max}});
            }
            for (const auto& p : products) {
                prods.push_back({{"label", p.label},
                                 {"randomized_exact_2d", p.exact_2d},
                                 {"randomized_exact_product", p.exact_product},
                                 {"lusin_2d", p.lusin_2d},
                                 {"lusin_product", p.lusin_product}});
            }
            return finish({{"config",
                            {{"families", split_list(families)},
                             {"methods", eq.methods},
                             {"params", eq_params},
                             {"translates", translates},
                             {"dilates", dilates},
                             {"nodes_per_octave", eq.nodes_per_octave}}},
                           {"rows", rows},
                           {"ratios", ratios},
                           {"products", prods}});
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!action) throw UsageError("no subcommand given");
        emit(common, action(), out);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::Usage:
            return kExitUsage;
        case ErrorKind::Data:
            return kExitData;
        case ErrorKind::Infeasible:
            return kExitInfeasible;
        }
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace dyadic
