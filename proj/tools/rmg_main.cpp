// Experiment runner: every subcommand resolves its full configuration, runs
// one library operation and emits a JSON report {config, version, payload,
// wall_clock_ms}. Identical (config, seed) produce byte-identical payloads
// regardless of the worker count.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rmg/alphared.hpp"
#include "rmg/fourier.hpp"
#include "rmg/invariance.hpp"
#include "rmg/spectrum.hpp"
#include "rmg/uggap.hpp"
#include "rmg/version.hpp"

using nlohmann::json;
using namespace rmg;

namespace {

struct Common {
    uint64_t seed = 1;
    int workers = 1;
    std::string out = "-";
    std::string format = "json";
};

uint64_t env_seed() {
    if (const char* s = std::getenv("RMG_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
            std::cerr << "malformed RMG_SEED\n";
            std::exit(65);
        }
    }
    return 1;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "random seed (default: RMG_SEED or 1)");
    cmd->add_option("--workers", c.workers, "worker threads (never affects results)");
    cmd->add_option("--out", c.out, "output path, '-' for stdout");
    cmd->add_option("--format", c.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

void write_output(const Common& c, const std::string& text) {
    if (c.out == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream f(c.out);
    if (!f) {
        std::cerr << "cannot open " << c.out << "\n";
        std::exit(65);
    }
    f << text << '\n';
}

// payload_to_csv: rows under key "rows" become CSV lines, scalars are skipped.
std::string csv_projection(const json& payload) {
    std::ostringstream os;
    if (!payload.contains("rows") || !payload["rows"].is_array()) return os.str();
    const auto& rows = payload["rows"];
    if (rows.empty()) return os.str();
    bool first = true;
    for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
        if (!first) os << ',';
        os << it.key();
        first = false;
    }
    os << '\n';
    for (const auto& row : rows) {
        first = true;
        for (auto it = row.begin(); it != row.end(); ++it) {
            if (!first) os << ',';
            os << it.value().dump();
            first = false;
        }
        os << '\n';
    }
    return os.str();
}

int run_command(const Common& c, json config, const std::function<json()>& op) {
    config["seed"] = c.seed;
    try {
        auto t0 = std::chrono::steady_clock::now();
        json payload = op();
        auto t1 = std::chrono::steady_clock::now();
        if (c.format == "csv") {
            write_output(c, csv_projection(payload));
            return 0;
        }
        json report{{"config", config},
                    {"version", kVersion},
                    {"payload", payload},
                    {"wall_clock_ms",
                     std::chrono::duration<double, std::milli>(t1 - t0).count()}};
        write_output(c, report.dump(2));
        return 0;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 2;
    } catch (const NotFoundError& e) {
        std::cerr << "search failed: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    }
}

CanonicalTester make_tester(int n, int d, int xor_r, double walk_time, bool has_walk) {
    CanonicalTester t = rm_tester(n, d);
    if (xor_r > 1) t = xor_tester(t, xor_r);
    if (has_walk) t = walk_tester(t, walk_time);
    return t;
}

json tester_config(int n, int d, int xor_r, double walk_time, bool has_walk) {
    json j{{"kind", "rm"}, {"n", n}, {"d", d}, {"xor", xor_r}};
    if (has_walk) j["walk_time"] = walk_time;
    return j;
}

// sampler-descriptor schema: {n, d, tester: {kind, r, walk_time}, seed}
json sampler_descriptor(int n, int d, int xor_r, double walk_time, bool has_walk,
                        uint64_t seed) {
    json t{{"kind", "rm"}, {"r", xor_r}};
    t["walk_time"] = has_walk ? json(walk_time) : json(nullptr);
    return json{{"n", n}, {"d", d}, {"tester", t}, {"seed", seed}};
}

json point_json(const SoundnessPoint& p, const char* mode) {
    json j{{"k", p.k},
           {"s_lower", p.s_lower},
           {"witness_hex", p.witness.to_hex()},
           {"witness_degree", p.witness_degree},
           {"mode", mode}};
    if (p.denom > 0) {
        j["reject_count"] = p.reject_count;
        j["denom"] = p.denom;
    }
    return j;
}

CodeFunction parse_function(const std::string& spec, const CanonicalTester& t) {
    const auto& D = t.dual_code;
    if (spec.rfind("dictator:", 0) == 0) {
        std::size_t coord = std::stoul(spec.substr(9));
        if (coord >= D.block_len) throw PreconditionError("coordinate out of range");
        BitWord e(D.block_len);
        e.set(coord, true);
        uint32_t beta = pairing_index(t.code, e);
        std::vector<double> vals(std::size_t(1) << D.dim);
        for (std::size_t x = 0; x < vals.size(); ++x)
            vals[x] = (std::popcount(uint32_t(x) & beta) & 1) ? -1.0 : 1.0;
        return dense_function(D, std::move(vals));
    }
    if (spec.rfind("file:", 0) == 0) return load_function(spec.substr(5));
    throw PreconditionError("unknown function spec: " + spec);
}

MultilinearPoly parse_poly(const std::string& spec, std::size_t nvars) {
    MultilinearPoly p;
    p.nvars = nvars;
    if (spec == "sum") {
        const double c = 1.0 / std::sqrt(double(nvars));
        for (uint32_t i = 0; i < nvars; ++i) p.terms.push_back({{i}, c});
        return p;
    }
    std::ifstream in(spec);
    if (!in) throw PreconditionError("cannot open polynomial spec " + spec);
    json j;
    try {
        in >> j;
    } catch (...) {
        std::cerr << "malformed polynomial spec\n";
        std::exit(65);
    }
    for (const auto& term : j.at("terms")) {
        MultilinearPoly::Term t;
        for (const auto& v : term.at("vars")) t.vars.push_back(v.get<uint32_t>());
        std::sort(t.vars.begin(), t.vars.end());
        t.coeff = term.at("coeff").get<double>();
        p.terms.push_back(std::move(t));
    }
    return p;
}

Dist parse_dist(const std::string& s) {
    if (s == "cube") return Dist::cube;
    if (s == "rm") return Dist::rm;
    if (s == "gaussian") return Dist::gaussian;
    throw PreconditionError("unknown distribution: " + s);
}

OuterInstance parse_outer(const std::string& spec, int n) {
    OuterInstance outer;
    if (spec == "single") {
        outer.vertices = 1;
        outer.edges = {{0, 0, 0}};
        return outer;
    }
    if (spec.rfind("pair:", 0) == 0) {
        outer.vertices = 2;
        uint32_t shift = uint32_t(std::stoul(spec.substr(5), nullptr, 16));
        outer.edges = {{0, 1, shift}};
        return outer;
    }
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) throw PreconditionError("cannot open outer instance");
        json j;
        in >> j;
        outer.vertices = j.at("vertices").get<std::size_t>();
        for (const auto& e : j.at("edges"))
            outer.edges.push_back({e.at("u").get<uint32_t>(), e.at("v").get<uint32_t>(),
                                   e.at("shift").get<uint32_t>()});
        return outer;
    }
    (void)n;
    throw PreconditionError("unknown outer spec: " + spec);
}

json outer_json(const OuterInstance& o) {
    json edges = json::array();
    for (const auto& e : o.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"shift", e.shift}});
    return json{{"vertices", o.vertices}, {"edges", edges}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reed-Muller code graphs: testers, spectra, gap instances"};
    app.require_subcommand(1);

    // Every leaf stores a closure to run after parsing.
    std::function<int()> action;

    // ---------------------------------------------------------------- code
    auto* code = app.add_subcommand("code", "code construction and export");
    code->require_subcommand(1);
    {
        static Common c;
        static int n = 5, d = 2;
        auto* info = code->add_subcommand("info", "parameters of RM(n,d) and its dual");
        info->add_option("--n", n)->required();
        info->add_option("--d", d)->required();
        c.seed = env_seed();
        add_common(info, c);
        info->callback([&] {
            action = [&] {
                json cfg{{"command", "code info"}, {"n", n}, {"d", d}};
                return run_command(c, cfg, [&] {
                    RMCode D = build_rm(n, d);
                    auto words = min_weight_words(D);
                    json j{{"n", n},
                           {"d", d},
                           {"dim", D.dim},
                           {"block_len", D.block_len},
                           {"min_weight", std::size_t(1) << (n - d)},
                           {"min_weight_count", words.size()},
                           {"dual", "RM(" + std::to_string(n) + "," +
                                        std::to_string(n - d - 1) + ")"}};
                    return j;
                });
            };
        });

        static Common cd;
        static int nn = 4, rr = 2;
        auto* dump = code->add_subcommand("dump", "descriptor and hex-packed generators");
        dump->add_option("--n", nn)->required();
        dump->add_option("--r", rr)->required();
        cd.seed = env_seed();
        add_common(dump, cd);
        dump->callback([&] {
            action = [&] {
                json cfg{{"command", "code dump"}, {"n", nn}, {"r", rr}};
                return run_command(cd, cfg, [&] {
                    RMCode code_ = build_rm(nn, rr);
                    json j = json::parse(descriptor_json(code_));
                    j["generators_hex"] = hex_rows(code_.generators);
                    return j;
                });
            };
        });
    }

    // -------------------------------------------------------------- tester
    auto* tester_cmd = app.add_subcommand("tester", "canonical tester analysis");
    tester_cmd->require_subcommand(1);
    {
        static Common c;
        static int n = 5, d = 2, xr = 1, kmax = 3;
        static double walk = 0;
        static bool has_walk = false;
        static std::string mode = "exact";
        static std::size_t candidates = 200, mc = 20000;
        auto* curve = tester_cmd->add_subcommand("curve", "soundness curve");
        curve->add_option("--n", n)->required();
        curve->add_option("--d", d)->required();
        curve->add_option("--xor", xr);
        curve->add_option("--walk", walk)->each([&](const std::string&) { has_walk = true; });
        curve->add_option("--kmax", kmax);
        curve->add_option("--mode", mode)->check(CLI::IsMember({"exact", "sampled"}));
        curve->add_option("--candidates", candidates);
        curve->add_option("--mc-samples", mc);
        c.seed = env_seed();
        add_common(curve, c);
        curve->callback([&] {
            action = [&] {
                json cfg{{"command", "tester curve"},
                         {"tester", tester_config(n, d, xr, walk, has_walk)},
                         {"kmax", kmax},
                         {"mode", mode},
                         {"candidates", candidates}};
                return run_command(c, cfg, [&] {
                    auto t = make_tester(n, d, xr, walk, has_walk);
                    auto sm = smoothness_report(t);
                    auto cm = mode == "exact" ? CurveMode::exact : CurveMode::sampled;
                    auto crv = soundness_curve(t, kmax, cm, candidates,
                                               cm == CurveMode::sampled
                                                   ? std::optional<std::size_t>(mc)
                                                   : std::nullopt,
                                               c.seed);
                    json points = json::array(), rows = json::array();
                    for (const auto& p : crv.at_least) {
                        points.push_back(point_json(p, mode.c_str()));
                        rows.push_back(json{{"k", p.k},
                                            {"s", p.s_lower},
                                            {"lambda", 1.0 - 2.0 * p.s_lower}});
                    }
                    json j{{"params", json{{"n", n},
                                           {"d", d},
                                           {"xor", xr},
                                           {"kmax", kmax},
                                           {"mode", mode}}},
                           {"points", points},
                           {"rows", rows},
                           {"smooth", sm.smooth},
                           {"two_smooth", sm.two_smooth},
                           {"tau", sm.tau}};
                    if (!crv.exact_degree.empty()) {
                        json ed = json::array();
                        for (const auto& p : crv.exact_degree)
                            ed.push_back(point_json(p, "exact"));
                        j["exact_degree_points"] = ed;
                    }
                    return j;
                });
            };
        });

        static Common cs;
        static int n2 = 5, d2 = 2, xr2 = 1;
        static double walk2 = 0;
        static bool has_walk2 = false, full_pairs = false;
        auto* smooth = tester_cmd->add_subcommand("smooth", "smoothness report");
        smooth->add_option("--n", n2)->required();
        smooth->add_option("--d", d2)->required();
        smooth->add_option("--xor", xr2);
        smooth->add_option("--walk", walk2)->each([&](const std::string&) { has_walk2 = true; });
        smooth->add_flag("--full-pairs", full_pairs, "emit the full pair table");
        cs.seed = env_seed();
        add_common(smooth, cs);
        smooth->callback([&] {
            action = [&] {
                json cfg{{"command", "tester smooth"},
                         {"tester", tester_config(n2, d2, xr2, walk2, has_walk2)}};
                return run_command(cs, cfg, [&] {
                    auto rep = smoothness_report(make_tester(n2, d2, xr2, walk2, has_walk2));
                    json j{{"tau", rep.tau},
                           {"smooth", rep.smooth},
                           {"two_smooth", rep.two_smooth},
                           {"exact_integer", rep.exact_integer},
                           {"max_single_dev", rep.max_single_dev},
                           {"max_pair_dev", rep.max_pair_dev},
                           {"single", rep.single}};
                    if (full_pairs) j["pair"] = rep.pair;
                    return j;
                });
            };
        });
    }

    // ------------------------------------------------------------ spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Cayley graph spectral analysis");
    spectrum->require_subcommand(1);
    {
        static Common c;
        static int n = 5, d = 2, xr = 1, kmax = 3;
        static double walk = 0;
        static bool has_walk = false;
        auto* profile = spectrum->add_subcommand("profile", "per-degree eigenvalue profile");
        profile->add_option("--n", n)->required();
        profile->add_option("--d", d)->required();
        profile->add_option("--xor", xr);
        profile->add_option("--walk", walk)->each([&](const std::string&) { has_walk = true; });
        profile->add_option("--kmax", kmax);
        c.seed = env_seed();
        add_common(profile, c);
        profile->callback([&] {
            action = [&] {
                json cfg{{"command", "spectrum profile"},
                         {"tester", tester_config(n, d, xr, walk, has_walk)},
                         {"kmax", kmax}};
                return run_command(c, cfg, [&] {
                    auto t = make_tester(n, d, xr, walk, has_walk);
                    auto table = build_coset_table(t.code);
                    auto lam = base_lambda_table(t, table);
                    std::size_t maxdeg = 0;
                    for (std::size_t i = 0; i < table.size(); ++i)
                        maxdeg = std::max<std::size_t>(maxdeg, table.degree[i]);
                    std::vector<double> lmin(maxdeg + 1, 2), lmax(maxdeg + 1, -2),
                        smin(maxdeg + 1, 2);
                    std::vector<std::size_t> count(maxdeg + 1, 0);
                    for (std::size_t i = 0; i < table.size(); ++i) {
                        double l = t.transform_mu(lam[i]);
                        std::size_t deg = table.degree[i];
                        lmin[deg] = std::min(lmin[deg], l);
                        lmax[deg] = std::max(lmax[deg], l);
                        smin[deg] = std::min(smin[deg], 0.5 * (1 - l));
                        count[deg] += 1;
                    }
                    json rows = json::array();
                    for (std::size_t k = 0; k <= std::min<std::size_t>(kmax, maxdeg); ++k) {
                        double s_at_least = 2;
                        for (std::size_t dd = k; dd <= maxdeg; ++dd)
                            s_at_least = std::min(s_at_least, smin[dd]);
                        rows.push_back(json{{"k", k},
                                            {"s", s_at_least},
                                            {"lambda_max", lmax[k]},
                                            {"lambda_min", lmin[k]},
                                            {"count", count[k]}});
                    }
                    auto prof = dictator_profile(make_cayley(t));
                    return json{{"rows", rows},
                                {"dictator_lambda", prof.records.front().lambda},
                                {"dictator_count_large", prof.count_large},
                                {"eps", prof.eps}};
                });
            };
        });

        static Common ce;
        static int n2 = 5, d2 = 2, xr2 = 1;
        static double walk2 = 0;
        static bool has_walk2 = false;
        static std::string set_file;
        static std::size_t random_m = 0, sets = 1, samples = 100000;
        auto* exp = spectrum->add_subcommand("expansion", "set expansion");
        exp->add_option("--n", n2)->required();
        exp->add_option("--d", d2)->required();
        exp->add_option("--xor", xr2);
        exp->add_option("--walk", walk2)->each([&](const std::string&) { has_walk2 = true; });
        exp->add_option("--set-file", set_file);
        exp->add_option("--random", random_m);
        exp->add_option("--sets", sets);
        exp->add_option("--samples", samples);
        ce.seed = env_seed();
        add_common(exp, ce);
        exp->callback([&] {
            action = [&] {
                json cfg{{"command", "spectrum expansion"},
                         {"tester", tester_config(n2, d2, xr2, walk2, has_walk2)},
                         {"random", random_m},
                         {"sets", sets},
                         {"samples", samples},
                         {"set_file", set_file}};
                return run_command(ce, cfg, [&] {
                    auto g = make_cayley(make_tester(n2, d2, xr2, walk2, has_walk2));
                    json rows = json::array();
                    auto emit = [&](const std::vector<uint32_t>& verts, uint64_t seed) {
                        auto rec = g.tester.plain() && verts.size() * g.tester.support.size() <
                                                           (std::size_t(1) << 26)
                                       ? expansion_explicit(g, verts)
                                       : expansion_explicit(g, verts, samples, seed,
                                                            ce.workers);
                        rows.push_back(json{{"size", rec.set_size},
                                            {"mu", rec.mu},
                                            {"phi", rec.phi},
                                            {"stderr", rec.stderr_},
                                            {"exact", rec.exact}});
                    };
                    if (!set_file.empty()) {
                        std::ifstream in(set_file);
                        if (!in) throw PreconditionError("cannot open set file");
                        std::vector<uint32_t> verts;
                        uint32_t v;
                        while (in >> v) verts.push_back(v);
                        emit(verts, ce.seed);
                    } else {
                        if (random_m == 0)
                            throw PreconditionError("need --set-file or --random");
                        Rng root(ce.seed);
                        for (std::size_t s = 0; s < sets; ++s) {
                            Rng rng = root.split(s);
                            emit(random_vertex_set(g, random_m, rng), rng.u64());
                        }
                    }
                    double phimin = 2;
                    for (const auto& r : rows) phimin = std::min(phimin, r["phi"].get<double>());
                    return json{{"rows", rows}, {"phi_min", phimin}};
                });
            };
        });

        static Common ch;
        static int n3 = 6, d3 = 3, ell = 3, trials = 100, sparsity = 8;
        auto* hyper = spectrum->add_subcommand("hyper", "hypercontractivity check");
        hyper->add_option("--n", n3)->required();
        hyper->add_option("--d", d3)->required();
        hyper->add_option("--ell", ell);
        hyper->add_option("--trials", trials);
        hyper->add_option("--sparsity", sparsity);
        ch.seed = env_seed();
        add_common(hyper, ch);
        hyper->callback([&] {
            action = [&] {
                json cfg{{"command", "spectrum hyper"}, {"n", n3},      {"d", d3},
                         {"ell", ell},                  {"trials", trials},
                         {"sparsity", sparsity}};
                return run_command(ch, cfg, [&] {
                    auto rep = hypercontractivity_check(build_rm(n3, d3), ell, trials,
                                                        sparsity, ch.seed);
                    return json{{"max_identity_gap", rep.max_identity_gap},
                                {"identity_exact", rep.identity_exact},
                                {"max_norm_ratio", rep.max_norm_ratio},
                                {"norm_bound_holds", rep.norm_bound_holds}};
                });
            };
        });
    }

    // ------------------------------------------------------------- fourier
    auto* fourier = app.add_subcommand("fourier", "functions on the dual code");
    fourier->require_subcommand(1);
    {
        static Common c;
        static int n = 5, d = 2, ell = 2;
        static std::string fn = "dictator:0";
        auto* infl = fourier->add_subcommand("influences", "low-degree influences");
        infl->add_option("--n", n)->required();
        infl->add_option("--d", d)->required();
        infl->add_option("--ell", ell);
        infl->add_option("--fn", fn, "dictator:i | file:path");
        c.seed = env_seed();
        add_common(infl, c);
        infl->callback([&] {
            action = [&] {
                json cfg{{"command", "fourier influences"},
                         {"n", n},
                         {"d", d},
                         {"ell", ell},
                         {"fn", fn}};
                return run_command(c, cfg, [&] {
                    auto t = rm_tester(n, d);
                    auto table = build_coset_table(t.code);
                    auto f = parse_function(fn, t);
                    auto rep = influences(f, ell, table);
                    double mx = 0, sum = 0;
                    for (double v : rep.inf) {
                        mx = std::max(mx, v);
                        sum += v;
                    }
                    return json{{"influences", rep.inf},
                                {"max_influence", mx},
                                {"sum", sum},
                                {"variance", rep.variance},
                                {"ell", ell}};
                });
            };
        });

        static Common cs;
        static int n2 = 5, d2 = 2, xr2 = 1;
        static double walk2 = 0;
        static bool has_walk2 = false;
        static std::string fn2 = "dictator:0";
        auto* stab = fourier->add_subcommand("stability", "noise stability <f,Gf>");
        stab->add_option("--n", n2)->required();
        stab->add_option("--d", d2)->required();
        stab->add_option("--xor", xr2);
        stab->add_option("--walk", walk2)->each([&](const std::string&) { has_walk2 = true; });
        stab->add_option("--fn", fn2, "dictator:i | file:path");
        cs.seed = env_seed();
        add_common(stab, cs);
        stab->callback([&] {
            action = [&] {
                json cfg{{"command", "fourier stability"},
                         {"tester", tester_config(n2, d2, xr2, walk2, has_walk2)},
                         {"fn", fn2}};
                return run_command(cs, cfg, [&] {
                    auto t = make_tester(n2, d2, xr2, walk2, has_walk2);
                    auto table = build_coset_table(t.code);
                    auto f = parse_function(fn2, t);
                    auto fhat = wht(f);
                    return json{{"stability", noise_stability(f, t, table)},
                                {"mean", fhat[0]}};
                });
            };
        });
    }

    // ---------------------------------------------------------- invariance
    auto* inv = app.add_subcommand("invariance", "invariance-principle harnesses");
    inv->require_subcommand(1);
    {
        static Common c;
        static double rho = 0.5, mu = 0.5;
        auto* gamma = inv->add_subcommand("gamma", "Gaussian stability curve");
        gamma->add_option("--rho", rho)->required();
        gamma->add_option("--mu", mu)->required();
        c.seed = env_seed();
        add_common(gamma, c);
        gamma->callback([&] {
            action = [&] {
                json cfg{{"command", "invariance gamma"}, {"rho", rho}, {"mu", mu}};
                return run_command(c, cfg,
                                   [&] { return json{{"gamma", gamma_rho(rho, mu)}}; });
            };
        });

        static Common cg;
        static int n = 7, d = 3;
        static std::string poly = "sum", psi = "zeta", dists = "cube,rm";
        static std::size_t samples = 100000;
        auto* gap = inv->add_subcommand("gap", "E[psi(P)] gap between distributions");
        gap->add_option("--poly", poly, "path to spec JSON, or 'sum'");
        gap->add_option("--psi", psi)->check(CLI::IsMember({"zeta", "sign"}));
        gap->add_option("--dists", dists, "comma pair from cube,rm,gaussian");
        gap->add_option("--n", n)->required();
        gap->add_option("--d", d)->required();
        gap->add_option("--samples", samples);
        cg.seed = env_seed();
        add_common(gap, cg);
        gap->callback([&] {
            action = [&] {
                json cfg{{"command", "invariance gap"}, {"poly", poly},
                         {"psi", psi},                  {"dists", dists},
                         {"n", n},                      {"d", d},
                         {"samples", samples}};
                return run_command(cg, cfg, [&] {
                    auto p = parse_poly(poly, std::size_t(1) << n);
                    auto comma = dists.find(',');
                    if (comma == std::string::npos)
                        throw PreconditionError("need two comma-separated distributions");
                    auto rep = invariance_gap(
                        p, psi == "zeta" ? Psi::zeta_fn : Psi::sign_fn,
                        parse_dist(dists.substr(0, comma)), parse_dist(dists.substr(comma + 1)),
                        n, d, samples, cg.seed, cg.workers);
                    return json{{"mean_a", rep.mean_a},
                                {"mean_b", rep.mean_b},
                                {"gap", rep.gap},
                                {"stderr", rep.stderr_},
                                {"samples", rep.samples},
                                {"eps_reg", regularity(p).eps_reg}};
                });
            };
        });

        static Common cm;
        static int n2 = 3, d2 = 1, cblock = -1;
        static std::size_t samples2 = 100000;
        auto* mz = inv->add_subcommand("mz-check", "bucket-sampler uniformity");
        mz->add_option("--n", n2)->required();
        mz->add_option("--d", d2)->required();
        mz->add_option("--c", cblock, "block bits (default max(1, d-1))");
        mz->add_option("--samples", samples2);
        cm.seed = env_seed();
        add_common(mz, cm);
        mz->callback([&] {
            action = [&] {
                int cb = cblock > 0 ? cblock : default_mz_block(d2);
                json cfg{{"command", "invariance mz-check"},
                         {"n", n2},
                         {"d", d2},
                         {"c", cb},
                         {"samples", samples2}};
                return run_command(cm, cfg, [&] {
                    auto rep = mz_uniformity(n2, d2, cb, samples2, cm.seed);
                    return json{{"cells", rep.cells},
                                {"max_abs_z", rep.max_abs_z},
                                {"within_3sigma", rep.within_3sigma},
                                {"chi2", rep.chi2},
                                {"pvalue", rep.pvalue}};
                });
            };
        });
    }

    // ------------------------------------------------------------------ ug
    auto* ug = app.add_subcommand("ug", "unique-games gap instances");
    ug->require_subcommand(1);
    {
        static Common c;
        static int n = 3, d = 1, xr = 1;
        static std::string mode = "materialize", inst_out = "instance.max2lin";
        auto* gen = ug->add_subcommand("gen", "emit an instance");
        gen->add_option("--n", n)->required();
        gen->add_option("--d", d)->required();
        gen->add_option("--xor", xr);
        gen->add_option("--mode", mode)->check(CLI::IsMember({"materialize", "sampler"}));
        gen->add_option("--inst-out", inst_out,
                        "instance file (max2lin text / sampler JSON)");
        c.seed = env_seed();
        add_common(gen, c);
        gen->callback([&] {
            action = [&] {
                json cfg{{"command", "ug gen"},  {"n", n},
                         {"d", d},               {"xor", xr},
                         {"mode", mode},         {"inst_out", inst_out}};
                return run_command(c, cfg, [&] {
                    if (mode == "sampler") {
                        json desc = sampler_descriptor(n, d, xr, 0, false, c.seed);
                        std::ofstream f(inst_out);
                        if (!f) throw PreconditionError("cannot open " + inst_out);
                        f << desc.dump(2) << "\n";
                        return json{{"descriptor", desc}, {"file", inst_out}};
                    }
                    auto g = build_gamma_instance(n, d, make_tester(n, d, xr, 0, false));
                    auto inst = g.materialize();
                    write_max2lin(inst, inst_out);
                    return json{{"vars", inst.num_vars},
                                {"group_bits", inst.group_bits},
                                {"constraints", inst.constraints.size()},
                                {"file", inst_out}};
                });
            };
        });

        static Common cv;
        static int n2 = 7, d2 = 3, xr2 = 1;
        static double walk2 = 0;
        static bool has_walk2 = false;
        static std::size_t trials = 10000;
        auto* sdp = ug->add_subcommand("sdp", "SDP value and feasibility probes");
        sdp->add_option("--n", n2)->required();
        sdp->add_option("--d", d2)->required();
        sdp->add_option("--xor", xr2);
        sdp->add_option("--walk", walk2)->each([&](const std::string&) { has_walk2 = true; });
        sdp->add_option("--trials", trials);
        cv.seed = env_seed();
        add_common(sdp, cv);
        sdp->callback([&] {
            action = [&] {
                json cfg{{"command", "ug sdp"},
                         {"tester", tester_config(n2, d2, xr2, walk2, has_walk2)},
                         {"trials", trials}};
                return run_command(cv, cfg, [&] {
                    auto t = make_tester(n2, d2, xr2, walk2, has_walk2);
                    auto val = sdp_value(t);
                    ImplicitSDP sdp_{t.dual_code, hadamard_subcode(t.dual_code)};
                    auto feas = sdp_feasibility_check(sdp_, trials, cv.seed);
                    json j{{"sdp_value", val.value},
                           {"orthonormal", feas.orthonormal},
                           {"nonnegative", feas.nonnegative},
                           {"norm_sum_exact", feas.norm_sum_exact},
                           {"R", feas.R}};
                    if (val.paper_bound) j["lower_bound"] = *val.paper_bound;
                    return j;
                });
            };
        });

        static Common ce2;
        static std::string inst_path, desc_path, labeling = "constant:0";
        static int n3 = 5, d3 = 2, xr3 = 1;
        static std::size_t samples3 = 100000;
        auto* eval = ug->add_subcommand("eval", "evaluate a labeling");
        eval->add_option("--inst", inst_path, "materialized .max2lin file");
        eval->add_option("--desc", desc_path, "sampler descriptor JSON");
        eval->add_option("--n", n3);
        eval->add_option("--d", d3);
        eval->add_option("--xor", xr3);
        eval->add_option("--labeling", labeling, "constant:h | random");
        eval->add_option("--samples", samples3);
        ce2.seed = env_seed();
        add_common(eval, ce2);
        eval->callback([&] {
            action = [&] {
                json cfg{{"command", "ug eval"},   {"inst", inst_path},
                         {"desc", desc_path},      {"labeling", labeling},
                         {"n", n3},                {"d", d3},
                         {"xor", xr3},             {"samples", samples3}};
                return run_command(ce2, cfg, [&] {
                    auto make_labeling = [&](int bits) {
                        if (labeling == "random") return random_labeling(ce2.seed, bits);
                        if (labeling.rfind("constant:", 0) == 0)
                            return constant_labeling(
                                uint32_t(std::stoul(labeling.substr(9), nullptr, 16)));
                        throw PreconditionError("unknown labeling: " + labeling);
                    };
                    if (!inst_path.empty()) {
                        auto inst = read_max2lin(inst_path);
                        auto res = evaluate_labeling(inst, make_labeling(inst.group_bits));
                        return json{{"value", res.value}, {"exact", res.exact}};
                    }
                    int n = n3, d = d3, xr = xr3;
                    double walk = 0;
                    bool has_walk = false;
                    if (!desc_path.empty()) {
                        std::ifstream in(desc_path);
                        if (!in) throw PreconditionError("cannot open " + desc_path);
                        json desc;
                        try {
                            in >> desc;
                        } catch (...) {
                            std::cerr << "malformed sampler descriptor\n";
                            std::exit(65);
                        }
                        n = desc.at("n").get<int>();
                        d = desc.at("d").get<int>();
                        const auto& t = desc.at("tester");
                        xr = t.value("r", 1);
                        if (t.contains("walk_time") && !t["walk_time"].is_null()) {
                            walk = t["walk_time"].get<double>();
                            has_walk = true;
                        }
                    }
                    auto g = build_gamma_instance(n, d, make_tester(n, d, xr, walk, has_walk));
                    auto res = evaluate_labeling_sampled(g, make_labeling(g.group_bits),
                                                         samples3, ce2.seed, ce2.workers);
                    return json{{"value", res.value},
                                {"stderr", res.stderr_},
                                {"exact", res.exact}};
                });
            };
        });

        static Common cb;
        static int n4 = 5, d4 = 2, xr4 = 1, kmax4 = -1;
        auto* bound = ug->add_subcommand("bound", "soundness upper bound");
        bound->add_option("--n", n4)->required();
        bound->add_option("--d", d4)->required();
        bound->add_option("--xor", xr4);
        bound->add_option("--kmax", kmax4);
        cb.seed = env_seed();
        add_common(bound, cb);
        bound->callback([&] {
            action = [&] {
                json cfg{{"command", "ug bound"},
                         {"n", n4},
                         {"d", d4},
                         {"xor", xr4},
                         {"kmax", kmax4}};
                return run_command(cb, cfg, [&] {
                    auto t = make_tester(n4, d4, xr4, 0, false);
                    const std::size_t D = t.code.min_distance();
                    std::size_t kmax = kmax4 > 0 ? kmax4 : D / 5;
                    auto crv = soundness_curve(t, kmax, CurveMode::exact);
                    std::vector<double> s;
                    for (const auto& p : crv.at_least) s.push_back(p.s_lower);
                    auto b = soundness_bound(s, std::size_t(1) << n4, D, true);
                    return json{{"bound", b.bound},
                                {"argmin_k", b.argmin_k},
                                {"curve_exact", b.curve_exact},
                                {"R", std::size_t(1) << n4},
                                {"D", D}};
                });
            };
        });
    }

    // ---------------------------------------------------------------- dict
    auto* dict = app.add_subcommand("dict", "2-query dictatorship test");
    dict->require_subcommand(1);
    {
        static Common c;
        static int n = 5, d = 2, t = 2;
        static double eps = 0.1;
        static std::string fn = "dictator:0";
        static std::size_t samples = 100000;
        auto* test = dict->add_subcommand("test", "run the folded 2-query test");
        test->add_option("--n", n)->required();
        test->add_option("--d", d)->required();
        test->add_option("--t", t)->required();
        test->add_option("--eps", eps)->required();
        test->add_option("--fn", fn, "dictator:beta | random | constant:q");
        test->add_option("--samples", samples);
        c.seed = env_seed();
        add_common(test, c);
        test->callback([&] {
            action = [&] {
                json cfg{{"command", "dict test"}, {"n", n},       {"d", d},
                         {"t", t},                 {"eps", eps},   {"fn", fn},
                         {"samples", samples}};
                return run_command(c, cfg, [&] {
                    auto ctx = make_alpha_context(n, d, t);
                    FoldedFunction f;
                    if (fn.rfind("dictator:", 0) == 0) {
                        f.kind = FoldedFunction::Kind::dictator;
                        f.beta_point = uint32_t(std::stoul(fn.substr(9)));
                        if (f.beta_point >= ctx.points())
                            throw PreconditionError("dictator position out of range");
                    } else if (fn == "random") {
                        f.kind = FoldedFunction::Kind::random_hash;
                        f.seed = c.seed ^ 0xf01dedull;
                    } else if (fn.rfind("constant:", 0) == 0) {
                        f.kind = FoldedFunction::Kind::constant_base;
                        f.q0 = uint32_t(std::stoul(fn.substr(9), nullptr, 16));
                        f.seed = c.seed ^ 0xf01dedull;
                    } else {
                        throw PreconditionError("unknown function spec: " + fn);
                    }
                    auto rep = dict_test(ctx, f, eps, samples, c.seed, c.workers);
                    return json{{"acceptance", rep.acceptance},
                                {"stderr", rep.stderr_},
                                {"samples", rep.samples},
                                {"Q", std::size_t(1) << t}};
                });
            };
        });
    }

    // ----------------------------------------------------------------- psi
    auto* psi = app.add_subcommand("psi", "composed alphabet-reduction instances");
    psi->require_subcommand(1);
    {
        static Common c;
        static int n = 5, d = 2, t = 2;
        static double eps = 0.1;
        static std::string outer = "single";
        auto* gen = psi->add_subcommand("gen", "emit a composed-instance descriptor");
        gen->add_option("--n", n)->required();
        gen->add_option("--d", d)->required();
        gen->add_option("--t", t)->required();
        gen->add_option("--eps", eps)->required();
        gen->add_option("--outer", outer, "single | pair:<hex shift> | file:path");
        c.seed = env_seed();
        add_common(gen, c);
        gen->callback([&] {
            action = [&] {
                json cfg{{"command", "psi gen"}, {"n", n},       {"d", d},
                         {"t", t},               {"eps", eps},   {"outer", outer}};
                return run_command(c, cfg, [&] {
                    auto o = parse_outer(outer, n);
                    auto inst = build_psi_instance(o, n, d, t, eps);
                    json desc = sampler_descriptor(n, d, 1, 0, false, c.seed);
                    desc["kind"] = "psi";
                    desc["t"] = t;
                    desc["eps"] = eps;
                    desc["outer"] = outer_json(inst.outer);
                    desc["vertex_space"] = json{{"outer_vertices", inst.outer.vertices},
                                                {"inner_bits", inst.ctx.dim() * t}};
                    return json{{"descriptor", desc}};
                });
            };
        });

        static Common ce3;
        static int n2 = 5, d2 = 2, t2 = 2;
        static double eps2 = 0.1;
        static std::string outer2 = "single", labeling2 = "dictator:0";
        static std::size_t samples2 = 100000;
        auto* ev = psi->add_subcommand("eval", "evaluate a labeling of the composed instance");
        ev->add_option("--n", n2)->required();
        ev->add_option("--d", d2)->required();
        ev->add_option("--t", t2)->required();
        ev->add_option("--eps", eps2)->required();
        ev->add_option("--outer", outer2);
        ev->add_option("--labeling", labeling2, "dictator:b0[,b1,...] | random");
        ev->add_option("--samples", samples2);
        ce3.seed = env_seed();
        add_common(ev, ce3);
        ev->callback([&] {
            action = [&] {
                json cfg{{"command", "psi eval"},     {"n", n2},
                         {"d", d2},                   {"t", t2},
                         {"eps", eps2},               {"outer", outer2},
                         {"labeling", labeling2},     {"samples", samples2}};
                return run_command(ce3, cfg, [&] {
                    auto o = parse_outer(outer2, n2);
                    auto inst = build_psi_instance(o, n2, d2, t2, eps2);
                    PsiLabeling lab;
                    if (labeling2 == "random") {
                        lab.kind = PsiLabeling::Kind::random_folded;
                        lab.seed = ce3.seed ^ 0x1abe1ull;
                    } else if (labeling2.rfind("dictator:", 0) == 0) {
                        lab.kind = PsiLabeling::Kind::translated_dictator;
                        std::stringstream ss(labeling2.substr(9));
                        std::string tok;
                        while (std::getline(ss, tok, ','))
                            lab.beta.push_back(uint32_t(std::stoul(tok)));
                        if (lab.beta.size() == 1)
                            lab.beta.assign(inst.outer.vertices, lab.beta[0]);
                    } else {
                        throw PreconditionError("unknown labeling: " + labeling2);
                    }
                    auto rep = psi_eval(inst, lab, samples2, ce3.seed, ce3.workers);
                    return json{{"acceptance", rep.acceptance},
                                {"stderr", rep.stderr_},
                                {"samples", rep.samples}};
                });
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ExtrasError& e) {
        std::cerr << e.what() << "\n";
        return 64;
    } catch (const CLI::RequiredError& e) {
        // missing subcommand = unknown command; missing option = bad config
        std::string what = e.what();
        std::cerr << what << "\n";
        return what.find("subcommand") != std::string::npos ? 64 : 65;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 65;
    }

    if (!action) {
        std::cerr << "no command selected\n";
        return 64;
    }
    return action();
}
