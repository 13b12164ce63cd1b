#include "rmg/uggap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rmg/parallel.hpp"

namespace rmg {

GammaInstance build_gamma_instance(int n, int d, CanonicalTester tester) {
    if (tester.dual_code.n != n || tester.dual_code.r != d)
        throw PreconditionError("tester does not match RM(n,d)");
    GammaInstance g;
    g.hadamard = hadamard_subcode(tester.dual_code);
    g.step_coords = support_coords(tester);
    GF2Solver solver(tester.dual_code.generators);
    for (const auto& row : g.hadamard.generators.rows) {
        auto c = solver.decompose(row);
        if (!c) throw PreconditionError("Hadamard word outside the dual code");
        uint32_t x = 0;
        for (std::size_t j = 0; j < c->size(); ++j)
            if (c->get(j)) x |= uint32_t(1) << j;
        g.hadamard_coords.push_back(x);
    }
    g.group_bits = n;
    g.num_vars = std::size_t(1) << tester.dual_code.dim;
    g.tester = std::move(tester);
    return g;
}

namespace {

uint32_t hadamard_combo(const std::vector<uint32_t>& basis, uint32_t a) {
    uint32_t h = 0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if ((a >> i) & 1) h ^= basis[i];
    return h;
}

uint32_t sample_step_coords(const GammaInstance& g, Rng& rng) {
    const auto& t = g.tester;
    std::size_t steps = t.walk_time ? rng.poisson(*t.walk_time) : 1;
    uint32_t q = 0;
    for (std::size_t s = 0; s < steps; ++s)
        for (int r = 0; r < t.xor_reps; ++r) {
            std::size_t i;
            if (t.prob.empty()) {
                i = rng.below(g.step_coords.size());
            } else {
                double u = rng.unit();
                i = std::size_t(std::lower_bound(t.cdf.begin(), t.cdf.end(), u) -
                                t.cdf.begin());
                if (i >= g.step_coords.size()) i = g.step_coords.size() - 1;
            }
            q ^= g.step_coords[i];
        }
    return q;
}

}  // namespace

UGConstraint GammaInstance::sample_constraint(Rng& rng) const {
    const uint32_t vmask = uint32_t(num_vars - 1);
    uint32_t c = uint32_t(rng.u64()) & vmask;
    uint32_t a = uint32_t(rng.below(std::size_t(1) << group_bits));
    uint32_t a2 = uint32_t(rng.below(std::size_t(1) << group_bits));
    uint32_t q = sample_step_coords(*this, rng);
    UGConstraint con;
    con.u = c ^ q ^ hadamard_combo(hadamard_coords, a);
    con.v = c ^ hadamard_combo(hadamard_coords, a2);
    con.shift = a ^ a2;
    con.weight = 1.0;
    return con;
}

UGInstance GammaInstance::materialize(std::size_t budget) const {
    if (!tester.plain())
        throw PreconditionError("materialization needs a plain tester");
    const std::size_t R = std::size_t(1) << group_bits;
    const double tuples =
        double(num_vars) * double(R) * double(R) * double(step_coords.size());
    if (tuples > double(budget)) throw BudgetError("materialization budget exceeded");

    // Uniform testers aggregate to integer tuple counts, which keeps exactly
    // representable constraint values (e.g. constant labelings at 1/R).
    const bool integral = tester.uniform();
    std::map<std::tuple<uint32_t, uint32_t, uint32_t>, double> agg;
    std::map<std::tuple<uint32_t, uint32_t, uint32_t>, long long> cnt;
    const double base = 1.0 / tuples;
    for (std::size_t c = 0; c < num_vars; ++c)
        for (std::size_t a = 0; a < R; ++a) {
            uint32_t ha = hadamard_combo(hadamard_coords, uint32_t(a));
            for (std::size_t a2 = 0; a2 < R; ++a2) {
                uint32_t ha2 = hadamard_combo(hadamard_coords, uint32_t(a2));
                for (std::size_t s = 0; s < step_coords.size(); ++s) {
                    uint32_t u = uint32_t(c) ^ step_coords[s] ^ ha;
                    uint32_t v = uint32_t(c) ^ ha2;
                    std::tuple<uint32_t, uint32_t, uint32_t> key{u, v, uint32_t(a ^ a2)};
                    if (integral)
                        cnt[key] += 1;
                    else
                        agg[key] += base * tester.mass(s) * double(step_coords.size());
                }
            }
        }
    UGInstance inst;
    inst.group_bits = group_bits;
    inst.num_vars = num_vars;
    if (integral) {
        inst.total_count = (long long)tuples;
        for (const auto& [key, k] : cnt)
            inst.constraints.push_back(UGConstraint{std::get<0>(key), std::get<1>(key),
                                                    std::get<2>(key),
                                                    double(k) / tuples, k});
    } else {
        for (const auto& [key, w] : agg)
            inst.constraints.push_back(
                UGConstraint{std::get<0>(key), std::get<1>(key), std::get<2>(key), w, -1});
    }
    return inst;
}

SdpValueReport sdp_value(const CanonicalTester& tester) {
    const std::size_t N = tester.word_len();
    SdpValueReport rep;
    if (tester.plain()) {
        double v = 0;
        for (std::size_t i = 0; i < tester.support.size(); ++i) {
            double corr = 1.0 - 2.0 * double(tester.support[i].weight()) / double(N);
            v += tester.uniform() ? corr * corr : tester.prob[i] * corr * corr;
        }
        rep.value = tester.uniform() ? v / double(tester.support.size()) : v;
    } else {
        // E[(mean_i (-1)^{q_i})^2] via exact pair signs pushed through the
        // XOR/walk algebra.
        std::vector<double> p1(N, 0), p2(N * N, 0);
        for (std::size_t s = 0; s < tester.support.size(); ++s) {
            double m = tester.mass(s);
            auto sup = tester.support[s].support();
            for (std::size_t a = 0; a < sup.size(); ++a) {
                p1[sup[a]] += m;
                for (std::size_t b = 0; b < sup.size(); ++b) p2[sup[a] * N + sup[b]] += m;
            }
        }
        double acc = 0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                double pxor = p1[i] + p1[j] - 2.0 * p2[i * N + j];
                acc += tester.transform_mu(1.0 - 2.0 * pxor);
            }
        rep.value = acc / double(N) / double(N);
    }
    if (auto qc = tester.query_complexity()) {
        double b = 1.0 - 2.0 * double(*qc) / double(N);
        rep.paper_bound = b * b;
    }
    return rep;
}

double ImplicitSDP::inner(const BitWord& c, const BitWord& h, const BitWord& c2,
                          const BitWord& h2) const {
    BitWord diff = c ^ h ^ c2 ^ h2;
    double corr = 1.0 - 2.0 * double(diff.weight()) / double(dual_code.block_len);
    return corr * corr;
}

FeasibilityReport sdp_feasibility_check(const ImplicitSDP& sdp, std::size_t trials,
                                        uint64_t seed) {
    FeasibilityReport rep;
    rep.trials = trials;
    rep.R = std::size_t(1) << sdp.hadamard.dim;
    Rng rng(seed);
    const std::size_t N = sdp.dual_code.block_len;

    auto random_codeword = [&](const GF2Matrix& gens) {
        BitWord w(N);
        for (const auto& g : gens.rows)
            if (rng.bit()) w ^= g;
        return w;
    };
    auto hadamard_word = [&](uint32_t a) {
        BitWord w(N);
        for (std::size_t i = 0; i < sdp.hadamard.generators.nrows(); ++i)
            if ((a >> i) & 1) w ^= sdp.hadamard.generators.rows[i];
        return w;
    };

    const uint32_t hmask = uint32_t(rep.R - 1);
    for (std::size_t it = 0; it < trials; ++it) {
        BitWord c = random_codeword(sdp.dual_code.generators);
        uint32_t ia = uint32_t(rng.u64()) & hmask;
        uint32_t ib = uint32_t(rng.u64()) & hmask;
        BitWord ha = hadamard_word(ia), hb = hadamard_word(ib);
        double same_vertex = sdp.inner(c, ha, c, hb);
        double expected = (ia == ib) ? 1.0 : 0.0;
        if (same_vertex != expected) rep.orthonormal = false;

        BitWord c2 = random_codeword(sdp.dual_code.generators);
        double cross = sdp.inner(c, ha, c2, hb);
        if (cross < 0.0 || cross > 1.0) rep.nonnegative = false;
    }
    // Per-vertex norm sum: every diagonal term is exactly 1.
    BitWord c = random_codeword(sdp.dual_code.generators);
    double sum = 0;
    for (std::size_t a = 0; a < rep.R; ++a) {
        BitWord h = hadamard_word(uint32_t(a));
        sum += sdp.inner(c, h, c, h);
    }
    rep.norm_sum_exact = (sum == double(rep.R));
    return rep;
}

Labeling constant_labeling(uint32_t h0) {
    return [h0](uint32_t) { return h0; };
}

Labeling random_labeling(uint64_t seed, int group_bits) {
    const uint32_t mask = uint32_t((std::size_t(1) << group_bits) - 1);
    return [seed, mask](uint32_t v) {
        return uint32_t(splitmix64(seed ^ (uint64_t(v) * 0x9e3779b97f4a7c15ull))) & mask;
    };
}

LabelingResult evaluate_labeling(const UGInstance& inst, const Labeling& l) {
    if (!inst.materialized()) throw PreconditionError("instance not materialized");
    if (inst.integral()) {
        long long sat = 0;
        for (const auto& c : inst.constraints)
            if ((l(c.u) ^ l(c.v)) == c.shift) sat += c.count;
        return LabelingResult{double(sat) / double(inst.total_count), 0.0, true};
    }
    double sat = 0;
    for (const auto& c : inst.constraints)
        if ((l(c.u) ^ l(c.v)) == c.shift) sat += c.weight;
    return LabelingResult{sat, 0.0, true};
}

LabelingResult evaluate_labeling_sampled(const GammaInstance& g, const Labeling& l,
                                         std::size_t samples, uint64_t seed, int workers) {
    const std::size_t chunks =
        std::max<std::size_t>(1, std::min<std::size_t>(64, samples / 2048 + 1));
    std::vector<std::size_t> hits(chunks, 0);
    Rng root(seed);
    parallel_chunks(chunks, workers, [&](std::size_t ci) {
        Rng rng = root.split(ci);
        std::size_t lo = samples * ci / chunks, hi = samples * (ci + 1) / chunks;
        std::size_t h = 0;
        for (std::size_t s = lo; s < hi; ++s) {
            UGConstraint con = g.sample_constraint(rng);
            if ((l(con.u) ^ l(con.v)) == con.shift) ++h;
        }
        hits[ci] = h;
    });
    std::size_t h = 0;
    for (auto v : hits) h += v;
    double p = double(h) / double(samples);
    return LabelingResult{p, std::sqrt(std::max(p * (1 - p), 1e-12) / double(samples)),
                          false};
}

SoundnessBound soundness_bound(const std::vector<double>& s_of_k, std::size_t R,
                               std::size_t code_distance, bool curve_exact) {
    if (s_of_k.empty()) throw PreconditionError("empty soundness curve");
    SoundnessBound out;
    out.curve_exact = curve_exact;
    out.bound = 2.0;
    const std::size_t k_hi = code_distance / 5;
    const double sqrtR = std::sqrt(double(R));
    for (std::size_t k = 0; k <= k_hi; ++k) {
        double s = k < s_of_k.size() ? s_of_k[k] : s_of_k.back();
        double v = 1.0 - 2.0 * s + std::pow(3.0, double(k)) / sqrtR;
        if (v < out.bound) {
            out.bound = v;
            out.argmin_k = k;
        }
    }
    return out;
}

void write_max2lin(const UGInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot open " + path);
    out << "max2lin t=" << inst.group_bits << " vars=" << inst.num_vars << "\n";
    char buf[64];
    for (const auto& c : inst.constraints) {
        std::snprintf(buf, sizeof buf, "%x", c.shift);
        out << c.u << ' ' << c.v << ' ' << buf << ' ';
        out.precision(17);
        out << c.weight << "\n";
    }
}

UGInstance read_max2lin(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::string tag, tkv, vkv;
    in >> tag >> tkv >> vkv;
    if (tag != "max2lin" || tkv.rfind("t=", 0) != 0 || vkv.rfind("vars=", 0) != 0)
        throw PreconditionError("malformed max2lin header");
    UGInstance inst;
    inst.group_bits = std::stoi(tkv.substr(2));
    inst.num_vars = std::stoull(vkv.substr(5));
    uint32_t u, v;
    std::string shift_hex;
    double w;
    while (in >> u >> v >> shift_hex >> w)
        inst.constraints.push_back(
            UGConstraint{u, v, uint32_t(std::stoul(shift_hex, nullptr, 16)), w});
    return inst;
}

}  // namespace rmg
