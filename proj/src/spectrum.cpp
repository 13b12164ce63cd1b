#include "rmg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rmg/parallel.hpp"

namespace rmg {

EigenvalueRecord char_eigenvalue(const CayleyGraph& g, const BitWord& alpha,
                                 std::optional<std::size_t> samples,
                                 std::optional<std::size_t> w_max, uint64_t seed) {
    EigenvalueRecord rec;
    rec.alpha = coset_leader(g.tested_code(), alpha,
                             w_max.value_or(default_leader_budget(g.tested_code())));
    if (!samples) {
        double mu = g.tester.base_mu(alpha);
        rec.lambda = mu;
        rec.lambda_walk = g.tester.transform_mu(mu);
        rec.exact = true;
    } else {
        Rejection rej = rejection_probability(g.tester, alpha, samples, seed);
        rec.lambda_walk = 1.0 - 2.0 * rej.value;
        rec.lambda = rec.lambda_walk;  // sampled path sees the transformed walk only
        rec.stderr_ = 2.0 * rej.stderr_;
        rec.exact = false;
    }
    return rec;
}

DictatorProfile dictator_profile(const CayleyGraph& g) {
    const auto& t = g.tester;
    const std::size_t N = t.word_len();
    DictatorProfile prof;
    prof.support_size = (long long)t.support.size();
    prof.hit_counts.assign(N, 0);

    std::vector<double> base(N, 0);
    for (std::size_t s = 0; s < t.support.size(); ++s) {
        double m = t.mass(s);
        for (std::size_t c : t.support[s].support()) {
            base[c] += m;
            if (t.uniform()) prof.hit_counts[c] += 1;
        }
    }
    if (t.uniform())
        for (std::size_t i = 0; i < N; ++i)
            base[i] = double(prof.hit_counts[i]) / double(t.support.size());
    auto qc = t.query_complexity();
    prof.eps = qc ? double(*qc) / double(N) : t.query_probability();

    for (std::size_t i = 0; i < N; ++i) {
        EigenvalueRecord rec;
        BitWord e(N);
        e.set(i, true);
        rec.alpha = CosetRep{e, e, 1};
        rec.lambda = 1.0 - 2.0 * base[i];
        rec.lambda_walk = t.transform_mu(rec.lambda);
        prof.records.push_back(std::move(rec));
    }
    double thr = 1.0 - 4.0 * prof.eps;
    for (const auto& r : prof.records)
        if (r.lambda >= thr) ++prof.count_large;
    return prof;
}

SetExpansionRecord expansion_explicit(const CayleyGraph& g, const std::vector<uint32_t>& verts,
                                      std::optional<std::size_t> mc_samples, uint64_t seed,
                                      int workers) {
    const std::size_t V = g.num_vertices();
    if (verts.empty()) throw PreconditionError("empty vertex set");
    std::unordered_set<uint32_t> in(verts.begin(), verts.end());
    if (in.size() >= V) throw PreconditionError("set must not cover all vertices");

    SetExpansionRecord rec;
    rec.set_size = in.size();
    rec.mu = double(in.size()) / double(V);

    auto coords = support_coords(g.tester);
    if (!mc_samples && g.tester.plain()) {
        if (g.tester.uniform()) {
            std::size_t leave = 0;
            for (uint32_t u : in)
                for (uint32_t qc : coords)
                    if (!in.count(u ^ qc)) ++leave;
            rec.phi = double(leave) / double(coords.size()) / double(in.size());
        } else {
            double leave = 0;
            for (uint32_t u : in)
                for (std::size_t s = 0; s < coords.size(); ++s)
                    if (!in.count(u ^ coords[s])) leave += g.tester.mass(s);
            rec.phi = leave / double(in.size());
        }
        rec.exact = true;
        return rec;
    }

    const std::size_t total = mc_samples.value_or(100000);
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, total / 2048 + 1));
    std::vector<std::size_t> leave(chunks, 0);
    std::vector<uint32_t> inside(in.begin(), in.end());
    std::sort(inside.begin(), inside.end());
    Rng root(seed);
    parallel_chunks(chunks, workers, [&](std::size_t c) {
        Rng rng = root.split(c);
        std::size_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
        std::size_t out = 0;
        for (std::size_t s = lo; s < hi; ++s) {
            uint32_t u = inside[rng.below(inside.size())];
            // One graph step, performed directly in coefficient space.
            std::size_t steps =
                g.tester.walk_time ? rng.poisson(*g.tester.walk_time) : 1;
            uint32_t q = 0;
            for (std::size_t st = 0; st < steps; ++st)
                for (int r = 0; r < g.tester.xor_reps; ++r)
                    q ^= coords[rng.below(coords.size())];
            if (!in.count(u ^ q)) ++out;
        }
        leave[c] = out;
    });
    std::size_t out = 0;
    for (auto v : leave) out += v;
    rec.phi = double(out) / double(total);
    rec.stderr_ = std::sqrt(std::max(rec.phi * (1 - rec.phi), 1e-12) / double(total));
    rec.exact = false;
    return rec;
}

SetExpansionRecord expansion_dictator_cut(const CayleyGraph& g, std::size_t coord) {
    auto marg = g.tester.coordinate_marginals();
    if (coord >= marg.size()) throw PreconditionError("coordinate out of range");
    SetExpansionRecord rec;
    rec.set_size = g.num_vertices() / 2;
    rec.mu = 0.5;
    rec.phi = marg[coord];
    rec.exact = true;
    return rec;
}

std::vector<uint32_t> random_vertex_set(const CayleyGraph& g, std::size_t m, Rng& rng) {
    const std::size_t V = g.num_vertices();
    if (m == 0 || m >= V) throw PreconditionError("set size out of range");
    std::unordered_set<uint32_t> s;
    while (s.size() < m) s.insert(uint32_t(rng.below(V)));
    std::vector<uint32_t> out(s.begin(), s.end());
    std::sort(out.begin(), out.end());
    return out;
}

HyperReport hypercontractivity_check(const RMCode& dual_code, int ell, int trials,
                                     int sparsity, uint64_t seed) {
    RMCode tested = dual(dual_code);  // C; membership of quadruple sums is tested here
    if (ell < 1 || 4 * std::size_t(ell) >= tested.min_distance() - 1)
        throw PreconditionError("need 4*ell < D-1 for the independence regime");
    const std::size_t N = dual_code.block_len;

    HyperReport rep;
    rep.ell = ell;
    rep.trials = trials;
    rep.sparsity = sparsity;
    Rng root(seed);

    for (int tr = 0; tr < trials; ++tr) {
        Rng rng = root.split(tr);
        std::vector<BitWord> alpha;
        std::vector<BitWord> syn;
        std::vector<double> a;
        std::unordered_set<BitWord, BitWordHash> seen;
        while (alpha.size() < std::size_t(sparsity)) {
            std::size_t w = 1 + rng.below(ell);
            BitWord word(N);
            std::size_t placed = 0;
            while (placed < w) {
                std::size_t pos = rng.below(N);
                if (!word.get(pos)) {
                    word.set(pos, true);
                    ++placed;
                }
            }
            if (!seen.insert(word).second) continue;
            syn.push_back(syndrome(tested, word));
            alpha.push_back(std::move(word));
            a.push_back(rng.normal());
        }

        const std::size_t s = alpha.size();
        double e4_code = 0, e4_cube = 0, e2 = 0;
        for (double v : a) e2 += v * v;
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t k = 0; k < s; ++k) {
                    BitWord sm = syn[i] ^ syn[j] ^ syn[k];
                    BitWord wm = alpha[i] ^ alpha[j] ^ alpha[k];
                    double aijk = a[i] * a[j] * a[k];
                    for (std::size_t l = 0; l < s; ++l) {
                        if ((sm ^ syn[l]).is_zero()) e4_code += aijk * a[l];
                        if (wm == alpha[l]) e4_cube += aijk * a[l];
                    }
                }
        rep.max_identity_gap = std::max(rep.max_identity_gap, std::abs(e4_code - e4_cube));
        double bound = std::pow(9.0, ell) * e2 * e2;
        rep.max_norm_ratio = std::max(rep.max_norm_ratio, e4_code / bound);
        if (e4_code != e4_cube) rep.identity_exact = false;
        if (e4_code > bound * (1 + 1e-12)) rep.norm_bound_holds = false;
    }
    return rep;
}

}  // namespace rmg
