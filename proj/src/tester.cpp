#include "rmg/tester.hpp"

#include <algorithm>
#include <cmath>

#include "rmg/parallel.hpp"

namespace rmg {

BitWord CanonicalTester::sample_base(Rng& rng) const {
    std::size_t i;
    if (prob.empty()) {
        i = rng.below(support.size());
    } else {
        double u = rng.unit();
        i = std::size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (i >= support.size()) i = support.size() - 1;
    }
    return support[i];
}

BitWord CanonicalTester::sample(Rng& rng) const {
    std::size_t steps = walk_time ? rng.poisson(*walk_time) : 1;
    BitWord q(word_len());
    for (std::size_t s = 0; s < steps; ++s)
        for (int r = 0; r < xor_reps; ++r) q ^= sample_base(rng);
    return q;
}

double CanonicalTester::base_mu(const BitWord& alpha) const {
    // Accumulate only the rejecting mass so codewords come out exactly 1.
    if (prob.empty()) {
        std::size_t hits = 0;
        for (const auto& q : support) hits += alpha.dot(q);
        return 1.0 - 2.0 * (double(hits) / double(support.size()));
    }
    double rej = 0;
    for (std::size_t i = 0; i < support.size(); ++i)
        if (alpha.dot(support[i])) rej += prob[i];
    return 1.0 - 2.0 * rej;
}

double CanonicalTester::transform_mu(double mu) const {
    double m = mu;
    if (xor_reps > 1) m = std::pow(m, xor_reps);
    if (walk_time) m = std::exp(-*walk_time * (1.0 - m));
    return m;
}

std::optional<std::size_t> CanonicalTester::query_complexity() const {
    if (walk_time) return std::nullopt;
    std::size_t w = 0;
    for (const auto& q : support) w = std::max(w, q.weight());
    return w * std::size_t(xor_reps);
}

std::vector<double> CanonicalTester::coordinate_marginals() const {
    const std::size_t N = word_len();
    std::vector<double> p(N, 0);
    if (prob.empty()) {
        std::vector<std::size_t> cnt(N, 0);
        for (const auto& q : support)
            for (std::size_t c : q.support()) ++cnt[c];
        for (std::size_t i = 0; i < N; ++i) p[i] = double(cnt[i]) / double(support.size());
    } else {
        for (std::size_t i = 0; i < support.size(); ++i)
            for (std::size_t c : support[i].support()) p[c] += prob[i];
    }
    for (double& v : p) v = 0.5 * (1.0 - transform_mu(1.0 - 2.0 * v));
    return p;
}

double CanonicalTester::query_probability() const {
    auto p = coordinate_marginals();
    double s = 0;
    for (double v : p) s += v;
    return s / double(p.size());
}

CanonicalTester support_tester(RMCode tested_code, std::vector<BitWord> support,
                               std::vector<double> prob) {
    if (support.empty()) throw PreconditionError("empty tester support");
    CanonicalTester t;
    t.dual_code = dual(tested_code);
    t.code = std::move(tested_code);
    for (const auto& q : support)
        if (!contains(t.dual_code, q))
            throw PreconditionError("tester word outside the dual code");
    t.support = std::move(support);
    if (!prob.empty()) {
        if (prob.size() != t.support.size())
            throw PreconditionError("probability vector size mismatch");
        double acc = 0;
        for (double p : prob) {
            if (p < 0) throw PreconditionError("negative probability");
            acc += p;
        }
        if (std::abs(acc - 1.0) > 1e-9)
            throw PreconditionError("support probabilities must sum to 1");
        t.prob = std::move(prob);
        t.cdf.resize(t.prob.size());
        double run = 0;
        for (std::size_t i = 0; i < t.prob.size(); ++i) {
            run += t.prob[i];
            t.cdf[i] = run;
        }
        t.cdf.back() = 1.0;
    }
    return t;
}

CanonicalTester rm_tester(int n, int d) {
    if (d < 1 || d > n - 2) throw PreconditionError("rm_tester needs 1 <= d <= n-2");
    RMCode dualc = build_rm(n, d);
    auto words = min_weight_words(dualc);
    return support_tester(build_rm(n, n - d - 1), std::move(words));
}

CanonicalTester xor_tester(const CanonicalTester& t, int reps) {
    if (reps < 1) throw PreconditionError("repetition count must be >= 1");
    CanonicalTester out = t;
    if (out.walk_time) {
        // XOR of r independent Poisson walks is a walk with r-fold time.
        *out.walk_time *= reps;
    } else {
        out.xor_reps *= reps;
    }
    return out;
}

CanonicalTester walk_tester(const CanonicalTester& t, double walk_time) {
    if (walk_time < 0) throw PreconditionError("walk time must be >= 0");
    CanonicalTester out = t;
    if (out.walk_time)
        *out.walk_time += walk_time;  // walks compose additively in time
    else
        out.walk_time = walk_time;
    return out;
}

Rejection rejection_probability(const CanonicalTester& t, const BitWord& alpha,
                                std::optional<std::size_t> samples, uint64_t seed,
                                int workers) {
    if (alpha.size() != t.word_len()) throw PreconditionError("word length mismatch");
    if (!samples) {
        if (t.support.empty())
            throw PreconditionError("exact rejection needs a materialized support");
        double mu = t.transform_mu(t.base_mu(alpha));
        return Rejection{0.5 * (1.0 - mu), 0.0, true};
    }
    const std::size_t total = *samples;
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, total / 1024 + 1));
    std::vector<std::size_t> hits(chunks, 0), counts(chunks, 0);
    Rng root(seed);
    parallel_chunks(chunks, workers, [&](std::size_t c) {
        Rng rng = root.split(c);
        std::size_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
        std::size_t h = 0;
        for (std::size_t s = lo; s < hi; ++s)
            h += alpha.dot(t.sample(rng));
        hits[c] = h;
        counts[c] = hi - lo;
    });
    std::size_t h = 0;
    for (std::size_t c = 0; c < chunks; ++c) h += hits[c];
    double p = double(h) / double(total);
    double se = std::sqrt(std::max(p * (1 - p), 1e-12) / double(total));
    return Rejection{p, se, false};
}

SmoothnessReport smoothness_report(const CanonicalTester& t) {
    const std::size_t N = t.word_len();
    SmoothnessReport rep;
    rep.n_coords = N;

    // Base single and pair hit masses.
    std::vector<double> p1(N, 0), p2(N * N, 0);
    std::vector<long long> c1(N, 0), c2;
    const bool integer_path = t.plain() && t.uniform();
    if (integer_path) c2.assign(N * N, 0);
    long long total_weight = 0;
    for (std::size_t s = 0; s < t.support.size(); ++s) {
        const double m = t.mass(s);
        auto sup = t.support[s].support();
        total_weight += (long long)sup.size();
        for (std::size_t a = 0; a < sup.size(); ++a) {
            p1[sup[a]] += m;
            if (integer_path) c1[sup[a]] += 1;
            for (std::size_t b = 0; b < sup.size(); ++b) {
                p2[sup[a] * N + sup[b]] += m;
                if (integer_path) c2[sup[a] * N + sup[b]] += 1;
            }
        }
    }

    // Exact rational marginals for the plain uniform case; elsewhere push the
    // mass sums through the XOR/walk algebra via signs:
    // Pr[q_i=1] = (1-mu_i)/2, Pr[q_i=q_j=1] = (1 - mu_i - mu_j + mu_ij)/4.
    if (integer_path) {
        const double S = double(t.support.size());
        for (std::size_t i = 0; i < N; ++i) p1[i] = double(c1[i]) / S;
        for (std::size_t ij = 0; ij < N * N; ++ij) p2[ij] = double(c2[ij]) / S;
    }
    rep.single.assign(N, 0);
    rep.pair.assign(N * N, 0);
    std::vector<double> mu1(N);
    for (std::size_t i = 0; i < N; ++i) {
        mu1[i] = t.transform_mu(1.0 - 2.0 * p1[i]);
        rep.single[i] = 0.5 * (1.0 - mu1[i]);
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            double pxor = p1[i] + p1[j] - 2.0 * p2[i * N + j];
            double muij = t.transform_mu(1.0 - 2.0 * pxor);
            rep.pair[i * N + j] = 0.25 * (1.0 - mu1[i] - mu1[j] + muij);
        }
    }
    double tau = 0;
    for (double v : rep.single) tau += v;
    tau /= double(N);
    rep.tau = tau;

    if (integer_path) {
        // tau = total_weight / (|S| N); singles equal tau iff c_i * N == total.
        const long long S = (long long)t.support.size();
        rep.exact_integer = true;
        rep.smooth = true;
        for (std::size_t i = 0; i < N; ++i)
            if (c1[i] * (long long)N != total_weight) rep.smooth = false;
        rep.two_smooth = rep.smooth;
        for (std::size_t i = 0; i < N && rep.two_smooth; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j &&
                    c2[i * N + j] * S * (long long)(N * N) != total_weight * total_weight) {
                    rep.two_smooth = false;
                    break;
                }
    } else {
        double ds = 0, dp = 0;
        for (std::size_t i = 0; i < N; ++i) ds = std::max(ds, std::abs(rep.single[i] - tau));
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j) dp = std::max(dp, std::abs(rep.pair[i * N + j] - tau * tau));
        rep.smooth = ds <= 1e-12;
        rep.two_smooth = rep.smooth && dp <= 1e-12;
    }
    {
        double ds = 0, dp = 0;
        for (std::size_t i = 0; i < N; ++i) ds = std::max(ds, std::abs(rep.single[i] - tau));
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j) dp = std::max(dp, std::abs(rep.pair[i * N + j] - tau * tau));
        rep.max_single_dev = ds;
        rep.max_pair_dev = dp;
    }
    return rep;
}

std::vector<uint32_t> support_coords(const CanonicalTester& t) {
    GF2Solver solver(t.dual_code.generators);
    std::vector<uint32_t> coords;
    coords.reserve(t.support.size());
    for (const auto& q : t.support) {
        auto c = solver.decompose(q);
        if (!c) throw PreconditionError("support word outside the dual code");
        uint32_t x = 0;
        for (std::size_t j = 0; j < c->size(); ++j)
            if (c->get(j)) x |= uint32_t(1) << j;
        coords.push_back(x);
    }
    return coords;
}

std::vector<double> base_lambda_table(const CanonicalTester& t, const CosetTable& table) {
    const std::size_t size = table.size();
    std::vector<double> a(size, 0.0);
    auto coords = support_coords(t);
    for (std::size_t i = 0; i < coords.size(); ++i) a[coords[i]] += t.mass(i);
    // In-place Walsh-Hadamard transform: a[beta] becomes E[(-1)^{<beta, x>}].
    for (std::size_t h = 1; h < size; h <<= 1) {
        for (std::size_t i = 0; i < size; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                double u = a[j], v = a[j + h];
                a[j] = u + v;
                a[j + h] = u - v;
            }
        }
    }
    return a;
}

namespace {

SoundnessCurve exact_curve(const CanonicalTester& t, std::size_t k_max) {
    CosetTable table = build_coset_table(t.code);
    const std::size_t size = table.size();
    auto lam = base_lambda_table(t, table);

    // Exact rational rejection counts for the plain uniform case.
    const bool rational = t.plain() && t.uniform();
    const long long denom = rational ? (long long)t.support.size() : -1;

    std::size_t max_deg = 0;
    for (std::size_t b = 0; b < size; ++b) max_deg = std::max<std::size_t>(max_deg, table.degree[b]);

    std::vector<double> best(max_deg + 1, 2.0);
    std::vector<std::size_t> arg(max_deg + 1, 0);
    for (std::size_t b = 0; b < size; ++b) {
        double s = 0.5 * (1.0 - t.transform_mu(lam[b]));
        std::size_t d = table.degree[b];
        if (s < best[d]) {
            best[d] = s;
            arg[d] = b;
        }
    }

    auto make_point = [&](std::size_t k, std::size_t deg) {
        SoundnessPoint p;
        p.k = k;
        p.s_lower = best[deg];
        p.witness = table.leader(arg[deg]);
        p.witness_degree = deg;
        if (rational) {
            p.denom = denom;
            p.reject_count = std::llround(0.5 * (1.0 - lam[arg[deg]]) * double(denom));
            // For plain testers the transform is the identity, so s = count/denom.
        }
        return p;
    };

    SoundnessCurve curve;
    curve.mode = CurveMode::exact;
    for (std::size_t k = 0; k <= std::min(k_max, max_deg); ++k)
        curve.exact_degree.push_back(make_point(k, k));

    // Suffix minima give the Def-3.1 curve: min over degree >= k.
    std::vector<std::size_t> suffix_arg(max_deg + 1);
    std::size_t cur = max_deg;
    for (std::size_t d = max_deg + 1; d-- > 0;) {
        if (best[d] <= best[cur]) cur = d;
        suffix_arg[d] = cur;
    }
    for (std::size_t k = 0; k <= std::min(k_max, max_deg); ++k)
        curve.at_least.push_back(make_point(k, suffix_arg[k]));
    return curve;
}

SoundnessCurve sampled_curve(const CanonicalTester& t, std::size_t k_max,
                             std::size_t candidates,
                             std::optional<std::size_t> mc_samples, uint64_t seed) {
    const std::size_t N = t.word_len();
    SoundnessCurve curve;
    curve.mode = CurveMode::sampled;
    Rng root(seed);

    SoundnessPoint zero;
    zero.k = 0;
    zero.witness = BitWord(N);
    curve.at_least.push_back(zero);

    const std::size_t unique_regime = t.code.min_distance() / 2;
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (k >= unique_regime)
            throw PreconditionError("planted distance requires k below half the code distance");
        Rng rng = root.split(k);
        SoundnessPoint p;
        p.k = k;
        p.s_lower = 2.0;
        for (std::size_t c = 0; c < candidates; ++c) {
            // Random weight-k word: its distance from the code is exactly k in
            // this regime. A random codeword shift spreads the witnesses.
            BitWord w(N);
            std::size_t placed = 0;
            while (placed < k) {
                std::size_t pos = rng.below(N);
                if (!w.get(pos)) {
                    w.set(pos, true);
                    ++placed;
                }
            }
            BitWord shifted = w;
            for (const auto& g : t.code.generators.rows)
                if (rng.bit()) shifted ^= g;
            Rejection rej = t.support.empty() || mc_samples
                                ? rejection_probability(t, shifted, mc_samples.value_or(20000),
                                                        rng.u64())
                                : rejection_probability(t, shifted);
            if (rej.value < p.s_lower) {
                p.s_lower = rej.value;
                p.witness = shifted;
                p.witness_degree = k;
            }
        }
        curve.at_least.push_back(p);
    }
    return curve;
}

}  // namespace

SoundnessCurve soundness_curve(const CanonicalTester& t, std::size_t k_max, CurveMode mode,
                               std::size_t candidates, std::optional<std::size_t> mc_samples,
                               uint64_t seed) {
    if (mode == CurveMode::exact) return exact_curve(t, k_max);
    return sampled_curve(t, k_max, candidates, mc_samples, seed);
}

}  // namespace rmg
