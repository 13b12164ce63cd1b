#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rmg/rm_code.hpp"
#include "rmg/rng.hpp"

namespace rmg {

// A samplable distribution over the dual of a tested code C. A word alpha is
// tested by the parity <alpha, q>. The base distribution is an explicit
// support (uniform unless probabilities are given); on top of it the tester
// may XOR several independent draws and may randomize the draw count by a
// Poisson mixture, which realizes the continuous-time walk e^{-t(I-G)}.
struct CanonicalTester {
    RMCode code;        // tested code C
    RMCode dual_code;   // D = C-perp, the vertex group
    std::vector<BitWord> support;
    std::vector<double> prob;  // empty = uniform over support
    std::vector<double> cdf;   // cumulative, filled when prob is present
    int xor_reps = 1;
    std::optional<double> walk_time;

    std::size_t word_len() const { return code.block_len; }
    bool uniform() const { return prob.empty(); }
    bool plain() const { return xor_reps == 1 && !walk_time; }
    double mass(std::size_t i) const {
        return prob.empty() ? 1.0 / double(support.size()) : prob[i];
    }

    BitWord sample_base(Rng& rng) const;
    BitWord sample(Rng& rng) const;

    // E[(-1)^{<alpha, q>}] under the base distribution, exact over the support.
    double base_mu(const BitWord& alpha) const;
    // XOR of r draws raises mu to the r-th power; the Poisson mixture maps it
    // through e^{-t(1-mu)}.
    double transform_mu(double mu) const;

    // Max weight times repetition count; unbounded (nullopt) for walk testers.
    std::optional<std::size_t> query_complexity() const;
    // tau = E[wt(q)]/N, exact via per-coordinate marginal algebra.
    double query_probability() const;
    // Pr[q_i = 1] for every coordinate.
    std::vector<double> coordinate_marginals() const;
};

// Uniform distribution over the minimum-weight codewords of RM(n,d), testing
// C = RM(n, n-d-1). Requires 1 <= d <= n-2.
CanonicalTester rm_tester(int n, int d);

// Tester with an explicit support (words must lie in the dual of tested_code).
CanonicalTester support_tester(RMCode tested_code, std::vector<BitWord> support,
                               std::vector<double> prob = {});

CanonicalTester xor_tester(const CanonicalTester& t, int reps);
CanonicalTester walk_tester(const CanonicalTester& t, double walk_time);

struct Rejection {
    double value = 0;
    double stderr_ = 0;
    bool exact = false;
};

// Rejection probability s_T(alpha) = Pr[<alpha,q> = 1]. Without a sample
// count the value is exact: a sum over the materialized support pushed
// through the XOR/walk algebra. With a sample count it is Monte Carlo over
// the real sampling path (the two routes are checked against each other in
// the tests).
Rejection rejection_probability(const CanonicalTester& t, const BitWord& alpha,
                                std::optional<std::size_t> samples = std::nullopt,
                                uint64_t seed = 0, int workers = 1);

struct SmoothnessReport {
    std::size_t n_coords = 0;
    double tau = 0;
    std::vector<double> single;  // Pr[q_i=1]
    std::vector<double> pair;    // row-major N x N, Pr[q_i=q_j=1]
    bool smooth = false;      // all singles equal tau
    bool two_smooth = false;  // in addition all pairs (i != j) equal tau^2
    bool exact_integer = false;  // verdicts established in integer arithmetic
    double max_single_dev = 0;
    double max_pair_dev = 0;
};

// Full coordinate and pair tables. For a plain uniform tester the verdicts
// are integer-exact; transformed testers go through the marginal algebra at
// double precision (tolerance 1e-12).
SmoothnessReport smoothness_report(const CanonicalTester& t);

struct SoundnessPoint {
    std::size_t k = 0;
    double s_lower = 0;
    BitWord witness;
    std::size_t witness_degree = 0;
    // Exact rational value s = reject_count / denom when available (plain
    // uniform tester in exact mode); -1 otherwise.
    long long reject_count = -1;
    long long denom = -1;
};

enum class CurveMode { exact, sampled };

struct SoundnessCurve {
    CurveMode mode = CurveMode::exact;
    // at_least[k]: min rejection over cosets with leader degree >= k (Def. of
    // the soundness curve); in sampled mode an upper-bound estimate from
    // planted-distance words.
    std::vector<SoundnessPoint> at_least;
    // exact mode also reports the minimum at each exact degree.
    std::vector<SoundnessPoint> exact_degree;
};

// Exact mode enumerates every coset of C via the coset table (budget: dual
// dimension <= CosetTable::kMaxBits). Sampled mode examines `candidates`
// random words of planted distance k for each k (requires k below half the
// code distance).
SoundnessCurve soundness_curve(const CanonicalTester& t, std::size_t k_max,
                               CurveMode mode, std::size_t candidates = 200,
                               std::optional<std::size_t> mc_samples = std::nullopt,
                               uint64_t seed = 0);

// Base-graph eigenvalue E[(-1)^{<alpha,q>}] for every coset index, via the
// Walsh-Hadamard transform of the tester mass on the vertex group.
std::vector<double> base_lambda_table(const CanonicalTester& t, const CosetTable& table);

// Coefficient vectors of the support words over the generators of D.
std::vector<uint32_t> support_coords(const CanonicalTester& t);

}  // namespace rmg
