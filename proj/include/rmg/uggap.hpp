#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmg/tester.hpp"

namespace rmg {

// Max-2Lin over the group GF(2)^t: a constraint (u, v, shift) is satisfied by
// a labeling l iff l(u) - l(v) = shift.
struct UGConstraint {
    uint32_t u = 0;
    uint32_t v = 0;
    uint32_t shift = 0;
    double weight = 0;
    long long count = -1;  // integer multiplicity when the enumeration is uniform
};

struct UGInstance {
    int group_bits = 0;        // labels live in GF(2)^group_bits
    std::size_t num_vars = 0;  // vertex count
    std::vector<UGConstraint> constraints;  // weights sum to 1 when materialized
    long long total_count = -1;             // denominator for integer counts

    bool materialized() const { return !constraints.empty(); }
    bool integral() const { return total_count > 0; }
};

// The gap construction over a code: vertices are D's coefficient vectors,
// labels index the Hadamard subcode, and a constraint is generated by the
// verifier triple (c, h, h', q): u = c+q+h, v = c+h', shift = h - h'.
// Length-N codewords never appear in emitted instances, only dim-bit and
// n-bit indices.
struct GammaInstance {
    CanonicalTester tester;
    RMCode hadamard;                       // subcode of D
    std::vector<uint32_t> step_coords;     // tester support in coefficient space
    std::vector<uint32_t> hadamard_coords; // coords of the n Hadamard generators
    int group_bits = 0;                    // n
    std::size_t num_vars = 0;              // 2^dim

    const RMCode& dual_code() const { return tester.dual_code; }

    // One verifier constraint with weight 1 (sampler mode).
    UGConstraint sample_constraint(Rng& rng) const;
    // Exhaustive enumeration; throws BudgetError when the tuple count
    // |D| * |H|^2 * |support| exceeds the budget. Duplicate (u,v,shift)
    // triples are aggregated.
    UGInstance materialize(std::size_t budget = std::size_t(1) << 27) const;
};

GammaInstance build_gamma_instance(int n, int d, CanonicalTester tester);
inline GammaInstance build_gamma_instance(int n, int d) {
    return build_gamma_instance(n, d, rm_tester(n, d));
}

struct SdpValueReport {
    double value = 0;  // E_q[(1 - 2 wt(q)/N)^2], exact via pair-marginal algebra
    bool exact = true;
    std::optional<double> paper_bound;  // (1 - 2t/N)^2 for bounded-query testers
};

SdpValueReport sdp_value(const CanonicalTester& tester);

// Vectors b_{c,h} = (-1)^{c+h} (x) (-1)^{c+h}; inner products reduce to
// squared normalized correlations (1 - 2 Delta/N)^2.
struct ImplicitSDP {
    RMCode dual_code;  // D
    RMCode hadamard;   // H

    double inner(const BitWord& c, const BitWord& h, const BitWord& c2,
                 const BitWord& h2) const;
};

struct FeasibilityReport {
    std::size_t trials = 0;
    std::size_t R = 0;
    bool orthonormal = true;    // <b_{c,h}, b_{c,h'}> = [h = h'] exactly
    bool nonnegative = true;    // all probed inner products in [0,1]
    bool norm_sum_exact = true; // sum_l <b_{c,l}, b_{c,l}> = R
};

FeasibilityReport sdp_feasibility_check(const ImplicitSDP& sdp, std::size_t trials,
                                        uint64_t seed);

using Labeling = std::function<uint32_t(uint32_t vertex)>;

Labeling constant_labeling(uint32_t h0);
Labeling random_labeling(uint64_t seed, int group_bits);

struct LabelingResult {
    double value = 0;
    double stderr_ = 0;
    bool exact = false;
};

// Exact weighted satisfaction count on a materialized instance.
LabelingResult evaluate_labeling(const UGInstance& inst, const Labeling& l);
// Monte Carlo over sampled verifier constraints.
LabelingResult evaluate_labeling_sampled(const GammaInstance& g, const Labeling& l,
                                         std::size_t samples, uint64_t seed,
                                         int workers = 1);

struct SoundnessBound {
    double bound = 0;
    std::size_t argmin_k = 0;
    bool curve_exact = false;  // indicative only when built from a sampled curve
};

// min_{k in [0, D/5]} (1 - 2 s(k) + 3^k / sqrt(R)) with the measured curve
// (s indexed by k; entries beyond the curve are clamped to the last value).
SoundnessBound soundness_bound(const std::vector<double>& s_of_k, std::size_t R,
                               std::size_t code_distance, bool curve_exact);

// Text format: header "max2lin t=<bits> vars=<count>", one "u v shift_hex
// weight" line per constraint.
void write_max2lin(const UGInstance& inst, const std::string& path);
UGInstance read_max2lin(const std::string& path);

}  // namespace rmg
