#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rmg/tester.hpp"

namespace rmg {

// Cay(C-perp, T): vertices are the codewords of D = C-perp (indexed by their
// coefficient vectors over D's generator basis), a step XORs a tester word.
struct CayleyGraph {
    CanonicalTester tester;

    const RMCode& dual_code() const { return tester.dual_code; }
    const RMCode& tested_code() const { return tester.code; }
    std::size_t num_vertices() const { return std::size_t(1) << tester.dual_code.dim; }
};

inline CayleyGraph make_cayley(CanonicalTester t) { return CayleyGraph{std::move(t)}; }

struct EigenvalueRecord {
    CosetRep alpha;
    double lambda = 1;       // base-graph eigenvalue 1 - 2 s(alpha)
    double lambda_walk = 1;  // after the tester's XOR/walk transformation
    double stderr_ = 0;
    bool exact = true;
};

// Eigenvalue of the character chi_alpha via its rejection probability;
// the degree comes from the coset-leader search (budget w_max, defaulting to
// half the code distance).
EigenvalueRecord char_eigenvalue(const CayleyGraph& g, const BitWord& alpha,
                                 std::optional<std::size_t> samples = std::nullopt,
                                 std::optional<std::size_t> w_max = std::nullopt,
                                 uint64_t seed = 0);

struct DictatorProfile {
    std::vector<EigenvalueRecord> records;  // one per coordinate
    double eps = 0;            // query_complexity / N (plain testers)
    std::size_t count_large = 0;  // # { i : lambda_i >= 1 - 4 eps }
    // Integer certificates for plain uniform testers: lambda_i = 1 - 2 c_i/|S|.
    std::vector<long long> hit_counts;
    long long support_size = 0;
};

DictatorProfile dictator_profile(const CayleyGraph& g);

struct SetExpansionRecord {
    std::size_t set_size = 0;
    double mu = 0;       // |S| / |V|
    double phi = 0;      // expansion estimate
    double stderr_ = 0;
    bool exact = false;
};

// Expansion of an explicit vertex set (coefficient indices). Exact when the
// tester is plain (single materialized step distribution); Monte Carlo over
// sampled edges otherwise.
SetExpansionRecord expansion_explicit(const CayleyGraph& g, const std::vector<uint32_t>& verts,
                                      std::optional<std::size_t> mc_samples = std::nullopt,
                                      uint64_t seed = 0, int workers = 1);

// Closed form for the dictator cut {p : p_i = 1}: an edge leaves the cut iff
// the step word flips bit i, so phi = Pr[q_i = 1].
SetExpansionRecord expansion_dictator_cut(const CayleyGraph& g, std::size_t coord);

std::vector<uint32_t> random_vertex_set(const CayleyGraph& g, std::size_t m, Rng& rng);

struct HyperReport {
    int ell = 0;
    int trials = 0;
    int sparsity = 0;
    double max_identity_gap = 0;   // max |E_D[f^4] - E_cube[f^4]|
    double max_norm_ratio = 0;     // max E_D[f^4] / (9^ell E_D[f^2]^2)
    bool identity_exact = true;    // gap == 0 on every trial
    bool norm_bound_holds = true;  // E[f^4] <= 9^ell E[f^2]^2 on every trial
};

// Random sparse low-degree functions f = sum a_j chi_{alpha_j} with
// wt(alpha_j) <= ell: E_D[f^4] via the quadruple-membership identity
// (the quadruple contributes iff the XOR of the four words lies in C),
// E_cube[f^4] via the same sum restricted to XOR = 0. Requires
// 4*ell < D - 1 where D is the distance of C.
HyperReport hypercontractivity_check(const RMCode& dual_code, int ell, int trials,
                                     int sparsity, uint64_t seed);

}  // namespace rmg
