#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rmg/tester.hpp"

namespace rmg {

// Element of D^t: t blocks, each a codeword of D, viewed per position as a
// symbol in Q = GF(2)^t.
struct QWord {
    std::vector<BitWord> blocks;

    int t() const { return int(blocks.size()); }
    std::size_t positions() const { return blocks.empty() ? 0 : blocks[0].size(); }
    uint32_t symbol(std::size_t x) const {
        uint32_t s = 0;
        for (std::size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].get(x)) s |= uint32_t(1) << i;
        return s;
    }
    std::size_t q_hamming_weight() const;  // positions with a nonzero symbol
};

// Shared tables for the D^t machinery at a fixed (n, d, t).
struct AlphaContext {
    CanonicalTester tester;  // plain RM tester (the step generator for T_t)
    int t = 0;
    std::vector<uint32_t> step_coords;  // tester support in coefficient space
    std::vector<uint32_t> evalcol;      // per point x: generator bits at x
    uint32_t ones_coords = 0;           // coefficient vector of the constant-1 codeword

    const RMCode& D() const { return tester.dual_code; }
    int n() const { return tester.dual_code.n; }
    int d() const { return tester.dual_code.r; }
    std::size_t dim() const { return tester.dual_code.dim; }
    std::size_t points() const { return tester.dual_code.block_len; }

    // Codeword evaluation at a point from its coefficient vector.
    bool eval_at(uint32_t coords, std::size_t x) const {
        return std::popcount(coords & evalcol[x]) & 1;
    }
    uint32_t symbol_at(const std::vector<uint32_t>& c, std::size_t x) const {
        uint32_t s = 0;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (eval_at(c[i], x)) s |= uint32_t(1) << i;
        return s;
    }
};

AlphaContext make_alpha_context(int n, int d, int t);

// One T_t draw: a tester word c and a uniform w in GF(2)^t; block i is c when
// w_i = 1 and zero otherwise.
QWord sample_Tt(const AlphaContext& ctx, Rng& rng);
std::vector<uint32_t> sample_Tt_coords(const AlphaContext& ctx, Rng& rng);

// Poisson(eps * 2^d)-fold XOR of T_t draws: the continuous-time walk step.
QWord sample_Tt_eps(const AlphaContext& ctx, double eps, Rng& rng);
std::vector<uint32_t> sample_Tt_eps_coords(const AlphaContext& ctx, double eps, Rng& rng);

// Exact eigenvalue of the Q-ary character given by beta under T_t:
// lambda = Pr_c[ <beta^(i), c> = 0 for all i ], summed over the support.
double q_char_eigenvalue_Tt(const AlphaContext& ctx, const QWord& beta);
// ... and under T_{t,eps} via the Poisson mixture.
double q_char_eigenvalue_Tt_eps(const AlphaContext& ctx, const QWord& beta, double eps);

struct QLeader {
    std::size_t q_weight = 0;
    QWord leader;
};

// Minimal Q-Hamming weight over the coset beta + C^t: increasing-size
// exhaustive search over joint supports; every block must admit a
// representative supported inside the candidate set.
QLeader q_weight(const AlphaContext& ctx, const QWord& beta, std::size_t w_max);

// Folded function f : D^t -> Q with f(c + r) = f(c) + r for constant shifts.
// Non-dictator kinds canonicalize the Q-coset of the input by a seeded
// hash-argmin shift and act on the representative.
struct FoldedFunction {
    enum class Kind { dictator, random_hash, constant_base };
    Kind kind = Kind::dictator;
    uint32_t beta_point = 0;  // dictator position
    uint32_t q0 = 0;          // constant base value
    uint64_t seed = 0;

    uint32_t eval(const AlphaContext& ctx, const std::vector<uint32_t>& coords) const;
};

struct DictReport {
    double acceptance = 0;
    double stderr_ = 0;
    std::size_t samples = 0;
};

// The 2-query test: sample c uniform in D^t, a walk neighbor c' and a uniform
// r in Q; accept iff f(c + r) - r = f(c').
DictReport dict_test(const AlphaContext& ctx, const FoldedFunction& f, double eps,
                     std::size_t samples, uint64_t seed, int workers = 1);

struct QInfluenceTable {
    int ell = 0;
    std::vector<double> inf;  // per position in [N]
    double variance = 0;
};

// Influences of a sparse Q-coset Fourier form: terms (leader, coefficient).
QInfluenceTable q_influences(const AlphaContext& ctx,
                             const std::vector<std::pair<QWord, double>>& terms, int ell);

// Outer Max-2Lin instance over GF(2)^n with constraints v - u = alpha_uv.
struct OuterInstance {
    std::size_t vertices = 0;
    struct Edge {
        uint32_t u = 0, v = 0;
        uint32_t shift = 0;  // n-bit point translation
    };
    std::vector<Edge> edges;
};

// The composed instance: vertices V(outer) x D^t, alphabet Q; translations
// act on coefficient vectors through precomputed dim x dim matrices.
struct PsiInstance {
    OuterInstance outer;
    AlphaContext ctx;
    double eps = 0;
    // neighbor lists: (neighbor vertex, shift) per vertex
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> neighbors;
    // translation columns per distinct shift: column j = coords of x -> g_j(x + alpha)
    std::unordered_map<uint32_t, std::vector<uint32_t>> translations;

    uint32_t translate(uint32_t shift, uint32_t coords) const;
};

PsiInstance build_psi_instance(OuterInstance outer, int n, int d, int t, double eps);

// Labeling of the composed instance.
struct PsiLabeling {
    enum class Kind { translated_dictator, random_folded };
    Kind kind = Kind::translated_dictator;
    std::vector<uint32_t> beta;  // dictator position per outer vertex
    uint64_t seed = 0;
};

DictReport psi_eval(const PsiInstance& inst, const PsiLabeling& labeling,
                    std::size_t samples, uint64_t seed, int workers = 1);

}  // namespace rmg
