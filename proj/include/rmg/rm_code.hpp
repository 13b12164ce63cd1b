#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmg/gf2.hpp"

namespace rmg {

// Reed-Muller code RM(n,r): evaluation vectors over GF(2)^n of all
// polynomials of degree <= r. r = -1 encodes the zero code (the dual of the
// full space). Generators are monomial evaluation vectors in the fixed
// little-endian point order, sorted by (degree, variable mask).
struct RMCode {
    int n = 0;
    int r = 0;
    std::size_t block_len = 0;            // N = 2^n
    std::size_t dim = 0;                  // sum_{j<=r} C(n,j)
    std::vector<uint32_t> monomials;      // variable masks of the generator rows
    GF2Matrix generators;                 // dim x N
    GF2Matrix dual_generators;            // generators of RM(n, n-r-1)

    // Minimum distance 2^{n-r}; block_len+1 for the zero code.
    std::size_t min_distance() const;
};

RMCode build_rm(int n, int r);
RMCode dual(const RMCode& code);

// Inner products of alpha with the generator rows of dual(code);
// all-zero iff alpha is a codeword.
BitWord syndrome(const RMCode& code, const BitWord& alpha);
bool contains(const RMCode& code, const BitWord& word);

// Multilinear polynomial over GF(2)^n given by its monomial support.
struct PolynomialF2 {
    int n = 0;
    std::vector<uint32_t> monomials;  // distinct variable masks

    int degree() const;
    // Evaluation vector over all 2^n points (fast Moebius / subset-sum transform).
    BitWord evaluation() const;
};

struct CosetRep {
    BitWord alpha;        // the queried word
    BitWord leader;       // minimum-weight representative of alpha + code
    std::size_t degree = 0;  // weight(leader) = distance of alpha from the code
};

// Default search bound: half the code distance, the regime where leaders are unique.
std::size_t default_leader_budget(const RMCode& code);

// Increasing-weight exhaustive search over supports; first match wins, which
// makes the tie-break the lexicographically smallest support. Throws
// NotFoundError when no representative of weight <= w_max exists.
CosetRep coset_leader(const RMCode& code, const BitWord& alpha, std::size_t w_max);

// All codewords of weight exactly 2^{n-d} of RM(n,d), d >= 1: the indicators
// of codimension-d affine subspaces (equivalently products of d linearly
// independent affine forms). Enumerated via canonical RREF bases, deduplicated
// by construction.
std::vector<BitWord> min_weight_words(const RMCode& code);

// The subcode of evaluation vectors of homogeneous linear forms; dimension n,
// pairwise distance exactly 2^{n-1}.
RMCode hadamard_subcode(const RMCode& code);

// Leader degree and a minimum-weight representative for every coset of a
// tested code C, indexed by the pairing with the generators of D = dual(C)
// (bit j of the index is <alpha, g_j>). Built by breadth-first search over
// the syndrome space.
struct CosetTable {
    int bits = 0;                  // dim of D = block_len - dim(C)
    std::size_t word_len = 0;      // N
    std::size_t nwords = 0;        // packed 64-bit words per leader
    std::vector<uint8_t> degree;   // 2^bits entries
    std::vector<uint64_t> leaders; // packed, 2^bits * nwords

    static constexpr int kMaxBits = 24;

    std::size_t size() const { return degree.size(); }
    BitWord leader(std::size_t idx) const;
};

CosetTable build_coset_table(const RMCode& tested_code);

// Pairing index of alpha against the dual generators (same indexing as
// CosetTable); requires dim(dual) <= 32.
uint32_t pairing_index(const RMCode& tested_code, const BitWord& alpha);

std::string descriptor_json(const RMCode& code);
std::vector<std::string> hex_rows(const GF2Matrix& m);

}  // namespace rmg
