#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rmg/errors.hpp"

namespace rmg {

// Packed vector over GF(2). Bits beyond len are kept zero in storage,
// which lets weight() and dot() run block-wise without masking.
class BitWord {
  public:
    BitWord() = default;
    explicit BitWord(std::size_t len)
        : len_(len), blocks_((len + 63) / 64, 0) {}

    static BitWord from_indices(std::size_t len, const std::vector<std::size_t>& ones);
    // One hex digit per 4 bits; digit k encodes bits [4k, 4k+4), bit 4k least significant.
    static BitWord from_hex(std::size_t len, const std::string& hex);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const {
        return (blocks_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) blocks_[i >> 6] |= m; else blocks_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { blocks_[i >> 6] ^= uint64_t(1) << (i & 63); }

    std::size_t weight() const {
        std::size_t w = 0;
        for (uint64_t b : blocks_) w += std::popcount(b);
        return w;
    }

    // Parity of <a,b>; lengths must agree.
    int dot(const BitWord& o) const {
        uint64_t acc = 0;
        for (std::size_t i = 0; i < blocks_.size(); ++i) acc ^= blocks_[i] & o.blocks_[i];
        return std::popcount(acc) & 1;
    }

    BitWord& operator^=(const BitWord& o) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] ^= o.blocks_[i];
        return *this;
    }
    friend BitWord operator^(BitWord a, const BitWord& b) { a ^= b; return a; }

    bool operator==(const BitWord& o) const { return len_ == o.len_ && blocks_ == o.blocks_; }
    bool operator!=(const BitWord& o) const { return !(*this == o); }
    bool operator<(const BitWord& o) const;  // by length, then block content (low block first)

    bool is_zero() const {
        for (uint64_t b : blocks_) if (b) return false;
        return true;
    }

    const std::vector<uint64_t>& blocks() const { return blocks_; }
    uint64_t low64() const { return blocks_.empty() ? 0 : blocks_[0]; }

    std::string to_hex() const;
    std::vector<std::size_t> support() const;

  private:
    std::size_t len_ = 0;
    std::vector<uint64_t> blocks_;
};

struct BitWordHash {
    std::size_t operator()(const BitWord& w) const;
};

// Row-major matrix over GF(2); every row has length ncols.
struct GF2Matrix {
    std::size_t ncols = 0;
    std::vector<BitWord> rows;

    GF2Matrix() = default;
    explicit GF2Matrix(std::size_t cols) : ncols(cols) {}

    std::size_t nrows() const { return rows.size(); }
    void push_row(BitWord r);
};

// GF(2) row rank via Gaussian elimination; the input is left unchanged.
std::size_t rank(const GF2Matrix& m);

// x |-> <linear, x> + constant over GF(2)^n.
struct AffineForm {
    BitWord linear;   // length n
    bool constant = false;
};

// Evaluation vector of an affine form over all 2^n points in the fixed
// little-endian point order (bit j of the point index is variable j).
BitWord evaluate_affine(const AffineForm& f, int n);

// Row-reduced echelon view of a matrix supporting row-space membership
// tests and decomposition over the original rows.
class GF2Solver {
  public:
    explicit GF2Solver(const GF2Matrix& m);

    std::size_t rank() const { return rref_.size(); }
    bool in_rowspace(const BitWord& w) const;
    // Coefficients c (length nrows of the original matrix) with sum_i c_i row_i = w,
    // or nullopt if w is outside the row space.
    std::optional<BitWord> decompose(const BitWord& w) const;

  private:
    std::size_t ncols_;
    std::size_t nrows_;
    std::vector<BitWord> rref_;    // reduced rows, pivot order
    std::vector<BitWord> combo_;   // combo_[i]: original-row combination giving rref_[i]
    std::vector<std::size_t> pivot_;
};

}  // namespace rmg
