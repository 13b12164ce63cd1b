#include "rmg/gf2.hpp"

#include <algorithm>

namespace rmg {

BitWord BitWord::from_indices(std::size_t len, const std::vector<std::size_t>& ones) {
    BitWord w(len);
    for (std::size_t i : ones) w.set(i, true);
    return w;
}

BitWord BitWord::from_hex(std::size_t len, const std::string& hex) {
    BitWord w(len);
    for (std::size_t k = 0; k < hex.size(); ++k) {
        char c = hex[k];
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw PreconditionError("invalid hex digit");
        for (int b = 0; b < 4; ++b) {
            std::size_t i = 4 * k + b;
            if (i < len && ((v >> b) & 1)) w.set(i, true);
        }
    }
    return w;
}

bool BitWord::operator<(const BitWord& o) const {
    if (len_ != o.len_) return len_ < o.len_;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i] != o.blocks_[i]) return blocks_[i] < o.blocks_[i];
    return false;
}

std::string BitWord::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s((len_ + 3) / 4, '0');
    for (std::size_t k = 0; k < s.size(); ++k) {
        int v = 0;
        for (int b = 0; b < 4; ++b) {
            std::size_t i = 4 * k + b;
            if (i < len_ && get(i)) v |= 1 << b;
        }
        s[k] = digits[v];
    }
    return s;
}

std::vector<std::size_t> BitWord::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) out.push_back(i);
    return out;
}

std::size_t BitWordHash::operator()(const BitWord& w) const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ w.size();
    for (uint64_t b : w.blocks()) {
        h ^= b;
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
    }
    return static_cast<std::size_t>(h);
}

void GF2Matrix::push_row(BitWord r) {
    if (r.size() != ncols) throw PreconditionError("row length mismatch");
    rows.push_back(std::move(r));
}

std::size_t rank(const GF2Matrix& m) {
    std::vector<BitWord> rows = m.rows;
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.ncols && r < rows.size(); ++col) {
        std::size_t piv = r;
        while (piv < rows.size() && !rows[piv].get(col)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        for (std::size_t i = r + 1; i < rows.size(); ++i)
            if (rows[i].get(col)) rows[i] ^= rows[r];
        ++r;
    }
    return r;
}

BitWord evaluate_affine(const AffineForm& f, int n) {
    if (f.linear.size() != static_cast<std::size_t>(n))
        throw PreconditionError("affine form arity mismatch");
    if (n < 1 || n > 30) throw PreconditionError("variable count out of range");
    const uint64_t mask = f.linear.low64();
    const std::size_t N = std::size_t(1) << n;
    BitWord out(N);
    for (std::size_t x = 0; x < N; ++x) {
        int v = (std::popcount(mask & x) & 1) ^ (f.constant ? 1 : 0);
        if (v) out.set(x, true);
    }
    return out;
}

GF2Solver::GF2Solver(const GF2Matrix& m) : ncols_(m.ncols), nrows_(m.nrows()) {
    for (std::size_t i = 0; i < m.nrows(); ++i) {
        BitWord row = m.rows[i];
        BitWord combo(nrows_);
        combo.set(i, true);
        for (std::size_t j = 0; j < rref_.size(); ++j) {
            if (row.get(pivot_[j])) {
                row ^= rref_[j];
                combo ^= combo_[j];
            }
        }
        if (row.is_zero()) continue;
        std::size_t p = 0;
        while (!row.get(p)) ++p;
        // Back-substitute so earlier rows are clear at the new pivot.
        for (std::size_t j = 0; j < rref_.size(); ++j) {
            if (rref_[j].get(p)) {
                rref_[j] ^= row;
                combo_[j] ^= combo;
            }
        }
        rref_.push_back(std::move(row));
        combo_.push_back(std::move(combo));
        pivot_.push_back(p);
    }
}

bool GF2Solver::in_rowspace(const BitWord& w) const {
    BitWord rem = w;
    for (std::size_t j = 0; j < rref_.size(); ++j)
        if (rem.get(pivot_[j])) rem ^= rref_[j];
    return rem.is_zero();
}

std::optional<BitWord> GF2Solver::decompose(const BitWord& w) const {
    BitWord rem = w;
    BitWord coeff(nrows_);
    for (std::size_t j = 0; j < rref_.size(); ++j) {
        if (rem.get(pivot_[j])) {
            rem ^= rref_[j];
            coeff ^= combo_[j];
        }
    }
    if (!rem.is_zero()) return std::nullopt;
    return coeff;
}

}  // namespace rmg
