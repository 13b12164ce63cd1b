#include "rmg/rm_code.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace rmg {

namespace {

std::vector<uint32_t> monomial_masks(int n, int r) {
    std::vector<uint32_t> masks;
    for (int deg = 0; deg <= r; ++deg)
        for (uint32_t m = 0; m < (uint32_t(1) << n); ++m)
            if (std::popcount(m) == deg) masks.push_back(m);
    return masks;
}

GF2Matrix monomial_rows(int n, const std::vector<uint32_t>& masks) {
    const std::size_t N = std::size_t(1) << n;
    GF2Matrix g(N);
    for (uint32_t m : masks) {
        BitWord row(N);
        for (std::size_t x = 0; x < N; ++x)
            if ((x & m) == m) row.set(x, true);
        g.push_row(std::move(row));
    }
    return g;
}

// r may be -1 here (zero code); the public entry point rejects that.
RMCode make_rm(int n, int r) {
    if (n < 1 || n > 24) throw PreconditionError("n out of range");
    RMCode c;
    c.n = n;
    c.r = r;
    c.block_len = std::size_t(1) << n;
    c.monomials = r < 0 ? std::vector<uint32_t>{} : monomial_masks(n, r);
    c.dim = c.monomials.size();
    c.generators = monomial_rows(n, c.monomials);
    c.dual_generators = monomial_rows(n, monomial_masks(n, std::min(n - r - 1, n)));
    return c;
}

}  // namespace

std::size_t RMCode::min_distance() const {
    if (r < 0) return block_len + 1;
    return std::size_t(1) << (n - r);
}

RMCode build_rm(int n, int r) {
    if (r < 0 || r > n) throw PreconditionError("degree must satisfy 0 <= r <= n");
    return make_rm(n, r);
}

RMCode dual(const RMCode& code) {
    return make_rm(code.n, code.n - code.r - 1);
}

BitWord syndrome(const RMCode& code, const BitWord& alpha) {
    if (alpha.size() != code.block_len) throw PreconditionError("word length mismatch");
    BitWord s(code.dual_generators.nrows());
    for (std::size_t j = 0; j < code.dual_generators.nrows(); ++j)
        if (alpha.dot(code.dual_generators.rows[j])) s.set(j, true);
    return s;
}

bool contains(const RMCode& code, const BitWord& word) {
    return syndrome(code, word).is_zero();
}

int PolynomialF2::degree() const {
    int d = 0;
    for (uint32_t m : monomials) d = std::max(d, std::popcount(m));
    return d;
}

BitWord PolynomialF2::evaluation() const {
    if (n < 1 || n > 24) throw PreconditionError("n out of range");
    const std::size_t N = std::size_t(1) << n;
    std::vector<uint8_t> coeff(N, 0);
    for (uint32_t m : monomials) coeff[m] ^= 1;
    // Subset-sum (zeta) transform: truth table value at x is the parity of
    // coefficients over all masks m subseteq x.
    for (int j = 0; j < n; ++j) {
        const std::size_t bit = std::size_t(1) << j;
        for (std::size_t x = 0; x < N; ++x)
            if (x & bit) coeff[x] ^= coeff[x ^ bit];
    }
    BitWord out(N);
    for (std::size_t x = 0; x < N; ++x)
        if (coeff[x]) out.set(x, true);
    return out;
}

std::size_t default_leader_budget(const RMCode& code) {
    return code.min_distance() / 2;
}

CosetRep coset_leader(const RMCode& code, const BitWord& alpha, std::size_t w_max) {
    const std::size_t N = code.block_len;
    BitWord target = syndrome(code, alpha);
    if (target.is_zero())
        return CosetRep{alpha, BitWord(N), 0};

    std::vector<BitWord> sigma(N);
    for (std::size_t i = 0; i < N; ++i) {
        BitWord e(N);
        e.set(i, true);
        sigma[i] = syndrome(code, e);
    }

    // Combinations of support positions in lexicographic order, weight by weight.
    std::vector<std::size_t> idx;
    BitWord acc = target;
    std::vector<BitWord> stack;  // partial syndromes, one per chosen position

    for (std::size_t w = 1; w <= w_max; ++w) {
        double est = 1;
        for (std::size_t j = 0; j < w; ++j) est = est * double(N - j) / double(j + 1);
        if (est > 1e9) throw BudgetError("coset leader search space too large");

        idx.assign(w, 0);
        // Depth-first enumeration of 0 <= i_1 < ... < i_w < N.
        std::size_t depth = 0;
        stack.assign(w + 1, target);
        std::size_t start = 0;
        for (;;) {
            if (depth == w) {
                if (stack[w].is_zero()) {
                    BitWord leader = BitWord::from_indices(N, idx);
                    return CosetRep{alpha, leader, w};
                }
                // backtrack
                if (depth == 0) break;
                --depth;
                start = idx[depth] + 1;
                continue;
            }
            if (start + (w - depth) > N) {
                if (depth == 0) break;
                --depth;
                start = idx[depth] + 1;
                continue;
            }
            idx[depth] = start;
            stack[depth + 1] = stack[depth];
            stack[depth + 1] ^= sigma[start];
            ++depth;
            start = idx[depth - 1] + 1;
        }
    }
    throw NotFoundError("no coset representative of weight <= " + std::to_string(w_max));
}

std::vector<BitWord> min_weight_words(const RMCode& code) {
    const int n = code.n, d = code.r;
    if (d < 1 || d > n - 1)
        throw PreconditionError("minimum-weight enumeration needs 1 <= d <= n-1");
    if (n > 16) throw BudgetError("point space too large to enumerate");
    const int k = n - d;  // dimension of the direction subspaces
    const std::size_t N = std::size_t(1) << n;

    std::vector<BitWord> words;
    std::vector<uint32_t> basis(k);
    std::vector<int> pivots(k);
    std::vector<uint32_t> points(std::size_t(1) << k);
    std::vector<uint8_t> covered(N);

    // For the current basis, emit one word per coset of the spanned subspace.
    auto emit_cosets = [&] {
        for (std::size_t s = 0; s < points.size(); ++s) {
            uint32_t p = 0;
            for (int j = 0; j < k; ++j)
                if ((s >> j) & 1) p ^= basis[j];
            points[s] = p;
        }
        std::fill(covered.begin(), covered.end(), 0);
        for (std::size_t rep = 0; rep < N; ++rep) {
            if (covered[rep]) continue;
            BitWord w(N);
            for (uint32_t p : points) {
                std::size_t x = rep ^ p;
                covered[x] = 1;
                w.set(x, true);
            }
            words.push_back(std::move(w));
        }
    };

    // Canonical RREF enumeration of k-dimensional subspaces of GF(2)^n:
    // choose pivot columns, then assign the free cells (columns above the
    // pivot that are not pivots themselves).
    std::vector<int> piv_choice(k);
    auto fill_free = [&](auto&& self, int row) -> void {
        if (row == k) {
            emit_cosets();
            return;
        }
        std::vector<int> free_cols;
        for (int c = pivots[row] + 1; c < n; ++c)
            if (std::find(pivots.begin(), pivots.end(), c) == pivots.end())
                free_cols.push_back(c);
        const std::size_t combos = std::size_t(1) << free_cols.size();
        for (std::size_t f = 0; f < combos; ++f) {
            uint32_t v = uint32_t(1) << pivots[row];
            for (std::size_t j = 0; j < free_cols.size(); ++j)
                if ((f >> j) & 1) v |= uint32_t(1) << free_cols[j];
            basis[row] = v;
            self(self, row + 1);
        }
    };
    auto choose_pivots = [&](auto&& self, int from, int row) -> void {
        if (row == k) {
            fill_free(fill_free, 0);
            return;
        }
        for (int c = from; c <= n - (k - row); ++c) {
            pivots[row] = c;
            self(self, c + 1, row + 1);
        }
    };
    choose_pivots(choose_pivots, 0, 0);
    return words;
}

RMCode hadamard_subcode(const RMCode& code) {
    if (code.r < 1) throw PreconditionError("code must contain the linear forms");
    // Not a full RM code: generators are the degree-1 monomials only (no
    // constant), so dim = n and any two codewords differ in exactly 2^{n-1}
    // positions. dual_generators is left empty.
    RMCode h;
    h.n = code.n;
    h.r = 1;
    h.block_len = code.block_len;
    h.dim = code.n;
    for (int j = 0; j < code.n; ++j) h.monomials.push_back(uint32_t(1) << j);
    h.generators = monomial_rows(code.n, h.monomials);
    h.dual_generators = GF2Matrix(code.block_len);
    return h;
}

BitWord CosetTable::leader(std::size_t idx) const {
    BitWord w(word_len);
    for (std::size_t j = 0; j < nwords; ++j) {
        uint64_t b = leaders[idx * nwords + j];
        for (int t = 0; t < 64; ++t) {
            std::size_t pos = 64 * j + t;
            if (pos < word_len && ((b >> t) & 1)) w.set(pos, true);
        }
    }
    return w;
}

CosetTable build_coset_table(const RMCode& tested_code) {
    const std::size_t N = tested_code.block_len;
    const std::size_t bits = N - tested_code.dim;
    if (bits > CosetTable::kMaxBits)
        throw BudgetError("coset space too large to tabulate");

    CosetTable t;
    t.bits = int(bits);
    t.word_len = N;
    t.nwords = (N + 63) / 64;
    const std::size_t size = std::size_t(1) << bits;
    t.degree.assign(size, 0xFF);
    t.leaders.assign(size * t.nwords, 0);

    std::vector<uint32_t> sigma(N, 0);
    for (std::size_t j = 0; j < tested_code.dual_generators.nrows(); ++j) {
        const BitWord& g = tested_code.dual_generators.rows[j];
        for (std::size_t i = 0; i < N; ++i)
            if (g.get(i)) sigma[i] |= uint32_t(1) << j;
    }

    std::vector<uint32_t> queue;
    queue.reserve(size);
    queue.push_back(0);
    t.degree[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const uint32_t s = queue[head];
        const uint8_t next_deg = uint8_t(t.degree[s] + 1);
        for (std::size_t i = 0; i < N; ++i) {
            const uint32_t v = s ^ sigma[i];
            if (t.degree[v] != 0xFF) continue;
            t.degree[v] = next_deg;
            for (std::size_t j = 0; j < t.nwords; ++j)
                t.leaders[v * t.nwords + j] = t.leaders[s * t.nwords + j];
            t.leaders[v * t.nwords + (i >> 6)] ^= uint64_t(1) << (i & 63);
            queue.push_back(v);
        }
    }
    return t;
}

uint32_t pairing_index(const RMCode& tested_code, const BitWord& alpha) {
    if (tested_code.dual_generators.nrows() > 32)
        throw BudgetError("pairing index needs dual dimension <= 32");
    uint32_t idx = 0;
    for (std::size_t j = 0; j < tested_code.dual_generators.nrows(); ++j)
        if (alpha.dot(tested_code.dual_generators.rows[j])) idx |= uint32_t(1) << j;
    return idx;
}

std::string descriptor_json(const RMCode& code) {
    nlohmann::json j{{"n", code.n},
                     {"r", code.r},
                     {"dim", code.dim},
                     {"block_len", code.block_len}};
    return j.dump();
}

std::vector<std::string> hex_rows(const GF2Matrix& m) {
    std::vector<std::string> out;
    out.reserve(m.nrows());
    for (const auto& row : m.rows) out.push_back(row.to_hex());
    return out;
}

}  // namespace rmg
