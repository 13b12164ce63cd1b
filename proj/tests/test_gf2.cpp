#include "doctest.h"

#include <set>

#include "rmg/gf2.hpp"
#include "rmg/rng.hpp"

using namespace rmg;

namespace {

// Independent rank oracle: plain elimination on a 0/1 matrix.
std::size_t rank_oracle(std::vector<std::vector<int>> m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && !m[piv][c]) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = 0; i < rows; ++i)
            if (i != r && m[i][c])
                for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
        ++r;
    }
    return r;
}

BitWord word_from_string(const std::string& bits) {
    BitWord w(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] == '1') w.set(i, true);
    return w;
}

GF2Matrix matrix_from_strings(const std::vector<std::string>& rows) {
    GF2Matrix m(rows.front().size());
    for (const auto& r : rows) m.push_row(word_from_string(r));
    return m;
}

}  // namespace

TEST_CASE("rank: identity, zero and a dependent triple") {
    CHECK(rank(matrix_from_strings({"100", "010", "001"})) == 3);
    CHECK(rank(matrix_from_strings({"00000", "00000", "00000", "00000"})) == 0);
    // {110, 011, 101}: third row is the sum of the first two.
    auto m = matrix_from_strings({"110", "011", "101"});
    CHECK(rank_oracle({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}) == 2);
    CHECK(rank(m) == 2);
}

TEST_CASE("rank agrees with the oracle on random matrices") {
    Rng rng(7);
    for (int it = 0; it < 50; ++it) {
        std::size_t rows = 1 + rng.below(8), cols = 1 + rng.below(12);
        GF2Matrix m(cols);
        std::vector<std::vector<int>> o(rows, std::vector<int>(cols, 0));
        for (std::size_t i = 0; i < rows; ++i) {
            BitWord w(cols);
            for (std::size_t j = 0; j < cols; ++j)
                if (rng.bit()) {
                    w.set(j, true);
                    o[i][j] = 1;
                }
            m.push_row(w);
        }
        CHECK(rank(m) == rank_oracle(o));
        CHECK(rank(m) <= std::min(rows, cols));
    }
}

TEST_CASE("weight") {
    CHECK(word_from_string("00000").weight() == 0);
    CHECK(word_from_string("10110").weight() == 3);
    // Evaluation vector of any nonzero linear form on GF(2)^5 is balanced:
    // brute force over the 32 points.
    AffineForm f;
    f.linear = word_from_string("01011");
    BitWord ev = evaluate_affine(f, 5);
    std::size_t ones = 0;
    for (std::size_t x = 0; x < 32; ++x) {
        int v = 0;
        for (int j = 0; j < 5; ++j)
            if (f.linear.get(j) && ((x >> j) & 1)) v ^= 1;
        CHECK(ev.get(x) == (v == 1));
        ones += v;
    }
    CHECK(ones == 16);
    CHECK(ev.weight() == 16);
}

TEST_CASE("evaluate_affine fixed cases") {
    AffineForm constant;
    constant.linear = BitWord(3);
    constant.constant = true;
    CHECK(evaluate_affine(constant, 3) == word_from_string("11111111"));

    AffineForm e1;
    e1.linear = word_from_string("10");
    CHECK(evaluate_affine(e1, 2) == word_from_string("0101"));
}

TEST_CASE("weight is the Hamming distance and satisfies the triangle inequality") {
    Rng rng(11);
    for (int it = 0; it < 200; ++it) {
        BitWord a(40), b(40), c(40);
        for (std::size_t i = 0; i < 40; ++i) {
            if (rng.bit()) a.set(i, true);
            if (rng.bit()) b.set(i, true);
            if (rng.bit()) c.set(i, true);
        }
        std::size_t dab = (a ^ b).weight(), dbc = (b ^ c).weight(), dac = (a ^ c).weight();
        std::size_t direct = 0;
        for (std::size_t i = 0; i < 40; ++i) direct += a.get(i) != b.get(i);
        CHECK(dab == direct);
        CHECK(dac <= dab + dbc);
    }
}

TEST_CASE("affine forms differing in the constant XOR to the constant form") {
    Rng rng(13);
    for (int it = 0; it < 50; ++it) {
        AffineForm f, g;
        f.linear = BitWord(4);
        for (int j = 0; j < 4; ++j) f.linear.set(j, rng.bit());
        g.linear = f.linear;
        f.constant = rng.bit();
        g.constant = rng.bit();
        AffineForm diff;
        diff.linear = BitWord(4);
        diff.constant = f.constant != g.constant;
        CHECK((evaluate_affine(f, 4) ^ evaluate_affine(g, 4)) == evaluate_affine(diff, 4));
    }
}

TEST_CASE("hex round trip") {
    Rng rng(17);
    for (std::size_t len : {1u, 7u, 8u, 63u, 64u, 65u, 130u}) {
        BitWord w(len);
        for (std::size_t i = 0; i < len; ++i)
            if (rng.bit()) w.set(i, true);
        CHECK(BitWord::from_hex(len, w.to_hex()) == w);
    }
}

TEST_CASE("solver decomposes row-space vectors and rejects others") {
    Rng rng(19);
    GF2Matrix m(20);
    for (int i = 0; i < 6; ++i) {
        BitWord w(20);
        for (std::size_t j = 0; j < 20; ++j)
            if (rng.bit()) w.set(j, true);
        m.push_row(w);
    }
    GF2Solver solver(m);
    CHECK(solver.rank() == rank(m));
    for (int it = 0; it < 40; ++it) {
        BitWord target(20);
        BitWord mask(6);
        for (int i = 0; i < 6; ++i)
            if (rng.bit()) {
                mask.set(i, true);
                target ^= m.rows[i];
            }
        auto coeff = solver.decompose(target);
        REQUIRE(coeff.has_value());
        BitWord rebuilt(20);
        for (int i = 0; i < 6; ++i)
            if (coeff->get(i)) rebuilt ^= m.rows[i];
        CHECK(rebuilt == target);
        CHECK(solver.in_rowspace(target));
    }
}
