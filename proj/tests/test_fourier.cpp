#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "rmg/fourier.hpp"
#include "rmg/spectrum.hpp"

using namespace rmg;

namespace {

// Character values over the vertex set from a coefficient-space index.
std::vector<double> character_values(std::size_t dim, uint32_t beta) {
    std::vector<double> v(std::size_t(1) << dim);
    for (std::size_t x = 0; x < v.size(); ++x)
        v[x] = (std::popcount(uint32_t(x) & beta) & 1) ? -1.0 : 1.0;
    return v;
}

}  // namespace

TEST_CASE("wht of constants and basis characters") {
    auto D = build_rm(4, 1);  // dim 5
    auto f1 = dense_function(D, std::vector<double>(32, 1.0));
    auto c1 = wht(f1);
    CHECK(c1[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t b = 1; b < c1.size(); ++b) CHECK(c1[b] == doctest::Approx(0.0).epsilon(1e-15));

    auto fc = dense_function(D, character_values(5, 0b10110));
    auto cc = wht(fc);
    for (std::size_t b = 0; b < cc.size(); ++b)
        CHECK(cc[b] == doctest::Approx(b == 0b10110 ? 1.0 : 0.0).epsilon(1e-15));
}

TEST_CASE("transform involution and Parseval on random data") {
    auto D = build_rm(5, 2);  // dim 16
    Rng rng(83);
    std::vector<double> vals(std::size_t(1) << 16);
    for (auto& v : vals) v = 2.0 * rng.unit() - 1.0;
    auto f = dense_function(D, vals);
    auto fhat = wht(f);
    auto back = values_from_coefficients(fhat);
    double maxdiff = 0, e2 = 0, parseval = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        maxdiff = std::max(maxdiff, std::abs(back[i] - vals[i]));
        e2 += vals[i] * vals[i];
    }
    e2 /= double(vals.size());
    for (double c : fhat) parseval += c * c;
    CHECK(maxdiff < 1e-12);
    CHECK(parseval == doctest::Approx(e2).epsilon(1e-12));
}

TEST_CASE("coefficient cosets resolve through the table") {
    auto C = build_rm(4, 1);  // tested code of the (4,2)-dual pair
    auto table = build_coset_table(C);
    auto zero = coefficient_coset(table, 0);
    CHECK(zero.degree == 0);
    for (uint32_t beta = 1; beta < 32; beta <<= 1) {
        auto rep = coefficient_coset(table, beta);
        CHECK(pairing_index(C, rep.leader) == beta);
        auto direct = coset_leader(C, rep.leader, default_leader_budget(C));
        CHECK(direct.degree == rep.degree);
    }
}

TEST_CASE("coefficient lookup agrees with the full transform") {
    auto D = build_rm(4, 2);  // dim 11
    auto table = build_coset_table(dual(D));
    Rng rng(181);
    std::vector<double> vals(std::size_t(1) << 11);
    for (auto& v : vals) v = rng.normal();
    auto f = dense_function(D, vals);
    auto fhat = wht(f);
    for (int it = 0; it < 20; ++it) {
        uint32_t beta = uint32_t(rng.below(fhat.size()));
        auto [rep, coeff] = coefficient_by_coset(f, table, beta);
        CHECK(coeff == doctest::Approx(fhat[beta]).epsilon(1e-10));
        CHECK(rep.degree == table.degree[beta]);
    }

    auto sparse = sparse_function(D, {{coefficient_coset(table, 5), 0.7}});
    auto [rep5, c5] = coefficient_by_coset(sparse, table, 5);
    CHECK(c5 == 0.7);
    CHECK(coefficient_by_coset(sparse, table, 6).second == 0.0);
}

TEST_CASE("influences of single characters and dictator cuts") {
    auto t = rm_tester(5, 2);
    const auto& D = t.dual_code;
    auto table = build_coset_table(t.code);

    // single character with a weight-2 leader touching coordinates 3 and 8
    BitWord alpha(32);
    alpha.set(3, true);
    alpha.set(8, true);
    uint32_t beta = pairing_index(t.code, alpha);
    auto f = dense_function(D, character_values(D.dim, beta));
    auto infl = influences(f, 2, table);
    CHECK(infl.inf[3] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(infl.inf[8] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 32; ++i)
        if (i != 3 && i != 8) CHECK(infl.inf[i] == doctest::Approx(0.0).epsilon(1e-12));

    // dictator cut as a +-1 function: influence 1 on its coordinate at ell=1
    BitWord e5(32);
    e5.set(5, true);
    auto fd = dense_function(D, character_values(D.dim, pairing_index(t.code, e5)));
    auto infd = influences(fd, 1, table);
    CHECK(infd.inf[5] == doctest::Approx(1.0).epsilon(1e-12));
    double total = 0;
    for (double v : infd.inf) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("influence sum bound and monotonicity") {
    auto t = rm_tester(5, 2);
    auto table = build_coset_table(t.code);
    Rng rng(89);
    for (int it = 0; it < 5; ++it) {
        std::vector<double> vals(std::size_t(1) << 16);
        for (auto& v : vals) v = rng.normal();
        auto f = dense_function(t.dual_code, vals);
        double prev_total = 0;
        for (int ell = 1; ell <= 3; ++ell) {
            auto infl = influences(f, ell, table);
            double total = 0;
            for (double v : infl.inf) total += v;
            CHECK(total <= double(ell) * infl.variance + 1e-9);
            CHECK(total >= prev_total - 1e-12);
            prev_total = total;
        }
    }
    CHECK_THROWS_AS(influences(dense_function(t.dual_code,
                                              std::vector<double>(1 << 16, 1.0)),
                               4, table),
                    PreconditionError);
}

TEST_CASE("noise stability: constants, dictator cuts, spectral bound") {
    auto t = rm_tester(5, 2);
    auto table = build_coset_table(t.code);
    const std::size_t V = std::size_t(1) << 16;

    auto ones = dense_function(t.dual_code, std::vector<double>(V, 1.0));
    CHECK(noise_stability(ones, t, table) == doctest::Approx(1.0).epsilon(1e-12));

    // dictator-cut indicator: mu^2 + lambda_i * Var = 1/4 + 1/2 * 1/4
    BitWord e2(32);
    e2.set(2, true);
    uint32_t beta = pairing_index(t.code, e2);
    std::vector<double> ind(V);
    for (std::size_t x = 0; x < V; ++x)
        ind[x] = (std::popcount(uint32_t(x) & beta) & 1) ? 1.0 : 0.0;
    auto f = dense_function(t.dual_code, ind);
    double stab = noise_stability(f, t, table);
    CHECK(stab == doctest::Approx(0.375).epsilon(1e-12));

    // 1 - <f,Gf>/E[f^2] equals the dictator-cut expansion
    auto g = make_cayley(t);
    auto cut = expansion_dictator_cut(g, 2);
    CHECK(1.0 - stab / 0.5 == doctest::Approx(cut.phi).epsilon(1e-9));

    // mean-zero spectral bound
    Rng rng(97);
    std::vector<double> vals(V);
    double mean = 0;
    for (auto& v : vals) mean += (v = rng.normal());
    mean /= double(V);
    for (auto& v : vals) v -= mean;
    auto fz = dense_function(t.dual_code, vals);
    auto lam = base_lambda_table(t, table);
    double lmax = -1;
    for (std::size_t b = 1; b < lam.size(); ++b) lmax = std::max(lmax, lam[b]);
    double e2sum = 0;
    for (double v : vals) e2sum += v * v;
    e2sum /= double(V);
    CHECK(noise_stability(fz, t, table) <= lmax * e2sum + 1e-9);
}

TEST_CASE("sparse and dense routes agree") {
    auto t = rm_tester(5, 2);
    auto table = build_coset_table(t.code);
    const std::size_t V = std::size_t(1) << 16;

    BitWord a1(32), a2(32);
    a1.set(4, true);
    a2.set(1, true);
    a2.set(9, true);
    double c1 = 0.8, c2 = -0.5;
    std::vector<double> vals(V);
    uint32_t b1 = pairing_index(t.code, a1), b2 = pairing_index(t.code, a2);
    for (std::size_t x = 0; x < V; ++x) {
        double v1 = (std::popcount(uint32_t(x) & b1) & 1) ? -1.0 : 1.0;
        double v2 = (std::popcount(uint32_t(x) & b2) & 1) ? -1.0 : 1.0;
        vals[x] = c1 * v1 + c2 * v2;
    }
    auto dense = dense_function(t.dual_code, vals);
    auto sparse = sparse_function(
        t.dual_code, {{CosetRep{a1, a1, 1}, c1}, {CosetRep{a2, a2, 2}, c2}});

    CHECK(noise_stability(dense, t, table) ==
          doctest::Approx(noise_stability(sparse, t, table)).epsilon(1e-10));
    auto id = influences(dense, 2, table);
    auto is = influences(sparse, 2, table);
    for (std::size_t i = 0; i < 32; ++i)
        CHECK(id.inf[i] == doctest::Approx(is.inf[i]).epsilon(1e-10));
}

TEST_CASE("function dump round trip") {
    auto D = build_rm(3, 1);
    Rng rng(101);
    std::vector<double> vals(16);
    for (auto& v : vals) v = rng.normal();
    auto f = dense_function(D, vals);
    const std::string path = "fn_roundtrip.bin";
    save_function(f, path);
    auto g = load_function(path);
    CHECK(g.dual_code.n == 3);
    CHECK(g.values == f.values);
    std::remove(path.c_str());
}
