#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "rmg/invariance.hpp"
#include "rmg/spectrum.hpp"

using namespace rmg;
using namespace rmg::testhelpers;

TEST_CASE("normal quantile inverts the cdf") {
    for (double p : {1e-6, 0.02, 0.25, 0.5, 0.75, 0.9, 0.999999})
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
    CHECK_THROWS_AS(normal_quantile(0.0), PreconditionError);
}

TEST_CASE("gamma curve closed forms") {
    for (double mu : {0.0, 0.1, 0.3, 0.5, 0.8, 1.0}) {
        CHECK(gamma_rho(0.0, mu) == doctest::Approx(mu * mu).epsilon(1e-9));
        CHECK(gamma_rho(1.0, mu) == doctest::Approx(mu).epsilon(1e-9));
    }
    // orthant identity at mu = 1/2
    for (double rho : {0.3, 0.7}) {
        double expected = 0.25 + std::asin(rho) / (2 * M_PI);
        CHECK(gamma_rho(rho, 0.5) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("gamma curve is monotone and dominates independence") {
    double prev_mu = -1;
    for (int i = 0; i <= 20; ++i) {
        double mu = i / 20.0;
        double prev_rho = -1;
        for (int j = 0; j <= 20; ++j) {
            double rho = j / 20.0;
            double g = gamma_rho(rho, mu);
            CHECK(g >= mu * mu - 1e-7);
            CHECK(g >= prev_rho - 1e-7);  // monotone in rho
            prev_rho = g;
        }
        double g_half = gamma_rho(0.35, mu);
        CHECK(g_half >= prev_mu - 1e-7);  // monotone in mu at fixed rho
        prev_mu = g_half;
    }
    CHECK(gamma_rho(0.6, 0.0) == 0.0);
    CHECK(gamma_rho(0.6, 1.0) == 1.0);
}

TEST_CASE("zeta functional") {
    CHECK(zeta(0.5) == 0.0);
    CHECK(zeta(-0.3) == doctest::Approx(0.09).epsilon(1e-15));
    CHECK(zeta(1.2) == doctest::Approx(0.04).epsilon(1e-12));
    for (int i = 0; i <= 100; ++i) {
        double x = -2.0 + 4.0 * i / 100.0;
        CHECK(zeta(x) >= 0.0);
        if (x >= 0.0 && x <= 1.0) CHECK(zeta(x) == 0.0);
        if (x < -0.01 || x > 1.01) CHECK(zeta(x) > 0.0);
    }
}

TEST_CASE("chi-square tail") {
    CHECK(chi2_sf(0.0, 5) == doctest::Approx(1.0));
    CHECK(chi2_sf(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(chi2_sf(10, 4) < chi2_sf(5, 4));
}

TEST_CASE("regularity") {
    MultilinearPoly p1;
    p1.nvars = 4;
    p1.terms = {{{0}, 1.0}};
    CHECK(regularity(p1).eps_reg == doctest::Approx(1.0));

    auto psum = normalized_sum(16);
    CHECK(regularity(psum).eps_reg == doctest::Approx(0.25).epsilon(1e-12));

    MultilinearPoly pd;
    pd.nvars = 4;
    pd.terms = {{{0, 1}, 1.0}, {{2, 3}, 1.0}};
    CHECK(regularity(pd).eps_reg == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    MultilinearPoly zero;
    zero.nvars = 2;
    CHECK_THROWS_AS(regularity(zero), PreconditionError);
}

TEST_CASE("bucket sampler outputs codewords") {
    Rng rng(103);
    struct Params { int n, d, c; };
    for (auto [n, d, c] : {Params{3, 1, 1}, Params{4, 2, 2}, Params{5, 2, 1}}) {
        auto code = build_rm(n, d);
        for (int it = 0; it < 50; ++it) {
            BitWord w = mz_rm_sampler(n, d, c, rng);
            CHECK(contains(code, w));
        }
    }
    CHECK_THROWS_AS(mz_rm_sampler(3, 1, 2, rng), PreconditionError);
}

TEST_CASE("bucket sampler uniformity at (3,1)") {
    auto rep = mz_uniformity(3, 1, 1, 30000, 107);
    CHECK(rep.cells == 16);
    CHECK(rep.max_abs_z <= 4.5);  // acceptance runs the full 3-sigma version
    CHECK(rep.pvalue > 1e-4);
}

TEST_CASE("bucket sampler vs direct sampler at (4,2)") {
    auto rep = mz_uniformity(4, 2, 2, 20000, 109);
    CHECK(rep.cells == 2048);
    CHECK(rep.pvalue > 0.001);
}

TEST_CASE("invariance gap: dictator null case") {
    MultilinearPoly p;
    p.nvars = 16;
    p.terms = {{{0}, 1.0}};
    auto rep = invariance_gap(p, Psi::zeta_fn, Dist::cube, Dist::rm, 4, 2, 20000, 113);
    CHECK(rep.mean_a == doctest::Approx(0.5).epsilon(0.05));
    CHECK(rep.mean_b == doctest::Approx(0.5).epsilon(0.05));
    CHECK(rep.gap <= 3.5 * rep.stderr_ + 1e-9);
}

TEST_CASE("invariance gap: same distribution vanishes") {
    Rng rng(127);
    auto p = make_regular_poly(32, 40, 0.2, rng);
    auto rep = invariance_gap(p, Psi::zeta_fn, Dist::rm, Dist::rm, 5, 2, 20000, 131);
    CHECK(rep.gap <= 3.5 * rep.stderr_ + 1e-9);
}

TEST_CASE("invariance gap: normalized sum under zeta at (7,3)") {
    auto p = normalized_sum(128);
    CHECK(regularity(p).eps_reg == doctest::Approx(1.0 / std::sqrt(128.0)).epsilon(1e-12));
    auto rep = invariance_gap(p, Psi::zeta_fn, Dist::cube, Dist::rm, 7, 3, 30000, 137);
    CHECK(rep.gap <= 0.05);
}

TEST_CASE("invariance gap: sign test for a regular degree-2 polynomial") {
    Rng rng(139);
    auto p = make_regular_poly(128, 256, 0.1, rng);
    CHECK(regularity(p).eps_reg <= 0.1);
    CHECK(p.degree() == 2);
    auto rep = invariance_gap(p, Psi::sign_fn, Dist::cube, Dist::rm, 7, 3, 30000, 149);
    CHECK(rep.gap <= 0.1);
}

TEST_CASE("gaussian route is available") {
    auto p = normalized_sum(64);
    auto rep = invariance_gap(p, Psi::zeta_fn, Dist::gaussian, Dist::cube, 6, 2, 20000, 151);
    CHECK(rep.gap <= 0.05);
}

TEST_CASE("majority-is-stablest harness") {
    auto t = walk_tester(rm_tester(5, 2), 0.25 * 8);
    auto table = build_coset_table(t.code);
    const std::size_t V = std::size_t(1) << 16;

    // constant 1/2: slack <= 0, compliant
    auto half = dense_function(t.dual_code, std::vector<double>(V, 0.5));
    auto rep = mis_harness(half, t, table, 0.1, 3);
    CHECK(rep.mu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.stability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.slack <= 0.0);
    CHECK(rep.hypothesis_met);
    CHECK(rep.compliant);

    // majority-like rounding of the dictator sum: low influences, measure ~1/2
    const auto& D = t.dual_code;
    std::vector<uint32_t> dict_beta;
    for (std::size_t i = 0; i < 32; ++i) {
        BitWord e(32);
        e.set(i, true);
        dict_beta.push_back(pairing_index(t.code, e));
    }
    std::vector<double> vals(V);
    for (std::size_t x = 0; x < V; ++x) {
        int s = 0;
        for (uint32_t b : dict_beta) s += (std::popcount(uint32_t(x) & b) & 1) ? -1 : 1;
        vals[x] = s >= 0 ? 1.0 : 0.0;
    }
    auto maj = dense_function(D, vals);
    auto mrep = mis_harness(maj, t, table, 0.3, 3);
    CHECK(mrep.mu > 0.3);
    CHECK(mrep.mu < 0.9);
    CHECK(mrep.max_influence < 0.3);
    CHECK(mrep.hypothesis_met);
    CHECK(mrep.stability <= 1.0);

    // dictator cut: hypothesis gate trips, test is vacuous
    std::vector<double> cut(V);
    for (std::size_t x = 0; x < V; ++x)
        cut[x] = (std::popcount(uint32_t(x) & dict_beta[4]) & 1) ? 1.0 : 0.0;
    auto drep = mis_harness(dense_function(D, cut), t, table, 0.1, 3);
    CHECK_FALSE(drep.hypothesis_met);
    CHECK(drep.max_influence == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(drep.compliant);  // not applicable counts as compliant
}

TEST_CASE("bounded-distance transfer") {
    // range inside [0,1]: both sides essentially zero
    MultilinearPoly inr;
    inr.nvars = 128;
    inr.terms = {{{}, 0.5}, {{0}, 0.1}, {{1}, 0.1}};
    auto r0 = bounded_distance_transfer(inr, 7, 3, 20000, 157);
    CHECK(r0.e_cube == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r0.e_kwise == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r0.direction_holds);

    auto p = normalized_sum(128);
    auto r1 = bounded_distance_transfer(p, 7, 3, 30000, 163);
    CHECK(std::abs(r1.gap) <= 0.05);
    CHECK(r1.direction_holds);

    // scaled by 10: both sides large, direction still holds within noise
    MultilinearPoly big = p;
    for (auto& t : big.terms) t.coeff *= 10.0;
    auto r2 = bounded_distance_transfer(big, 7, 3, 30000, 167);
    CHECK(r2.e_cube > 1.0);
    CHECK(r2.gap <= r2.slack + 3.5 * r2.stderr_);
}
