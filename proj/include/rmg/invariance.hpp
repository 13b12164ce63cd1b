#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rmg/fourier.hpp"
#include "rmg/rm_code.hpp"
#include "rmg/rng.hpp"

namespace rmg {

double normal_cdf(double x);
double normal_quantile(double p);

// Gaussian noise stability curve: probability that two rho-correlated
// standard normals both fall below the mu-quantile. Absolute accuracy ~1e-10
// via the derivative-in-rho integral, taken over an angle substitution so the
// integrand stays smooth up to |rho| = 1.
double gamma_rho(double rho, double mu);

// Squared distance of x to [0,1].
double zeta(double x);

// Upper tail of the chi-square distribution with k degrees of freedom.
double chi2_sf(double x, double k);

struct MultilinearPoly {
    struct Term {
        std::vector<uint32_t> vars;  // strictly increasing variable indices
        double coeff = 0;
    };
    std::size_t nvars = 0;
    std::vector<Term> terms;

    int degree() const;
    double norm2() const;  // sum of squared coefficients
    double eval(const std::vector<double>& x) const;
};

struct RegularityReport {
    double eps_reg = 0;  // max_i sqrt(sum_{I ni i} a_I^2 / ||P||^2)
    std::size_t argmax = 0;
};

RegularityReport regularity(const MultilinearPoly& p);

// Uniform codeword of RM(n,d) drawn through the hash-and-bucket decomposition:
// a random invertible affine change of variables, independent random
// degree-(d-c) polynomials on the 2^c buckets, and an independent complement
// part on the remaining monomials. Distributed identically to a uniform
// degree-<=d polynomial.
BitWord mz_rm_sampler(int n, int d, int c, Rng& rng);

// Direct route: uniform coefficients over all monomials of degree <= d.
BitWord rm_uniform_word(int n, int d, Rng& rng);

// Codeword evaluation vector as a +-1 vector ((-1)^bit).
std::vector<double> pm_vector(const BitWord& w);

enum class Dist { cube, rm, gaussian };
enum class Psi { zeta_fn, sign_fn };

struct GapReport {
    double mean_a = 0, mean_b = 0;
    double gap = 0;      // |mean_a - mean_b|
    double stderr_ = 0;  // pooled
    std::size_t samples = 0;
};

// Monte Carlo estimate of E[psi(P(x))] under two input distributions over
// the same variable count (2^n for the RM distribution).
GapReport invariance_gap(const MultilinearPoly& p, Psi psi, Dist dist_a, Dist dist_b,
                         int n, int d, std::size_t samples, uint64_t seed,
                         int workers = 1);

struct MisReport {
    double mu = 0;
    double stability = 0;   // <f, G f>, exact through the spectrum
    double gamma = 0;       // Gamma_rho(mu)
    double slack = 0;       // stability - gamma
    double rho = 0;
    double max_influence = 0;
    bool hypothesis_met = false;  // max low-degree influence <= tau
    bool compliant = false;       // hypothesis not met, or slack <= theorem slack shape
    double measured_constant = 0; // slack * (1-rho) log(1/tau) / loglog(1/tau)
};

// Empirical majority-is-stablest harness for a [0,1]-valued dense function on
// the walk graph with time eps*2^{d+1} (rho = e^{-eps}).
MisReport mis_harness(const CodeFunction& f, const CanonicalTester& walk_tester,
                      const CosetTable& table, double tau, int ell);

struct TransferReport {
    double e_kwise = 0;   // E[zeta(P)] under uniform RM (bounded independence)
    double e_cube = 0;    // under the uniform cube
    double gap = 0;       // e_cube - e_kwise (the bounded-distance direction)
    double stderr_ = 0;
    bool direction_holds = false;  // e_cube <= e_kwise + slack + 3 sigma
    double slack = 0;              // 2^ell * eps_reg^{0.9} with measured regularity
};

TransferReport bounded_distance_transfer(const MultilinearPoly& p, int n, int d,
                                         std::size_t samples, uint64_t seed,
                                         int workers = 1);

struct MzUniformityReport {
    std::size_t cells = 0;
    std::size_t samples = 0;
    double max_abs_z = 0;     // worst standardized deviation from 1/cells (exact-frequency mode)
    bool within_3sigma = false;
    double chi2 = 0;          // two-sample statistic vs the direct sampler
    double pvalue = 0;
};

// Frequency test of the bucket sampler: exact-frequency z-scores against the
// uniform law plus a two-sample chi-square against the direct
// coefficient sampler.
MzUniformityReport mz_uniformity(int n, int d, int c, std::size_t samples, uint64_t seed);

int default_mz_block(int d);

}  // namespace rmg
