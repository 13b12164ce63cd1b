#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmg/tester.hpp"

namespace rmg {

// Real-valued function on D = C-perp. Dense mode stores one value per vertex,
// indexed by the coefficient vector over D's generators; sparse mode stores
// (coset representative, coefficient) pairs in distinct cosets.
struct CodeFunction {
    RMCode dual_code;
    std::vector<double> values;                        // dense
    std::vector<std::pair<CosetRep, double>> sparse;   // sparse Fourier form

    static constexpr int kMaxDenseBits = 24;

    bool is_dense() const { return !values.empty(); }
    std::size_t dim() const { return dual_code.dim; }
};

CodeFunction dense_function(RMCode dual_code, std::vector<double> values);
CodeFunction sparse_function(RMCode dual_code,
                             std::vector<std::pair<CosetRep, double>> terms);

// Unnormalized in-place Walsh-Hadamard butterfly; applying it twice scales by
// the length.
void fwht_inplace(std::vector<double>& a);

// Normalized coefficients: fhat(beta) = E_x[f(x) (-1)^{<beta,x>}], so that
// sum fhat^2 = E[f^2].
std::vector<double> wht(const CodeFunction& f);

// Vertex values from Fourier coefficients (the inverse transform).
std::vector<double> values_from_coefficients(std::vector<double> fhat);

// Resolves a coefficient-space index to the coset of C it names: the lift is
// the table's minimum-weight representative, whose pairing with D's
// generators equals beta.
CosetRep coefficient_coset(const CosetTable& table, uint32_t beta);

// Coset resolution together with the function's coefficient there.
std::pair<CosetRep, double> coefficient_by_coset(const CodeFunction& f,
                                                 const CosetTable& table, uint32_t beta);

struct InfluenceTable {
    int ell = 0;
    std::vector<double> inf;  // per coordinate of [N]
    double variance = 0;
};

// ell-degree influences: squared coefficients of cosets whose leader has
// weight <= ell and touches coordinate i. Requires ell below half the
// distance of C (unique leaders).
InfluenceTable influences(const CodeFunction& f, int ell, const CosetTable& table);

// <f, G f> = sum_beta lambda_beta fhat(beta)^2 with the tester's transformed
// eigenvalues.
double noise_stability(const CodeFunction& f, const CanonicalTester& tester,
                       const CosetTable& table);

// Binary dump: one JSON header line {n, d, dim}, then 2^dim little-endian
// doubles.
void save_function(const CodeFunction& f, const std::string& path);
CodeFunction load_function(const std::string& path);

}  // namespace rmg
