#include "rmg/fourier.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace rmg {

CodeFunction dense_function(RMCode dual_code, std::vector<double> values) {
    if (dual_code.dim > CodeFunction::kMaxDenseBits)
        throw BudgetError("dense representation beyond budget");
    if (values.size() != (std::size_t(1) << dual_code.dim))
        throw PreconditionError("dense value array must have 2^dim entries");
    CodeFunction f;
    f.dual_code = std::move(dual_code);
    f.values = std::move(values);
    return f;
}

CodeFunction sparse_function(RMCode dual_code,
                             std::vector<std::pair<CosetRep, double>> terms) {
    CodeFunction f;
    f.dual_code = std::move(dual_code);
    f.sparse = std::move(terms);
    return f;
}

void fwht_inplace(std::vector<double>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw PreconditionError("length must be a power of two");
    for (std::size_t h = 1; h < n; h <<= 1)
        for (std::size_t i = 0; i < n; i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                double u = a[j], v = a[j + h];
                a[j] = u + v;
                a[j + h] = u - v;
            }
}

std::vector<double> wht(const CodeFunction& f) {
    if (!f.is_dense()) throw PreconditionError("dense representation required");
    std::vector<double> a = f.values;
    fwht_inplace(a);
    const double scale = 1.0 / double(a.size());
    for (double& v : a) v *= scale;
    return a;
}

std::vector<double> values_from_coefficients(std::vector<double> fhat) {
    fwht_inplace(fhat);
    return fhat;
}

CosetRep coefficient_coset(const CosetTable& table, uint32_t beta) {
    if (beta >= table.size()) throw PreconditionError("index out of range");
    CosetRep rep;
    rep.leader = table.leader(beta);
    rep.alpha = rep.leader;
    rep.degree = table.degree[beta];
    return rep;
}

std::pair<CosetRep, double> coefficient_by_coset(const CodeFunction& f,
                                                 const CosetTable& table, uint32_t beta) {
    CosetRep rep = coefficient_coset(table, beta);
    if (f.is_dense()) {
        // Single coefficient without the full transform:
        // fhat(beta) = E_x[f(x) (-1)^{<beta,x>}].
        double acc = 0;
        for (std::size_t x = 0; x < f.values.size(); ++x)
            acc += (std::popcount(uint32_t(x) & beta) & 1) ? -f.values[x] : f.values[x];
        return {rep, acc / double(f.values.size())};
    }
    for (const auto& [term, coeff] : f.sparse)
        if (term.degree == rep.degree && term.leader == rep.leader) return {rep, coeff};
    return {rep, 0.0};
}

InfluenceTable influences(const CodeFunction& f, int ell, const CosetTable& table) {
    const std::size_t N = f.dual_code.block_len;
    // C = dual(D) has distance 2^{d+1}; leaders are unique below half of it.
    if (ell < 0 || std::size_t(ell) >= (std::size_t(1) << f.dual_code.r))
        throw PreconditionError("influence degree cap must stay below half the code distance");

    InfluenceTable out;
    out.ell = ell;
    out.inf.assign(N, 0.0);

    auto add_term = [&](const CosetRep& rep, double coeff) {
        if (rep.degree > 0) out.variance += coeff * coeff;
        if (rep.degree == 0 || rep.degree > std::size_t(ell)) return;
        for (std::size_t i : rep.leader.support()) out.inf[i] += coeff * coeff;
    };

    if (f.is_dense()) {
        auto fhat = wht(f);
        for (std::size_t beta = 0; beta < fhat.size(); ++beta) {
            if (fhat[beta] == 0.0) continue;
            if (table.degree[beta] > std::size_t(ell)) {
                if (table.degree[beta] > 0) out.variance += fhat[beta] * fhat[beta];
                continue;
            }
            add_term(coefficient_coset(table, uint32_t(beta)), fhat[beta]);
        }
    } else {
        for (const auto& [rep, coeff] : f.sparse) add_term(rep, coeff);
    }
    return out;
}

double noise_stability(const CodeFunction& f, const CanonicalTester& tester,
                       const CosetTable& table) {
    if (f.is_dense()) {
        auto fhat = wht(f);
        auto lam = base_lambda_table(tester, table);
        double acc = 0;
        for (std::size_t beta = 0; beta < fhat.size(); ++beta)
            acc += tester.transform_mu(lam[beta]) * fhat[beta] * fhat[beta];
        return acc;
    }
    double acc = 0;
    for (const auto& [rep, coeff] : f.sparse) {
        double mu = tester.transform_mu(tester.base_mu(rep.leader));
        acc += mu * coeff * coeff;
    }
    return acc;
}

void save_function(const CodeFunction& f, const std::string& path) {
    if (!f.is_dense()) throw PreconditionError("dense representation required");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("cannot open " + path);
    nlohmann::json hdr{{"n", f.dual_code.n}, {"d", f.dual_code.r}, {"dim", f.dual_code.dim}};
    out << hdr.dump() << '\n';
    out.write(reinterpret_cast<const char*>(f.values.data()),
              std::streamsize(f.values.size() * sizeof(double)));
}

CodeFunction load_function(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open " + path);
    std::string hdr_line;
    std::getline(in, hdr_line);
    auto hdr = nlohmann::json::parse(hdr_line);
    RMCode d = build_rm(hdr.at("n").get<int>(), hdr.at("d").get<int>());
    if (d.dim != hdr.at("dim").get<std::size_t>())
        throw PreconditionError("header dimension mismatch");
    std::vector<double> vals(std::size_t(1) << d.dim);
    in.read(reinterpret_cast<char*>(vals.data()),
            std::streamsize(vals.size() * sizeof(double)));
    if (!in) throw PreconditionError("truncated function dump");
    return dense_function(std::move(d), std::move(vals));
}

}  // namespace rmg
