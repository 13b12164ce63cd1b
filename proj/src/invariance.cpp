#include "rmg/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rmg/parallel.hpp"

namespace rmg {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (p <= 0 || p >= 1) throw PreconditionError("quantile argument must be in (0,1)");
    // Acklam's rational approximation, then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

namespace {

// Adaptive Simpson on a smooth integrand.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double fl, double fm, double fh, double tol, int depth) {
    double mid = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    double flm = f(lm), frm = f(rm);
    double whole = (hi - lo) / 6.0 * (fl + 4 * fm + fh);
    double left = (mid - lo) / 6.0 * (fl + 4 * flm + fm);
    double right = (hi - mid) / 6.0 * (fm + 4 * frm + fh);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, lo, mid, fl, flm, fm, tol / 2, depth - 1) +
           adaptive_simpson(f, mid, hi, fm, frm, fh, tol / 2, depth - 1);
}

}  // namespace

double gamma_rho(double rho, double mu) {
    if (rho < -1 || rho > 1 || mu < 0 || mu > 1)
        throw PreconditionError("gamma_rho arguments out of range");
    if (mu == 0) return 0;
    if (mu == 1) return 1;
    if (rho == 0) return mu * mu;
    if (rho == 1) return mu;
    if (rho == -1) return std::max(0.0, 2 * mu - 1);

    const double t = normal_quantile(mu);
    // d/drho Pr[X<=t, Y<=t] is the bivariate density at (t,t); integrating
    // over rho = sin(theta) removes the endpoint singularity.
    auto g = [t](double theta) { return std::exp(-t * t / (1.0 + std::sin(theta))); };
    const double upper = std::asin(rho);
    double lo = std::min(0.0, upper), hi = std::max(0.0, upper);
    double integral =
        adaptive_simpson(g, lo, hi, g(lo), g(0.5 * (lo + hi)), g(hi), 1e-12, 48);
    if (upper < 0) integral = -integral;
    return mu * mu + integral / (2 * M_PI);
}

double zeta(double x) {
    double d = std::max({-x, x - 1.0, 0.0});
    return d * d;
}

double chi2_sf(double x, double k) {
    if (x < 0 || k <= 0) throw PreconditionError("chi2_sf arguments out of range");
    // Regularized upper incomplete gamma Q(k/2, x/2), series / continued fraction.
    double a = k / 2, z = x / 2;
    if (z == 0) return 1.0;
    double lg = std::lgamma(a);
    if (z < a + 1) {
        // P by series, Q = 1 - P
        double sum = 1.0 / a, term = sum, ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1;
            term *= z / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-z + a * std::log(z) - lg);
        return std::max(0.0, 1.0 - p);
    }
    // Q by Lentz continued fraction.
    double tiny = 1e-300;
    double b0 = z + 1 - a, c = 1 / tiny, dd = 1 / b0, h = dd;
    for (int i = 1; i < 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b0 += 2;
        dd = an * dd + b0;
        if (std::abs(dd) < tiny) dd = tiny;
        c = b0 + an / c;
        if (std::abs(c) < tiny) c = tiny;
        dd = 1 / dd;
        double delta = dd * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-z + a * std::log(z) - lg) * h;
}

int MultilinearPoly::degree() const {
    int d = 0;
    for (const auto& t : terms) d = std::max<int>(d, int(t.vars.size()));
    return d;
}

double MultilinearPoly::norm2() const {
    double s = 0;
    for (const auto& t : terms) s += t.coeff * t.coeff;
    return s;
}

double MultilinearPoly::eval(const std::vector<double>& x) const {
    double acc = 0;
    for (const auto& t : terms) {
        double prod = t.coeff;
        for (uint32_t v : t.vars) prod *= x[v];
        acc += prod;
    }
    return acc;
}

RegularityReport regularity(const MultilinearPoly& p) {
    double n2 = p.norm2();
    if (n2 <= 0) throw PreconditionError("zero polynomial");
    std::vector<double> per(p.nvars, 0);
    for (const auto& t : p.terms)
        for (uint32_t v : t.vars) per[v] += t.coeff * t.coeff;
    RegularityReport rep;
    for (std::size_t i = 0; i < per.size(); ++i) {
        double e = std::sqrt(per[i] / n2);
        if (e > rep.eps_reg) {
            rep.eps_reg = e;
            rep.argmax = i;
        }
    }
    return rep;
}

int default_mz_block(int d) { return std::max(1, d - 1); }

namespace {

// Truth table (byte per point) of a polynomial given coefficient bits per
// monomial mask, via the subset-sum transform.
std::vector<uint8_t> truth_table(int n, std::vector<uint8_t> coeff) {
    const std::size_t N = std::size_t(1) << n;
    for (int j = 0; j < n; ++j) {
        const std::size_t bit = std::size_t(1) << j;
        for (std::size_t x = 0; x < N; ++x)
            if (x & bit) coeff[x] ^= coeff[x ^ bit];
    }
    return coeff;
}

std::vector<uint32_t> random_invertible(int n, Rng& rng) {
    for (;;) {
        std::vector<uint32_t> rows(n);
        for (auto& r : rows) r = uint32_t(rng.u64()) & ((uint32_t(1) << n) - 1);
        // rank check
        std::vector<uint32_t> m = rows;
        int rank = 0;
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int i = rank; i < n; ++i)
                if ((m[i] >> col) & 1) { piv = i; break; }
            if (piv < 0) continue;
            std::swap(m[rank], m[piv]);
            for (int i = 0; i < n; ++i)
                if (i != rank && ((m[i] >> col) & 1)) m[i] ^= m[rank];
            ++rank;
        }
        if (rank == n) return rows;
    }
}

}  // namespace

BitWord rm_uniform_word(int n, int d, Rng& rng) {
    const std::size_t N = std::size_t(1) << n;
    std::vector<uint8_t> coeff(N, 0);
    for (uint32_t m = 0; m < N; ++m)
        if (std::popcount(m) <= d) coeff[m] = uint8_t(rng.bit());
    auto tt = truth_table(n, std::move(coeff));
    BitWord w(N);
    for (std::size_t x = 0; x < N; ++x)
        if (tt[x]) w.set(x, true);
    return w;
}

BitWord mz_rm_sampler(int n, int d, int c, Rng& rng) {
    if (d < 0 || d > n) throw PreconditionError("degree out of range");
    if (c < 1 || c > d) throw PreconditionError("block parameter must satisfy 1 <= c <= d");
    const std::size_t N = std::size_t(1) << n;
    const int m = n - c;
    const std::size_t buckets = std::size_t(1) << c;
    const std::size_t M = std::size_t(1) << m;

    // Bucket part: independent uniform degree-(d-c) polynomials P_a on the
    // last m variables, glued by the indicator of the first c variables.
    std::vector<std::vector<uint8_t>> bucket_tt(buckets);
    for (std::size_t a = 0; a < buckets; ++a) {
        std::vector<uint8_t> coeff(M, 0);
        for (uint32_t mask = 0; mask < M; ++mask)
            if (std::popcount(mask) <= d - c) coeff[mask] = uint8_t(rng.bit());
        bucket_tt[a] = truth_table(m, std::move(coeff));
    }

    // Complement part: uniform coefficients on the monomials of degree <= d
    // that are not generated by the bucket decomposition (those with more
    // than d-c variables among the last m).
    std::vector<uint8_t> q2(N, 0);
    for (uint32_t mask = 0; mask < N; ++mask) {
        int high = std::popcount(mask >> c);
        int total = std::popcount(mask);
        if (total <= d && high > d - c) q2[mask] = uint8_t(rng.bit());
    }
    auto q2_tt = truth_table(n, std::move(q2));

    std::vector<uint8_t> w(N);
    for (std::size_t u = 0; u < N; ++u) {
        std::size_t a = u & (buckets - 1);
        w[u] = uint8_t(bucket_tt[a][u >> c] ^ q2_tt[u]);
    }

    // Random invertible affine change of variables; composition preserves
    // degree and uniformity.
    auto rows = random_invertible(n, rng);
    uint32_t shift = uint32_t(rng.u64()) & (uint32_t(N) - 1);
    BitWord out(N);
    for (std::size_t x = 0; x < N; ++x) {
        uint32_t y = shift;
        for (int i = 0; i < n; ++i)
            if (std::popcount(rows[i] & uint32_t(x)) & 1) y ^= uint32_t(1) << i;
        if (w[y]) out.set(x, true);
    }
    return out;
}

std::vector<double> pm_vector(const BitWord& w) {
    std::vector<double> x(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) x[i] = w.get(i) ? -1.0 : 1.0;
    return x;
}

namespace {

double apply_psi(Psi psi, double y) {
    switch (psi) {
        case Psi::zeta_fn: return zeta(y);
        case Psi::sign_fn: return y >= 0 ? 1.0 : -1.0;
    }
    return 0;
}

void draw_input(Dist dist, int n, int d, Rng& rng, std::vector<double>& x) {
    switch (dist) {
        case Dist::cube:
            for (auto& v : x) v = rng.bit() ? -1.0 : 1.0;
            break;
        case Dist::rm: {
            BitWord w = rm_uniform_word(n, d, rng);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = w.get(i) ? -1.0 : 1.0;
            break;
        }
        case Dist::gaussian:
            for (auto& v : x) v = rng.normal();
            break;
    }
}

struct MeanVar {
    double mean = 0, var = 0;
};

MeanVar mc_psi_mean(const MultilinearPoly& p, Psi psi, Dist dist, int n, int d,
                    std::size_t samples, Rng root, int workers) {
    const std::size_t chunks =
        std::max<std::size_t>(1, std::min<std::size_t>(64, samples / 2048 + 1));
    std::vector<double> sums(chunks, 0), sqs(chunks, 0);
    parallel_chunks(chunks, workers, [&](std::size_t ci) {
        Rng rng = root.split(ci);
        std::size_t lo = samples * ci / chunks, hi = samples * (ci + 1) / chunks;
        std::vector<double> x(p.nvars);
        double s = 0, q = 0;
        for (std::size_t it = lo; it < hi; ++it) {
            draw_input(dist, n, d, rng, x);
            double v = apply_psi(psi, p.eval(x));
            s += v;
            q += v * v;
        }
        sums[ci] = s;
        sqs[ci] = q;
    });
    double s = 0, q = 0;
    for (std::size_t ci = 0; ci < chunks; ++ci) {
        s += sums[ci];
        q += sqs[ci];
    }
    MeanVar mv;
    mv.mean = s / double(samples);
    mv.var = std::max(0.0, q / double(samples) - mv.mean * mv.mean);
    return mv;
}

}  // namespace

GapReport invariance_gap(const MultilinearPoly& p, Psi psi, Dist dist_a, Dist dist_b,
                         int n, int d, std::size_t samples, uint64_t seed, int workers) {
    if ((dist_a == Dist::rm || dist_b == Dist::rm) &&
        p.nvars != (std::size_t(1) << n))
        throw PreconditionError("polynomial arity must be 2^n for the RM distribution");
    MeanVar a = mc_psi_mean(p, psi, dist_a, n, d, samples, Rng(seed).split(1), workers);
    MeanVar b = mc_psi_mean(p, psi, dist_b, n, d, samples, Rng(seed).split(2), workers);
    GapReport rep;
    rep.mean_a = a.mean;
    rep.mean_b = b.mean;
    rep.gap = std::abs(a.mean - b.mean);
    rep.stderr_ = std::sqrt(a.var / double(samples) + b.var / double(samples));
    rep.samples = samples;
    return rep;
}

MisReport mis_harness(const CodeFunction& f, const CanonicalTester& walk_tester,
                      const CosetTable& table, double tau, int ell) {
    if (!f.is_dense()) throw PreconditionError("dense function required");
    if (!walk_tester.walk_time) throw PreconditionError("walk tester required");
    for (double v : f.values)
        if (v < -1e-12 || v > 1 + 1e-12)
            throw PreconditionError("function must be [0,1]-valued");

    MisReport rep;
    auto fhat = wht(f);
    rep.mu = fhat[0];
    rep.stability = noise_stability(f, walk_tester, table);
    const double eps =
        *walk_tester.walk_time / double(std::size_t(1) << (f.dual_code.r + 1));
    rep.rho = std::exp(-eps);
    rep.gamma = gamma_rho(rep.rho, rep.mu);
    rep.slack = rep.stability - rep.gamma;

    auto infl = influences(f, ell, table);
    for (double v : infl.inf) rep.max_influence = std::max(rep.max_influence, v);
    rep.hypothesis_met = rep.max_influence <= tau;
    if (tau > 0 && tau < 1 && rep.slack > 0) {
        double logt = std::log(1.0 / tau);
        rep.measured_constant = rep.slack * (1.0 - rep.rho) * logt / std::log(logt);
    }
    rep.compliant = !rep.hypothesis_met || rep.slack <= 0 ||
                    rep.measured_constant < 100.0;  // reported, not asserted
    return rep;
}

TransferReport bounded_distance_transfer(const MultilinearPoly& p, int n, int d,
                                         std::size_t samples, uint64_t seed, int workers) {
    MeanVar rm = mc_psi_mean(p, Psi::zeta_fn, Dist::rm, n, d, samples, Rng(seed).split(1),
                             workers);
    MeanVar cube = mc_psi_mean(p, Psi::zeta_fn, Dist::cube, n, d, samples,
                               Rng(seed).split(2), workers);
    TransferReport rep;
    rep.e_kwise = rm.mean;
    rep.e_cube = cube.mean;
    rep.gap = cube.mean - rm.mean;
    rep.stderr_ = std::sqrt(rm.var / double(samples) + cube.var / double(samples));
    double eps_reg = regularity(p).eps_reg;
    rep.slack = std::pow(2.0, p.degree()) * std::pow(eps_reg, 0.9);
    rep.direction_holds = rep.gap <= rep.slack + 3 * rep.stderr_;
    return rep;
}

MzUniformityReport mz_uniformity(int n, int d, int c, std::size_t samples, uint64_t seed) {
    RMCode code = build_rm(n, d);
    if (code.dim > 22) throw BudgetError("codeword space too large for frequency tests");
    GF2Solver solver(code.generators);
    const std::size_t cells = std::size_t(1) << code.dim;

    auto index_of = [&](const BitWord& w) {
        auto coeffs = solver.decompose(w);
        if (!coeffs) throw PreconditionError("sampler produced a non-codeword");
        std::size_t idx = 0;
        for (std::size_t j = 0; j < coeffs->size(); ++j)
            if (coeffs->get(j)) idx |= std::size_t(1) << j;
        return idx;
    };

    std::vector<std::size_t> mz_counts(cells, 0), direct_counts(cells, 0);
    Rng rng_mz = Rng(seed).split(1), rng_direct = Rng(seed).split(2);
    for (std::size_t s = 0; s < samples; ++s) {
        mz_counts[index_of(mz_rm_sampler(n, d, c, rng_mz))] += 1;
        direct_counts[index_of(rm_uniform_word(n, d, rng_direct))] += 1;
    }

    MzUniformityReport rep;
    rep.cells = cells;
    rep.samples = samples;
    const double p0 = 1.0 / double(cells);
    const double sigma = std::sqrt(p0 * (1 - p0) / double(samples));
    for (std::size_t i = 0; i < cells; ++i) {
        double z = (double(mz_counts[i]) / double(samples) - p0) / sigma;
        rep.max_abs_z = std::max(rep.max_abs_z, std::abs(z));
    }
    rep.within_3sigma = rep.max_abs_z <= 3.0;

    double chi2 = 0;
    std::size_t df = 0;
    for (std::size_t i = 0; i < cells; ++i) {
        double tot = double(mz_counts[i] + direct_counts[i]);
        if (tot == 0) continue;
        double diff = double(mz_counts[i]) - double(direct_counts[i]);
        chi2 += diff * diff / tot;
        ++df;
    }
    rep.chi2 = chi2;
    rep.pvalue = df > 1 ? chi2_sf(chi2, double(df - 1)) : 1.0;
    return rep;
}

}  // namespace rmg
