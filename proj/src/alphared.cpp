#include "rmg/alphared.hpp"

#include <algorithm>
#include <cmath>

#include "rmg/parallel.hpp"

namespace rmg {

std::size_t QWord::q_hamming_weight() const {
    std::size_t w = 0;
    for (std::size_t x = 0; x < positions(); ++x)
        if (symbol(x) != 0) ++w;
    return w;
}

AlphaContext make_alpha_context(int n, int d, int t) {
    if (t < 1 || t > 16) throw PreconditionError("alphabet bits out of range");
    AlphaContext ctx;
    ctx.tester = rm_tester(n, d);
    ctx.t = t;
    ctx.step_coords = support_coords(ctx.tester);
    const auto& D = ctx.tester.dual_code;
    ctx.evalcol.assign(D.block_len, 0);
    for (std::size_t j = 0; j < D.generators.nrows(); ++j) {
        const BitWord& g = D.generators.rows[j];
        for (std::size_t x = 0; x < D.block_len; ++x)
            if (g.get(x)) ctx.evalcol[x] |= uint32_t(1) << j;
    }
    // The constant-1 polynomial is the first generator (monomial mask 0).
    ctx.ones_coords = 1;
    return ctx;
}

QWord sample_Tt(const AlphaContext& ctx, Rng& rng) {
    const BitWord& c = ctx.tester.support[rng.below(ctx.tester.support.size())];
    uint32_t w = uint32_t(rng.below(std::size_t(1) << ctx.t));
    QWord z;
    z.blocks.reserve(ctx.t);
    for (int i = 0; i < ctx.t; ++i)
        z.blocks.push_back(((w >> i) & 1) ? c : BitWord(ctx.points()));
    return z;
}

std::vector<uint32_t> sample_Tt_coords(const AlphaContext& ctx, Rng& rng) {
    uint32_t c = ctx.step_coords[rng.below(ctx.step_coords.size())];
    uint32_t w = uint32_t(rng.below(std::size_t(1) << ctx.t));
    std::vector<uint32_t> z(ctx.t, 0);
    for (int i = 0; i < ctx.t; ++i)
        if ((w >> i) & 1) z[i] = c;
    return z;
}

QWord sample_Tt_eps(const AlphaContext& ctx, double eps, Rng& rng) {
    if (eps < 0) throw PreconditionError("eps must be >= 0");
    std::size_t steps = rng.poisson(eps * double(std::size_t(1) << ctx.d()));
    QWord z;
    z.blocks.assign(ctx.t, BitWord(ctx.points()));
    for (std::size_t s = 0; s < steps; ++s) {
        QWord step = sample_Tt(ctx, rng);
        for (int i = 0; i < ctx.t; ++i) z.blocks[i] ^= step.blocks[i];
    }
    return z;
}

std::vector<uint32_t> sample_Tt_eps_coords(const AlphaContext& ctx, double eps, Rng& rng) {
    if (eps < 0) throw PreconditionError("eps must be >= 0");
    std::size_t steps = rng.poisson(eps * double(std::size_t(1) << ctx.d()));
    std::vector<uint32_t> z(ctx.t, 0);
    for (std::size_t s = 0; s < steps; ++s) {
        uint32_t c = ctx.step_coords[rng.below(ctx.step_coords.size())];
        uint32_t w = uint32_t(rng.below(std::size_t(1) << ctx.t));
        for (int i = 0; i < ctx.t; ++i)
            if ((w >> i) & 1) z[i] ^= c;
    }
    return z;
}

double q_char_eigenvalue_Tt(const AlphaContext& ctx, const QWord& beta) {
    // E[(-1)^{<beta,z>}] with z = (w_i c): averaging over w kills every draw c
    // with some <beta^(i), c> = 1, and keeps weight 1 otherwise.
    double lam = 0;
    for (std::size_t s = 0; s < ctx.tester.support.size(); ++s) {
        const BitWord& c = ctx.tester.support[s];
        bool all_zero = true;
        for (const auto& blk : beta.blocks)
            if (blk.dot(c)) { all_zero = false; break; }
        if (all_zero) lam += ctx.tester.mass(s);
    }
    return lam;
}

double q_char_eigenvalue_Tt_eps(const AlphaContext& ctx, const QWord& beta, double eps) {
    double lam = q_char_eigenvalue_Tt(ctx, beta);
    return std::exp(-eps * double(std::size_t(1) << ctx.d()) * (1.0 - lam));
}

QLeader q_weight(const AlphaContext& ctx, const QWord& beta, std::size_t w_max) {
    if (beta.t() != ctx.t || beta.positions() != ctx.points())
        throw PreconditionError("shape mismatch");
    const std::size_t N = ctx.points();
    const RMCode& C = ctx.tester.code;
    if (C.dual_generators.nrows() > 32)
        throw BudgetError("syndrome space too wide for the joint search");

    std::vector<uint32_t> want(ctx.t);
    for (int i = 0; i < ctx.t; ++i) want[i] = pairing_index(C, beta.blocks[i]);
    std::vector<uint32_t> sigma(N);
    for (std::size_t x = 0; x < N; ++x) {
        BitWord e(N);
        e.set(x, true);
        sigma[x] = pairing_index(C, e);
    }

    // Solve all blocks against the span of {sigma_x : x in S}; on success
    // reconstruct the block words from the pivoting choices.
    auto try_support = [&](const std::vector<std::size_t>& S, QLeader& out) {
        std::vector<uint32_t> basis, basis_combo;  // eliminated columns + subset masks
        for (std::size_t j = 0; j < S.size(); ++j) {
            uint32_t v = sigma[S[j]], combo = uint32_t(1) << j;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                uint32_t low = basis[b] & (~basis[b] + 1);
                if (v & low) { v ^= basis[b]; combo ^= basis_combo[b]; }
            }
            if (v) { basis.push_back(v); basis_combo.push_back(combo); }
        }
        std::vector<uint32_t> chosen(ctx.t, 0);
        for (int i = 0; i < ctx.t; ++i) {
            uint32_t v = want[i], combo = 0;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                uint32_t low = basis[b] & (~basis[b] + 1);
                if (v & low) { v ^= basis[b]; combo ^= basis_combo[b]; }
            }
            if (v) return false;
            chosen[i] = combo;
        }
        out.q_weight = S.size();
        out.leader.blocks.assign(ctx.t, BitWord(N));
        for (int i = 0; i < ctx.t; ++i)
            for (std::size_t j = 0; j < S.size(); ++j)
                if ((chosen[i] >> j) & 1) out.leader.blocks[i].set(S[j], true);
        return true;
    };

    QLeader out;
    for (std::size_t w = 0; w <= w_max; ++w) {
        double est = 1;
        for (std::size_t j = 0; j < w; ++j) est = est * double(N - j) / double(j + 1);
        if (est > 2e8) throw BudgetError("joint support search too large");
        if (w == 0) {
            if (try_support({}, out)) return out;
            continue;
        }
        if (w > N) break;
        std::vector<std::size_t> S(w);
        for (std::size_t j = 0; j < w; ++j) S[j] = j;
        for (;;) {
            if (try_support(S, out)) return out;
            std::size_t j = w;
            while (j > 0 && S[j - 1] == N - w + (j - 1)) --j;
            if (j == 0) break;
            ++S[j - 1];
            for (std::size_t k = j; k < w; ++k) S[k] = S[k - 1] + 1;
        }
    }
    throw NotFoundError("no Q-coset representative within the weight bound");
}

namespace {

uint64_t hash_coords(uint64_t seed, const std::vector<uint32_t>& coords) {
    uint64_t h = splitmix64(seed ^ 0xabcdef12345ull);
    for (uint32_t c : coords) h = splitmix64(h ^ splitmix64(c));
    return h;
}

}  // namespace

uint32_t FoldedFunction::eval(const AlphaContext& ctx,
                              const std::vector<uint32_t>& coords) const {
    const uint32_t qmask = uint32_t((std::size_t(1) << ctx.t) - 1);
    if (kind == Kind::dictator) return ctx.symbol_at(coords, beta_point);

    // Canonical coset representative: the shift minimizing a seeded hash of
    // the shifted word. Exact folding, no tabulation of D^t.
    uint32_t best_r = 0;
    uint64_t best_h = ~uint64_t(0);
    std::vector<uint32_t> shifted(coords.size());
    for (uint32_t r = 0; r <= qmask; ++r) {
        for (std::size_t i = 0; i < coords.size(); ++i)
            shifted[i] = coords[i] ^ (((r >> i) & 1) ? ctx.ones_coords : 0);
        uint64_t h = hash_coords(seed, shifted);
        if (h < best_h) {
            best_h = h;
            best_r = r;
        }
    }
    uint32_t base;
    if (kind == Kind::constant_base) {
        base = q0;
    } else {
        for (std::size_t i = 0; i < coords.size(); ++i)
            shifted[i] = coords[i] ^ (((best_r >> i) & 1) ? ctx.ones_coords : 0);
        base = uint32_t(hash_coords(seed ^ 0x5ca1ab1eull, shifted)) & qmask;
    }
    return base ^ best_r;
}

DictReport dict_test(const AlphaContext& ctx, const FoldedFunction& f, double eps,
                     std::size_t samples, uint64_t seed, int workers) {
    const uint32_t qmask = uint32_t((std::size_t(1) << ctx.t) - 1);
    const std::size_t chunks =
        std::max<std::size_t>(1, std::min<std::size_t>(64, samples / 2048 + 1));
    std::vector<std::size_t> hits(chunks, 0);
    Rng root(seed);
    parallel_chunks(chunks, workers, [&](std::size_t ci) {
        Rng rng = root.split(ci);
        std::size_t lo = samples * ci / chunks, hi = samples * (ci + 1) / chunks;
        const uint32_t dimmask = uint32_t((std::size_t(1) << ctx.dim()) - 1);
        std::vector<uint32_t> c(ctx.t), cr(ctx.t), c2(ctx.t);
        std::size_t h = 0;
        for (std::size_t s = lo; s < hi; ++s) {
            for (int i = 0; i < ctx.t; ++i) c[i] = uint32_t(rng.u64()) & dimmask;
            auto z = sample_Tt_eps_coords(ctx, eps, rng);
            uint32_t r = uint32_t(rng.u64()) & qmask;
            for (int i = 0; i < ctx.t; ++i) {
                cr[i] = c[i] ^ (((r >> i) & 1) ? ctx.ones_coords : 0);
                c2[i] = c[i] ^ z[i];
            }
            if ((f.eval(ctx, cr) ^ r) == f.eval(ctx, c2)) ++h;
        }
        hits[ci] = h;
    });
    std::size_t h = 0;
    for (auto v : hits) h += v;
    DictReport rep;
    rep.samples = samples;
    rep.acceptance = double(h) / double(samples);
    rep.stderr_ =
        std::sqrt(std::max(rep.acceptance * (1 - rep.acceptance), 1e-12) / double(samples));
    return rep;
}

QInfluenceTable q_influences(const AlphaContext& ctx,
                             const std::vector<std::pair<QWord, double>>& terms, int ell) {
    if (ell < 1 || (std::size_t(1) << ctx.d()) <= std::size_t(ell))
        throw PreconditionError("degree cap must stay below half the binary distance");
    QInfluenceTable out;
    out.ell = ell;
    out.inf.assign(ctx.points(), 0.0);
    for (const auto& [beta, coeff] : terms) {
        std::size_t w = beta.q_hamming_weight();
        if (w > 0) out.variance += coeff * coeff;
        if (w == 0 || w > std::size_t(ell)) continue;
        for (std::size_t x = 0; x < ctx.points(); ++x)
            if (beta.symbol(x) != 0) out.inf[x] += coeff * coeff;
    }
    return out;
}

uint32_t PsiInstance::translate(uint32_t shift, uint32_t coords) const {
    if (shift == 0) return coords;
    const auto& cols = translations.at(shift);
    uint32_t y = 0;
    for (std::size_t j = 0; j < cols.size(); ++j)
        if ((coords >> j) & 1) y ^= cols[j];
    return y;
}

PsiInstance build_psi_instance(OuterInstance outer, int n, int d, int t, double eps) {
    for (const auto& e : outer.edges) {
        if (e.u >= outer.vertices || e.v >= outer.vertices)
            throw PreconditionError("outer edge endpoint out of range");
        if (e.shift >= (uint32_t(1) << n))
            throw PreconditionError("outer shift must be an n-bit word");
    }
    PsiInstance inst;
    inst.ctx = make_alpha_context(n, d, t);
    inst.eps = eps;
    inst.neighbors.assign(outer.vertices, {});
    for (const auto& e : outer.edges) {
        inst.neighbors[e.u].push_back({e.v, e.shift});
        if (e.u != e.v) inst.neighbors[e.v].push_back({e.u, e.shift});
    }
    for (const auto& nb : inst.neighbors)
        if (nb.empty()) throw PreconditionError("outer instance has an isolated vertex");

    // Translation matrices: column j is the coefficient vector of the
    // generator translated by alpha (x -> g_j(x + alpha)); T_alpha permutes
    // evaluation points, so it maps D to D and is invertible.
    const RMCode& D = inst.ctx.D();
    GF2Solver solver(D.generators);
    auto add_translation = [&](uint32_t alpha) {
        if (alpha == 0 || inst.translations.count(alpha)) return;
        std::vector<uint32_t> cols;
        for (std::size_t j = 0; j < D.generators.nrows(); ++j) {
            BitWord moved(D.block_len);
            for (std::size_t x = 0; x < D.block_len; ++x)
                if (D.generators.rows[j].get(x ^ alpha)) moved.set(x, true);
            auto c = solver.decompose(moved);
            if (!c) throw PreconditionError("translation left the code");
            uint32_t col = 0;
            for (std::size_t b = 0; b < c->size(); ++b)
                if (c->get(b)) col |= uint32_t(1) << b;
            cols.push_back(col);
        }
        inst.translations.emplace(alpha, std::move(cols));
    };
    for (const auto& e : outer.edges) add_translation(e.shift);
    inst.outer = std::move(outer);
    return inst;
}

DictReport psi_eval(const PsiInstance& inst, const PsiLabeling& labeling,
                    std::size_t samples, uint64_t seed, int workers) {
    const AlphaContext& ctx = inst.ctx;
    const uint32_t qmask = uint32_t((std::size_t(1) << ctx.t) - 1);
    if (labeling.kind == PsiLabeling::Kind::translated_dictator &&
        labeling.beta.size() != inst.outer.vertices)
        throw PreconditionError("labeling must cover all outer vertices");

    auto label = [&](uint32_t vertex, const std::vector<uint32_t>& coords) -> uint32_t {
        if (labeling.kind == PsiLabeling::Kind::translated_dictator) {
            FoldedFunction f;
            f.kind = FoldedFunction::Kind::dictator;
            f.beta_point = labeling.beta[vertex];
            return f.eval(ctx, coords);
        }
        FoldedFunction f;
        f.kind = FoldedFunction::Kind::random_hash;
        f.seed = labeling.seed ^ (uint64_t(vertex) * 0xd1b54a32d192ed03ull);
        return f.eval(ctx, coords);
    };

    const std::size_t chunks =
        std::max<std::size_t>(1, std::min<std::size_t>(64, samples / 2048 + 1));
    std::vector<std::size_t> hits(chunks, 0);
    Rng root(seed);
    parallel_chunks(chunks, workers, [&](std::size_t ci) {
        Rng rng = root.split(ci);
        std::size_t lo = samples * ci / chunks, hi = samples * (ci + 1) / chunks;
        const uint32_t dimmask = uint32_t((std::size_t(1) << ctx.dim()) - 1);
        std::vector<uint32_t> c1(ctx.t), c2(ctx.t), t1(ctx.t), t2(ctx.t);
        std::size_t h = 0;
        for (std::size_t s = lo; s < hi; ++s) {
            uint32_t u = uint32_t(rng.below(inst.outer.vertices));
            const auto& nb = inst.neighbors[u];
            auto [v1, a1] = nb[rng.below(nb.size())];
            auto [v2, a2] = nb[rng.below(nb.size())];
            for (int i = 0; i < ctx.t; ++i) c1[i] = uint32_t(rng.u64()) & dimmask;
            auto z = sample_Tt_eps_coords(ctx, inst.eps, rng);
            uint32_t r = uint32_t(rng.u64()) & qmask;
            for (int i = 0; i < ctx.t; ++i) {
                c2[i] = c1[i] ^ z[i];
                t1[i] = inst.translate(a1, c1[i]) ^ (((r >> i) & 1) ? ctx.ones_coords : 0);
                t2[i] = inst.translate(a2, c2[i]);
            }
            if ((label(v1, t1) ^ r) == label(v2, t2)) ++h;
        }
        hits[ci] = h;
    });
    std::size_t h = 0;
    for (auto v : hits) h += v;
    DictReport rep;
    rep.samples = samples;
    rep.acceptance = double(h) / double(samples);
    rep.stderr_ =
        std::sqrt(std::max(rep.acceptance * (1 - rep.acceptance), 1e-12) / double(samples));
    return rep;
}

}  // namespace rmg
