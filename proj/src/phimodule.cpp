#include "ramlock/phimodule.hpp"

#include <algorithm>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ramlock {

PhiCoeff PhiCoeff::constant(const Int& c) {
    PhiCoeff out;
    if (c != 0) out.terms.push_back({0, 0, c});
    return out;
}

PhiCoeff PhiCoeff::u_pow(long k, const Int& c) {
    PhiCoeff out;
    if (c != 0) out.terms.push_back({k, 0, c});
    return out;
}

PhiCoeff PhiCoeff::plus(const PhiCoeff& o) const {
    PhiCoeff out = *this;
    for (const auto& t : o.terms) out.terms.push_back(t);
    return out;
}

// ---------------------------------------------------------------- validation

namespace {

// dense polynomials over F_p modulo u^N
using UPoly = std::vector<long>;

UPoly up_mul(const UPoly& a, const UPoly& b, long p, long N) {
    UPoly r(static_cast<std::size_t>(N), 0);
    for (long i = 0; i < static_cast<long>(a.size()); ++i) {
        if (!a[static_cast<std::size_t>(i)]) continue;
        for (long j = 0; j + i < N && j < static_cast<long>(b.size()); ++j)
            r[static_cast<std::size_t>(i + j)] =
                (r[static_cast<std::size_t>(i + j)] +
                 a[static_cast<std::size_t>(i)] *
                     b[static_cast<std::size_t>(j)]) %
                p;
    }
    return r;
}

long up_val(const UPoly& a, long N) {
    for (long i = 0; i < static_cast<long>(a.size()); ++i)
        if (a[static_cast<std::size_t>(i)]) return i;
    return N;
}

long inv_mod(long a, long p) {
    long r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

UPoly up_inv_unit(const UPoly& a, long p, long N) {
    UPoly r(static_cast<std::size_t>(N), 0);
    long a0inv = inv_mod(((a[0] % p) + p) % p, p);
    r[0] = a0inv;
    for (long k = 1; k < N; ++k) {
        long acc = 0;
        for (long j = 1; j <= k && j < static_cast<long>(a.size()); ++j)
            acc = (acc + a[static_cast<std::size_t>(j)] *
                             r[static_cast<std::size_t>(k - j)]) %
                  p;
        r[static_cast<std::size_t>(k)] = (p - acc) % p * a0inv % p;
    }
    return r;
}

// elementary divisors u^(s_i) over F_p[u]/(u^N)
std::vector<long> up_elementary_divisors(std::vector<std::vector<UPoly>> A,
                                         long p, long N) {
    long d = static_cast<long>(A.size());
    std::vector<long> out;
    for (long k = 0; k < d; ++k) {
        long bi = -1, bj = -1, bv = N;
        for (long i = k; i < d; ++i)
            for (long j = k; j < d; ++j) {
                long v =
                    up_val(A[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)],
                           N);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) {
            for (long i = k; i < d; ++i) out.push_back(N);
            break;
        }
        std::swap(A[static_cast<std::size_t>(k)],
                  A[static_cast<std::size_t>(bi)]);
        for (long i = 0; i < d; ++i)
            std::swap(
                A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                A[static_cast<std::size_t>(i)][static_cast<std::size_t>(bj)]);
        UPoly unit(static_cast<std::size_t>(N), 0);
        for (long t = bv; t < N; ++t)
            unit[static_cast<std::size_t>(t - bv)] =
                A[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)]
                 [static_cast<std::size_t>(t)];
        UPoly uinv = up_inv_unit(unit, p, N);
        for (long j = k; j < d; ++j)
            A[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
                up_mul(A[static_cast<std::size_t>(k)]
                        [static_cast<std::size_t>(j)],
                       uinv, p, N);
        for (long i = k + 1; i < d; ++i) {
            long vi = up_val(
                A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                N);
            if (vi >= N) continue;
            UPoly zq(static_cast<std::size_t>(N), 0);
            for (long t = bv; t < N; ++t)
                zq[static_cast<std::size_t>(t - bv)] =
                    A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]
                     [static_cast<std::size_t>(t)];
            for (long j = k; j < d; ++j) {
                UPoly sub = up_mul(zq,
                                   A[static_cast<std::size_t>(k)]
                                    [static_cast<std::size_t>(j)],
                                   p, N);
                for (long t = 0; t < N; ++t)
                    A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                     [static_cast<std::size_t>(t)] =
                        ((A[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(j)]
                           [static_cast<std::size_t>(t)] -
                          sub[static_cast<std::size_t>(t)]) %
                             p +
                         p) %
                        p;
            }
        }
        out.push_back(bv);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void validate_matrix(const TorsionPhiModule& M, long e, long p) {
    long N = e * p;
    std::vector<std::vector<UPoly>> A(
        static_cast<std::size_t>(M.d),
        std::vector<UPoly>(static_cast<std::size_t>(M.d),
                           UPoly(static_cast<std::size_t>(N), 0)));
    for (long i = 0; i < M.d; ++i)
        for (long j = 0; j < M.d; ++j)
            for (const auto& t :
                 M.C[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                     .terms) {
                if (t.ue < 0 || t.ye < 0)
                    throw BadShape("negative exponent in a coefficient");
                if (t.ye > 0) continue;  // Y vanishes mod (p, u^(ep))
                if (t.ue >= N) continue;
                Int cm = t.c % p;
                long cv = ((cm.get_si() % p) + p) % p;
                A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                 [static_cast<std::size_t>(t.ue)] =
                    (A[static_cast<std::size_t>(i)]
                      [static_cast<std::size_t>(j)]
                      [static_cast<std::size_t>(t.ue)] +
                     cv) %
                    p;
            }
    auto divisors = up_elementary_divisors(A, p, N);
    for (long s : divisors)
        if (s > e * M.r)
            throw BadShape(
                "filtration span does not contain u^(er) M: the image of "
                "the divided Frobenius cannot generate");
}

}  // namespace

TorsionPhiModule make_module(long d, long n, long r,
                             const std::vector<long>& fil_exponents, long e) {
    if (d < 1 || n < 1) throw BadShape("rank and level must be positive");
    if (static_cast<long>(fil_exponents.size()) != d)
        throw BadShape("need one filtration exponent per generator");
    for (long ri : fil_exponents)
        if (ri < 0 || ri > e * r)
            throw BadExponent("filtration exponents must lie in [0, e r]");
    TorsionPhiModule M;
    M.d = d;
    M.n = n;
    M.r = r;
    M.fil_exponents = fil_exponents;
    M.C.assign(static_cast<std::size_t>(d),
               std::vector<PhiCoeff>(static_cast<std::size_t>(d),
                                     PhiCoeff::zero()));
    for (long i = 0; i < d; ++i)
        M.C[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
            PhiCoeff::u_pow(fil_exponents[static_cast<std::size_t>(i)]);
    return M;
}

TorsionPhiModule make_module(long d, long n, long r,
                             std::vector<std::vector<PhiCoeff>> C, long e,
                             long p) {
    if (d < 1 || n < 1) throw BadShape("rank and level must be positive");
    if (static_cast<long>(C.size()) != d)
        throw BadShape("matrix row count mismatch");
    for (const auto& row : C)
        if (static_cast<long>(row.size()) != d)
            throw BadShape("matrix column count mismatch");
    TorsionPhiModule M;
    M.d = d;
    M.n = n;
    M.r = r;
    M.C = std::move(C);
    validate_matrix(M, e, p);
    return M;
}

// -------------------------------------------------------------------- solver

namespace {

struct SolverCtx {
    const TorsionPhiModule* M;
    WittQuotient Q;
    std::vector<std::vector<WittVec>> Cq;
    long sE = 0;

    SolverCtx(const TorsionPhiModule& mod, const Tower& t)
        : M(&mod), Q(t, mod.n, mod.r) {
        std::map<long, WittVec> upow;
        auto u_img = [&](long k) {
            auto it = upow.find(k);
            if (it != upow.end()) return it->second;
            WittVec v = teichmuller(t.elem("pi" + std::to_string(mod.n))
                                        .pow(static_cast<unsigned long>(k)),
                                    mod.n, Q.depth_src());
            upow.emplace(k, v);
            return v;
        };
        std::map<long, WittVec> ypow;
        auto y_img = [&](long k) {
            auto it = ypow.find(k);
            if (it != ypow.end()) return it->second;
            WittVec v = k == 0 ? Q.one()
                               : witt_pow(Q.y_elem(),
                                          static_cast<unsigned long>(k));
            ypow.emplace(k, v);
            return v;
        };
        Cq.assign(static_cast<std::size_t>(mod.d),
                  std::vector<WittVec>(static_cast<std::size_t>(mod.d)));
        for (long i = 0; i < mod.d; ++i)
            for (long j = 0; j < mod.d; ++j) {
                WittVec acc = Q.zero();
                for (const auto& term :
                     mod.C[static_cast<std::size_t>(i)]
                          [static_cast<std::size_t>(j)]
                              .terms) {
                    WittVec tv = witt_mul(u_img(term.ue), y_img(term.ye));
                    acc = witt_add(acc, witt_mul(Q.from_int(term.c), tv));
                }
                Cq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    acc;
            }
        if (mod.r > 0) {
            auto gv = ghost_components(
                witt_pow(Q.e_pi(), static_cast<unsigned long>(mod.r)));
            for (const auto& g : gv) {
                auto v = g.val_exact();
                if (!v) throw PrecisionLoss("filtration valuation unclear");
                sE = std::max(sE, *v);
            }
        }
    }

    std::vector<WittVec> fil_inputs(const std::vector<WittVec>& x) const {
        std::vector<WittVec> w(static_cast<std::size_t>(M->d));
        for (long i = 0; i < M->d; ++i) {
            WittVec acc = Q.zero();
            for (long j = 0; j < M->d; ++j)
                acc = witt_add(acc,
                               witt_mul(Cq[static_cast<std::size_t>(j)]
                                          [static_cast<std::size_t>(i)],
                                        x[static_cast<std::size_t>(j)]));
            w[static_cast<std::size_t>(i)] = acc;
        }
        return w;
    }

    // certified vanishing depth of the residual, min over components
    long score(const std::vector<WittVec>& x) const {
        long sc = kPrecInf;
        auto w = fil_inputs(x);
        for (long i = 0; i < M->d; ++i) {
            auto sec = Q.fil_section(w[static_cast<std::size_t>(i)]);
            if (!sec) return -1;
            WittVec r = witt_sub(
                witt_mul(
                    witt_pow(Q.c_elem(), static_cast<unsigned long>(M->r)),
                    frobenius_lift(*sec)),
                x[static_cast<std::size_t>(i)]);
            WittVec nf = Q.coset_normal_form(r);
            for (const auto& e : nf.entries)
                sc = std::min(sc, std::min(e.val_lb(), nf.D));
            if (sc < 0) return sc;
        }
        return sc;
    }

    bool verify(const std::vector<WittVec>& x) const {
        auto w = fil_inputs(x);
        for (long i = 0; i < M->d; ++i) {
            auto sec = Q.fil_section(w[static_cast<std::size_t>(i)]);
            if (!sec) return false;
            WittVec pr = witt_mul(
                witt_pow(Q.c_elem(), static_cast<unsigned long>(M->r)),
                frobenius_lift(*sec));
            if (!Q.eq(pr, x[static_cast<std::size_t>(i)])) return false;
        }
        return true;
    }

    bool tuples_eq(const std::vector<WittVec>& a,
                   const std::vector<WittVec>& b) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!Q.eq(a[i], b[i])) return false;
        return true;
    }
};

}  // namespace

SolutionSet solve_points(const TorsionPhiModule& M, const Tower& F,
                         const SolveOptions& opts) {
    SolverCtx ctx(M, F);
    const WittQuotient& Q = ctx.Q;
    const FieldPtr& Fld = Q.F();
    const auto& reps = Fld->residue_reps();
    const long q = static_cast<long>(reps.size());
    const long slots = M.d * M.n;
    long combos = 1;
    for (long i = 0; i < slots; ++i) combos *= q;

    std::vector<std::vector<WittVec>> branches{
        std::vector<WittVec>(static_cast<std::size_t>(M.d), Q.zero())};
    long nodes = 0;
    for (long level = 0; level < Q.depth_b(); ++level) {
        long threshold = std::min(
            Q.depth_b(), std::max(0L, level + 1 - ctx.sE - opts.extra_slack));
        std::vector<std::vector<WittVec>> next;
        for (const auto& br : branches) {
            nodes += combos;
            if (nodes > opts.budget)
                throw BudgetExceeded(
                    "solver enumeration beyond budget at level " +
                    std::to_string(level) + " with " +
                    std::to_string(branches.size()) + " branches");
            LFElement shift = Fld->unif_pow(level);
            std::vector<std::vector<WittVec>> cands(
                static_cast<std::size_t>(combos));
            std::vector<char> keep(static_cast<std::size_t>(combos), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
            for (long c = 0; c < combos; ++c) {
                std::vector<WittVec> cand = br;
                long rem = c;
                for (long i = 0; i < M.d; ++i)
                    for (long m = 0; m < M.n; ++m) {
                        long dgt = rem % q;
                        rem /= q;
                        if (dgt == 0) continue;
                        auto& vec = cand[static_cast<std::size_t>(i)];
                        vec.entries[static_cast<std::size_t>(m)] =
                            vec.entries[static_cast<std::size_t>(m)] +
                            reps[static_cast<std::size_t>(dgt)] * shift;
                    }
                long sc = ctx.score(cand);
                keep[static_cast<std::size_t>(c)] =
                    sc >= threshold ? 1 : 0;
                cands[static_cast<std::size_t>(c)] = std::move(cand);
            }
            for (long c = 0; c < combos; ++c)
                if (keep[static_cast<std::size_t>(c)])
                    next.push_back(
                        std::move(cands[static_cast<std::size_t>(c)]));
        }
        branches = std::move(next);
        if (branches.empty()) break;
    }

    SolutionSet out;
    out.tower = F;
    out.d = M.d;
    out.n = M.n;
    out.r = M.r;
    for (auto& b : branches) {
        if (!ctx.verify(b)) continue;
        bool dup = false;
        for (const auto& t : out.tuples)
            if (ctx.tuples_eq(t, b)) {
                dup = true;
                break;
            }
        if (!dup) out.tuples.push_back(std::move(b));
    }
    std::sort(out.tuples.begin(), out.tuples.end(),
              [&](const auto& a, const auto& b) {
                  for (std::size_t i = 0; i < a.size(); ++i) {
                      auto da = witt_digits(ctx.Q.coset_normal_form(a[i]));
                      auto db = witt_digits(ctx.Q.coset_normal_form(b[i]));
                      if (da != db) return da < db;
                  }
                  return false;
              });
    for (const auto& t : out.tuples)
        out.lifts.push_back(unique_lift(M, Q, t));
    return out;
}

long count_points(const TorsionPhiModule& M, const Tower& F,
                  const SolveOptions& opts) {
    return static_cast<long>(solve_points(M, F, opts).tuples.size());
}

std::vector<WittVec> unique_lift(const TorsionPhiModule& M,
                                 const WittQuotient& Q,
                                 const std::vector<WittVec>& xbar,
                                 const std::vector<WittVec>* perturbation) {
    SolverCtx ctx(M, Q.tower());
    const long target = Q.depth_src() - ctx.sE - 2;
    std::vector<WittVec> x(xbar.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = witt_make(Q.F(), M.n, Q.depth_src(), xbar[i].entries);
        if (perturbation)
            x[i] = witt_add(x[i], witt_mul(Q.xi(), (*perturbation)[i]));
    }
    long prev = -1;
    for (int it = 0; it < 256; ++it) {
        auto w = ctx.fil_inputs(x);
        std::vector<WittVec> tx(x.size());
        long resid = kPrecInf;
        for (long i = 0; i < M.d; ++i) {
            WittVec yi = witt_divide(
                w[static_cast<std::size_t>(i)],
                witt_pow(Q.e_pi(), static_cast<unsigned long>(M.r)));
            tx[static_cast<std::size_t>(i)] = witt_mul(
                witt_pow(Q.c_elem(), static_cast<unsigned long>(M.r)),
                frobenius_lift(yi));
            WittVec diff = witt_sub(tx[static_cast<std::size_t>(i)],
                                    x[static_cast<std::size_t>(i)]);
            for (const auto& e : diff.entries)
                resid = std::min(resid, std::min(e.val_lb(), diff.D));
        }
        if (resid >= std::min(target, tx[0].D)) return tx;
        if (resid <= prev)
            throw PrecisionInsufficient(
                "contraction stalled: no certified valuation gain");
        prev = resid;
        x = std::move(tx);
    }
    throw PrecisionInsufficient("contraction did not reach the target depth");
}

CutOutResult cut_out_extension(const TorsionPhiModule& M,
                               const std::vector<Tower>& candidates,
                               const SolveOptions& opts) {
    if (candidates.empty()) throw NotFound("empty candidate list");
    long target = 1;
    long p = candidates[0].base->p();
    for (long i = 0; i < M.n * M.d; ++i) target *= p;
    long best = -1;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        long cnt = count_points(M, candidates[ci], opts);
        best = std::max(best, cnt);
        if (cnt != target) continue;

        const Tower& t = candidates[ci];
        const FieldPtr& K = t.base;
        CutOutResult out;
        out.tower_index = ci;
        out.count = cnt;
        out.target = target;
        out.bound = ramification_bound(K, M.r, M.n).value;
        // splitting-tower index: e(K) p^n (p-1) p^(n-1)
        long eFn = K->e_abs() * (p - 1);
        for (long i = 0; i < M.n; ++i) eFn *= p;
        for (long i = 0; i + 1 < M.n; ++i) eFn *= p;
        bool extras_unramified = true;
        for (FieldPtr g = t.top; g && g->e_abs() > eFn; g = g->parent()) {
            if (g->kind() == StepKind::Eisenstein) {
                if (g->step_degree() % p == 0)
                    throw UnsupportedPresentation(
                        "wild step above the splitting tower");
                extras_unramified = false;
            }
        }
        auto bd = break_kummer_cyclotomic(K, M.n);
        out.break_datum = bd;
        out.break_datum.extension = t.label;
        if (M.r == 0) {
            out.bound_respected = extras_unramified;
            out.sharp = false;
        } else {
            out.bound_respected = bd.upper_break <= out.bound;
            out.sharp = bd.upper_break == out.bound;
        }
        return out;
    }
    throw NotFound("no candidate achieved the full count; maximum seen: " +
                   std::to_string(best) + " of " + std::to_string(target));
}

// ------------------------------------------------------------ Galois action

LFElement FieldAutomorphism::apply(const LFElement& x) const {
    if (gen_images.empty() && x.field() == F) return x;
    return map_via_generator_images(x, floor, gen_images, F);
}

FieldAutomorphism make_automorphism(const FieldPtr& F, const FieldPtr& floor,
                                    std::vector<LFElement> gen_images) {
    if (!F->is_ancestor_or_self(floor))
        throw NotAnAutomorphism("floor is not an ancestor");
    FieldAutomorphism sigma{F, floor, std::move(gen_images)};
    std::vector<FieldPtr> chain;
    for (FieldPtr g = F; g != floor; g = g->parent()) chain.push_back(g);
    std::reverse(chain.begin(), chain.end());
    if (chain.size() != sigma.gen_images.size())
        throw NotAnAutomorphism("one generator image per step required");
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto& mp = chain[k]->step_minpoly();
        LFElement acc = F->zero();
        for (std::size_t j = mp.size(); j-- > 0;) {
            // coefficients live in the parent of step k; map them along
            LFElement cj = map_via_generator_images(
                mp[j], floor,
                std::vector<LFElement>(sigma.gen_images.begin(),
                                       sigma.gen_images.begin() +
                                           static_cast<long>(k)),
                F);
            acc = acc * sigma.gen_images[k] + cj;
        }
        if (!acc.is_zero_at_prec())
            throw NotAnAutomorphism(
                "generator image is not a root of its step polynomial");
    }
    return sigma;
}

FieldAutomorphism identity_automorphism(const FieldPtr& F) {
    return FieldAutomorphism{F, F, {}};
}

FieldAutomorphism unramified_step_frobenius(const FieldPtr& F) {
    if (F->kind() != StepKind::Unramified)
        throw NotAnAutomorphism("top step is not unramified");
    const auto& mp = F->step_minpoly();
    auto fF = poly_coerce(mp, F);
    long qp = F->parent()->residue_card();
    LFElement img =
        F->generator().residue_elem().pow(static_cast<unsigned long>(qp));
    auto d = poly_derivative(fF);
    for (int it = 0; it < 64; ++it) {
        LFElement fx = poly_eval(fF, img);
        if (fx.is_zero_at_prec()) break;
        img = img - fx.div_exact(poly_eval(d, img));
    }
    return make_automorphism(F, F->parent(), {img});
}

std::vector<std::size_t> galois_action(SolutionSet& S,
                                       const FieldAutomorphism& sigma) {
    WittQuotient Q(S.tower, S.n, S.r);
    const LFElement& pin = S.tower.elem("pi" + std::to_string(S.n));
    const LFElement& zet = S.tower.elem("zeta" + std::to_string(S.n + 1));
    if (!(sigma.apply(pin) - pin).is_zero_at_prec() ||
        !(sigma.apply(zet) - zet).is_zero_at_prec())
        throw NotAnAutomorphism(
            "the automorphism moves the distinguished roots");

    auto apply_tuple = [&](const std::vector<WittVec>& t) {
        std::vector<WittVec> out(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::vector<LFElement> es(t[i].entries.size());
            for (std::size_t m = 0; m < es.size(); ++m)
                es[m] = sigma.apply(t[i].entries[m]);
            out[i] = witt_make(t[i].F, t[i].n, t[i].D, std::move(es));
        }
        return out;
    };

    std::vector<std::size_t> perm(S.tuples.size());
    std::vector<bool> hit(S.tuples.size(), false);
    for (std::size_t i = 0; i < S.tuples.size(); ++i) {
        auto img = apply_tuple(S.tuples[i]);
        bool found = false;
        for (std::size_t j = 0; j < S.tuples.size(); ++j) {
            bool eq = true;
            for (std::size_t m = 0; m < img.size(); ++m)
                if (!Q.eq(img[m], S.tuples[j][m])) {
                    eq = false;
                    break;
                }
            if (eq) {
                perm[i] = j;
                hit[j] = true;
                found = true;
                break;
            }
        }
        if (!found)
            throw NotAnAutomorphism(
                "the automorphism does not permute the point set");
    }
    for (bool h : hit)
        if (!h)
            throw NotAnAutomorphism(
                "the automorphism does not permute the point set");
    S.orbits.clear();
    std::vector<bool> seen(S.tuples.size(), false);
    for (std::size_t i = 0; i < S.tuples.size(); ++i) {
        if (seen[i]) continue;
        std::vector<std::size_t> orb;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            orb.push_back(j);
            j = perm[j];
        }
        S.orbits.push_back(std::move(orb));
    }
    return perm;
}

}  // namespace ramlock
