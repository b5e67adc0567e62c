#include "ramlock/witt.hpp"

#include <ostream>

namespace ramlock {

namespace {

void check_compat(const WittVec& a, const WittVec& b) {
    if (!a.valid() || !b.valid()) throw Error("invalid Witt vector");
    if (a.F != b.F || a.n != b.n)
        throw ContextMismatch("Witt vectors from different contexts");
}

LFElement canon_entry(const LFElement& e, long D) {
    const FieldPtr& F = e.field();
    auto ds = e.digits(D);
    LFElement out = F->zero();
    const auto& reps = F->residue_reps();
    for (long k = 0; k < D; ++k) {
        long d = ds[static_cast<std::size_t>(k)];
        if (d == 0) continue;
        out = out + reps[static_cast<std::size_t>(d)] * F->unif_pow(k);
    }
    return out;
}

void canonicalize(WittVec& x) {
    for (auto& e : x.entries) e = canon_entry(e, x.D);
}

long depth_headroom(const FieldPtr& F, long n, long D) {
    // ghost inversion divides by p^i, i < n
    return D + n * F->e_abs() + 2;
}

unsigned long upow(long p, long k) {
    unsigned long r = 1;
    for (long t = 0; t < k; ++t) r *= static_cast<unsigned long>(p);
    return r;
}

Int ipow(long p, long k) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(k));
    return r;
}

std::vector<LFElement> raw_from_ghost(const FieldPtr& F, long n,
                                      const std::vector<LFElement>& g) {
    const long p = F->p();
    std::vector<LFElement> z(static_cast<std::size_t>(n));
    z[0] = g[0];
    for (long i = 1; i < n; ++i) {
        LFElement num = g[static_cast<std::size_t>(i)];
        for (long k = 0; k < i; ++k)
            num = num - z[static_cast<std::size_t>(k)]
                            .pow(upow(p, i - k))
                            .mul_int(ipow(p, k));
        z[static_cast<std::size_t>(i)] = num.div_by_p_exact(i);
    }
    return z;
}

std::vector<LFElement> raw_ghost(const FieldPtr& F, long n,
                                 const std::vector<LFElement>& xe) {
    const long p = F->p();
    std::vector<LFElement> g(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        LFElement acc = F->zero();
        for (long k = 0; k <= i; ++k)
            acc = acc + xe[static_cast<std::size_t>(k)]
                            .pow(upow(p, i - k))
                            .mul_int(ipow(p, k));
        g[static_cast<std::size_t>(i)] = acc;
    }
    return g;
}

std::vector<LFElement> raw_mul(const FieldPtr& F, long n,
                               const std::vector<LFElement>& xe,
                               const std::vector<LFElement>& ye) {
    auto gx = raw_ghost(F, n, xe);
    auto gy = raw_ghost(F, n, ye);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] = gx[i] * gy[i];
    return raw_from_ghost(F, n, gx);
}

std::vector<LFElement> raw_add(const FieldPtr& F, long n,
                               const std::vector<LFElement>& xe,
                               const std::vector<LFElement>& ye) {
    auto gx = raw_ghost(F, n, xe);
    auto gy = raw_ghost(F, n, ye);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] = gx[i] + gy[i];
    return raw_from_ghost(F, n, gx);
}

WittVec from_ghost(const FieldPtr& F, long n, long D,
                   const std::vector<LFElement>& g) {
    WittVec out{F, n, D, raw_from_ghost(F, n, g)};
    long floor = D + 2 * n * F->e_abs() + 4;
    for (const auto& e : out.entries)
        if (!e.exact_zero() && e.prec() < floor) {
            canonicalize(out);
            break;
        }
    return out;
}

}  // namespace

WittVec witt_make(const FieldPtr& F, long n, long D,
                  std::vector<LFElement> entries) {
    if (n < 1 || D < 1) throw InputError("Witt length and depth must be >= 1");
    if (static_cast<long>(entries.size()) != n)
        throw InputError("entry count mismatch");
    if (depth_headroom(F, n, D) > F->prec_cap())
        throw PrecisionTooLow(
            "field working precision too small for this Witt depth");
    for (const auto& e : entries)
        if (e.field() != F)
            throw ContextMismatch("entries must live in the given field");
    return WittVec{F, n, D, std::move(entries)};
}

WittVec witt_zero(const FieldPtr& F, long n, long D) {
    return witt_make(
        F, n, D,
        std::vector<LFElement>(static_cast<std::size_t>(n), F->zero()));
}

WittVec witt_one(const FieldPtr& F, long n, long D) {
    auto es = std::vector<LFElement>(static_cast<std::size_t>(n), F->zero());
    es[0] = F->one();
    return witt_make(F, n, D, std::move(es));
}

WittVec witt_from_int(const FieldPtr& F, long n, long D, const Int& c) {
    // constant ghost vector (c, c, ..., c)
    std::vector<LFElement> g(static_cast<std::size_t>(n), F->from_int(c));
    return from_ghost(F, n, D, g);
}

WittVec teichmuller(const LFElement& a, long n, long D) {
    auto es = std::vector<LFElement>(static_cast<std::size_t>(n),
                                     a.field()->zero());
    es[0] = a;
    return witt_make(a.field(), n, D, std::move(es));
}

std::vector<LFElement> ghost_components(const WittVec& x) {
    const FieldPtr& F = x.F;
    const long p = F->p();
    std::vector<LFElement> g(static_cast<std::size_t>(x.n));
    for (long i = 0; i < x.n; ++i) {
        LFElement acc = F->zero();
        for (long k = 0; k <= i; ++k)
            acc = acc + x.entries[static_cast<std::size_t>(k)]
                            .pow(upow(p, i - k))
                            .mul_int(ipow(p, k));
        g[static_cast<std::size_t>(i)] = acc;
    }
    return g;
}

WittVec witt_add(const WittVec& x, const WittVec& y) {
    check_compat(x, y);
    auto gx = ghost_components(x);
    auto gy = ghost_components(y);
    std::vector<LFElement> g(gx.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = gx[i] + gy[i];
    return from_ghost(x.F, x.n, std::min(x.D, y.D), g);
}

WittVec witt_neg(const WittVec& x) {
    auto gx = ghost_components(x);
    for (auto& gi : gx) gi = -gi;
    return from_ghost(x.F, x.n, x.D, gx);
}

WittVec witt_sub(const WittVec& x, const WittVec& y) {
    return witt_add(x, witt_neg(y));
}

WittVec witt_mul(const WittVec& x, const WittVec& y) {
    check_compat(x, y);
    auto gx = ghost_components(x);
    auto gy = ghost_components(y);
    std::vector<LFElement> g(gx.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = gx[i] * gy[i];
    return from_ghost(x.F, x.n, std::min(x.D, y.D), g);
}

WittVec witt_pow(const WittVec& x, unsigned long k) {
    WittVec acc = witt_one(x.F, x.n, x.D);
    WittVec base = x;
    while (k) {
        if (k & 1) acc = witt_mul(acc, base);
        if (k >>= 1) base = witt_mul(base, base);
    }
    return acc;
}

WittVec witt_scale(const WittVec& x, const Int& c) {
    auto gx = ghost_components(x);
    for (auto& gi : gx) gi = gi.mul_int(c);
    return from_ghost(x.F, x.n, x.D, gx);
}

WittVec frobenius_lift(const WittVec& x) {
    if (!x.valid()) throw Error("invalid Witt vector");
    std::vector<LFElement> es(x.entries.size());
    for (std::size_t i = 0; i < es.size(); ++i)
        es[i] = x.entries[i].pow(static_cast<unsigned long>(x.F->p()));
    return WittVec{x.F, x.n, x.D, std::move(es)};
}

WittVec witt_invert(const WittVec& x) {
    if (!x.valid()) throw Error("invalid Witt vector");
    auto v0 = x.entries[0].val_exact();
    if (!v0 || *v0 != 0)
        throw NotDivisible("Witt inverse requires a unit leading entry");
    WittVec y = teichmuller(x.entries[0].invert_unit(), x.n, x.D);
    WittVec two = witt_from_int(x.F, x.n, x.D, 2);
    long steps = 1;
    while ((1L << steps) < x.n + 1) ++steps;
    for (long i = 0; i <= steps; ++i)
        y = witt_mul(y, witt_sub(two, witt_mul(x, y)));
    return y;
}

WittVec witt_divide(const WittVec& w, const WittVec& x) {
    check_compat(w, x);
    const FieldPtr& F = w.F;
    const long n = w.n;
    long D = std::min(w.D, x.D);
    auto A = ghost_components(x);
    long slack = 0;
    for (const auto& a : A) {
        auto v = a.val_exact();
        if (!v || *v >= kPrecInf)
            throw PrecisionLoss("divisor ghost valuation indeterminate");
        slack = std::max(slack, *v);
    }
    long Dq = D - slack;
    if (Dq < 1)
        throw PrecisionTooLow("quotient depth collapses under division");
    std::vector<LFElement> ye(static_cast<std::size_t>(n), F->zero());
    for (long k = 0; k < n; ++k) {
        auto cur = raw_mul(F, n, x.entries, ye);
        LFElement num = w.entries[static_cast<std::size_t>(k)] -
                        cur[static_cast<std::size_t>(k)];
        // canonical truncation makes divisibility of the class literal
        num = canon_entry(num, D);
        ye[static_cast<std::size_t>(k)] =
            num.div_exact(A[static_cast<std::size_t>(k)]);
    }
    WittVec y = witt_make(F, n, Dq, std::move(ye));
    if (!witt_eq(witt_reduce(w, Dq), witt_mul(witt_reduce(x, Dq), y)))
        throw NotDivisible("entrywise division left a residue");
    return y;
}

bool witt_eq(const WittVec& a, const WittVec& b) {
    check_compat(a, b);
    long D = std::min(a.D, b.D);
    for (long i = 0; i < a.n; ++i) {
        auto da = a.entries[static_cast<std::size_t>(i)].digits(D);
        auto db = b.entries[static_cast<std::size_t>(i)].digits(D);
        if (da != db) return false;
    }
    return true;
}

WittVec witt_reduce(const WittVec& x, long D) {
    if (D > x.D) throw InputError("cannot deepen a Witt vector");
    WittVec out{x.F, x.n, D, x.entries};
    canonicalize(out);  // reduction is the one place that re-normalizes
    return out;
}

std::vector<std::vector<long>> witt_digits(const WittVec& x) {
    std::vector<std::vector<long>> out;
    out.reserve(x.entries.size());
    for (const auto& e : x.entries) out.push_back(e.digits(x.D));
    return out;
}

namespace detail {
std::vector<LFElement> witt_raw_ghost(const FieldPtr& F, long n,
                                      const std::vector<LFElement>& xe) {
    return raw_ghost(F, n, xe);
}
std::vector<LFElement> witt_raw_mul(const FieldPtr& F, long n,
                                    const std::vector<LFElement>& xe,
                                    const std::vector<LFElement>& ye) {
    return raw_mul(F, n, xe, ye);
}
std::vector<LFElement> witt_raw_add(const FieldPtr& F, long n,
                                    const std::vector<LFElement>& xe,
                                    const std::vector<LFElement>& ye) {
    return raw_add(F, n, xe, ye);
}
}  // namespace detail

// ------------------------------------------------------------- WittContext

WittContext::WittContext(long p, long n) : p_(p), n_(n) {
    if (p < 2 || n < 1) throw InputError("bad Witt context");
}

namespace {

MPoly ghost_poly(long nvars, long offset, long p, long i) {
    MPoly g(nvars);
    for (long k = 0; k <= i; ++k) {
        MPoly t = MPoly::variable(nvars, offset + k).pow(upow(p, i - k));
        g = g + t.scaled(Rat(ipow(p, k)));
    }
    return g;
}

// universal op polynomials: ghost(op_i) matches the ghost combination
std::vector<MPoly> solve_universal(long nvars, long p, long n,
                                   const std::vector<MPoly>& target_ghost) {
    std::vector<MPoly> out;
    for (long i = 0; i < n; ++i) {
        MPoly num = target_ghost[static_cast<std::size_t>(i)];
        for (long k = 0; k < i; ++k)
            num = num -
                  out[static_cast<std::size_t>(k)].pow(upow(p, i - k)).scaled(
                      Rat(ipow(p, k)));
        MPoly si = num.div_exact(ipow(p, i));
        if (!si.integral())
            throw Error("universal polynomial has fractional coefficients");
        out.push_back(si);
    }
    return out;
}

std::vector<MPoly> witt_op_sym(const std::vector<MPoly>& op,
                               const std::vector<MPoly>& A,
                               const std::vector<MPoly>& B) {
    std::vector<MPoly> args = A;
    args.insert(args.end(), B.begin(), B.end());
    std::vector<MPoly> out;
    out.reserve(op.size());
    for (const auto& o : op) out.push_back(o.compose(args));
    return out;
}

}  // namespace

const UniversalPolys& WittContext::universal() const {
    std::call_once(once_, [this] {
        long budget = 1;
        for (long i = 0; i < n_; ++i) budget *= p_;
        if (budget > 30)
            throw TooLarge(
                "symbolic universal polynomials requested beyond desk scale");
        auto u = std::make_unique<UniversalPolys>();
        const long nv2 = 2 * n_;
        // sum and product from the ghost identities
        std::vector<MPoly> gsum, gprod;
        for (long i = 0; i < n_; ++i) {
            MPoly gx = ghost_poly(nv2, 0, p_, i);
            MPoly gy = ghost_poly(nv2, n_, p_, i);
            gsum.push_back(gx + gy);
            gprod.push_back(gx * gy);
        }
        u->sum = solve_universal(nv2, p_, n_, gsum);
        u->prod = solve_universal(nv2, p_, n_, gprod);
        // negation over n variables
        std::vector<MPoly> gneg;
        for (long i = 0; i < n_; ++i)
            gneg.push_back(ghost_poly(n_, 0, p_, i).scaled(-1));
        u->neg = solve_universal(n_, p_, n_, gneg);
        // Phi_i = X_i^p
        for (long i = 0; i < n_; ++i)
            u->frob.push_back(
                MPoly::variable(n_, i).pow(static_cast<unsigned long>(p_)));
        // carries: Phi(X +w Y) -w Phi(X) -w Phi(Y) = (pU_0, ..., pU_{n-1})
        std::vector<MPoly> X, Y, PhiX, PhiY;
        for (long i = 0; i < n_; ++i) {
            X.push_back(MPoly::variable(nv2, i));
            Y.push_back(MPoly::variable(nv2, n_ + i));
            PhiX.push_back(X.back().pow(static_cast<unsigned long>(p_)));
            PhiY.push_back(Y.back().pow(static_cast<unsigned long>(p_)));
        }
        auto lift_neg = [&](const std::vector<MPoly>& V) {
            std::vector<MPoly> out;
            for (const auto& nn : u->neg) out.push_back(nn.compose(V));
            return out;
        };
        auto wsub = [&](const std::vector<MPoly>& A,
                        const std::vector<MPoly>& B) {
            return witt_op_sym(u->sum, A, lift_neg(B));
        };
        {
            std::vector<MPoly> S = witt_op_sym(u->sum, X, Y);
            std::vector<MPoly> PhiS;
            for (const auto& s : S)
                PhiS.push_back(s.pow(static_cast<unsigned long>(p_)));
            auto delta = wsub(wsub(PhiS, PhiX), PhiY);
            for (const auto& d : delta) {
                MPoly uu = d.div_exact(p_);
                if (!uu.integral())
                    throw Error("additive carry is not divisible by p");
                u->carry_add.push_back(uu);
            }
        }
        {
            std::vector<MPoly> P = witt_op_sym(u->prod, X, Y);
            std::vector<MPoly> PhiP, PhiXY;
            for (const auto& s : P)
                PhiP.push_back(s.pow(static_cast<unsigned long>(p_)));
            PhiXY = witt_op_sym(u->prod, PhiX, PhiY);
            auto delta = wsub(PhiP, PhiXY);
            for (const auto& d : delta) {
                MPoly uu = d.div_exact(p_);
                if (!uu.integral())
                    throw Error("multiplicative carry is not divisible by p");
                u->carry_mul.push_back(uu);
            }
        }
        uni_ = std::move(u);
    });
    return *uni_;
}

void WittContext::dump(std::ostream& os) const {
    const auto& u = universal();
    std::vector<std::string> names2, names1;
    for (long i = 0; i < n_; ++i) names2.push_back("X" + std::to_string(i));
    for (long i = 0; i < n_; ++i) names2.push_back("Y" + std::to_string(i));
    for (long i = 0; i < n_; ++i) names1.push_back("X" + std::to_string(i));
    os << "# universal Witt polynomials, p=" << p_ << " n=" << n_ << "\n";
    for (long i = 0; i < n_; ++i)
        os << "S_" << i << " = "
           << u.sum[static_cast<std::size_t>(i)].to_string(names2) << "\n";
    for (long i = 0; i < n_; ++i)
        os << "P_" << i << " = "
           << u.prod[static_cast<std::size_t>(i)].to_string(names2) << "\n";
    for (long i = 0; i < n_; ++i)
        os << "N_" << i << " = "
           << u.neg[static_cast<std::size_t>(i)].to_string(names1) << "\n";
    for (long i = 0; i < n_; ++i)
        os << "Phi_" << i << " = "
           << u.frob[static_cast<std::size_t>(i)].to_string(names1) << "\n";
    for (long i = 0; i < n_; ++i)
        os << "U_" << i << " = "
           << u.carry_add[static_cast<std::size_t>(i)].to_string(names2)
           << "\n";
    for (long i = 0; i < n_; ++i)
        os << "U'_" << i << " = "
           << u.carry_mul[static_cast<std::size_t>(i)].to_string(names2)
           << "\n";
}

}  // namespace ramlock
