#include "ramlock/witt_quotient.hpp"

namespace ramlock {

WittVec ideal_divide(const WittVec& w, const WittVec& x) {
    WittVec y = witt_divide(w, x);
    for (const auto& e : y.entries)
        if (e.residue_index() != 0)
            throw NotDivisible("quotient leaves the maximal ideal");
    return y;
}

namespace {

long ceil_div(long a, long b) { return (a + b - 1) / b; }

std::vector<Int> eis_coefficients(const FieldPtr& K) {
    if (K->f_abs() != 1)
        throw UnsupportedPresentation(
            "coefficient rings over residue fields beyond F_p would need "
            "the twisted Witt-algebra action");
    if (K->kind() == StepKind::Eisenstein) {
        if (!K->parent()->is_base())
            throw UnsupportedPresentation(
                "base field must be presented by a single Eisenstein step");
        std::vector<Int> out;
        for (const auto& c : K->step_minpoly())
            out.push_back(c.base_payload());
        return out;
    }
    return {-K->p(), 1};
}

// (E(u^p) - E(u)^p) / p over Z[u]
std::vector<Int> g_poly(const std::vector<Int>& E, long p) {
    std::size_t deg = E.size() - 1;
    std::vector<Int> eup(deg * static_cast<std::size_t>(p) + 1, 0);
    for (std::size_t i = 0; i < E.size(); ++i)
        eup[i * static_cast<std::size_t>(p)] = E[i];
    std::vector<Int> epow{1};
    for (long t = 0; t < p; ++t) {
        std::vector<Int> next(epow.size() + E.size() - 1, 0);
        for (std::size_t i = 0; i < epow.size(); ++i)
            for (std::size_t j = 0; j < E.size(); ++j)
                next[i + j] += epow[i] * E[j];
        epow = std::move(next);
    }
    std::vector<Int> g(std::max(eup.size(), epow.size()), 0);
    for (std::size_t i = 0; i < eup.size(); ++i) g[i] += eup[i];
    for (std::size_t i = 0; i < epow.size(); ++i) g[i] -= epow[i];
    for (auto& c : g) {
        if (!mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p)))
            throw Error("Frobenius defect not divisible by p");
        c /= p;
    }
    while (g.size() > 1 && g.back() == 0) g.pop_back();
    return g;
}

WittVec eval_int_poly_at_teich(const std::vector<Int>& poly,
                               const LFElement& a, long n, long D) {
    const FieldPtr& F = a.field();
    WittVec acc = witt_zero(F, n, D);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] == 0) continue;
        WittVec term = witt_mul(
            witt_from_int(F, n, D, poly[i]),
            teichmuller(a.pow(static_cast<unsigned long>(i)), n, D));
        acc = witt_add(acc, term);
    }
    return acc;
}

}  // namespace

WittQuotient::WittQuotient(const Tower& tower, long n, long r)
    : t_(tower), n_(n), r_(r) {
    const FieldPtr& F = t_.top;
    long p = F->p();
    if (n < 1) throw InputError("level must be at least 1");
    if (r < 0 || r > p - 2) throw RangeError("weight must satisfy 0 <= r <= p-2");
    if (!t_.has("pi" + std::to_string(n)) ||
        !t_.has("zeta" + std::to_string(n + 1)))
        throw MissingRoots(
            "tower must contain a p^n-th root of the uniformizer and a "
            "p^(n+1)-st root of unity");
    eis_ = eis_coefficients(t_.base);
    g_ = g_poly(eis_, p);

    long eF = F->e_abs();
    long eK = t_.base->e_abs();
    Db_ = (eF * r) / (p - 1) + 1;
    long slack_xi = ceil_div(eF * r, p - 1);
    long slack_e = ceil_div(eK * eF * std::max(r, 1L), p);
    Dsrc_ = Db_ + std::max(slack_xi, slack_e) + 4;

    const LFElement& pin = t_.elem("pi" + std::to_string(n));
    const LFElement& zet = t_.elem("zeta" + std::to_string(n + 1));
    u_img_ = teichmuller(pin, n_, Dsrc_);
    zeta_n1_ = teichmuller(zet, n_, Dsrc_);
    WittVec zeta_n = teichmuller(zet.pow(static_cast<unsigned long>(p)), n_,
                                 Dsrc_);
    xi_ = r_ == 0 ? one()
                  : witt_pow(witt_sub(zeta_n, one()),
                             static_cast<unsigned long>(r_));
    epi_ = eval_int_poly_at_teich(eis_, pin, n_, Dsrc_);

    // t = 1 + [zeta] + ... + [zeta]^(p-1)
    t_elem_ = witt_zero(F, n_, Dsrc_);
    for (long i = 0; i < p; ++i)
        t_elem_ = witt_add(
            t_elem_,
            teichmuller(zet.pow(static_cast<unsigned long>(i)), n_, Dsrc_));
    v_elem_ = witt_divide(t_elem_, epi_);
    {
        auto v0 = v_elem_.entries[0].val_exact();
        if (!v0 || *v0 != 0) throw Error("v is not a unit");
    }

    // a = sum ((-1)^(p-1-k) C(p-1,k) - 1)/p [zeta]^k  (p >= 3)
    a_elem_ = witt_zero(F, n_, Dsrc_);
    if (p == 2) {
        a_elem_ = witt_neg(one());
    } else {
        for (long k = 1; k <= p - 2; ++k) {
            Int b;
            mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p - 1),
                         static_cast<unsigned long>(k));
            if ((p - 1 - k) % 2) b = -b;
            b -= 1;
            if (!mpz_divisible_ui_p(b.get_mpz_t(),
                                    static_cast<unsigned long>(p)))
                throw Error("binomial defect not divisible by p");
            b /= p;
            if (b == 0) continue;
            a_elem_ = witt_add(
                a_elem_,
                witt_mul(from_int(b),
                         teichmuller(zet.pow(static_cast<unsigned long>(k)),
                                     n_, Dsrc_)));
        }
    }

    {
        auto gv = ghost_components(xi_);
        for (const auto& g : gv) {
            auto v = g.val_exact();
            if (!v || *v >= kPrecInf)
                throw Error("ideal generator ghost valuation unclear");
            xi_gv_.push_back(*v);
        }
    }

    y_elem_ = witt_neg(witt_mul(
        witt_mul(a_elem_, witt_invert(v_elem_)),
        witt_pow(epi_, static_cast<unsigned long>(p - 1))));
    c_elem_ = witt_add(y_elem_, eval_int_poly_at_teich(g_, pin, n_, Dsrc_));
    {
        auto c0 = c_elem_.entries[0].val_exact();
        if (!c0 || *c0 != 0) throw Error("c is not a unit in the quotient");
    }
}

WittVec WittQuotient::coset_normal_form(const WittVec& x) const {
    long D0 = std::min(x.D, Dsrc_);
    WittVec cur = witt_reduce(x, D0);
    auto A = ghost_components(xi_);
    for (long k = 0; k < n_; ++k) {
        long ak = xi_gv_[static_cast<std::size_t>(k)];
        if (ak + 1 >= cur.D) continue;
        // split off the digits of entry k above valuation a_k
        const LFElement& e = cur.entries[static_cast<std::size_t>(k)];
        auto ds = e.digits(cur.D);
        LFElement deep = F()->zero();
        const auto& reps = F()->residue_reps();
        for (long t = ak + 1; t < cur.D; ++t) {
            long d = ds[static_cast<std::size_t>(t)];
            if (d == 0) continue;
            deep = deep + reps[static_cast<std::size_t>(d)] * F()->unif_pow(t);
        }
        if (deep.exact_zero()) continue;
        LFElement yk = deep.div_exact(A[static_cast<std::size_t>(k)]);
        std::vector<LFElement> ve(static_cast<std::size_t>(n_), F()->zero());
        ve[static_cast<std::size_t>(k)] = yk;
        WittVec vvec{F(), n_, cur.D, std::move(ve)};
        WittVec sub = witt_sub(cur, witt_mul(witt_reduce(xi_, cur.D), vvec));
        // the division consumed a_k digits of certainty
        sub.D = std::max(1L, cur.D - ak);
        cur = sub;
    }
    return witt_reduce(cur, cur.D);
}

bool WittQuotient::in_ideal(const WittVec& w) const {
    WittVec wb = witt_reduce(w, std::min(w.D, Db_));
    try {
        WittVec y = witt_divide(wb, witt_reduce(xi_, Db_));
        for (const auto& e : y.entries)
            if (e.residue_index() != 0) return false;
        return true;
    } catch (const NotDivisible&) {
        return false;
    }
}

bool WittQuotient::eq(const WittVec& a, const WittVec& b) const {
    return in_ideal(witt_sub(a, b));
}

std::optional<WittVec> WittQuotient::fil_section(const WittVec& z) const {
    const FieldPtr& Fp = F();
    if (r_ == 0) return z;
    WittVec Er = witt_pow(epi_, static_cast<unsigned long>(r_));
    long D = std::min(z.D, Dsrc_);
    auto Bg = detail::witt_raw_ghost(Fp, n_, Er.entries);
    auto Ag = detail::witt_raw_ghost(Fp, n_, xi_.entries);
    long slack = 0;
    for (auto& b : Bg) {
        auto v = b.val_exact();
        if (!v) throw PrecisionLoss("filtration generator valuation unclear");
        slack = std::max(slack, *v);
    }
    std::vector<LFElement> ye(static_cast<std::size_t>(n_), Fp->zero());
    std::vector<LFElement> we(static_cast<std::size_t>(n_), Fp->zero());
    for (long k = 0; k < n_; ++k) {
        auto curE = detail::witt_raw_mul(Fp, n_, Er.entries, ye);
        auto curX = detail::witt_raw_mul(Fp, n_, xi_.entries, we);
        LFElement num = z.entries[static_cast<std::size_t>(k)] -
                        curE[static_cast<std::size_t>(k)] -
                        curX[static_cast<std::size_t>(k)];
        // canonical truncation makes the class valuation literal
        {
            auto ds = num.digits(D);
            LFElement rebuilt = Fp->zero();
            const auto& reps = Fp->residue_reps();
            for (long t = 0; t < D; ++t) {
                long d = ds[static_cast<std::size_t>(t)];
                if (d == 0) continue;
                rebuilt = rebuilt +
                          reps[static_cast<std::size_t>(d)] * Fp->unif_pow(t);
            }
            num = rebuilt;
        }
        long vnum = num.val_lb();
        auto vB = Bg[static_cast<std::size_t>(k)].val_exact();
        auto vA = Ag[static_cast<std::size_t>(k)].val_exact();
        if (!vB || !vA) throw PrecisionLoss("generator valuation unclear");
        if (vnum >= *vB) {
            ye[static_cast<std::size_t>(k)] =
                num.div_exact(Bg[static_cast<std::size_t>(k)]);
        } else if (vnum >= *vA + 1) {
            LFElement q = num.div_exact(Ag[static_cast<std::size_t>(k)]);
            if (q.residue_index() != 0) return std::nullopt;
            we[static_cast<std::size_t>(k)] = q;
        } else {
            return std::nullopt;
        }
    }
    long Dq = D - slack;
    if (Dq < 1)
        throw PrecisionTooLow("section depth collapses under division");
    WittVec y = witt_make(Fp, n_, Dq, std::move(ye));
    if (!in_ideal(witt_sub(z, witt_mul(Er, y)))) return std::nullopt;
    return y;
}

WittVec WittQuotient::phi(const WittVec& y) const { return frobenius_lift(y); }

WittVec WittQuotient::phi_r(const WittVec& z) const {
    auto sec = fil_section(z);
    if (!sec)
        throw NotDivisible("element is not in the r-th filtration step");
    return witt_mul(witt_pow(c_elem_, static_cast<unsigned long>(r_)),
                    phi(*sec));
}

WittQuotient quotient_ring(const Tower& tower, long n, long r) {
    return WittQuotient(tower, n, r);
}

}  // namespace ramlock
