#include "ramlock/ramification.hpp"

#include <algorithm>

namespace ramlock {

long RootProfile::count() const {
    long c = 0;
    for (const auto& [v, m] : diffs) c += m;
    return c;
}

namespace {

void merge_diff(std::vector<std::pair<Rat, long>>& diffs, const Rat& v,
                long mult) {
    for (auto& d : diffs)
        if (d.first == v) {
            d.second += mult;
            return;
        }
    diffs.emplace_back(v, mult);
}

void finish_profile(RootProfile& rp) {
    std::sort(rp.diffs.begin(), rp.diffs.end());
    rp.s_f = 0;
    rp.alpha_f = 0;
    for (const auto& [v, m] : rp.diffs) {
        rp.s_f += v * m;
        if (v > rp.alpha_f) rp.alpha_f = v;
    }
}

// root-difference valuations of f relative to the point z in L, as the
// polygon of f(T+z)/T^k with the extended valuation, rescaled to v_N
std::vector<std::pair<Rat, long>> diffs_at_point(
    const std::vector<LFElement>& f, const LFElement& z, const FieldPtr& N,
    bool drop_root_factor) {
    const FieldPtr& L = z.field();
    auto fl = poly_coerce(f, L);
    auto g = poly_shift(fl, z);
    std::vector<LFElement> h;
    if (drop_root_factor) {
        if (!g[0].is_zero_at_prec() || g[0].val_lb() < L->prec_cap() / 2)
            throw PrecisionLoss("shifted constant term is not provably zero");
        h.assign(g.begin() + 1, g.end());
    } else {
        h = g;
    }
    auto np = newton_polygon(h);
    if (np.inf_multiplicity != 0)
        throw PrecisionLoss("unexpected repeated root at the chosen point");
    long erel = L->e_abs() / N->e_abs();
    std::vector<std::pair<Rat, long>> out;
    for (const auto& [v, m] : np.root_valuations)
        out.emplace_back(v / erel, m);
    return out;
}

}  // namespace

RootProfile root_difference_profile(const std::vector<LFElement>& f,
                                    const FieldPtr& N) {
    if (f.size() < 2) throw InputError("polynomial must be non-constant");
    RootProfile rp;
    rp.degree = static_cast<long>(f.size()) - 1;
    if (rp.degree == 1) {
        rp.independent_of_i = true;
        return rp;
    }
    auto [L, z] = adjoin_root(N, f);
    for (const auto& [v, m] : diffs_at_point(f, z, N, true))
        merge_diff(rp.diffs, v, m);
    finish_profile(rp);
    rp.independent_of_i = true;  // certified irreducible: Galois-stable set
    if (rp.count() != rp.degree - 1)
        throw Error("profile multiplicities do not match the degree");
    // derivative identity s_f = v_N(f'(z))
    auto fl = poly_coerce(f, L);
    auto dz = poly_eval(poly_derivative(fl), z);
    auto vd = dz.val_exact();
    if (!vd) throw PrecisionLoss("derivative valuation indeterminate");
    long erel = L->e_abs() / N->e_abs();
    if (make_rat(*vd, erel) != rp.s_f)
        throw Error("derivative identity failed: profile inconsistent");
    return rp;
}

RootProfile root_difference_profile_product(
    const std::vector<std::vector<LFElement>>& factors, const FieldPtr& N) {
    if (factors.empty()) throw InputError("no factors");
    long total_deg = 0;
    for (const auto& f : factors)
        total_deg += static_cast<long>(f.size()) - 1;

    std::vector<RootProfile> per_root;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        RootProfile rp;
        rp.degree = total_deg;
        auto [L, z] = adjoin_root(N, factors[i]);
        if (static_cast<long>(factors[i].size()) - 1 >= 2)
            for (const auto& [v, m] : diffs_at_point(factors[i], z, N, true))
                merge_diff(rp.diffs, v, m);
        for (std::size_t jf = 0; jf < factors.size(); ++jf) {
            if (jf == i) continue;
            for (const auto& [v, m] : diffs_at_point(factors[jf], z, N, false))
                merge_diff(rp.diffs, v, m);
        }
        finish_profile(rp);
        per_root.push_back(std::move(rp));
    }
    RootProfile out = per_root[0];
    out.independent_of_i = true;
    for (const auto& rp : per_root)
        if (rp.diffs != out.diffs) out.independent_of_i = false;
    if (out.count() != total_deg - 1)
        throw Error("profile multiplicities do not match the degree");
    return out;
}

RamBound ramification_bound(long p, long e, long r, long n) {
    if (r < 0) throw RangeError("r must be non-negative");
    if (r >= p - 1) throw RangeError("r must satisfy r < p-1");
    RamBound b{p, e, r, n, 0};
    if (r == 0) {
        b.value = 0;
        return b;
    }
    if (n < 1) throw RangeError("n must be at least 1");
    if (r == 1) {
        b.value = 1 + Rat(e) * (Rat(n) + make_rat(1, p - 1));
    } else {
        Int pn;
        mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(n));
        b.value = 1 - Rat(1) / Rat(pn) + Rat(e) * (Rat(n) + make_rat(r, p - 1));
    }
    return b;
}

RamBound ramification_bound(const FieldPtr& K, long r, long n) {
    return ramification_bound(K->p(), K->e_abs(), r, n);
}

BreakDatum break_from_polynomial(const std::vector<LFElement>& f,
                                 const FieldPtr& N) {
    BreakDatum bd;
    bd.extension = "N[T]/(f)";
    if (static_cast<long>(f.size()) - 1 == 1) {
        bd.upper_break = 0;
        bd.different = Rat(0);
        bd.exact = true;
        return bd;
    }
    auto rp = root_difference_profile(f, N);
    bd.upper_break = rp.s_f + rp.alpha_f;
    bd.different = rp.s_f;
    // two-sided exactly when O_N[T]/(f) is the full valuation ring:
    // Eisenstein presentation or unramified residue presentation
    bool eisenstein = true;
    {
        auto v0 = f[0].val_exact();
        if (!v0 || *v0 != 1) eisenstein = false;
        for (std::size_t i = 1; i + 1 < f.size() && eisenstein; ++i)
            if (f[i].val_lb() < 1) eisenstein = false;
    }
    bool unram = false;
    if (!eisenstein) {
        try {
            auto probe = LocalField::make_step(N, StepKind::Unramified, f);
            (void)probe;
            unram = true;
        } catch (const Error&) {
        }
    }
    bd.exact = eisenstein || unram;
    return bd;
}

BreakDatum break_from_factors(const std::vector<std::vector<LFElement>>& fs,
                              const FieldPtr& N) {
    auto rp = root_difference_profile_product(fs, N);
    BreakDatum bd;
    bd.extension = "N[T]/(f1...fk)";
    bd.upper_break = rp.s_f + rp.alpha_f;
    bd.exact = false;  // only the conductor bound direction
    return bd;
}

Rat cyclotomic_break_bound(const FieldPtr& K, long n) {
    long p = K->p();
    long e = K->e_abs();
    long eprime = -1;
    try {
        std::vector<LFElement> phi(static_cast<std::size_t>(p), K->one());
        auto res = adjoin_root_or_find(K, phi);
        eprime = res.field->e_abs() / K->e_abs();
    } catch (const UnsupportedPresentation&) {
        // the cyclotomic polynomial can split over a ramified K (e.g. a
        // quadratic subfield of Q_p(zeta_p)); build the composite the
        // other way, zeta_p first, then the Eisenstein steps of K.
        std::vector<FieldPtr> steps;
        FieldPtr floor = K;
        while (floor->kind() == StepKind::Eisenstein) {
            steps.push_back(floor);
            floor = floor->parent();
        }
        Tower t = cyclotomic_tower(floor, 1);
        FieldPtr top = t.top;
        std::vector<LFElement> images;  // step generators of K inside top
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            const FieldPtr& S = *it;
            std::vector<LFElement> f(S->step_minpoly().size());
            for (std::size_t i = 0; i < f.size(); ++i)
                f[i] = map_via_generator_images(S->step_minpoly()[i], floor,
                                                images, top);
            auto res = adjoin_root_or_find(top, f);
            for (auto& img : images)
                img = LFElement::coerce(res.field, img);
            images.push_back(res.root);
            top = res.field;
        }
        eprime = top->e_abs() / K->e_abs();
    }
    return 1 - make_rat(1, eprime) + Rat(e) * (Rat(n) + make_rat(1, p - 1));
}

namespace {

std::vector<LFElement> kummer_poly(const FieldPtr& K, long n) {
    long deg = 1;
    for (long i = 0; i < n; ++i) deg *= K->p();
    std::vector<LFElement> f(static_cast<std::size_t>(deg + 1), K->zero());
    f[0] = -K->uniformizer();
    f[static_cast<std::size_t>(deg)] = K->one();
    return f;
}

}  // namespace

BreakDatum break_kummer_cyclotomic(const FieldPtr& K, long n) {
    if (K->p() < 3)
        throw RangeError("the composite tower needs p >= 3");
    if (n < 1) throw RangeError("n must be at least 1");
    long e = K->e_abs();
    Rat closed = 1 + Rat(e) * (Rat(n) + make_rat(1, K->p() - 1));
    // cross-check: the Kummer step break equals the closed form,
    auto kd = break_from_polynomial(kummer_poly(K, n), K);
    if (kd.upper_break != closed)
        throw Error("Kummer-step break disagrees with the closed form");
    // and the cyclotomic part is dominated by it.
    Rat cb = cyclotomic_break_bound(K, n);
    if (cb > closed)
        throw Error("cyclotomic bound exceeds the composite closed form");
    BreakDatum bd;
    bd.extension = "K(pi^(1/p^n), zeta_{p^(n+1)})";
    bd.upper_break = closed;
    bd.exact = true;
    return bd;
}

BreakDatum break_tate_tower(const FieldPtr& K, long n) {
    if (K->p() < 3) throw RangeError("the tower needs p >= 3");
    if (n < 1) throw RangeError("n must be at least 1");
    auto kd = break_from_polynomial(kummer_poly(K, n), K);
    // the zeta_{p^n} part contributes at most the level-(n-1) cyclotomic
    // bound (tame, hence 1, when n = 1)
    Rat cb = n >= 2 ? cyclotomic_break_bound(K, n - 1) : Rat(1);
    if (cb > kd.upper_break)
        throw Error("cyclotomic part unexpectedly dominates");
    BreakDatum bd;
    bd.extension = "K(pi^(1/p^n), zeta_{p^n})";
    bd.upper_break = kd.upper_break;
    bd.exact = kd.exact;
    return bd;
}

Rat different_valuation(const FieldPtr& L, const FieldPtr& K) {
    if (!L->is_ancestor_or_self(K))
        throw NotInTower("different target is not an ancestor");
    Rat total = 0;
    for (FieldPtr M = L; M != K; M = M->parent()) {
        if (M->is_base()) throw NotInTower("different target not reached");
        if (M->kind() == StepKind::Unramified) continue;
        auto d = poly_derivative(poly_coerce(M->step_minpoly(), M));
        auto val = poly_eval(d, M->generator()).val_exact();
        if (!val)
            throw PrecisionLoss("different valuation indeterminate");
        total += Rat(*val) / (M->e_abs() / K->e_abs());
    }
    return total;
}

bool check_discriminant_bound(const FieldPtr& L, const FieldPtr& K, long r,
                              long n) {
    Rat d = different_valuation(L, K);
    if (r == 0) return d == 0;
    return d < ramification_bound(K, r, n).value;
}

bool lifting_property_holds(const MonogenicExt& Q, const FieldPtr& F, Rat j,
                            const ScanOptions& opts, LiftingDiag* diag) {
    if (!F->is_ancestor_or_self(Q.N))
        throw NotInTower("witness field must extend the base");
    long erel = F->e_abs() / Q.N->e_abs();
    auto fF = poly_coerce(Q.f, F);
    // hom O_Q -> O_F/a^j exists iff some x has v_N(f(x)) >= j
    long hom_target = rat_ceil(j * erel);
    auto hom = scan_poly_value(fF, hom_target, opts);
    if (diag) {
        diag->hom_exists = hom.found;
        diag->hom_nodes = hom.nodes;
    }
    if (!hom.found) return true;
    // embedding Q -> F iff f has a root in F; Krasner: v(f(x)) > s+alpha
    auto rp = root_difference_profile(Q.f, Q.N);
    Rat kras = (rp.s_f + rp.alpha_f) * erel;
    long embed_target = rat_floor(kras) + 1;
    auto emb = scan_poly_value(fF, embed_target, opts);
    if (diag) {
        diag->embedding_exists = emb.found;
        diag->embed_nodes = emb.nodes;
    }
    return emb.found;
}

PjBracket pj_bracket(const MonogenicExt& Q,
                     const std::vector<Tower>& witnesses, const Rat& step,
                     const Rat& j_max, const ScanOptions& opts) {
    // One ascending sweep per witness: the largest v_F-target a hom
    // reaches, capped at the Krasner threshold. Reaching the threshold
    // certifies a root (embedding); stopping short certifies its absence,
    // so the property fails exactly at the j covered by the sweep.
    auto rp = root_difference_profile(Q.f, Q.N);
    Rat kras = rp.s_f + rp.alpha_f;
    PjBracket br{Rat(0), Rat(0)};
    for (const auto& w : witnesses) {
        long erel = w.top->e_abs() / Q.N->e_abs();
        auto fF = poly_coerce(Q.f, w.top);
        long embed_target = rat_floor(kras * erel) + 1;
        long maxv = 0;
        for (long t = 1; t <= embed_target; ++t) {
            auto r = scan_poly_value(fF, t, opts);
            if (!r.found) break;
            maxv = t;
        }
        bool embed = maxv >= embed_target;
        if (embed) continue;  // implication holds at every j
        // property fails for grid j with ceil(j * erel) <= maxv
        for (Rat j = step; j <= j_max; j += step) {
            if (rat_ceil(j * erel) <= maxv && j > br.lower) br.lower = j;
        }
    }
    br.upper = br.lower + step;
    return br;
}

}  // namespace ramlock
