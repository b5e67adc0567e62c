#include "ramlock/towers.hpp"

namespace ramlock {

const LFElement& Tower::elem(const std::string& name) const {
    auto it = named.find(name);
    if (it == named.end())
        throw MissingRoots("tower has no element named '" + name + "'");
    return it->second;
}

Tower tower_start(const FieldPtr& K, std::string label) {
    Tower t;
    t.base = K;
    t.top = K;
    t.label = std::move(label);
    return t;
}

Tower tower_adjoin(const Tower& t, const std::vector<LFElement>& f,
                   const std::string& root_name) {
    auto res = adjoin_root_or_find(t.top, f);
    Tower out;
    out.base = t.base;
    out.top = res.field;
    out.label = t.label;
    for (const auto& [k, v] : t.named)
        out.named.emplace(k, LFElement::coerce(res.field, v));
    out.named[root_name] = res.root;
    return out;
}

Tower cyclotomic_tower(const FieldPtr& K, long level) {
    Tower t = tower_start(K, "cyclotomic");
    if (level < 1) return t;
    long p = K->p();
    // zeta_p first, via the p-th cyclotomic polynomial
    std::vector<LFElement> phi(static_cast<std::size_t>(p), t.top->one());
    t = tower_adjoin(t, phi, "zeta1");
    for (long k = 2; k <= level; ++k) {
        // T^p - zeta_{p^(k-1)}
        std::vector<LFElement> f(static_cast<std::size_t>(p + 1),
                                 t.top->zero());
        f[0] = -t.elem("zeta" + std::to_string(k - 1));
        f[static_cast<std::size_t>(p)] = t.top->one();
        t = tower_adjoin(t, f, "zeta" + std::to_string(k));
    }
    // sanity: zeta1 is a primitive p-th root of unity
    const auto& z1 = t.elem("zeta1");
    if (!(z1.pow(static_cast<unsigned long>(p)) - t.top->one())
             .is_zero_at_prec() ||
        (z1 - t.top->one()).is_zero_at_prec())
        throw Error("cyclotomic construction failed verification");
    return t;
}

Tower kummer_tower(const FieldPtr& K, long n) {
    long p = K->p();
    long deg = 1;
    for (long i = 0; i < n; ++i) deg *= p;
    std::vector<LFElement> f(static_cast<std::size_t>(deg + 1), K->zero());
    f[0] = -K->uniformizer();
    f[static_cast<std::size_t>(deg)] = K->one();
    Tower t = tower_start(K, "kummer");
    t.named["pi0"] = K->uniformizer();
    t = tower_adjoin(t, f, "pi" + std::to_string(n));
    return t;
}

Tower kummer_cyclotomic_tower(const FieldPtr& K, long n) {
    long p = K->p();
    Tower t = cyclotomic_tower(K, n + 1);
    t.label = "kummer_cyclotomic";
    t.named["pi0"] = LFElement::coerce(t.top, K->uniformizer());
    for (long k = 1; k <= n; ++k) {
        std::vector<LFElement> f(static_cast<std::size_t>(p + 1),
                                 t.top->zero());
        f[0] = -t.elem("pi" + std::to_string(k - 1));
        f[static_cast<std::size_t>(p)] = t.top->one();
        t = tower_adjoin(t, f, "pi" + std::to_string(k));
    }
    // verify pi_n^(p^n) = pi
    LFElement x = t.elem("pi" + std::to_string(n));
    for (long k = 0; k < n; ++k) x = x.pow(static_cast<unsigned long>(p));
    if (!(x - t.elem("pi0")).is_zero_at_prec())
        throw Error("kummer-cyclotomic construction failed verification");
    return t;
}

Tower unramified_extension(const Tower& t, long degree,
                           const std::string& root_name) {
    // smallest-index irreducible over the current residue field, found by
    // scanning monic residue polynomials
    const FieldPtr& F = t.top;
    const auto& reps = F->residue_reps();
    long q = static_cast<long>(reps.size());
    long total = 1;
    for (long i = 0; i < degree; ++i) total *= q;
    for (long code = 0; code < total; ++code) {
        std::vector<LFElement> f(static_cast<std::size_t>(degree + 1));
        long rem = code;
        for (long i = 0; i < degree; ++i) {
            f[static_cast<std::size_t>(i)] =
                reps[static_cast<std::size_t>(rem % q)];
            rem /= q;
        }
        f[static_cast<std::size_t>(degree)] = F->one();
        try {
            FieldPtr L = LocalField::make_step(F, StepKind::Unramified, f);
            Tower out;
            out.base = t.base;
            out.top = L;
            out.label = t.label;
            for (const auto& [k, v] : t.named)
                out.named.emplace(k, LFElement::coerce(L, v));
            out.named[root_name] = L->generator();
            return out;
        } catch (const Reducible&) {
            continue;
        }
    }
    throw Error("no irreducible residue polynomial found");
}

std::vector<Tower> pj_witness_fields_q3(const FieldPtr& K) {
    if (K->p() != 3 || K->e_abs() != 1)
        throw InputError("witness family is curated for Q_3");
    std::vector<Tower> out;
    auto add_radical = [&](long deg, long w, const std::string& label) {
        std::vector<LFElement> f(static_cast<std::size_t>(deg + 1),
                                 K->zero());
        f[0] = K->from_int(-3 * w);
        f[static_cast<std::size_t>(deg)] = K->one();
        Tower t = tower_start(K, label);
        t = tower_adjoin(t, f, "x");
        out.push_back(t);
    };
    // cubic twists: 3w with w a non-cube unit keeps 3^(1/3) out
    // (w = 10 is a cube, so that field does contain the root)
    for (long w : {4, 10}) add_radical(3, w, "cubic");
    // sextic twists give denominator-6 valuations
    for (long w : {2, 4}) add_radical(6, w, "sextic");
    return out;
}

}  // namespace ramlock
