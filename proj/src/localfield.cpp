#include "ramlock/localfield.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <sstream>

#include "ramlock/detail/berkowitz.hpp"

namespace ramlock {

// ---------------------------------------------------------------- LFElement

void LFElement::check_same_field(const LFElement& a, const LFElement& b) {
    if (!a.valid() || !b.valid()) throw Error("operation on invalid element");
    if (a.f_ != b.f_)
        throw ContextMismatch(
            "elements of different fields (cross-tower arithmetic is "
            "undefined)");
}

void LFElement::reduce_payload() {
    if (f_->is_base()) {
        mpz_fdiv_r(z_.get_mpz_t(), z_.get_mpz_t(),
                   f_->p_pow_cap().get_mpz_t());
    }
}

long LFElement::implied_prec() const {
    if (f_->is_base() || c_.empty()) return kPrecInf;
    long best = kPrecInf;
    const long s = f_->step_degree();
    for (long i = 0; i < s; ++i) {
        long cp = c_[static_cast<std::size_t>(i)].prec_eff();
        if (cp >= kPrecInf) continue;
        long term =
            f_->kind() == StepKind::Eisenstein ? sat_add(s * cp, i) : cp;
        best = std::min(best, term);
    }
    return best;
}

void LFElement::clamp_prec() {
    if (exact_zero()) return;
    prec_ = std::min(prec_, implied_prec());
}

const LFElement& LFElement::step_coeff(long i) const {
    if (!valid() || f_->is_base()) throw Error("no step coefficients");
    return c_.at(static_cast<std::size_t>(i));
}

const Int& LFElement::base_payload() const {
    if (!valid() || !f_->is_base())
        throw Error("payload is only defined for base-field elements");
    return z_;
}

LFElement LFElement::from_coeffs(const FieldPtr& f,
                                 std::vector<LFElement> coeffs, long prec) {
    if (!f || f->is_base()) throw Error("from_coeffs needs a step field");
    if (static_cast<long>(coeffs.size()) != f->step_degree())
        throw Error("coefficient count mismatch");
    LFElement r;
    r.f_ = f;
    r.c_ = std::move(coeffs);
    r.prec_ = std::min(prec, f->prec_cap());
    r.clamp_prec();
    return r;
}

LFElement LFElement::operator+(const LFElement& o) const {
    check_same_field(*this, o);
    if (exact_zero()) return o;
    if (o.exact_zero()) return *this;
    LFElement r;
    r.f_ = f_;
    r.prec_ = std::min({prec_, o.prec_, f_->prec_cap()});
    if (f_->is_base()) {
        r.z_ = z_ + o.z_;
        r.reduce_payload();
    } else {
        r.c_.resize(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
        r.clamp_prec();
    }
    return r;
}

LFElement LFElement::operator-() const {
    if (!valid()) throw Error("negate invalid element");
    if (exact_zero()) return *this;
    LFElement r = *this;
    if (f_->is_base()) {
        r.z_ = -z_;
        r.reduce_payload();
    } else {
        for (auto& c : r.c_) c = -c;
    }
    return r;
}

LFElement LFElement::operator-(const LFElement& o) const {
    return *this + (-o);
}

LFElement LFElement::mul_int(const Int& n) const {
    if (!valid()) throw Error("scale invalid element");
    if (exact_zero() || n == 0) return f_->zero();
    LFElement r = *this;
    if (f_->is_base()) {
        r.z_ *= n;
        r.reduce_payload();
    } else {
        for (auto& c : r.c_) c = c.mul_int(n);
    }
    return r;
}

LFElement LFElement::operator*(const LFElement& o) const {
    check_same_field(*this, o);
    if (exact_zero() || o.exact_zero()) return f_->zero();
    LFElement r;
    r.f_ = f_;
    long pr = std::min(sat_add(prec_, o.val_lb()), sat_add(o.prec_, val_lb()));
    r.prec_ = std::min(pr, f_->prec_cap());
    if (f_->is_base()) {
        r.z_ = z_ * o.z_;
        r.reduce_payload();
        return r;
    }
    if (f_->abs_degree() >= 8) {
        // flat kernel: the nested representation allocates too much for
        // dense operands
        long len = f_->abs_degree();
        std::vector<Int> fa(static_cast<std::size_t>(len)),
            fb(static_cast<std::size_t>(len)),
            fo(static_cast<std::size_t>(len));
        f_->to_flat(*this, fa.data());
        f_->to_flat(o, fb.data());
        f_->flat_addmul(fa.data(), fb.data(), fo.data());
        for (auto& c : fo)
            mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(),
                       f_->p_pow_cap().get_mpz_t());
        return f_->from_flat(fo.data(), r.prec_);
    }
    const long s = f_->step_degree();
    std::vector<LFElement> conv(2 * s - 1, f_->parent()->zero());
    for (long i = 0; i < s; ++i) {
        if (c_[i].exact_zero()) continue;
        for (long j = 0; j < s; ++j) {
            if (o.c_[j].exact_zero()) continue;
            conv[i + j] = conv[i + j] + c_[i] * o.c_[j];
        }
    }
    r.c_.assign(s, f_->parent()->zero());
    for (long m = 0; m < s; ++m) r.c_[m] = conv[m];
    for (long k = 0; k + s < 2 * s - 1; ++k) {
        if (conv[s + k].exact_zero()) continue;
        const auto& row = f_->redtab_[k];
        for (long m = 0; m < s; ++m) r.c_[m] = r.c_[m] + conv[s + k] * row[m];
    }
    r.clamp_prec();
    return r;
}

LFElement LFElement::pow(unsigned long k) const {
    if (!valid()) throw Error("pow of invalid element");
    LFElement acc = f_->one();
    LFElement base = *this;
    while (k) {
        if (k & 1) acc = acc * base;
        if (k >>= 1) base = base * base;
    }
    return acc;
}

long LFElement::val_lb() const {
    if (!valid()) throw Error("valuation of invalid element");
    if (exact_zero()) return kPrecInf;
    if (f_->is_base()) {
        if (z_ == 0) return prec_;
        mpz_class tmp;
        long v = static_cast<long>(mpz_remove(
            tmp.get_mpz_t(), z_.get_mpz_t(), mpz_class(f_->p()).get_mpz_t()));
        return std::min(v, prec_);
    }
    long best = prec_;
    const long s = f_->step_degree();
    for (long i = 0; i < s; ++i) {
        long cv = c_[i].val_lb();
        long term;
        if (cv >= kPrecInf)
            term = kPrecInf;
        else
            term = f_->kind() == StepKind::Eisenstein ? s * cv + i : cv;
        best = std::min(best, term);
    }
    return best;
}

std::optional<long> LFElement::val_exact() const {
    if (!valid()) throw Error("valuation of invalid element");
    if (exact_zero()) return kPrecInf;
    if (f_->is_base()) {
        if (z_ == 0) return std::nullopt;
        mpz_class tmp;
        long v = static_cast<long>(mpz_remove(
            tmp.get_mpz_t(), z_.get_mpz_t(), mpz_class(f_->p()).get_mpz_t()));
        if (v >= prec_) return std::nullopt;
        return v;
    }
    long definite = kPrecInf;
    long cap = prec_;
    const long s = f_->step_degree();
    for (long i = 0; i < s; ++i) {
        auto cv = c_[i].val_exact();
        if (cv && *cv < kPrecInf) {
            long term =
                f_->kind() == StepKind::Eisenstein ? s * *cv + i : *cv;
            definite = std::min(definite, term);
        } else {
            long lb = c_[i].val_lb();
            long term;
            if (lb >= kPrecInf)
                term = kPrecInf;
            else
                term = f_->kind() == StepKind::Eisenstein ? s * lb + i : lb;
            cap = std::min(cap, term);
        }
    }
    if (definite < cap && definite < prec_) return definite;
    return std::nullopt;
}

Valuation LFElement::valuation() const {
    if (exact_zero()) return Valuation::inf();
    auto v = val_exact();
    if (!v)
        throw PrecisionLoss(
            "element is zero to working precision but not provably zero");
    if (*v >= kPrecInf) return Valuation::inf();
    return Valuation::of(Rat(*v));
}

bool LFElement::eq_at_prec(const LFElement& o) const {
    return (*this - o).is_zero_at_prec();
}

LFElement LFElement::with_prec(long pr) const {
    if (!valid()) throw Error("with_prec of invalid element");
    LFElement r = *this;
    if (exact_zero()) {
        if (pr >= kPrecInf) return r;
        r.prec_ = std::min(pr, f_->prec_cap());
        return r;
    }
    r.prec_ = std::min({pr, prec_, f_->prec_cap()});
    return r;
}

LFElement LFElement::div_by_p_exact(long k) const {
    if (!valid()) throw Error("division of invalid element");
    if (k == 0 || exact_zero()) return *this;
    LFElement r = *this;
    if (f_->is_base()) {
        Int pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(f_->p()),
                      static_cast<unsigned long>(k));
        if (!mpz_divisible_p(z_.get_mpz_t(), pk.get_mpz_t()))
            throw NotDivisible("element not divisible by this power of p");
        r.z_ = z_ / pk;
        r.prec_ = prec_ - k;
        if (r.prec_ <= 0)
            throw PrecisionTooLow("division by p exhausts precision");
        return r;
    }
    for (auto& c : r.c_) c = c.div_by_p_exact(k);
    long loss = k * f_->e_abs();
    r.prec_ = prec_ - loss;
    if (r.prec_ <= 0)
        throw PrecisionTooLow("division by p exhausts precision");
    r.clamp_prec();
    return r;
}

LFElement LFElement::div_unif_exact(long k) const {
    if (!valid()) throw Error("division of invalid element");
    if (k == 0) return *this;
    if (k < 0) throw Error("negative uniformizer power");
    if (exact_zero()) return *this;
    if (f_->is_base()) {
        Int pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(f_->p()),
                      static_cast<unsigned long>(k));
        if (!mpz_divisible_p(z_.get_mpz_t(), pk.get_mpz_t()))
            throw NotDivisible("element not divisible by this power of p");
        LFElement r = *this;
        r.z_ = z_ / pk;
        r.prec_ = prec_ - k;
        if (r.prec_ <= 0)
            throw PrecisionTooLow("uniformizer division exhausts precision");
        return r;
    }
    if (f_->kind() == StepKind::Unramified) {
        LFElement r = *this;
        for (auto& c : r.c_) c = c.div_unif_exact(k);
        r.prec_ = prec_ - k;
        if (r.prec_ <= 0)
            throw PrecisionTooLow("uniformizer division exhausts precision");
        r.clamp_prec();
        return r;
    }
    const long s = f_->step_degree();
    LFElement x = *this;
    // bulk path: theta^s = pi_parent * W with W a unit, so dividing by
    // theta^(qs) is a coefficientwise parent division times W^-q
    long q = k / s;
    if (q > 0) {
        long npr = x.prec_ - q * s;
        if (npr <= 0)
            throw PrecisionTooLow("uniformizer division exhausts precision");
        std::vector<LFElement> cc(x.c_);
        for (auto& c : cc) c = c.div_unif_exact(q);
        LFElement base = LFElement::from_coeffs(f_, std::move(cc), npr);
        x = (base * f_->bulk_unit_.pow(static_cast<unsigned long>(q)))
                .with_prec(npr);
        k -= q * s;
    }
    for (long step = 0; step < k; ++step) {
        long npr = x.prec_ - 1;
        if (npr <= 0)
            throw PrecisionTooLow("uniformizer division exhausts precision");
        LFElement c0 = x.c_[0].div_unif_exact(1);
        std::vector<LFElement> sc(static_cast<std::size_t>(s),
                                  f_->parent()->zero());
        for (long i = 1; i < s; ++i) sc[i - 1] = x.c_[i];
        LFElement shifted = LFElement::from_coeffs(f_, std::move(sc), npr);
        LFElement corr = f_->zero();
        if (!c0.exact_zero()) {
            std::vector<LFElement> cc(static_cast<std::size_t>(s));
            for (long i = 0; i < s; ++i)
                cc[static_cast<std::size_t>(i)] = c0 * f_->unif_div_.c_[static_cast<std::size_t>(i)];
            corr = LFElement::from_coeffs(f_, std::move(cc),
                                          f_->prec_cap());
        }
        x = (shifted + corr).with_prec(npr);
    }
    return x;
}

LFElement LFElement::invert_unit() const {
    if (!valid()) throw Error("inverse of invalid element");
    auto v = val_exact();
    if (!v || *v != 0) throw NotDivisible("inverse requires a unit");
    long q = f_->residue_card();
    LFElement y = residue_elem();
    if (q > 2) y = y.pow(static_cast<unsigned long>(q - 2));
    LFElement two = f_->from_int(2);
    long target = std::min(prec_, f_->prec_cap());
    long have = 1;
    while (have < target) {
        y = y * (two - *this * y);
        have *= 2;
    }
    return y.with_prec(target);
}

LFElement LFElement::div_exact(const LFElement& y) const {
    check_same_field(*this, y);
    auto v = y.val_exact();
    if (!v) throw PrecisionLoss("divisor valuation indeterminate");
    if (*v >= kPrecInf) throw NotDivisible("division by zero");
    LFElement u = y.div_unif_exact(*v);
    LFElement num = *this * u.invert_unit();
    return num.div_unif_exact(*v);
}

LFElement LFElement::residue_elem() const {
    if (!valid()) throw Error("residue of invalid element");
    return f_->residue_reps()[static_cast<std::size_t>(residue_index())];
}

long LFElement::residue_index() const {
    if (!valid()) throw Error("residue of invalid element");
    if (exact_zero()) return 0;
    if (f_->is_base()) {
        Int m;
        mpz_fdiv_r(m.get_mpz_t(), z_.get_mpz_t(),
                   mpz_class(f_->p()).get_mpz_t());
        return m.get_si();
    }
    if (f_->kind() == StepKind::Eisenstein) return c_[0].residue_index();
    long idx = 0;
    long radix = f_->parent()->residue_card();
    for (std::size_t i = c_.size(); i-- > 0;)
        idx = idx * radix + c_[i].residue_index();
    return idx;
}

std::vector<long> LFElement::digits(long depth) const {
    if (!exact_zero() && prec_ < depth)
        throw PrecisionTooLow("digit expansion beyond element precision");
    std::vector<long> out;
    out.reserve(static_cast<std::size_t>(depth));
    LFElement x = *this;
    const auto& reps = f_->residue_reps();
    for (long k = 0; k < depth; ++k) {
        if (x.exact_zero()) {
            out.push_back(0);
            continue;
        }
        long d = x.residue_index();
        out.push_back(d);
        x = (x - reps[static_cast<std::size_t>(d)]).div_unif_exact(1);
    }
    return out;
}

LFElement LFElement::coerce(const FieldPtr& target, const LFElement& x) {
    if (!x.valid()) throw Error("coerce invalid element");
    if (x.field() == target) return x;
    if (!target->is_ancestor_or_self(x.field()))
        throw NotInTower("element field is not an ancestor of the target");
    LFElement up = x;
    std::vector<FieldPtr> chain;
    for (FieldPtr g = target; g != x.field(); g = g->parent())
        chain.push_back(g);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const FieldPtr& g = *it;
        LFElement r;
        r.f_ = g;
        r.c_.assign(static_cast<std::size_t>(g->step_degree()),
                    g->parent()->zero());
        r.c_[0] = up;
        if (up.exact_zero()) {
            r.prec_ = kPrecInf;
        } else {
            long scaled = g->kind() == StepKind::Eisenstein
                              ? up.prec_ * g->step_degree()
                              : up.prec_;
            r.prec_ = std::min(scaled, g->prec_cap());
        }
        up = r;
    }
    return up;
}

std::string LFElement::repr() const {
    if (!valid()) return "<invalid>";
    std::ostringstream os;
    if (exact_zero()) return "0(exact)";
    if (f_->is_base()) {
        os << z_.get_str();
    } else {
        os << "[";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) os << ", ";
            os << c_[i].repr();
        }
        os << "]";
    }
    os << "+O(pi^" << prec_ << ")";
    return os.str();
}

// ---------------------------------------------------------------- LocalField

FieldPtr LocalField::padic_base(long p, long work_prec_padic) {
    if (p < 2) throw InputError("p must be a prime >= 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw InputError("p must be prime");
    if (work_prec_padic < 2)
        throw PrecisionTooLow("working precision must be at least 2 digits");
    auto f = std::shared_ptr<LocalField>(new LocalField());
    f->p_ = p;
    f->kind_ = StepKind::Base;
    f->work_prec_ = work_prec_padic;
    f->prec_cap_ = work_prec_padic;
    mpz_ui_pow_ui(f->p_pow_.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(work_prec_padic));
    f->init_tables();
    return f;
}

// Residue-level polynomial helpers over the coefficient field; entries are
// canonical residue representatives.
namespace respoly {

using RPoly = std::vector<LFElement>;

RPoly normalize(RPoly f) {
    while (!f.empty() && f.back().residue_index() == 0) f.pop_back();
    return f;
}

RPoly reduce_all(const RPoly& f) {
    RPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i].residue_elem();
    return normalize(r);
}

RPoly mul(const RPoly& a, const RPoly& b, const FieldPtr& F) {
    if (a.empty() || b.empty()) return {};
    RPoly r(a.size() + b.size() - 1, F->zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    return reduce_all(r);
}

RPoly mod(RPoly a, const RPoly& m, const FieldPtr& F) {
    a = reduce_all(a);
    long dm = static_cast<long>(m.size()) - 1;
    LFElement lead_inv = m[static_cast<std::size_t>(dm)]
                             .invert_unit()
                             .residue_elem();
    while (static_cast<long>(a.size()) - 1 >= dm && !a.empty()) {
        long da = static_cast<long>(a.size()) - 1;
        LFElement q = (a[static_cast<std::size_t>(da)] * lead_inv)
                          .residue_elem();
        for (long i = 0; i <= dm; ++i)
            a[static_cast<std::size_t>(da - dm + i)] =
                a[static_cast<std::size_t>(da - dm + i)] -
                q * m[static_cast<std::size_t>(i)];
        a = reduce_all(a);
        while (static_cast<long>(a.size()) > da) a.pop_back();
        a = normalize(a);
    }
    return normalize(a);
}

RPoly gcd(RPoly a, RPoly b, const FieldPtr& F) {
    a = reduce_all(a);
    b = reduce_all(b);
    while (!b.empty()) {
        RPoly r = mod(a, b, F);
        a = b;
        b = r;
    }
    return a;
}

RPoly xpow_qk(const RPoly& m, long q, long k, const FieldPtr& F) {
    Int e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(q),
                  static_cast<unsigned long>(k));
    RPoly acc{F->one()};
    RPoly base = mod({F->zero(), F->one()}, m, F);
    long bits = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2));
    for (long i = bits - 1; i >= 0; --i) {
        acc = mod(mul(acc, acc, F), m, F);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<unsigned long>(i)))
            acc = mod(mul(acc, base, F), m, F);
    }
    return acc;
}

bool is_irreducible(const RPoly& f_in, const FieldPtr& F) {
    RPoly f = reduce_all(f_in);
    long d = static_cast<long>(f.size()) - 1;
    if (d <= 0) return false;
    if (d == 1) return true;
    long q = F->residue_card();
    RPoly xq = xpow_qk(f, q, d, F);
    RPoly diff = xq;
    if (diff.size() < 2) diff.resize(2, F->zero());
    diff[1] = diff[1] - F->one();
    if (!normalize(reduce_all(diff)).empty()) return false;
    for (long l = 2; l <= d; ++l) {
        if (d % l) continue;
        bool prime = true;
        for (long t = 2; t * t <= l; ++t)
            if (l % t == 0) prime = false;
        if (!prime) continue;
        RPoly xe = xpow_qk(f, q, d / l, F);
        RPoly g = xe;
        if (g.size() < 2) g.resize(2, F->zero());
        g[1] = g[1] - F->one();
        g = normalize(reduce_all(g));
        RPoly gc = gcd(f, g, F);
        if (static_cast<long>(gc.size()) - 1 != 0) return false;
    }
    return true;
}

}  // namespace respoly

FieldPtr LocalField::make_step(const FieldPtr& parent, StepKind kind,
                               const std::vector<LFElement>& minpoly) {
    if (!parent) throw InputError("step requires a parent field");
    if (kind == StepKind::Base) throw InputError("cannot stack a base field");
    long s = static_cast<long>(minpoly.size()) - 1;
    if (s < 1) throw InputError("step polynomial must be non-constant");
    for (const auto& c : minpoly)
        if (c.field() != parent)
            throw ContextMismatch("step coefficients must live in the parent");
    if (!(minpoly.back() - parent->one()).is_zero_at_prec())
        throw InputError("step polynomial must be monic");
    if (kind == StepKind::Eisenstein) {
        for (long i = 1; i < s; ++i)
            if (minpoly[static_cast<std::size_t>(i)].val_lb() < 1)
                throw NotEisenstein(
                    "lower coefficients must have positive valuation");
        auto v0 = minpoly[0].val_exact();
        if (!v0)
            throw PrecisionTooLow(
                "cannot certify the Eisenstein constant term at this "
                "precision");
        if (*v0 != 1)
            throw NotEisenstein("constant term must have valuation exactly 1");
    }
    auto f = std::shared_ptr<LocalField>(new LocalField());
    f->p_ = parent->p();
    f->kind_ = kind;
    f->parent_ = parent;
    f->minpoly_ = minpoly;
    f->step_deg_ = s;
    f->deg_abs_ = parent->abs_degree() * s;
    f->e_abs_ =
        kind == StepKind::Eisenstein ? parent->e_abs() * s : parent->e_abs();
    f->f_abs_ =
        kind == StepKind::Unramified ? parent->f_abs() * s : parent->f_abs();
    f->work_prec_ = parent->work_prec();
    f->prec_cap_ = kind == StepKind::Eisenstein ? parent->prec_cap() * s
                                                : parent->prec_cap();
    f->p_pow_ = parent->p_pow_cap();
    if (kind == StepKind::Unramified &&
        !respoly::is_irreducible(minpoly, parent))
        throw Reducible("unramified step polynomial reducible mod pi");
    f->init_tables();
    return f;
}

void LocalField::init_tables() {
    if (is_base()) {
        res_reps_.reserve(static_cast<std::size_t>(p_));
        for (long i = 0; i < p_; ++i) res_reps_.push_back(from_int(i));
        return;
    }
    const long s = step_deg_;
    if (s >= 2) {
        std::vector<LFElement> row(static_cast<std::size_t>(s));
        for (long i = 0; i < s; ++i)
            row[static_cast<std::size_t>(i)] =
                -minpoly_[static_cast<std::size_t>(i)];
        redtab_.push_back(row);
        for (long k = 1; k <= s - 2; ++k) {
            std::vector<LFElement> nr(static_cast<std::size_t>(s),
                                      parent_->zero());
            LFElement top = row[static_cast<std::size_t>(s - 1)];
            for (long i = s - 1; i >= 1; --i)
                nr[static_cast<std::size_t>(i)] =
                    row[static_cast<std::size_t>(i - 1)];
            for (long i = 0; i < s; ++i)
                nr[static_cast<std::size_t>(i)] =
                    nr[static_cast<std::size_t>(i)] +
                    top * redtab_[0][static_cast<std::size_t>(i)];
            redtab_.push_back(nr);
            row = nr;
        }
        // flatten the reduction rows before any multiplication on this
        // field (the flat kernel reads them)
        long m = parent_->abs_degree();
        flat_red_.resize(redtab_.size());
        for (std::size_t k = 0; k < redtab_.size(); ++k) {
            flat_red_[k].assign(static_cast<std::size_t>(s * m), 0);
            for (long t = 0; t < s; ++t)
                parent_->to_flat(redtab_[k][static_cast<std::size_t>(t)],
                                 flat_red_[k].data() + t * m);
        }
    }
    if (kind_ == StepKind::Eisenstein) {
        LFElement u0 = minpoly_[0].div_unif_exact(1);
        LFElement neg_u0inv = -(u0.invert_unit());
        unif_div_.f_ = shared_from_this();
        unif_div_.prec_ = prec_cap_;
        unif_div_.c_.assign(static_cast<std::size_t>(s), parent_->zero());
        for (long j = 0; j + 1 < s; ++j)
            unif_div_.c_[static_cast<std::size_t>(j)] =
                neg_u0inv * minpoly_[static_cast<std::size_t>(j + 1)];
        unif_div_.c_[static_cast<std::size_t>(s - 1)] = neg_u0inv;
        unif_div_.clamp_prec();
        res_reps_.reserve(parent_->residue_reps().size());
        for (const auto& r : parent_->residue_reps())
            res_reps_.push_back(LFElement::coerce(shared_from_this(), r));
        // W = theta^s / pi_parent, a unit; its inverse drives the bulk
        // uniformizer division
        std::vector<LFElement> wc(static_cast<std::size_t>(s));
        for (long i = 0; i < s; ++i)
            wc[static_cast<std::size_t>(i)] =
                -minpoly_[static_cast<std::size_t>(i)].div_unif_exact(1);
        LFElement W = LFElement::from_coeffs(shared_from_this(),
                                             std::move(wc), prec_cap_);
        bulk_unit_ = W.invert_unit();
    } else {
        long qp = parent_->residue_card();
        long q = 1;
        for (long i = 0; i < s; ++i) q *= qp;
        res_reps_.reserve(static_cast<std::size_t>(q));
        for (long idx = 0; idx < q; ++idx) {
            LFElement r;
            r.f_ = shared_from_this();
            r.prec_ = prec_cap_;
            r.c_.resize(static_cast<std::size_t>(s));
            long rem = idx;
            for (long i = 0; i < s; ++i) {
                r.c_[static_cast<std::size_t>(i)] =
                    parent_->residue_reps()[static_cast<std::size_t>(rem %
                                                                     qp)];
                rem /= qp;
            }
            res_reps_.push_back(r);
        }
    }
}

void LocalField::to_flat(const LFElement& x, Int* out) const {
    if (is_base()) {
        out[0] = x.exact_zero() ? Int(0) : x.z_;
        return;
    }
    long m = parent_->abs_degree();
    if (x.exact_zero()) {
        for (long i = 0; i < deg_abs_; ++i) out[i] = 0;
        return;
    }
    for (long i = 0; i < step_deg_; ++i)
        parent_->to_flat(x.c_[static_cast<std::size_t>(i)], out + i * m);
}

LFElement LocalField::from_flat(const Int* slots, long prec) const {
    if (is_base()) {
        LFElement r;
        r.f_ = shared_from_this();
        r.z_ = slots[0];
        r.prec_ = std::min(std::max(prec, 1L), prec_cap_);
        r.reduce_payload();
        return r;
    }
    long m = parent_->abs_degree();
    LFElement r;
    r.f_ = shared_from_this();
    r.c_.resize(static_cast<std::size_t>(step_deg_));
    for (long i = 0; i < step_deg_; ++i) {
        long cp = kind_ == StepKind::Eisenstein
                      ? (prec - i + step_deg_ - 1) / step_deg_
                      : prec;
        r.c_[static_cast<std::size_t>(i)] =
            parent_->from_flat(slots + i * m, cp);
    }
    r.prec_ = std::min(std::max(prec, 1L), prec_cap_);
    return r;
}

void LocalField::flat_addmul(const Int* a, const Int* b, Int* out) const {
    if (is_base()) {
        mpz_addmul(out[0].get_mpz_t(), a[0].get_mpz_t(), b[0].get_mpz_t());
        return;
    }
    const long s = step_deg_;
    const long m = parent_->abs_degree();
    std::vector<Int> conv(static_cast<std::size_t>((2 * s - 1) * m));
    for (long i = 0; i < s; ++i)
        for (long j = 0; j < s; ++j)
            parent_->flat_addmul(a + i * m, b + j * m, conv.data() + (i + j) * m);
    for (long k = 2 * s - 2; k >= s; --k) {
        const auto& row = flat_red_[static_cast<std::size_t>(k - s)];
        for (long t = 0; t < s; ++t)
            parent_->flat_addmul(conv.data() + k * m, row.data() + t * m,
                                 conv.data() + t * m);
    }
    for (long i = 0; i < s * m; ++i) out[i] += conv[static_cast<std::size_t>(i)];
}

bool LocalField::is_ancestor_or_self(const FieldPtr& maybe_base) const {
    for (const LocalField* g = this; g; g = g->parent_.get())
        if (g == maybe_base.get()) return true;
    return false;
}

long LocalField::rel_e(const FieldPtr& base) const {
    if (!is_ancestor_or_self(base)) throw NotInTower("not an ancestor");
    return e_abs_ / base->e_abs();
}

long LocalField::rel_degree(const FieldPtr& base) const {
    if (!is_ancestor_or_self(base)) throw NotInTower("not an ancestor");
    return deg_abs_ / base->abs_degree();
}

LFElement LocalField::zero() const {
    LFElement r;
    r.f_ = shared_from_this();
    r.prec_ = kPrecInf;
    if (!is_base())
        r.c_.assign(static_cast<std::size_t>(step_deg_), parent_->zero());
    return r;
}

LFElement LocalField::one() const { return from_int(1); }

LFElement LocalField::from_int(const Int& n) const {
    if (n == 0) return zero();
    if (is_base()) {
        LFElement r;
        r.f_ = shared_from_this();
        r.prec_ = prec_cap_;
        r.z_ = n;
        r.reduce_payload();
        return r;
    }
    return LFElement::coerce(shared_from_this(), parent_->from_int(n));
}

LFElement LocalField::generator() const {
    if (is_base()) return from_int(p_);
    LFElement r;
    r.f_ = shared_from_this();
    r.prec_ = prec_cap_;
    r.c_.assign(static_cast<std::size_t>(step_deg_), parent_->zero());
    if (step_deg_ == 1)
        r.c_[0] = -minpoly_[0];
    else
        r.c_[1] = parent_->one();
    return r;
}

LFElement LocalField::uniformizer() const {
    if (is_base()) return from_int(p_);
    if (kind_ == StepKind::Eisenstein) return generator();
    return LFElement::coerce(shared_from_this(), parent_->uniformizer());
}

LFElement LocalField::unif_pow(long k) const {
    if (k < 0) throw Error("negative uniformizer power");
    {
        std::lock_guard<std::mutex> lock(upow_mu_);
        if (upow_cache_.empty()) upow_cache_.push_back(one());
        while (static_cast<long>(upow_cache_.size()) <= k &&
               static_cast<long>(upow_cache_.size()) <= prec_cap_)
            upow_cache_.push_back(upow_cache_.back() * uniformizer());
        if (k < static_cast<long>(upow_cache_.size()))
            return upow_cache_[static_cast<std::size_t>(k)];
    }
    LFElement u = uniformizer();
    LFElement r = one();
    unsigned long kk = static_cast<unsigned long>(k);
    while (kk) {
        if (kk & 1) r = r * u;
        if (kk >>= 1) u = u * u;
    }
    return r;
}

long LocalField::residue_card() const {
    long q = 1;
    for (long i = 0; i < f_abs_; ++i) q *= p_;
    return q;
}

long LocalField::scale_val_from(const FieldPtr& base, long v_in_base) const {
    if (!is_ancestor_or_self(base)) throw NotInTower("not an ancestor");
    return v_in_base * (e_abs_ / base->e_abs());
}

// --------------------------------------------------------------- make_field

namespace {

std::vector<Int> smallest_irreducible(long p, long m) {
    auto eval_mod = [&](const std::vector<Int>& f, long x) {
        long acc = 0;
        for (std::size_t i = f.size(); i-- > 0;)
            acc = (acc * x + f[i].get_si()) % p;
        return acc;
    };
    long total = 1;
    for (long i = 0; i < m; ++i) total *= p;
    FieldPtr probe;
    for (long code = 0; code < total; ++code) {
        std::vector<Int> f(static_cast<std::size_t>(m + 1));
        long rem = code;
        for (long i = 0; i < m; ++i) {
            f[static_cast<std::size_t>(i)] = rem % p;
            rem /= p;
        }
        f[static_cast<std::size_t>(m)] = 1;
        bool has_root = false;
        for (long x = 0; x < p && !has_root; ++x)
            if (eval_mod(f, x) == 0) has_root = true;
        if (has_root) continue;
        if (m <= 3) return f;
        if (!probe) probe = LocalField::padic_base(p, 4);
        std::vector<LFElement> rf(static_cast<std::size_t>(m + 1));
        for (long i = 0; i <= m; ++i)
            rf[static_cast<std::size_t>(i)] =
                probe->from_int(f[static_cast<std::size_t>(i)]);
        if (respoly::is_irreducible(rf, probe)) return f;
    }
    throw Error("no irreducible polynomial found");
}

}  // namespace

FieldPtr make_field(long p, long m, const std::vector<Int>& eis_coeffs,
                    long precision_padic) {
    if (m < 1) throw InputError("unramified degree must be >= 1");
    FieldPtr base = LocalField::padic_base(p, precision_padic);
    FieldPtr unram = base;
    if (m > 1) {
        auto inert = smallest_irreducible(p, m);
        std::vector<LFElement> mp(inert.size());
        for (std::size_t i = 0; i < inert.size(); ++i)
            mp[i] = base->from_int(inert[i]);
        unram = LocalField::make_step(base, StepKind::Unramified, mp);
    }
    long e = static_cast<long>(eis_coeffs.size()) - 1;
    if (e < 1) throw InputError("Eisenstein polynomial must be non-constant");
    std::vector<LFElement> mp(eis_coeffs.size());
    for (std::size_t i = 0; i < eis_coeffs.size(); ++i)
        mp[i] = unram->from_int(eis_coeffs[i]);
    if (e == 1) {
        auto v0 = mp[0].val_exact();
        if (!v0) throw PrecisionTooLow("cannot certify Eisenstein condition");
        if (*v0 != 1)
            throw NotEisenstein("constant term must have valuation exactly 1");
        return unram;
    }
    return LocalField::make_step(unram, StepKind::Eisenstein, mp);
}

// -------------------------------------------------------------- poly helpers

LFElement poly_eval(const std::vector<LFElement>& f, const LFElement& x) {
    if (f.empty()) return x.field()->zero();
    LFElement acc = f.back();
    for (std::size_t i = f.size() - 1; i-- > 0;) acc = acc * x + f[i];
    return acc;
}

std::vector<LFElement> poly_derivative(const std::vector<LFElement>& f) {
    std::vector<LFElement> d;
    for (std::size_t i = 1; i < f.size(); ++i)
        d.push_back(f[i].mul_int(static_cast<long>(i)));
    return d;
}

std::vector<LFElement> poly_shift(const std::vector<LFElement>& f,
                                  const LFElement& c) {
    std::vector<LFElement> b = f;
    long d = static_cast<long>(f.size()) - 1;
    for (long i = 0; i < d; ++i)
        for (long j = d - 1; j >= i; --j)
            b[static_cast<std::size_t>(j)] =
                b[static_cast<std::size_t>(j)] +
                b[static_cast<std::size_t>(j + 1)] * c;
    return b;
}

std::vector<LFElement> poly_coerce(const std::vector<LFElement>& f,
                                   const FieldPtr& L) {
    std::vector<LFElement> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = LFElement::coerce(L, f[i]);
    return out;
}

std::vector<LFElement> poly_mul(const std::vector<LFElement>& a,
                                const std::vector<LFElement>& b) {
    if (a.empty() || b.empty()) return {};
    auto F = a[0].field();
    std::vector<LFElement> r(a.size() + b.size() - 1, F->zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    return r;
}

// ------------------------------------------------------------- norm_to_base

LFElement norm_to_base(const LFElement& x, const FieldPtr& base) {
    if (!x.valid()) throw Error("norm of invalid element");
    FieldPtr F = x.field();
    if (!F->is_ancestor_or_self(base))
        throw NotInTower("norm target is not an ancestor");
    LFElement cur = x;
    while (cur.field() != base) {
        FieldPtr G = cur.field();
        if (G->is_base()) throw NotInTower("norm target is not an ancestor");
        const long s = G->step_degree();
        std::vector<std::vector<LFElement>> M(
            static_cast<std::size_t>(s),
            std::vector<LFElement>(static_cast<std::size_t>(s),
                                   G->parent()->zero()));
        LFElement col = cur;
        for (long j = 0; j < s; ++j) {
            for (long i = 0; i < s; ++i)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    col.step_coeff(i);
            if (j + 1 < s) col = col * G->generator();
        }
        auto chi = detail::berkowitz_charpoly(M, G->parent()->zero(),
                                              G->parent()->one());
        LFElement det = chi[0];
        if (s % 2 == 1) det = -det;
        cur = det;
    }
    return cur;
}

LFElement map_via_generator_images(const LFElement& x, const FieldPtr& floor,
                                   const std::vector<LFElement>& images,
                                   const FieldPtr& target) {
    if (!x.valid()) throw Error("map of invalid element");
    std::vector<FieldPtr> chain;  // fields strictly above floor, bottom-up
    {
        FieldPtr g = x.field();
        while (g != floor) {
            if (g->is_base())
                throw NotInTower("floor is not an ancestor of the element");
            chain.push_back(g);
            g = g->parent();
        }
    }
    std::reverse(chain.begin(), chain.end());
    if (chain.size() > images.size())
        throw InputError("not enough generator images");

    // recursive Horner evaluation level by level
    std::function<LFElement(const LFElement&)> ev =
        [&](const LFElement& y) -> LFElement {
        if (y.field() == floor) return LFElement::coerce(target, y);
        long depth = -1;
        for (std::size_t i = 0; i < chain.size(); ++i)
            if (chain[i] == y.field()) depth = static_cast<long>(i);
        if (depth < 0) throw NotInTower("element outside the mapped chain");
        const LFElement& img = images[static_cast<std::size_t>(depth)];
        LFElement acc = target->zero();
        for (long j = y.field()->step_degree(); j-- > 0;)
            acc = acc * img + ev(y.step_coeff(j));
        return acc;
    };
    return ev(x);
}

// -------------------------------------------------------------- adjoin_root

namespace {

// Localized field elements x = num / pi^den for Gaussian elimination.
struct Loc {
    LFElement num;
    long den = 0;

    bool zeroish() const { return num.is_zero_at_prec() || num.exact_zero(); }
    std::optional<long> val() const {
        if (num.exact_zero()) return kPrecInf;
        auto v = num.val_exact();
        if (!v) return std::nullopt;
        return *v - den;
    }
};

Loc loc_mul(const Loc& a, const Loc& b) {
    return Loc{a.num * b.num, a.den + b.den};
}

Loc loc_add(const Loc& a, const Loc& b) {
    long d = std::max(a.den, b.den);
    LFElement an = a.num.field()->unif_pow(d - a.den) * a.num;
    LFElement bn = b.num.field()->unif_pow(d - b.den) * b.num;
    return Loc{an + bn, d};
}

Loc loc_neg(const Loc& a) { return Loc{-a.num, a.den}; }

Loc loc_div(const Loc& a, const Loc& b) {
    auto v = b.num.val_exact();
    if (!v || *v >= kPrecInf) throw PrecisionLoss("pivot valuation unclear");
    LFElement u = b.num.div_unif_exact(*v);
    return Loc{a.num * u.invert_unit(), a.den - b.den + *v};
}

LFElement loc_to_integral(const Loc& a) {
    if (a.den <= 0) return a.num.field()->unif_pow(-a.den) * a.num;
    return a.num.div_unif_exact(a.den);
}

// Solve A x = b over the fraction field, valuation-pivoted.
std::vector<Loc> loc_solve(std::vector<std::vector<Loc>> A,
                           std::vector<Loc> b) {
    const std::size_t n = A.size();
    std::vector<std::size_t> colperm(n);
    std::iota(colperm.begin(), colperm.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        long best = kPrecInf;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                auto v = A[i][j].val();
                if (v && *v < best) {
                    best = *v;
                    bi = i;
                    bj = j;
                }
            }
        if (best >= kPrecInf)
            throw PrecisionLoss("singular system at working precision");
        std::swap(A[k], A[bi]);
        std::swap(b[k], b[bi]);
        for (std::size_t i = 0; i < n; ++i) std::swap(A[i][k], A[i][bj]);
        std::swap(colperm[k], colperm[bj]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (A[i][k].zeroish()) continue;
            Loc m = loc_div(A[i][k], A[k][k]);
            for (std::size_t j = k; j < n; ++j)
                A[i][j] = loc_add(A[i][j], loc_neg(loc_mul(m, A[k][j])));
            b[i] = loc_add(b[i], loc_neg(loc_mul(m, b[k])));
        }
    }
    std::vector<Loc> x(n);
    for (std::size_t k = n; k-- > 0;) {
        Loc acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j)
            acc = loc_add(acc, loc_neg(loc_mul(A[k][j], x[j])));
        x[k] = loc_div(acc, A[k][k]);
    }
    std::vector<Loc> out(n);
    for (std::size_t k = 0; k < n; ++k) out[colperm[k]] = x[k];
    return out;
}

// Coefficients of x reduced modulo g (monic over F), x given as power
// coefficients of the residue class ring F[z]/(g).
std::vector<LFElement> order_mul(const std::vector<LFElement>& a,
                                 const std::vector<LFElement>& b,
                                 const std::vector<LFElement>& g,
                                 const FieldPtr& F) {
    long d = static_cast<long>(g.size()) - 1;
    std::vector<LFElement> conv(static_cast<std::size_t>(2 * d - 1),
                                F->zero());
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            conv[static_cast<std::size_t>(i + j)] =
                conv[static_cast<std::size_t>(i + j)] +
                a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    for (long k = 2 * d - 2; k >= d; --k) {
        LFElement top = conv[static_cast<std::size_t>(k)];
        if (top.exact_zero()) continue;
        for (long i = 0; i < d; ++i)
            conv[static_cast<std::size_t>(k - d + i)] =
                conv[static_cast<std::size_t>(k - d + i)] -
                top * g[static_cast<std::size_t>(i)];
    }
    conv.resize(static_cast<std::size_t>(d));
    return conv;
}

struct DescendState {
    long shifts = 0;
};

AdjoinResult adjoin_descend(const FieldPtr& F, std::vector<LFElement> f,
                            DescendState st, bool allow_root_in_base);

// gcd(A, d) == 1 branch: build the Eisenstein re-presentation of the step
// and express the root of f there.
AdjoinResult adjoin_tot_ram(const FieldPtr& F,
                            const std::vector<LFElement>& f, long A) {
    const long d = static_cast<long>(f.size()) - 1;
    long lambda = 0;
    for (long l = 1; l <= d; ++l)
        if ((l * A) % d == 1 % d) {
            lambda = l;
            break;
        }
    if (d == 1) lambda = 1;
    long mu = (lambda * A - 1) / d;

    if (A == 1) {
        FieldPtr L = LocalField::make_step(F, StepKind::Eisenstein, f);
        return {L, L->generator()};
    }

    // power coefficients of z^lambda mod f
    std::vector<LFElement> zl(static_cast<std::size_t>(d), F->zero());
    zl[1 % static_cast<std::size_t>(d)] = F->one();
    {
        std::vector<LFElement> acc(static_cast<std::size_t>(d), F->zero());
        acc[0] = F->one();
        std::vector<LFElement> base = zl;
        unsigned long k = static_cast<unsigned long>(lambda);
        while (k) {
            if (k & 1) acc = order_mul(acc, base, f, F);
            if (k >>= 1) base = order_mul(base, base, f, F);
        }
        zl = acc;
    }

    // multiplication matrix of z^lambda, charpoly, then strip pi^(mu(d-i)).
    std::vector<std::vector<LFElement>> M(
        static_cast<std::size_t>(d),
        std::vector<LFElement>(static_cast<std::size_t>(d), F->zero()));
    {
        std::vector<LFElement> col = zl;
        std::vector<LFElement> zcol(static_cast<std::size_t>(d), F->zero());
        zcol[1 % static_cast<std::size_t>(d)] = F->one();
        for (long j = 0; j < d; ++j) {
            for (long i = 0; i < d; ++i)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    col[static_cast<std::size_t>(i)];
            if (j + 1 < d) col = order_mul(col, zcol, f, F);
        }
    }
    auto chi = detail::berkowitz_charpoly(M, F->zero(), F->one());
    std::vector<LFElement> E(static_cast<std::size_t>(d + 1));
    for (long i = 0; i <= d; ++i) {
        long k = mu * (d - i);
        E[static_cast<std::size_t>(i)] =
            chi[static_cast<std::size_t>(i)].div_unif_exact(k);
    }
    FieldPtr L = LocalField::make_step(F, StepKind::Eisenstein, E);

    // Express z in powers of the new uniformizer: solve B x = e_z where
    // column j holds the z-basis coordinates of pi_new^j = z^(lambda j)/pi^(mu j).
    std::vector<std::vector<Loc>> B(
        static_cast<std::size_t>(d),
        std::vector<Loc>(static_cast<std::size_t>(d)));
    std::vector<LFElement> colpow(static_cast<std::size_t>(d), F->zero());
    colpow[0] = F->one();
    for (long j = 0; j < d; ++j) {
        for (long i = 0; i < d; ++i)
            B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                Loc{colpow[static_cast<std::size_t>(i)], mu * j};
        if (j + 1 < d) colpow = order_mul(colpow, zl, f, F);
    }
    std::vector<Loc> rhs(static_cast<std::size_t>(d), Loc{F->zero(), 0});
    rhs[1 % static_cast<std::size_t>(d)] = Loc{F->one(), 0};
    auto x = loc_solve(B, rhs);

    LFElement root = L->zero();
    LFElement pin = L->generator();
    LFElement pw = L->one();
    for (long j = 0; j < d; ++j) {
        LFElement cj = loc_to_integral(x[static_cast<std::size_t>(j)]);
        root = root + LFElement::coerce(L, cj) * pw;
        if (j + 1 < d) pw = pw * pin;
    }
    return {L, root};
}

AdjoinResult adjoin_descend(const FieldPtr& F, std::vector<LFElement> f,
                            DescendState st, bool allow_root_in_base) {
    const long d = static_cast<long>(f.size()) - 1;
    if (d == 1) return {F, -f[0]};

    NewtonPolygon np = newton_polygon(f);
    if (np.inf_multiplicity > 0)
        throw Reducible("polynomial divisible by T");
    if (np.root_valuations.size() != 1)
        throw Reducible("Newton polygon has several slopes");
    Rat rv = np.root_valuations[0].first;
    if (rv < 0)
        throw UnsupportedPresentation("root lies outside the integers");
    // rv = A/d in lowest terms scaled so that A = total drop over run d
    Int Anum = rv.get_num() * d;
    if (!mpz_divisible_p(Anum.get_mpz_t(), rv.get_den().get_mpz_t()))
        throw Error("polygon arithmetic error");
    long A = static_cast<long>(Rat(Anum / rv.get_den()).get_num().get_si());

    long g = std::gcd(A, d);
    if (g == 1) return adjoin_tot_ram(F, f, A);

    if (A % d == 0) {
        long w = A / d;
        std::vector<LFElement> h = f;
        if (w > 0) {
            for (long i = 0; i < d; ++i)
                h[static_cast<std::size_t>(i)] =
                    h[static_cast<std::size_t>(i)].div_unif_exact(w * (d - i));
        }
        // residue analysis of the unit-content polynomial
        std::vector<LFElement> hbar(h.size());
        for (std::size_t i = 0; i < h.size(); ++i)
            hbar[i] = h[i].residue_elem();
        if (respoly::is_irreducible(hbar, F)) {
            FieldPtr L = LocalField::make_step(F, StepKind::Unramified, h);
            LFElement root = L->generator();
            for (long t = 0; t < w; ++t)
                root = root * LFElement::coerce(L, F->uniformizer());
            return {L, root};
        }
        // single residue root?
        std::vector<LFElement> roots;
        for (const auto& r : F->residue_reps()) {
            if (poly_eval(hbar, r).residue_index() == 0) roots.push_back(r);
        }
        if (roots.size() == 1) {
            const LFElement& c = roots[0];
            auto shifted = poly_shift(h, c);
            bool pure = true;
            for (long i = 0; i < d; ++i)
                if (shifted[static_cast<std::size_t>(i)].val_lb() < 1)
                    pure = false;
            if (pure) {
                DescendState nst{st.shifts + 1};
                if (nst.shifts > 4 * F->prec_cap())
                    throw UnsupportedPresentation(
                        "shift descent did not reach a certifiable "
                        "presentation");
                auto sub =
                    adjoin_descend(F, shifted, nst, allow_root_in_base);
                LFElement root = LFElement::coerce(sub.field, c) + sub.root;
                for (long t = 0; t < w; ++t)
                    root = root *
                           LFElement::coerce(sub.field, F->uniformizer());
                return {sub.field, root};
            }
            // simple root: Hensel-lift inside F
            auto hd = poly_derivative(h);
            if (poly_eval(hd, c).residue_index() != 0) {
                if (!allow_root_in_base)
                    throw Reducible("polynomial has a root in the field");
                LFElement x = c;
                for (int it = 0; it < 64; ++it) {
                    LFElement fx = poly_eval(h, x);
                    if (fx.is_zero_at_prec()) break;
                    LFElement dfx = poly_eval(hd, x);
                    x = x - fx.div_exact(dfx);
                }
                LFElement root = x;
                for (long t = 0; t < w; ++t)
                    root = root * F->uniformizer();
                return {F, root};
            }
            throw UnsupportedPresentation(
                "repeated non-pure residue factor; cannot certify");
        }
        if (roots.size() > 1) {
            if (allow_root_in_base) {
                auto hd = poly_derivative(h);
                for (const auto& c : roots) {
                    if (poly_eval(hd, c).residue_index() == 0) continue;
                    LFElement x = c;
                    for (int it = 0; it < 64; ++it) {
                        LFElement fx = poly_eval(h, x);
                        if (fx.is_zero_at_prec()) break;
                        x = x - fx.div_exact(poly_eval(hd, x));
                    }
                    LFElement root = x;
                    for (long t = 0; t < w; ++t)
                        root = root * F->uniformizer();
                    return {F, root};
                }
            }
            throw Reducible("several residue roots: polynomial splits");
        }
        // no residue roots, not irreducible: squarefree means distinct
        // irreducible factors, so the polynomial genuinely splits.
        {
            std::vector<LFElement> hd(hbar.size() > 1 ? hbar.size() - 1
                                                      : std::size_t{0});
            for (std::size_t i = 1; i < hbar.size(); ++i)
                hd[i - 1] =
                    hbar[i].mul_int(static_cast<long>(i)).residue_elem();
            auto g2 = respoly::gcd(hbar, hd, F);
            if (static_cast<long>(g2.size()) - 1 == 0)
                throw Reducible("distinct irreducible residue factors");
        }
        throw UnsupportedPresentation(
            "residue polynomial is a proper power of an irreducible; cannot "
            "certify at desk scale");
    }
    throw UnsupportedPresentation(
        "single slope with non-coprime numerator; cannot certify "
        "irreducibility");
}

}  // namespace

AdjoinResult adjoin_root(const FieldPtr& F, const std::vector<LFElement>& f) {
    if (f.size() < 2) throw InputError("polynomial must be non-constant");
    for (const auto& c : f)
        if (c.field() != F)
            throw ContextMismatch("coefficients must live in the given field");
    if (!(f.back() - F->one()).is_zero_at_prec())
        throw InputError("polynomial must be monic");
    return adjoin_descend(F, f, DescendState{}, false);
}

AdjoinResult adjoin_root_or_find(const FieldPtr& F,
                                 const std::vector<LFElement>& f) {
    if (f.size() < 2) throw InputError("polynomial must be non-constant");
    if (!(f.back() - F->one()).is_zero_at_prec())
        throw InputError("polynomial must be monic");
    return adjoin_descend(F, f, DescendState{}, true);
}

}  // namespace ramlock
