#include "ramlock/multipoly.hpp"

#include <sstream>

namespace ramlock {

void MPoly::add_term(const Key& k, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MPoly MPoly::constant(long nvars, const Rat& c) {
    MPoly p(nvars);
    p.add_term(Key(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

MPoly MPoly::variable(long nvars, long idx) {
    MPoly p(nvars);
    Key k(static_cast<std::size_t>(nvars), 0);
    k[static_cast<std::size_t>(idx)] = 1;
    p.add_term(k, 1);
    return p;
}

MPoly MPoly::operator+(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
    MPoly r(nvars_);
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_) {
            Key k(ka.size());
            for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
            r.add_term(k, ca * cb);
        }
    return r;
}

MPoly MPoly::scaled(const Rat& c) const {
    MPoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

MPoly MPoly::pow(unsigned long k) const {
    MPoly acc = constant(nvars_, 1);
    MPoly base = *this;
    while (k) {
        if (k & 1) acc = acc * base;
        if (k >>= 1) base = base * base;
    }
    return acc;
}

MPoly MPoly::div_exact(const Int& d) const {
    MPoly r(nvars_);
    Rat dd(d);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, c / dd);
    return r;
}

bool MPoly::integral() const {
    for (const auto& [k, c] : terms_)
        if (c.get_den() != 1) return false;
    return true;
}

MPoly MPoly::compose(const std::vector<MPoly>& args) const {
    if (static_cast<long>(args.size()) != nvars_)
        throw InputError("compose arity mismatch");
    long nv = args.empty() ? nvars_ : args[0].nvars();
    MPoly r(nv);
    for (const auto& [k, c] : terms_) {
        MPoly t = MPoly::constant(nv, c);
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i]) t = t * args[i].pow(k[i]);
        r = r + t;
    }
    return r;
}

Rat MPoly::eval(const std::vector<Rat>& xs) const {
    if (static_cast<long>(xs.size()) != nvars_)
        throw InputError("eval arity mismatch");
    Rat acc = 0;
    for (const auto& [k, c] : terms_) {
        Rat t = c;
        for (std::size_t i = 0; i < k.size(); ++i)
            for (unsigned e = 0; e < k[i]; ++e) t *= xs[i];
        acc += t;
    }
    return acc;
}

std::string MPoly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        Rat cc = c;
        if (!first) {
            os << (cc < 0 ? " - " : " + ");
            if (cc < 0) cc = -cc;
        } else if (cc < 0) {
            os << "-";
            cc = -cc;
        }
        first = false;
        bool any_var = false;
        std::ostringstream vars;
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (!k[i]) continue;
            if (any_var) vars << "*";
            vars << names.at(i);
            if (k[i] > 1) vars << "^" << k[i];
            any_var = true;
        }
        if (!any_var) {
            os << rat_to_string(cc);
        } else if (cc == 1) {
            os << vars.str();
        } else {
            os << rat_to_string(cc) << "*" << vars.str();
        }
    }
    return os.str();
}

}  // namespace ramlock
