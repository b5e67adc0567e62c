#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "ramlock/errors.hpp"

namespace ramlock {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Valuations are exact rationals or +infinity (the valuation of zero).
struct Valuation {
    bool infinite = false;
    Rat value = 0;

    static Valuation inf() { return Valuation{true, 0}; }
    static Valuation of(const Rat& v) { return Valuation{false, v}; }

    bool operator==(const Valuation& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool operator<(const Valuation& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
};

// Reduced-fraction rendering, e.g. "5/2", "3", "0". Never decimals.
inline std::string rat_to_string(const Rat& q) {
    Rat r = q;
    r.canonicalize();
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string val_to_string(const Valuation& v) {
    return v.infinite ? "+inf" : rat_to_string(v.value);
}

// Parse "a/b" or "a". Throws InputError on malformed input.
inline Rat rat_from_string(const std::string& s) {
    try {
        Rat q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw InputError("malformed rational: " + s);
    }
}

inline long rat_floor(const Rat& q) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return fl.get_si();
}

inline long rat_ceil(const Rat& q) {
    Int cl;
    mpz_cdiv_q(cl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return cl.get_si();
}

}  // namespace ramlock
