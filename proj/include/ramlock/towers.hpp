#pragma once

#include <map>
#include <string>
#include <vector>

#include "ramlock/localfield.hpp"

namespace ramlock {

/// A constructed extension together with its designated base and a
/// registry of named elements (root images carried through adjunctions).
struct Tower {
    FieldPtr base;
    FieldPtr top;
    std::map<std::string, LFElement> named;
    std::string label;

    const LFElement& elem(const std::string& name) const;
    bool has(const std::string& name) const { return named.count(name) > 0; }
};

Tower tower_start(const FieldPtr& K, std::string label = "");

/// Adjoin a root of f (over the current top); existing named elements are
/// coerced into the new top and the root is registered under root_name.
Tower tower_adjoin(const Tower& t, const std::vector<LFElement>& f,
                   const std::string& root_name);

/// K(zeta_{p^level}): chain of cyclotomic steps. Registers "zeta1" ...
/// "zeta<level>" with zeta<k> a primitive p^k-th root of unity.
Tower cyclotomic_tower(const FieldPtr& K, long level);

/// K(pi^(1/p^n)) in one Eisenstein step; registers "pi<n>".
Tower kummer_tower(const FieldPtr& K, long n);

/// The splitting tower K(pi^(1/p^n), zeta_{p^(n+1)}): cyclotomic chain
/// first, then p-th root steps. Registers "pi0".."pi<n>" and the zetas.
Tower kummer_cyclotomic_tower(const FieldPtr& K, long n);

/// Extend by an unramified step of the given degree ("u" names the
/// generator). Used for curated candidate lists.
Tower unramified_extension(const Tower& t, long degree,
                           const std::string& root_name = "u");

/// Witness fields over K = Q_3 for bracketing the break of K(3^(1/3))/K
/// via the lifting property: cubic and sextic twists K((3w)^(1/3)),
/// K((3w)^(1/6)) for units w.
std::vector<Tower> pj_witness_fields_q3(const FieldPtr& K);

}  // namespace ramlock
