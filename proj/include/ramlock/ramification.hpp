#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramlock/localfield.hpp"
#include "ramlock/scan.hpp"
#include "ramlock/towers.hpp"

namespace ramlock {

// All breaks and bounds are reported in the shifted upper-numbering
// convention G^(j) = G^(j-1), the one every closed form here uses, and in
// the v_K normalization (v_K(pi_K) = 1) of the stated base field.

/// Multiset of root differences {v_N(z_k - z_i)} of a separable monic
/// polynomial, together with s_f (their sum) and alpha_f (their max).
struct RootProfile {
    std::vector<std::pair<Rat, long>> diffs;  // (valuation, multiplicity)
    Rat s_f = 0;
    Rat alpha_f = 0;
    bool independent_of_i = false;
    long degree = 0;

    long count() const;
};

/// Profile of an irreducible monic f over N, computed by adjoining one
/// root z, expanding f(T+z), removing the root factor and reading the
/// Newton polygon with the extended valuation.
RootProfile root_difference_profile(const std::vector<LFElement>& f,
                                    const FieldPtr& N);

/// Product of certified-irreducible factors, handled factor-wise with
/// cross-differences. The independence certificate may fail; callers then
/// only get the conductor bound direction.
RootProfile root_difference_profile_product(
    const std::vector<std::vector<LFElement>>& factors, const FieldPtr& N);

struct RamBound {
    long p = 0, e = 0, r = 0, n = 0;
    Rat value;
};

/// The three-case bound: 0 for r=0; 1+e(n+1/(p-1)) for r=1;
/// 1-p^-n+e(n+r/(p-1)) for 1<r<p-1. RangeError for r >= p-1.
RamBound ramification_bound(long p, long e, long r, long n);
RamBound ramification_bound(const FieldPtr& K, long r, long n);

struct BreakDatum {
    std::string extension;
    Rat upper_break;                // s_f + alpha_f, (j)-convention
    std::optional<Rat> different;   // v_K(different) where computed
    bool exact = false;             // containment threshold is two-sided
};

/// s_f + alpha_f for the extension presented by f over N. The threshold is
/// two-sided (exact) when the presentation certifies B = O_N[T]/(f) is the
/// full ring of integers: Eisenstein or unramified.
BreakDatum break_from_polynomial(const std::vector<LFElement>& f,
                                 const FieldPtr& N);

/// Conductor bound direction only, for split presentations.
BreakDatum break_from_factors(const std::vector<std::vector<LFElement>>& fs,
                              const FieldPtr& N);

/// Upper bound 1 - 1/e(K(zeta_p)/K) + e(n + 1/(p-1)) for the break of
/// K(zeta_{p^(n+1)})/K; the relative index is computed by construction.
Rat cyclotomic_break_bound(const FieldPtr& K, long n);

/// Greatest break of K(pi^(1/p^n), zeta_{p^(n+1)})/K: the closed form
/// 1 + e(n + 1/(p-1)), cross-checked against the Kummer-step profile and
/// the cyclotomic bound.
BreakDatum break_kummer_cyclotomic(const FieldPtr& K, long n);

/// Greatest break of K(pi^(1/p^n), zeta_{p^n})/K; attains the r=1 bound.
BreakDatum break_tate_tower(const FieldPtr& K, long n);

/// v_K of the different of L/K, summed over the tower steps (monogenic
/// presentations: derivative valuation; unramified steps contribute 0).
Rat different_valuation(const FieldPtr& L, const FieldPtr& K);

/// v_K(different of L/K) < u(K,r,n) for r > 0; = 0 for r = 0.
bool check_discriminant_bound(const FieldPtr& L, const FieldPtr& K, long r,
                              long n);

/// A finite extension given by a monic polynomial over its base, the shape
/// the lifting-property test works with (the ring below must be monogenic).
struct MonogenicExt {
    FieldPtr N;
    std::vector<LFElement> f;
};

struct LiftingDiag {
    bool hom_exists = false;
    bool embedding_exists = false;
    long hom_nodes = 0, embed_nodes = 0;
};

/// Fontaine's lifting property at level j for Q/N against the witness
/// field F (an extension of N constructed in the same tower): if some
/// x in O_F/a^j has v_N(f(x)) >= j then f must have a root in F. The
/// embedding test is a Krasner-certified exhaustive root search.
bool lifting_property_holds(const MonogenicExt& Q, const FieldPtr& F, Rat j,
                            const ScanOptions& opts = {},
                            LiftingDiag* diag = nullptr);

struct PjBracket {
    Rat lower;  // largest grid j where the property failed
    Rat upper;  // smallest grid j above it where it held for all witnesses
};

/// Grid bisection of the lifting property over curated witness fields;
/// the break u_{Q/N} lies in (lower, upper].
PjBracket pj_bracket(const MonogenicExt& Q,
                     const std::vector<Tower>& witnesses, const Rat& step,
                     const Rat& j_max, const ScanOptions& opts = {});

}  // namespace ramlock
