#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramlock/ramification.hpp"
#include "ramlock/witt_quotient.hpp"

namespace ramlock {

/// Element of the truncated coefficient ring for phi-modules: an integer
/// combination of monomials u^a Y^b, where u maps to the Teichmuller lift
/// of the chosen uniformizer root and Y to its distinguished image in the
/// quotient ring. c = Y + G(u) with G = (E(u^p) - E(u)^p)/p.
struct PhiCoeff {
    struct Term {
        long ue = 0, ye = 0;
        Int c;
    };
    std::vector<Term> terms;

    static PhiCoeff zero() { return {}; }
    static PhiCoeff constant(const Int& c);
    static PhiCoeff u_pow(long k, const Int& c = 1);
    PhiCoeff plus(const PhiCoeff& o) const;
};

/// Rank-d torsion module over the truncated coefficient ring: the
/// filtration generators alpha_i have coordinates C (columns) in the
/// distinguished generators e_i = phi_r(alpha_i).
struct TorsionPhiModule {
    long d = 0, n = 0, r = 0;
    std::vector<std::vector<PhiCoeff>> C;  // d x d
    std::optional<std::vector<long>> fil_exponents;
};

/// Adapted-basis form: Fil is generated by u^(r_i) e_i. Validates
/// 0 <= r_i <= e*r (BadExponent).
TorsionPhiModule make_module(long d, long n, long r,
                             const std::vector<long>& fil_exponents, long e);
/// General form with a coefficient matrix; the span condition
/// u^(er) M <= span(columns) is checked over F_p[u]/(u^(ep)) (BadShape).
TorsionPhiModule make_module(long d, long n, long r,
                             std::vector<std::vector<PhiCoeff>> C, long e,
                             long p);

struct SolveOptions {
    long budget = 200'000;      // BFS node limit
    long extra_slack = 2;       // pruning slack, pi-adic digits
    bool parallel = true;       // fan digit combinations out with OpenMP
};

/// One point of the module in the quotient ring: a d-tuple satisfying the
/// kernel, filtration, and fixed-point conditions.
struct SolutionSet {
    Tower tower;
    long d = 0, n = 0, r = 0;
    std::vector<std::vector<WittVec>> tuples;  // in the quotient ring
    std::vector<std::vector<WittVec>> lifts;   // unique Witt-level lifts
    std::vector<std::vector<std::size_t>> orbits;  // by galois_action
};

/// Enumerate the points of M in the quotient ring over F: breadth-first
/// digit refinement from the residue level, pruned by the congruence
/// depth the conditions can certify, each survivor verified exactly.
SolutionSet solve_points(const TorsionPhiModule& M, const Tower& F,
                         const SolveOptions& opts = {});

long count_points(const TorsionPhiModule& M, const Tower& F,
                  const SolveOptions& opts = {});

/// Unique Witt-level lift of a quotient-ring solution, by the contraction
/// iteration; every refinement step must strictly increase the residual
/// valuation (PrecisionInsufficient otherwise). The initial lift may be
/// perturbed by an ideal element to exhibit uniqueness.
std::vector<WittVec> unique_lift(const TorsionPhiModule& M,
                                 const WittQuotient& Q,
                                 const std::vector<WittVec>& xbar,
                                 const std::vector<WittVec>* perturbation =
                                     nullptr);

struct CutOutResult {
    std::size_t tower_index = 0;
    long count = 0;
    long target = 0;
    BreakDatum break_datum;   // break of the located tower over the base
    Rat bound;                // u(K, r, n)
    bool bound_respected = false;
    bool sharp = false;
};

/// Scan caller-supplied candidate towers for the minimal one achieving the
/// full point count p^(n d), and compare its ramification with the bound.
/// NotFound reports the maximal count seen.
CutOutResult cut_out_extension(const TorsionPhiModule& M,
                               const std::vector<Tower>& candidates,
                               const SolveOptions& opts = {});

/// Automorphism of F over the fixed floor, given by images of the step
/// generators (bottom-up). Verified on construction.
struct FieldAutomorphism {
    FieldPtr F;
    FieldPtr floor;
    std::vector<LFElement> gen_images;

    LFElement apply(const LFElement& x) const;
};

FieldAutomorphism make_automorphism(const FieldPtr& F, const FieldPtr& floor,
                                    std::vector<LFElement> gen_images);
FieldAutomorphism identity_automorphism(const FieldPtr& F);
/// The Frobenius generator of an unramified top step.
FieldAutomorphism unramified_step_frobenius(const FieldPtr& F);

/// Permutation action of the automorphism on the solution tuples; also
/// refreshes the orbit partition of S. NotAnAutomorphism if sigma does
/// not permute the set.
std::vector<std::size_t> galois_action(SolutionSet& S,
                                       const FieldAutomorphism& sigma);

}  // namespace ramlock
