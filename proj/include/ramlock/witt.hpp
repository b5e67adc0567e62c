#pragma once

#include <iosfwd>
#include <memory>
#include <mutex>

#include "ramlock/localfield.hpp"
#include "ramlock/multipoly.hpp"

namespace ramlock {

/// Truncated p-typical Witt vector over O_F / pi_F^D. Entries are stored
/// as canonical full-precision representatives; D is the semantic entry
/// depth. Arithmetic lifts to O_F, uses the ghost map there (where the
/// ring is p-torsion free at working precision), and reduces back, which
/// agrees with the universal polynomials by functoriality.
struct WittVec {
    FieldPtr F;
    long n = 0;
    long D = 0;
    std::vector<LFElement> entries;

    bool valid() const { return F != nullptr; }
};

/// The universal addition/multiplication/negation polynomials for W_n,
/// together with the Frobenius-lift carries U, U' for the lift
/// Phi_i = X_i^p:  Phi(X+Y) = Phi(X) + Phi(Y) + (pU_0,...,pU_{n-1}) and
/// Phi(XY) = Phi(X)Phi(Y) + (pU'_0,...,pU'_{n-1}).
struct UniversalPolys {
    std::vector<MPoly> sum, prod;    // over X_0..X_{n-1}, Y_0..Y_{n-1}
    std::vector<MPoly> neg;          // over X_0..X_{n-1}
    std::vector<MPoly> frob;         // Phi_i = X_i^p
    std::vector<MPoly> carry_add, carry_mul;  // U, U'
};

class WittContext {
  public:
    WittContext(long p, long n);
    long p() const { return p_; }
    long n() const { return n_; }
    /// Symbolic universal polynomials, generated once on demand (guarded);
    /// desk scale only.
    const UniversalPolys& universal() const;
    /// Plain-text dump of the cached polynomials for audit.
    void dump(std::ostream& os) const;

  private:
    long p_, n_;
    mutable std::once_flag once_;
    mutable std::unique_ptr<UniversalPolys> uni_;
};

WittVec witt_make(const FieldPtr& F, long n, long D,
                  std::vector<LFElement> entries);
WittVec witt_zero(const FieldPtr& F, long n, long D);
WittVec witt_one(const FieldPtr& F, long n, long D);
WittVec witt_from_int(const FieldPtr& F, long n, long D, const Int& c);
/// Teichmuller lift [a] = (a, 0, ..., 0).
WittVec teichmuller(const LFElement& a, long n, long D);

WittVec witt_add(const WittVec& x, const WittVec& y);
WittVec witt_sub(const WittVec& x, const WittVec& y);
WittVec witt_neg(const WittVec& x);
WittVec witt_mul(const WittVec& x, const WittVec& y);
WittVec witt_pow(const WittVec& x, unsigned long k);
WittVec witt_scale(const WittVec& x, const Int& c);

/// The chosen Frobenius lift: entrywise p-th power (reduces to the
/// p-power Frobenius of W_n(B/pB)).
WittVec frobenius_lift(const WittVec& x);

/// Ghost components at the representative level.
std::vector<LFElement> ghost_components(const WittVec& x);

/// Inverse of a vector whose leading entry is a unit.
WittVec witt_invert(const WittVec& x);

/// Exact division by a regular element whose entry valuations are known:
/// solves x*y = w entry by entry (the k-th entry equation is
/// A_k y_k = w_k - (x y^(<k))_k with A_k the k-th ghost component of x).
/// Throws NotDivisible when some entry valuation is too small.
WittVec witt_divide(const WittVec& w, const WittVec& x);

bool witt_eq(const WittVec& a, const WittVec& b);
WittVec witt_reduce(const WittVec& x, long D);

/// Canonical digit matrix (n rows of D digit indices), the serialization
/// and equality normal form.
std::vector<std::vector<long>> witt_digits(const WittVec& x);

namespace detail {
/// Representative-level engines without canonical truncation, for solvers
/// that track their own depths.
std::vector<LFElement> witt_raw_ghost(const FieldPtr& F, long n,
                                      const std::vector<LFElement>& xe);
std::vector<LFElement> witt_raw_mul(const FieldPtr& F, long n,
                                    const std::vector<LFElement>& xe,
                                    const std::vector<LFElement>& ye);
std::vector<LFElement> witt_raw_add(const FieldPtr& F, long n,
                                    const std::vector<LFElement>& xe,
                                    const std::vector<LFElement>& ye);
}  // namespace detail

}  // namespace ramlock
