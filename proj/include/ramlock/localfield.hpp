#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ramlock/errors.hpp"
#include "ramlock/rational.hpp"

namespace ramlock {

class LocalField;
using FieldPtr = std::shared_ptr<const LocalField>;

inline constexpr long kPrecInf = std::numeric_limits<long>::max() / 4;

inline long sat_add(long a, long b) {
    if (a >= kPrecInf || b >= kPrecInf) return kPrecInf;
    long s = a + b;
    return s >= kPrecInf ? kPrecInf : s;
}

enum class StepKind { Base, Unramified, Eisenstein };

/// An element of the ring of integers of a local field, known modulo
/// pi^prec (pi the uniformizer of its own field). Elements are immutable
/// values; arithmetic never silently increases precision.
class LFElement {
  public:
    LFElement() = default;

    const FieldPtr& field() const { return f_; }
    bool valid() const { return f_ != nullptr; }
    long prec() const { return prec_; }
    bool exact_zero() const { return prec_ >= kPrecInf; }

    LFElement operator+(const LFElement& o) const;
    LFElement operator-(const LFElement& o) const;
    LFElement operator-() const;
    LFElement operator*(const LFElement& o) const;
    LFElement mul_int(const Int& c) const;
    LFElement pow(unsigned long k) const;

    /// Exact valuation in v_F units (v_F(pi)=1). Infinite for the exact
    /// zero; PrecisionLoss if the element is zero to working precision
    /// but not provably zero.
    Valuation valuation() const;
    /// Lower bound on the valuation, always defined (prec caps it).
    long val_lb() const;
    /// Exact integer valuation if determinable at current precision.
    std::optional<long> val_exact() const;

    bool is_zero_at_prec() const { return val_lb() >= prec_eff(); }
    bool eq_at_prec(const LFElement& o) const;

    LFElement with_prec(long pr) const;

    /// Exact division by pi^k. Throws NotDivisible.
    LFElement div_unif_exact(long k) const;
    /// Exact division by p^k, coefficientwise down the tower.
    LFElement div_by_p_exact(long k) const;
    /// Inverse of a unit (valuation 0), by residue inversion + Newton.
    LFElement invert_unit() const;
    /// x/y with integral result; precision drops by v(y).
    LFElement div_exact(const LFElement& y) const;

    /// Canonical residue representative of x mod pi (exact element).
    LFElement residue_elem() const;
    long residue_index() const;
    /// Canonical digit expansion x = sum reps[d_k] pi^k, k < depth.
    std::vector<long> digits(long depth) const;

    /// Embed an element of an ancestor field.
    static LFElement coerce(const FieldPtr& target, const LFElement& x);

    /// Step coefficient (non-base fields).
    const LFElement& step_coeff(long i) const;
    /// Stored integer payload (base-field elements).
    const Int& base_payload() const;
    /// Assemble an element from step coefficients.
    static LFElement from_coeffs(const FieldPtr& f,
                                 std::vector<LFElement> coeffs, long prec);

    std::string repr() const;  // debugging aid

  private:
    friend class LocalField;
    FieldPtr f_;
    std::vector<LFElement> c_;  // step coefficients, degree-many (non-base)
    Int z_ = 0;                 // payload for base-field elements
    long prec_ = 0;

    long prec_eff() const { return exact_zero() ? kPrecInf : prec_; }
    long implied_prec() const;  // precision guaranteed by the coefficients
    void clamp_prec();
    void reduce_payload();
    static void check_same_field(const LFElement& a, const LFElement& b);
};

/// A finite extension of Q_p presented as a tower of unramified and
/// Eisenstein steps. Immutable and shareable; tower links are acyclic by
/// construction and the absolute degree is the product of step degrees.
class LocalField : public std::enable_shared_from_this<LocalField> {
  public:
    static FieldPtr padic_base(long p, long work_prec_padic);
    /// New tower step over `parent`. The minimal polynomial must be monic
    /// with coefficients in the parent; Eisenstein steps are validated
    /// (NotEisenstein / PrecisionTooLow), unramified steps must be
    /// irreducible modulo pi.
    static FieldPtr make_step(const FieldPtr& parent, StepKind kind,
                              const std::vector<LFElement>& minpoly);

    long p() const { return p_; }
    StepKind kind() const { return kind_; }
    const FieldPtr& parent() const { return parent_; }
    long step_degree() const { return step_deg_; }
    long abs_degree() const { return deg_abs_; }
    long e_abs() const { return e_abs_; }
    long f_abs() const { return f_abs_; }
    long work_prec() const { return work_prec_; }  // p-adic digits
    long prec_cap() const { return prec_cap_; }    // pi-adic digits
    const std::vector<LFElement>& step_minpoly() const { return minpoly_; }
    const Int& p_pow_cap() const { return p_pow_; }

    bool is_base() const { return kind_ == StepKind::Base; }
    bool is_ancestor_or_self(const FieldPtr& maybe_base) const;
    /// e(this / base) for an ancestor field.
    long rel_e(const FieldPtr& base) const;
    long rel_degree(const FieldPtr& base) const;

    LFElement zero() const;
    LFElement one() const;
    LFElement from_int(const Int& n) const;
    LFElement generator() const;    // step generator; p for the base
    LFElement uniformizer() const;  // pi_F
    LFElement unif_pow(long k) const;

    long residue_card() const;  // q = p^f_abs, as long (desk scale)
    const std::vector<LFElement>& residue_reps() const { return res_reps_; }

    /// v_F-units valuation of an element of an ancestor field, seen here.
    long scale_val_from(const FieldPtr& base, long v_in_base) const;

  private:
    LocalField() = default;
    void init_tables();

    long p_ = 0;
    StepKind kind_ = StepKind::Base;
    FieldPtr parent_;
    std::vector<LFElement> minpoly_;
    long step_deg_ = 1;
    long deg_abs_ = 1, e_abs_ = 1, f_abs_ = 1;
    long work_prec_ = 0, prec_cap_ = 0;
    Int p_pow_;  // p^work_prec

    std::vector<std::vector<LFElement>> redtab_;  // theta^(deg+k) reduced
    LFElement unif_div_;    // pi_parent / theta   (Eisenstein steps)
    LFElement bulk_unit_;   // (theta^deg / pi_parent)^-1, for bulk division
    std::vector<LFElement> res_reps_;
    std::vector<std::vector<Int>> flat_red_;  // redtab rows, flat payloads
    mutable std::vector<LFElement> upow_cache_;
    mutable std::mutex upow_mu_;

    void to_flat(const LFElement& x, Int* out) const;
    LFElement from_flat(const Int* slots, long prec) const;
    void flat_addmul(const Int* a, const Int* b, Int* out) const;

    friend class LFElement;
};

/// Eisenstein-presented field per the JSON interchange: Q_p, optionally an
/// unramified step of degree m, then the given Eisenstein polynomial.
FieldPtr make_field(long p, long m, const std::vector<Int>& eis_coeffs,
                    long precision_padic);

struct AdjoinResult {
    FieldPtr field;
    LFElement root;  // image of a root of f in `field`
};

/// Adjoin a root of a monic polynomial f over F. Irreducibility is
/// certified at desk scale only: single-slope Newton polygon with
/// numerator prime to the degree, or unramified residue criterion, with
/// integral-slope rescaling and pure-power residue shifts in between.
/// Totally ramified steps are re-presented by the Eisenstein minimal
/// polynomial of a uniformizer. Anything else is rejected (Reducible /
/// UnsupportedPresentation) rather than guessed.
AdjoinResult adjoin_root(const FieldPtr& F, const std::vector<LFElement>& f);

/// Like adjoin_root but returns (F, root) unchanged when f has a simple
/// root in F itself (detected via a scaled residue root + Hensel).
AdjoinResult adjoin_root_or_find(const FieldPtr& F,
                                 const std::vector<LFElement>& f);

/// Norm down to an ancestor field, as an iterated resultant (computed via
/// the determinant of the multiplication matrix, division-free).
LFElement norm_to_base(const LFElement& x, const FieldPtr& base);

/// Evaluate x through the ring map fixing `floor` and sending the step
/// generators of x's tower (strictly above floor, listed bottom-up) to the
/// given images in `target`. floor must be an ancestor of both sides.
LFElement map_via_generator_images(const LFElement& x, const FieldPtr& floor,
                                   const std::vector<LFElement>& images,
                                   const FieldPtr& target);

struct NewtonPolygon {
    std::vector<std::pair<long, Rat>> vertices;
    /// Multiset of root valuations (negated slopes, so the reported
    /// numbers are positive for integral polynomials), ascending.
    std::vector<std::pair<Rat, long>> root_valuations;
    long inf_multiplicity = 0;  // T^k divides f

    long total_multiplicity() const;
};

/// Lower convex hull of (i, v_F(a_i)). Valuations are reported in the
/// v_F-normalization of the coefficient field. PrecisionLoss if a needed
/// coefficient valuation is indeterminate.
NewtonPolygon newton_polygon(const std::vector<LFElement>& f);

/// Hull core over exact points; exposed for oracle tests.
NewtonPolygon newton_hull(const std::vector<std::pair<long, Rat>>& pts,
                          long degree, long inf_mult);

/// Polynomial evaluation (Horner).
LFElement poly_eval(const std::vector<LFElement>& f, const LFElement& x);
/// Coefficientwise embedding into an extension of the coefficient field.
std::vector<LFElement> poly_coerce(const std::vector<LFElement>& f,
                                   const FieldPtr& L);
std::vector<LFElement> poly_derivative(const std::vector<LFElement>& f);
/// Taylor shift f(T + c).
std::vector<LFElement> poly_shift(const std::vector<LFElement>& f,
                                  const LFElement& c);
std::vector<LFElement> poly_mul(const std::vector<LFElement>& a,
                                const std::vector<LFElement>& b);

}  // namespace ramlock
