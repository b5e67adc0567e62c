#pragma once

#include <optional>

#include "ramlock/towers.hpp"
#include "ramlock/witt.hpp"

namespace ramlock {

/// Exact division by ([zeta_{p^n}]-1)^r-style regular elements with the
/// quotient required to lie in W_n(m): the inductive entrywise procedure,
/// solving entry k assuming entries < k. NotDivisible when some entry
/// valuation is too small or the quotient leaves the maximal ideal.
WittVec ideal_divide(const WittVec& w, const WittVec& x);

/// The finite quotient  W_n(O_F/b_F) / ([zeta_{p^n}]-1)^r W_n(m_F/b_F)
/// with b_F = { v_K > e r/(p-1) }, its distinguished elements, and the
/// filtration Fil^r = E([pi_n])^r * (ring) with the divided Frobenius
/// phi_r(E^r y) = c^r phi(y). The tower must name pi<n> and zeta<n+1>,
/// and the residue field must be F_p (larger residue fields would need
/// the twisted coefficient action, which is out of scope).
class WittQuotient {
  public:
    WittQuotient(const Tower& tower, long n, long r);

    const Tower& tower() const { return t_; }
    const FieldPtr& F() const { return t_.top; }
    long n() const { return n_; }
    long r() const { return r_; }
    long p() const { return t_.top->p(); }
    long depth_b() const { return Db_; }
    long depth_src() const { return Dsrc_; }

    const WittVec& xi() const { return xi_; }       // ([zeta_{p^n}]-1)^r
    const WittVec& e_pi() const { return epi_; }    // E([pi_n])
    const WittVec& t_elem() const { return t_elem_; }
    const WittVec& v_elem() const { return v_elem_; }
    const WittVec& a_elem() const { return a_elem_; }
    const WittVec& y_elem() const { return y_elem_; }  // image of Y
    const WittVec& c_elem() const { return c_elem_; }  // image of c
    const WittVec& u_img() const { return u_img_; }    // [pi_n]
    const WittVec& zeta_n1() const { return zeta_n1_; }

    WittVec zero() const { return witt_zero(F(), n_, Dsrc_); }
    WittVec one() const { return witt_one(F(), n_, Dsrc_); }
    WittVec from_int(const Int& c) const {
        return witt_from_int(F(), n_, Dsrc_, c);
    }

    /// Ghost-component valuations of the ideal generator.
    const std::vector<long>& xi_ghost_vals() const { return xi_gv_; }
    /// Coset normal form: entry k is reduced below valuation a_k + 1 by
    /// subtracting ideal elements (a_k the k-th ghost valuation of xi).
    WittVec coset_normal_form(const WittVec& x) const;

    /// Membership in the defining ideal (= equality with 0 in the ring).
    bool in_ideal(const WittVec& w) const;
    bool eq(const WittVec& a, const WittVec& b) const;
    /// Section of Fil^r: some y with z = E([pi_n])^r y modulo the ideal.
    std::optional<WittVec> fil_section(const WittVec& z) const;
    bool in_fil(const WittVec& z) const { return fil_section(z).has_value(); }
    WittVec phi(const WittVec& y) const;
    /// phi_r(z) = c^r phi(y) for z in Fil^r; NotDivisible outside Fil.
    WittVec phi_r(const WittVec& z) const;

    /// E(u) coefficients of the base field as integers (residue field F_p).
    const std::vector<Int>& eis_coeffs() const { return eis_; }
    const std::vector<Int>& g_coeffs() const { return g_; }  // (E(u^p)-E^p)/p

  private:
    Tower t_;
    long n_, r_, Db_, Dsrc_;
    std::vector<Int> eis_, g_;
    std::vector<long> xi_gv_;
    WittVec xi_, epi_, t_elem_, v_elem_, a_elem_, y_elem_, c_elem_, u_img_,
        zeta_n1_;
};

/// spec operation: quotient ring handle for level n over F at weight r.
WittQuotient quotient_ring(const Tower& tower, long n, long r);

}  // namespace ramlock
