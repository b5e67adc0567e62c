#pragma once

#include <map>
#include <string>
#include <vector>

#include "ramlock/rational.hpp"

namespace ramlock {

/// Sparse multivariate polynomial with exact rational coefficients and a
/// fixed variable list. Used for the universal Witt polynomials; keys are
/// exponent vectors, kept in lexicographic order for deterministic dumps.
class MPoly {
  public:
    using Key = std::vector<unsigned>;

    explicit MPoly(long nvars = 0) : nvars_(nvars) {}
    static MPoly constant(long nvars, const Rat& c);
    static MPoly variable(long nvars, long idx);

    long nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, Rat>& terms() const { return terms_; }

    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const MPoly& o) const;
    MPoly scaled(const Rat& c) const;
    MPoly pow(unsigned long k) const;

    /// Exact division by an integer; throws if some coefficient fails.
    MPoly div_exact(const Int& d) const;
    bool integral() const;

    /// Substitute polynomials for the variables.
    MPoly compose(const std::vector<MPoly>& args) const;
    Rat eval(const std::vector<Rat>& xs) const;

    std::string to_string(const std::vector<std::string>& names) const;

  private:
    long nvars_;
    std::map<Key, Rat> terms_;
    void add_term(const Key& k, const Rat& c);
};

}  // namespace ramlock
