#pragma once
#include <map>

#include "wallx/ratfunc.hpp"

namespace wallx {

// Operations that single out one variable of the scalar field as the formal
// parameter z. Fixed-point localization data is rational in z; these helpers
// produce Laurent-expansion views and substitutions.
struct ZOps {
  int zvar;

  explicit ZOps(int zvar_) : zvar(zvar_) {}

  // Laurent coefficients around z = 0 for exponents in [emin, emax].
  // Coefficients are z-free rational functions.
  std::map<int, RatFunc> expand_at_zero(const RatFunc& f, int emin, int emax) const;
  // Laurent coefficients around z = infinity (i.e. a series in 1/z).
  std::map<int, RatFunc> expand_at_infinity(const RatFunc& f, int emin, int emax) const;

  // Order of the pole at z = 0 (0 if regular there).
  int pole_order_at_zero(const RatFunc& f) const;
  // True iff the reduced denominator does not involve z (f is polynomial in z
  // over the field of the remaining variables).
  bool z_free_denominator(const RatFunc& f) const;

  // Substitute a z-free value (given as a polynomial in the other variables).
  RatFunc eval_z(const RatFunc& f, const Poly& zvalue) const;
  RatFunc negate_z(const RatFunc& f) const;
};

}  // namespace wallx
