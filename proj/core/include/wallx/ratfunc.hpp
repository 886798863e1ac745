#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wallx/polynomial.hpp"

namespace wallx {

// Rational function over Q kept in partially factored form:
//   c * prod(factor_i ^ exp_i),  exp_i in Z \ {0},
// with each factor a primitive-integer, sign-normalized, non-constant polynomial.
// Sums expand over the shared part of the two factorizations and trial-divide the
// resulting numerator by the shared denominator factors, so a value is zero iff it
// is stored as zero. Value equality is decided by subtraction.
class RatFunc {
 public:
  RatFunc() : nv_(0), c_(0) {}
  explicit RatFunc(int nvars, const Rat& c = Rat(0)) : nv_(nvars), c_(c) { c_.canonicalize(); }
  static RatFunc from_poly(const Poly& p);

  int nvars() const { return nv_; }
  bool is_zero() const { return c_ == 0; }
  bool is_one() const { return c_ == 1 && f_.empty(); }
  bool is_rational() const { return f_.empty(); }
  const Rat& rat_value() const;  // requires is_rational()
  const Rat& coeff() const { return c_; }
  const std::map<Poly, int, PolyLess>& factors() const { return f_; }

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc inverse() const;
  RatFunc pow(int k) const;
  RatFunc scaled(const Rat& c) const;

  bool value_equals(const RatFunc& o) const { return (*this - o).is_zero(); }

  RatFunc subst_var(int var, const Poly& value) const;
  RatFunc eval_vars(const std::vector<std::optional<Rat>>& vals) const;

  // Fully expanded, gcd-reduced numerator/denominator; denominator is
  // integer-primitive with positive leading coefficient.
  std::pair<Poly, Poly> num_den() const;

  // Expanded numerator/denominator without cancelling common factors. Much
  // cheaper than num_den() and sufficient wherever only the quotient matters.
  std::pair<Poly, Poly> num_den_raw() const;

  // Multiplies by factor^exp, normalizing and merging.
  void push_factor(const Poly& factor, int exp);

  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  int nv_;
  Rat c_;
  std::map<Poly, int, PolyLess> f_;
};

// Limit when all variables are scaled to zero simultaneously (the classical limit
// of an equivariant quantity as the torus parameters vanish). Exists iff the value
// does not genuinely depend on the direction of approach.
Rat nonequivariant_limit(const RatFunc& f);

using Scalar = RatFunc;

}  // namespace wallx
