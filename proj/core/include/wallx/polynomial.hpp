#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wallx/rational.hpp"

namespace wallx {

// Exponent vector; one entry per variable. std::map's vector ordering gives lex
// monomial order with lower-index variables more significant.
using Expo = std::vector<int>;

// Sparse multivariate polynomial over Q with a fixed number of variables.
class Poly {
 public:
  Poly() : nv_(0) {}
  explicit Poly(int nvars) : nv_(nvars) {}
  static Poly constant(int nvars, const Rat& c);
  static Poly var(int nvars, int i, const Rat& coeff = Rat(1));
  static Poly monomial(int nvars, const Expo& e, const Rat& c);

  int nvars() const { return nv_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  Rat constant_value() const;  // requires is_constant()
  int total_degree() const;    // -1 for the zero polynomial
  int degree_in(int var) const;
  bool uses_var(int var) const;
  bool homogeneous() const;
  std::size_t term_count() const { return t_.size(); }
  const std::map<Expo, Rat>& terms() const { return t_; }

  Poly& add_term(const Expo& e, const Rat& c);
  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly scaled(const Rat& c) const;
  bool operator==(const Poly& o) const { return nv_ == o.nv_ && t_ == o.t_; }

  // Substitute a polynomial (same variable count) for variable `var`.
  Poly subst_var(int var, const Poly& value) const;
  // Substitute constants for the variables where `vals` is engaged.
  Poly eval_vars(const std::vector<std::optional<Rat>>& vals) const;
  Rat eval_all(const std::vector<Rat>& vals) const;

  std::optional<Poly> divexact(const Poly& d) const;
  // this == c * prim with prim integer-primitive and positive lex-leading coefficient.
  std::pair<Rat, Poly> normalized() const;
  static Poly gcd(const Poly& a, const Poly& b);

  int compare(const Poly& o) const;  // total order (for use as a map key)
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  int nv_;
  std::map<Expo, Rat> t_;
};

struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const { return a.compare(b) < 0; }
};

}  // namespace wallx
