#pragma once
#include <optional>
#include <string>
#include <vector>

#include "wallx/cone.hpp"
#include "wallx/linalg.hpp"
#include "wallx/polynomial.hpp"
#include "wallx/ratfunc.hpp"

namespace wallx {

// A curve class in the character-dual basis: beta(xi) = sum_j beta[j]*xi[j].
using Curve = std::vector<long>;

struct FixedPoint {
  std::vector<int> sigma;  // 0-based coordinate indices, sorted, |sigma| = rank
  RatMat xi_inv;           // inverse of the rank x rank matrix with columns xi_{sigma_k}
};

struct Grading {
  long ltheta_degree;
  long anticanonical_degree;
  long twisted_index;
};

struct Classification {
  enum Kind { Fano, SemiPositive, General } kind;
  long index;        // minimum twisted index over probed effective beta != 0
  long probe_bound;  // theta-degree bound used for the probe
};

// Stability parameter: 0+, a positive rational, or infinity.
struct Epsilon {
  enum Kind { ZeroPlus, Value, Infinite } kind = Infinite;
  Rat value;  // engaged for kind == Value, must be > 0

  static Epsilon zero_plus() { return {ZeroPlus, Rat(0)}; }
  static Epsilon infinite() { return {Infinite, Rat(0)}; }
  static Epsilon of(const Rat& v);
  static Epsilon parse(const std::string& s);
  // Degree cap: beta survives iff beta(L_theta) <= cap. -1 encodes "no cap" (0+).
  long degree_cap() const;
  std::string str() const;
};

class ToricTarget {
 public:
  // Parses and fully validates a target configuration (TOML subset).
  static ToricTarget parse(const std::string& config_text, const std::string& origin = "<config>");
  static ToricTarget parse_file(const std::string& path);

  int n_coords() const { return n_; }
  int rank() const { return l_; }
  const IntVec& xi(int i) const { return xi_[i]; }  // column i, in Z^l
  const IntVec& theta() const { return theta_; }
  const std::vector<IntVec>& convex_twist() const { return convex_; }
  const std::vector<IntVec>& concave_twist() const { return concave_; }
  bool torus_enabled() const { return torus_; }

  // Scalar field layout: lambda_1..lambda_N, one extra parameter per concave
  // twist class, then z as the last variable.
  int n_scalar_vars() const { return n_ + static_cast<int>(concave_.size()) + 1; }
  int zvar() const { return n_scalar_vars() - 1; }
  int extra_var(int a) const { return n_ + a; }

  const std::vector<FixedPoint>& fixed_points() const { return fps_; }

  // mu_sigma(eta): the linear form in lambda with mu_sigma(xi_j) = lambda_j for j in sigma.
  Poly mu(const FixedPoint& fp, const IntVec& eta) const;
  Poly mu(const FixedPoint& fp, const Curve&) = delete;
  // D_i|_sigma = lambda_i - mu_sigma(xi_i).
  Poly divisor_restriction(const FixedPoint& fp, int i) const;
  std::vector<Poly> tangent_weights(const FixedPoint& fp) const;
  RatFunc euler_tangent(const FixedPoint& fp) const;
  // Restriction of the twist class: convex E_a|_sigma = -mu_sigma(eps_a);
  // concave adds the attached extra torus parameter.
  Poly convex_restriction(const FixedPoint& fp, int a) const;
  Poly concave_restriction(const FixedPoint& fp, int a) const;

  // Effective-cone interface.
  bool is_effective(const Curve& b) const;
  std::vector<Curve> effective_classes(long max_theta_degree) const;
  const IntMat& effective_rays() const { return eff_rays_; }

  long pair_curve(const Curve& b, const IntVec& character) const;
  long theta_degree(const Curve& b) const;
  Grading grading(const Curve& b) const;
  Classification classify(long probe_bound = 10) const;
  std::vector<Rat> walls(const Curve& b) const;

  std::string name() const { return name_; }

 private:
  void validate_and_derive();

  int n_ = 0, l_ = 0;
  std::vector<IntVec> xi_;  // per coordinate, in Z^l
  IntVec theta_;
  std::vector<IntVec> convex_, concave_;
  bool torus_ = true;
  std::string name_;

  std::vector<FixedPoint> fps_;
  IntMat chamber_rays_;  // generators of the GIT chamber containing theta
  IntMat eff_rays_;      // extreme rays of the effective cone (dual of the chamber)
};

}  // namespace wallx
