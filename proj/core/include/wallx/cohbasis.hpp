#pragma once
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wallx/errors.hpp"
#include "wallx/linalg.hpp"
#include "wallx/ratfunc.hpp"
#include "wallx/target.hpp"

namespace wallx {

class CohBasis;
using CohBasisPtr = std::shared_ptr<const CohBasis>;

// Coefficient vector of a cohomology class.
//   Ambient: coordinates over the monomial basis of the classical (torus-free)
//            ring; multiplication uses rational structure constants.
//   FixedPoint: the tuple of equivariant restrictions at the fixed points;
//            multiplication is componentwise in the localized ring.
enum class CohMode { Ambient, FixedPoint };

class CohClass {
 public:
  CohClass(CohBasisPtr basis, CohMode mode, std::vector<Scalar> coeffs);
  static CohClass zero(const CohBasisPtr& basis, CohMode mode);
  static CohClass unit(const CohBasisPtr& basis, CohMode mode);

  const CohBasisPtr& basis() const { return basis_; }
  CohMode mode() const { return mode_; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  const Scalar& coeff(int i) const { return c_.at(i); }
  bool is_zero() const;

  CohClass operator+(const CohClass& o) const;
  CohClass operator-(const CohClass& o) const;
  CohClass operator-() const;
  CohClass operator*(const CohClass& o) const;
  CohClass scaled(const Scalar& c) const;
  CohClass scaled_rat(const Rat& c) const;
  CohClass inverse() const;

  // Equivariant lift: ambient coordinates contracted with the lifted basis
  // restrictions. Identity on fixed-point classes.
  CohClass to_fixed_point() const;
  // Expansion of a fixed-point tuple over the lifted basis (exact over K).
  CohClass to_ambient() const;

  std::string str() const;

 private:
  void require_same(const CohClass& o) const;

  CohBasisPtr basis_;
  CohMode mode_;
  std::vector<Scalar> c_;
};

// Series value hooks.
inline bool value_is_zero(const CohClass& v) { return v.is_zero(); }
inline CohClass value_scale(const CohClass& v, const Scalar& c) { return v.scaled(c); }
inline CohClass value_scale_rat(const CohClass& v, const Rat& c) { return v.scaled_rat(c); }
inline CohClass value_inverse(const CohClass& v) { return v.inverse(); }

// Basis data for the cohomology of a toric target: a monomial basis of the
// classical ring with per-degree normal forms, its canonical equivariant lift
// given by fixed-point restrictions, Euler classes, twist weights, the
// localized (twisted) pairing, and the dual basis.
class CohBasis : public std::enable_shared_from_this<CohBasis> {
 public:
  static CohBasisPtr build(std::shared_ptr<const ToricTarget> target);

  const std::shared_ptr<const ToricTarget>& target() const { return target_; }
  int dim() const { return static_cast<int>(monomials_.size()); }
  int n_fixed() const { return static_cast<int>(target_->fixed_points().size()); }

  // Basis monomials as exponent vectors in the rank() character classes,
  // listed by increasing degree; element 0 is the unit.
  const std::vector<Expo>& monomials() const { return monomials_; }
  int degree(int i) const { return degrees_.at(i); }
  int top_degree() const { return top_degree_; }
  // Indices of the degree-1 basis elements (a divisor basis of H^2).
  const std::vector<int>& h2_indices() const { return h2_; }
  // Character row pairing curve classes with the degree-1 basis element h2_indices()[j].
  const std::vector<IntVec>& h2_characters() const { return h2_chars_; }

  // Classical ring structure.
  const std::vector<Rat>& normal_form(const Expo& mono) const;
  std::vector<Rat> structure_product(int i, int j) const;
  // Ambient coordinates of the class of the i-th coordinate divisor.
  std::vector<Rat> divisor_class(int i) const;
  // Ambient coordinates of the class of an arbitrary character.
  std::vector<Rat> character_class(const IntVec& eta) const;

  // Equivariant data.
  const Scalar& restriction(int i, int s) const { return restr_.at(s).at(i); }
  const Scalar& euler(int s) const { return euler_.at(s); }
  const Scalar& twist_weight(int s) const { return twist_.at(s); }
  // Measure of the localized twisted pairing: twist_weight / euler.
  const Scalar& localization_weight(int s) const { return locw_.at(s); }

  // Twisted equivariant pairing of two classes (any modes).
  Scalar pairing(const CohClass& a, const CohClass& b) const;
  // Classical limit of the twisted pairing.
  Rat integral(const CohClass& a) const;
  // Fixed-point class gamma^i with pairing(gamma_j-lift, gamma^i) = delta_ij.
  CohClass dual_element(int i) const;
  const std::vector<std::vector<Scalar>>& dual_restrictions() const { return dual_restr_; }
  const std::vector<std::vector<Scalar>>& gram() const { return gram_; }

  CohClass basis_element(int i, CohMode mode) const;
  CohClass ambient(std::vector<Scalar> coeffs) const;
  CohClass ambient_rat(const std::vector<Rat>& coeffs) const;
  CohClass fixed_point_class(std::vector<Scalar> restrictions) const;
  CohClass delta(int s) const;  // indicator class of one fixed point

  std::vector<Scalar> fp_to_ambient(const std::vector<Scalar>& values) const;

 private:
  CohBasis() = default;
  void build_classical_ring();
  void build_equivariant_data();

  std::shared_ptr<const ToricTarget> target_;
  std::vector<Expo> monomials_;
  std::vector<int> degrees_;
  int top_degree_ = 0;
  std::vector<int> h2_;
  std::vector<IntVec> h2_chars_;
  // Normal-form coordinates over the basis for every reduced-degree monomial.
  std::map<Expo, std::vector<Rat>> nf_;
  std::vector<Rat> zero_nf_;
  std::vector<std::vector<std::vector<Rat>>> st_;  // structure constants
  std::vector<std::vector<Scalar>> restr_;         // [fixed point][basis index]
  std::vector<Scalar> euler_, twist_, locw_;
  std::vector<std::vector<Scalar>> gram_;
  std::vector<std::vector<Scalar>> dual_restr_;  // [dual index][fixed point]
};

}  // namespace wallx
