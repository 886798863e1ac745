#pragma once
#include <map>
#include <utility>
#include <vector>

#include "wallx/cohbasis.hpp"
#include "wallx/series.hpp"

namespace wallx {

// A finite Laurent polynomial in z with cohomology-class coefficients. In the
// non-equivariant basis every hypergeometric factor terminates (divisor
// classes are nilpotent), so one Novikov coefficient is exactly such a
// polynomial, with no window truncation involved.
using ZLaurent = std::map<int, CohClass>;

ZLaurent zl_mul(const ZLaurent& a, const ZLaurent& b);
// The factor c0 + c1*z.
ZLaurent zl_linear(const CohClass& c0, const Rat& c1);
bool zl_equal(const ZLaurent& a, const ZLaurent& b);

// Exact q^beta coefficient of the small I-function in the non-equivariant
// basis: TwistNum(beta) * prod_i F_i(beta) with
//   F_i = prod_{m=1}^{d_i} (D_i + m z)^{-1}          for d_i >= 0,
//   F_i = prod_{m=0}^{-d_i-1} (D_i - m z)            for d_i < 0,
// d_i the pairing of beta with the i-th coordinate weight, and TwistNum the
// product of (E_a + m z) over the twist windows (m in [1, d_a] for convex
// classes, m in [d_a+1, -1] for concave ones).
ZLaurent i_coefficient(const CohBasisPtr& basis, const Curve& beta);

// The same product formula evaluated without the effectiveness or convexity
// validation (twist windows with empty ranges contribute 1). Used to
// cross-check the effective-cone decision: the formula vanishes identically
// on classes outside the cone.
ZLaurent i_coefficient_relaxed(const CohBasisPtr& basis, const Curve& beta);

// Exact q^beta coefficient in the equivariant basis: one rational function of
// (lambda, z) per fixed point, built from the same factors restricted at each
// fixed point.
CohClass i_coefficient_fp(const CohBasisPtr& basis, const Curve& beta);

struct SmallIFunction {
  CohBasisPtr basis;
  CohMode mode = CohMode::Ambient;
  ZSeries<CohClass> series;  // at t = 0
};

// The small I-function at t = 0, assembled over all effective classes within
// the truncation and expanded into the z-window of ctx.
SmallIFunction small_I(const CohBasisPtr& basis, const SeriesContext& ctx,
                       CohMode mode = CohMode::Ambient);

struct IAsymptotics {
  CohBasisPtr basis;
  NovikovSeries<Scalar> i0;   // unit component of the z^0 slice; 1 + O(q)
  NovikovSeries<CohClass> i1;  // z^{-1} slice
  // Decomposition i1 = f0 * 1 + sum_j f_div[j] * (divisor basis element j).
  NovikovSeries<Scalar> f0;
  std::vector<NovikovSeries<Scalar>> f_div;
};

// Extracts the 1/z-asymptotics I = I0 + I1/z + O(1/z^2). Requires the
// non-equivariant basis and a z-window covering exponents 0 and -1. On
// targets that are not of general type, enforces that the z^0 slice is a
// scalar multiple of the unit and that i1 has no components above the
// divisor degree.
IAsymptotics i0_i1(const SmallIFunction& I);

// Chamber truncations of (I0, I1) for the given stability parameter.
std::pair<NovikovSeries<Scalar>, NovikovSeries<CohClass>> epsilon_J0_J1(
    const IAsymptotics& asym, const Epsilon& eps);

}  // namespace wallx
