#pragma once
#include <vector>

#include "wallx/series.hpp"

namespace wallx {

// One simple pole of the recursion satisfied by the restrictions S_mu:
//   S_mu(z) ~ C / (z + pole) * S_nu(-pole)   near z = -pole,
// where pole = w(mu,nu)/n and the term carries Novikov weight q^beta.
struct RecursionTerm {
  int mu = 0;
  int nu = 0;
  long n = 1;
  Curve beta;  // n times the orbit class
  Scalar C;    // residue coefficient
  Poly pole;   // w(mu,nu)/n
};

struct RecursionData {
  int n_fixed = 0;
  std::vector<RecursionTerm> terms;
};

struct ReconstructOptions {
  int y_order = 2;  // regularity of D(S) is imposed through this y-order
};

// Determines the scalar series S_mu(q,t,z), one per fixed point, from
//  (a) the pole structure prescribed by `rec` (all poles away from z = 0
//      are simple, at z = -pole, with the given residue coupling), and
//  (b) z-regularity of D(S_mu)(z,y) = sum over splittings of
//      S_mu(q,t,z) * S_mu(q e^{-zy L_theta}, t, -z),
// inducting lexicographically on (t-degree, theta-degree).
//
// `initial` supplies the q^0 part exactly and every positive-degree
// coefficient mod 1/z^2; orders below 1/z at q != 0 are ignored. Positive-
// degree coefficients are sums of partial fractions in z, so their z^0 part
// must vanish. Inconsistent data raises InternalCheckError naming the first
// failing (degree, series key, fixed point).
std::vector<NovikovSeries<Scalar>> uniqueness_reconstruct(
    const SeriesContext& ctx, const std::vector<NovikovSeries<Scalar>>& initial,
    const RecursionData& rec, const ReconstructOptions& opts = {});

}  // namespace wallx
