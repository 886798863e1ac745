#pragma once
#include <utility>
#include <vector>

#include "wallx/cohbasis.hpp"
#include "wallx/reconstruct.hpp"
#include "wallx/series.hpp"

namespace wallx {

// Integral of psi_1^{a_1} ... psi_k^{a_k} over the moduli space of stable
// genus-zero curves with k marked points: (k-3)!/(a_1!...a_k!) when
// sum a_i = k-3, and zero otherwise.
Rat psi_integral(const std::vector<long>& a);

// A one-dimensional torus orbit joining two distinct fixed points, oriented:
// directions and weights are as seen from mu.
struct Orbit {
  int mu = 0;
  int nu = 0;
  int dir_mu = -1;  // coordinate index of the tangent direction at mu
  int dir_nu = -1;  // the matching direction at nu, of opposite weight
  Curve beta;       // curve class of the orbit
  Poly w;           // tangent weight at mu along the orbit
};

// Section weights of the line bundles pulled back to the n-fold cover of an
// orbit, split by where they enter the localization contribution.
struct OracleEdge {
  int mu = 0;
  int nu = 0;
  long n = 1;
  Curve beta;          // n times the orbit class
  Scalar flag_weight;  // w(mu,nu)/n, tangent weight of the cover at mu
  std::vector<Scalar> denominator;  // nonzero coordinate section weights
  std::vector<Scalar> numerator;    // obstruction and twist-window weights
  bool vanishes = false;            // a twist window contained weight zero
};

struct GraphSumOptions {
  long degree_bound = 2;  // maximal theta-degree; 3 runs with a stderr notice
  int threads = 0;        // 0: honor WALLX_THREADS (0/unset = hardware)
};

// The fixed-point/orbit graph of a target together with the Euler-class data
// of orbit covers: the geometric input of the fixed-point formula.
class FixedPointGraph {
 public:
  explicit FixedPointGraph(CohBasisPtr basis);

  const CohBasisPtr& basis() const { return basis_; }
  const ToricTarget& target() const { return *basis_->target(); }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  // Null when the two fixed points are not joined by an invariant curve.
  const Orbit* orbit_between(int mu, int nu) const;
  // Index into orbits(), or -1 when the fixed points are not joined.
  int orbit_index(int mu, int nu) const { return pair_idx_.at(mu).at(nu); }
  const std::vector<int>& orbit_indices_from(int mu) const { return from_.at(mu); }

  OracleEdge edge_data(const Orbit& o, long n) const;
  // Inverse virtual Euler class of the n-cover of the orbit, including the
  // 1/n cover automorphism: prod(numerator) / (n * prod(denominator)).
  // The zero Scalar when a twist window vanishes.
  Scalar edge_factor(const Orbit& o, long n) const;
  // Residue coefficient of S_mu at the simple pole z = -w(mu,nu)/n.
  Scalar recursion_coefficient(const Orbit& o, long n) const;

 private:
  CohBasisPtr basis_;
  std::vector<Orbit> orbits_;
  std::vector<std::vector<int>> from_;
  std::vector<std::vector<int>> pair_idx_;
};

// Equivariant genus-zero invariant <gamma_1 psi^{a_1},...,gamma_m psi^{a_m}>
// of class beta != 0, summed over decorated trees of the fixed-point formula.
Scalar graph_sum_invariant(const FixedPointGraph& G, const Curve& beta,
                           const std::vector<std::pair<CohClass, long>>& insertions,
                           const GraphSumOptions& opts = {});

// Classical limit of graph_sum_invariant; the limit must be independent of
// the direction in which the torus parameters vanish.
Rat graph_sum_classical(const FixedPointGraph& G, const Curve& beta,
                        const std::vector<std::pair<CohClass, long>>& insertions,
                        const GraphSumOptions& opts = {});

// Stable-map small J-function in fixed-point coordinates:
//   1 + sum_beta q^beta sum_i gamma_i sum_a <gamma^i psi^a>_{0,1,beta} z^{-a-2},
// with descendant exponents filling the z-window of the context.
ZSeries<CohClass> oracle_small_J(const FixedPointGraph& G, const SeriesContext& ctx,
                                 long d_max, const GraphSumOptions& opts = {});

// Pole data of the S-recursion: one term per (orbit, covering degree) with
// n * beta(L_theta) <= d_max. Zero coefficients are dropped.
RecursionData build_recursion_data(const FixedPointGraph& G, long d_max);

// Solves the S-recursion jointly with z-regularity of D(S_mu), starting from
// per-fixed-point initial data (exact at q^0, read mod 1/z^2 beyond).
std::vector<NovikovSeries<Scalar>> recursion_reconstruct(
    const FixedPointGraph& G, const SeriesContext& ctx,
    const std::vector<NovikovSeries<Scalar>>& initial);

}  // namespace wallx
