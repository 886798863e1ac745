#include "wallx/series.hpp"

namespace wallx {

namespace detail {

void check_t_map(const SeriesContext& ctx, const std::vector<NovikovSeries<Scalar>>& tau) {
  if (static_cast<int>(tau.size()) != ctx.n_tvars)
    throw ValidationError("invalid-transformation: wrong number of t-components");
  Curve b0(ctx.target->rank(), 0);
  for (int i = 0; i < ctx.n_tvars; ++i) {
    if (!ctx.compatible(tau[i].ctx())) throw ValidationError("incompatible series operands");
    for (const auto& [k, v] : tau[i].terms()) {
      if (k.beta != b0) continue;
      std::vector<int> ei(ctx.n_tvars, 0);
      ei[i] = 1;
      if (!(k.texp == ei) || !(v - Scalar(ctx.target->n_scalar_vars(), Rat(1))).is_zero())
        throw ValidationError("invalid-transformation: component is not t_i + O(q)");
    }
  }
}

}  // namespace detail

std::vector<NovikovSeries<Scalar>> identity_t_map(const SeriesContext& ctx) {
  std::vector<NovikovSeries<Scalar>> id;
  int nv = ctx.target->n_scalar_vars();
  for (int i = 0; i < ctx.n_tvars; ++i) {
    NovikovSeries<Scalar> ti(ctx);
    SKey k = skey_zero(ctx);
    k.texp[i] = 1;
    ti.add(k, Scalar(nv, Rat(1)));
    id.push_back(std::move(ti));
  }
  return id;
}

std::vector<NovikovSeries<Scalar>> invert_t_map(const std::vector<NovikovSeries<Scalar>>& tau) {
  if (tau.empty()) return {};
  const SeriesContext& ctx = tau.front().ctx();
  detail::check_t_map(ctx, tau);
  std::vector<NovikovSeries<Scalar>> id = identity_t_map(ctx);
  std::vector<NovikovSeries<Scalar>> corr;  // tau_i - t_i, all O(q)
  for (int i = 0; i < ctx.n_tvars; ++i) corr.push_back(tau[i] - id[i]);
  std::vector<NovikovSeries<Scalar>> sigma = id;
  for (long it = 0; it <= ctx.trunc.D + 1; ++it) {
    std::vector<NovikovSeries<Scalar>> next;
    bool stable = true;
    for (int i = 0; i < ctx.n_tvars; ++i) {
      NovikovSeries<Scalar> cand = id[i] - substitute_t(corr[i], sigma);
      if (!value_equals(cand, sigma[i])) stable = false;
      next.push_back(std::move(cand));
    }
    sigma = std::move(next);
    if (stable) break;
  }
  for (int i = 0; i < ctx.n_tvars; ++i) {
    NovikovSeries<Scalar> check = substitute_t(tau[i], sigma) - id[i];
    if (!check.is_zero()) throw InternalCheckError("t-map inversion failed to converge");
  }
  return sigma;
}

std::vector<NovikovSeries<Scalar>> invert_novikov_map(const std::vector<NovikovSeries<Scalar>>& g,
                                                      const std::vector<IntVec>& divisor_rows) {
  if (g.empty()) return {};
  const SeriesContext& ctx = g.front().ctx();
  std::vector<NovikovSeries<Scalar>> h;
  for (const auto& gj : g) h.push_back(-gj);
  for (long it = 0; it <= ctx.trunc.D + 1; ++it) {
    std::vector<NovikovSeries<Scalar>> next;
    bool stable = true;
    for (std::size_t j = 0; j < g.size(); ++j) {
      NovikovSeries<Scalar> cand = -substitute_novikov(g[j], h, divisor_rows);
      if (!value_equals(cand, h[j])) stable = false;
      next.push_back(std::move(cand));
    }
    h = std::move(next);
    if (stable) break;
  }
  // Applying g then h multiplies q^beta by exp(sum_j (D_j.beta)(h_j + g_j
  // evaluated through the h-map)); the exponents must cancel exactly.
  for (std::size_t j = 0; j < g.size(); ++j) {
    NovikovSeries<Scalar> res = h[j] + substitute_novikov(g[j], h, divisor_rows);
    if (!res.is_zero()) throw InternalCheckError("novikov-map inversion failed to converge");
  }
  return h;
}

std::string skey_str(const SKey& k) {
  std::string out = "q^(";
  for (std::size_t i = 0; i < k.beta.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(k.beta[i]);
  }
  out += ")";
  bool any_t = false;
  for (int e : k.texp) any_t = any_t || e != 0;
  if (any_t) {
    out += " t^(";
    for (std::size_t i = 0; i < k.texp.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(k.texp[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace wallx
