#include "wallx/zview.hpp"

#include <algorithm>

#include "wallx/errors.hpp"

namespace wallx {

namespace {

// p as a map z-exponent -> z-free coefficient polynomial.
std::map<int, Poly> z_coeffs(const Poly& p, int zvar) {
  std::map<int, Poly> out;
  for (auto& [e, c] : p.terms()) {
    Expo rest = e;
    int k = rest[zvar];
    rest[zvar] = 0;
    auto [it, fresh] = out.try_emplace(k, p.nvars());
    it->second.add_term(rest, c);
  }
  return out;
}

// Given numerator/denominator z-coefficients indexed from their lowest z-power
// (num = z^a * sum n_k z^k, den = z^b * sum d_k z^k with d_0 != 0), produce the
// Laurent coefficients of num/den at z=0 for exponents in [emin, emax].
std::map<int, RatFunc> series_divide(const std::vector<Poly>& n, int a,
                                     const std::vector<Poly>& d, int b, int nv,
                                     int emin, int emax) {
  std::map<int, RatFunc> out;
  int kmax = emax - (a - b);  // need product coefficients up to z^kmax
  if (kmax < 0) return out;
  RatFunc inv_d0 = RatFunc::from_poly(d[0]).inverse();
  std::vector<RatFunc> e(kmax + 1);  // series inverse of sum d_k z^k
  e[0] = inv_d0;
  for (int k = 1; k <= kmax; ++k) {
    RatFunc acc(nv, Rat(0));
    for (int j = 1; j <= k; ++j) {
      if (j < static_cast<int>(d.size()) && !d[j].is_zero())
        acc += RatFunc::from_poly(d[j]) * e[k - j];
    }
    e[k] = -(inv_d0 * acc);
  }
  for (int k = 0; k <= kmax; ++k) {
    int zexp = k + a - b;
    if (zexp < emin || zexp > emax) continue;
    RatFunc acc(nv, Rat(0));
    for (int i = 0; i < static_cast<int>(n.size()) && i <= k; ++i) {
      if (!n[i].is_zero()) acc += RatFunc::from_poly(n[i]) * e[k - i];
    }
    if (!acc.is_zero()) out.emplace(zexp, acc);
  }
  return out;
}

}  // namespace

std::map<int, RatFunc> ZOps::expand_at_zero(const RatFunc& f, int emin, int emax) const {
  std::map<int, RatFunc> out;
  if (f.is_zero()) return out;
  auto [num, den] = f.num_den_raw();
  auto nc = z_coeffs(num, zvar), dc = z_coeffs(den, zvar);
  int a = nc.begin()->first, b = dc.begin()->first;
  int nz_n = nc.rbegin()->first - a, nz_d = dc.rbegin()->first - b;
  std::vector<Poly> n(nz_n + 1, Poly(f.nvars())), d(nz_d + 1, Poly(f.nvars()));
  for (auto& [k, c] : nc) n[k - a] = c;
  for (auto& [k, c] : dc) d[k - b] = c;
  return series_divide(n, a, d, b, f.nvars(), emin, emax);
}

std::map<int, RatFunc> ZOps::expand_at_infinity(const RatFunc& f, int emin, int emax) const {
  std::map<int, RatFunc> out;
  if (f.is_zero()) return out;
  auto [num, den] = f.num_den_raw();
  auto nc = z_coeffs(num, zvar), dc = z_coeffs(den, zvar);
  // In w = 1/z: num(z) = z^A * sum_k n_{A-k} ... reverse coefficient order.
  int An = nc.rbegin()->first, Ad = dc.rbegin()->first;
  std::vector<Poly> n(An - nc.begin()->first + 1, Poly(f.nvars()));
  std::vector<Poly> d(Ad - dc.begin()->first + 1, Poly(f.nvars()));
  for (auto& [k, c] : nc) n[An - k] = c;
  for (auto& [k, c] : dc) d[Ad - k] = c;
  // f = w^(Ad - An) * (sum n_j w^j)/(sum d_j w^j); z-exponent e = -(w-exponent).
  auto w = series_divide(n, -An, d, -Ad, f.nvars(), -emax, -emin);
  for (auto& [m, c] : w) out.emplace(-m, c);
  return out;
}

int ZOps::pole_order_at_zero(const RatFunc& f) const {
  if (f.is_zero()) return 0;
  // The z-adic valuation is additive over the stored factorization, so it can
  // be read off factor by factor without expanding or reducing the quotient.
  long ord = 0;
  for (const auto& [p, e] : f.factors()) {
    int lo = p.terms().begin()->first[zvar];
    for (const auto& term : p.terms()) lo = std::min(lo, term.first[zvar]);
    ord += static_cast<long>(e) * lo;
  }
  return ord < 0 ? static_cast<int>(-ord) : 0;
}

bool ZOps::z_free_denominator(const RatFunc& f) const {
  if (f.is_zero()) return true;
  auto [num, den] = f.num_den();
  return !den.uses_var(zvar);
}

RatFunc ZOps::eval_z(const RatFunc& f, const Poly& zvalue) const {
  if (zvalue.uses_var(zvar)) throw InternalCheckError("z-substitution value involves z");
  return f.subst_var(zvar, zvalue);
}

RatFunc ZOps::negate_z(const RatFunc& f) const {
  return f.subst_var(zvar, Poly::var(f.nvars(), zvar, Rat(-1)));
}

}  // namespace wallx
