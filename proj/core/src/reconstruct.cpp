#include "wallx/reconstruct.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "wallx/errors.hpp"
#include "wallx/zview.hpp"

namespace wallx {

namespace {

// All t-exponent vectors of length n with the given total degree.
std::vector<std::vector<int>> texps_of_total(int n, int total) {
  std::vector<std::vector<int>> out;
  if (n == 0) {
    if (total == 0) out.push_back({});
    return out;
  }
  std::vector<int> cur(n, 0);
  std::function<void(int, int)> fill = [&](int pos, int rem) {
    if (pos == n - 1) {
      cur[pos] = rem;
      out.push_back(cur);
      cur[pos] = 0;
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      cur[pos] = v;
      fill(pos + 1, rem - v);
    }
    cur[pos] = 0;
  };
  fill(0, total);
  return out;
}

bool texp_leq(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::vector<int> texp_sub(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Curve curve_sub(const Curve& a, const Curve& b) {
  Curve r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

bool curve_is_zero(const Curve& c) {
  for (long v : c)
    if (v != 0) return false;
  return true;
}

struct Solver {
  const SeriesContext& ctx;
  const ToricTarget& T;
  const RecursionData& rec;
  int y_order;
  ZOps zops;
  int nv;
  RatFunc zf;        // z as a scalar
  RatFunc one;
  std::vector<Curve> classes;  // nonzero effective classes, theta-degree <= D
  std::vector<NovikovSeries<Scalar>> S;

  Solver(const SeriesContext& c, const RecursionData& r, int yo)
      : ctx(c),
        T(*c.target),
        rec(r),
        y_order(yo),
        zops(c.target->zvar()),
        nv(c.target->n_scalar_vars()),
        zf(RatFunc::from_poly(Poly::var(c.target->n_scalar_vars(), c.target->zvar()))),
        one(c.target->n_scalar_vars(), Rat(1)) {
    for (const Curve& b : T.effective_classes(ctx.trunc.D))
      if (!curve_is_zero(b)) classes.push_back(b);
    S.assign(rec.n_fixed, NovikovSeries<Scalar>(ctx));
  }

  [[noreturn]] void fail(int mu, const SKey& key, int ypow, const char* what) const {
    std::ostringstream os;
    os << "no-solution: " << what << " at t-degree " << texp_total(key.texp)
       << ", theta-degree " << T.theta_degree(key.beta) << ", key " << skey_str(key)
       << ", fixed point " << mu << ", y^" << ypow;
    throw InternalCheckError(os.str());
  }

  // Sums of rational functions are carried as term lists for as long as
  // possible: pole orders and Laurent windows are read term by term, which
  // keeps every expansion small, and the terms are only added up once the
  // coefficient is stored.
  using Terms = std::vector<Scalar>;

  // Terms of the recursion sum:  C_e / (z + pole_e) * S_nu(-pole_e),
  // restricted to the coefficient of q^(key.beta - beta_e) t^(key.texp).
  Terms base_terms(int mu, const SKey& key) const {
    Terms out;
    for (const RecursionTerm& t : rec.terms) {
      if (t.mu != mu) continue;
      Curve rest = curve_sub(key.beta, t.beta);
      if (!T.is_effective(rest)) continue;
      const Scalar* f = S[t.nu].find(SKey{rest, key.texp});
      if (!f) continue;
      Scalar val = zops.eval_z(*f, t.pole.scaled(Rat(-1)));
      if (val.is_zero()) continue;
      Scalar kernel = RatFunc::from_poly(Poly::var(nv, zops.zvar) + t.pole).inverse();
      out.push_back(t.C * kernel * val);
    }
    return out;
  }

  // Splittings key = k1 + k2 with both parts already solved (neither equal to
  // key itself), combined as S(k1)(z) * S(k2)(-z) * (-z d2)^p / p!.
  std::vector<Terms> known_split_terms(int mu, const SKey& key) const {
    std::vector<Terms> K(y_order + 1);
    std::vector<Curve> parts;
    parts.push_back(Curve(key.beta.size(), 0));
    for (const Curve& b : classes)
      if (T.is_effective(curve_sub(key.beta, b))) parts.push_back(b);
    for (const Curve& b1 : parts) {
      Curve b2 = curve_sub(key.beta, b1);
      long d2 = T.theta_degree(b2);
      for (int m1 = 0; m1 <= texp_total(key.texp); ++m1) {
        for (const auto& t1 : texps_of_total(ctx.n_tvars, m1)) {
          if (!texp_leq(t1, key.texp)) continue;
          SKey k1{b1, t1};
          SKey k2{b2, texp_sub(key.texp, t1)};
          if (k1 == key || k2 == key) continue;
          const Scalar* f1 = S[mu].find(k1);
          if (!f1) continue;
          const Scalar* f2 = S[mu].find(k2);
          if (!f2) continue;
          Scalar prod = (*f1) * zops.negate_z(*f2);
          Rat fac(1);
          for (int p = 0; p <= y_order; ++p) {
            if (p > 0) {
              if (d2 == 0) break;
              fac /= p;
              prod = prod * zf.scaled(Rat(-d2));
            }
            K[p].push_back(prod.scaled(fac));
          }
        }
      }
    }
    return K;
  }

  // Terms of D(S)^p with the candidate value spliced in for the unknown
  // coefficient.
  Terms full_dpart_terms(const Terms& Kp, const Terms& X, long d, int p) const {
    Terms out = Kp;
    Rat fac(1);
    for (int i = 2; i <= p; ++i) fac /= i;
    Scalar mult = zf.scaled(Rat(-d)).pow(p).scaled(fac);
    for (const Scalar& x : X) {
      out.push_back(zops.negate_z(x) * mult);
      if (p == 0) out.push_back(x);
    }
    return out;
  }

  // Upper bound for the pole order at z = 0 of the sum of the terms.
  int pole_bound(const Terms& ts) const {
    int b = 0;
    for (const Scalar& t : ts) b = std::max(b, zops.pole_order_at_zero(t));
    return b;
  }

  // Laurent window of the sum of the terms; exact even though individual
  // terms may have deeper poles than the sum.
  std::map<int, Scalar> window_at_zero(const Terms& ts, int emin, int emax) const {
    std::map<int, Scalar> acc;
    for (const Scalar& t : ts)
      for (const auto& [e, c] : zops.expand_at_zero(t, emin, emax)) {
        auto [it, fresh] = acc.try_emplace(e, c);
        if (!fresh) it->second += c;
      }
    return acc;
  }

  std::map<int, Scalar> window_at_infinity(const Terms& ts, int emin, int emax) const {
    std::map<int, Scalar> acc;
    for (const Scalar& t : ts)
      for (const auto& [e, c] : zops.expand_at_infinity(t, emin, emax)) {
        auto [it, fresh] = acc.try_emplace(e, c);
        if (!fresh) it->second += c;
      }
    return acc;
  }

  void solve_key(int mu, const SKey& key) {
    long d = T.theta_degree(key.beta);
    Terms X = base_terms(mu, key);
    std::vector<Terms> K = known_split_terms(mu, key);

    // Match the two leading 1/z orders against the initial data. Every
    // positive-degree coefficient is a sum of partial fractions in z, so it
    // vanishes at z = infinity; a surviving z^0 part cannot belong to any
    // solution.
    Terms gap;  // initial data minus the recursion sum
    if (const Scalar* f = initial_->at(mu).find(key)) gap.push_back(*f);
    for (const Scalar& t : X) gap.push_back(-t);
    auto iv = window_at_infinity(gap, -1, 0);
    if (auto it = iv.find(0); it != iv.end() && !it->second.is_zero())
      fail(mu, key, 0, "nonzero z^0 coefficient in initial data");
    if (auto it = iv.find(-1); it != iv.end() && !it->second.is_zero())
      X.push_back(it->second * zf.inverse());

    // Deeper 1/z orders from z-regularity of the y^1 part of D(S).
    {
      Terms K1 = full_dpart_terms(K[1], X, d, 1);
      int B = pole_bound(K1);
      if (B > 0) {
        for (const auto& [e, c] : window_at_zero(K1, -B, -1)) {
          if (c.is_zero()) continue;
          // coefficient of z^e forces r_{1-e} = -(-1)^e c / d
          Rat sgn((e % 2 == 0) ? -1 : 1, d);
          X.push_back(c.scaled(sgn) * zf.pow(e - 1));
        }
      }
    }

    for (int p = 0; p <= y_order; ++p) {
      Terms V = full_dpart_terms(K[p], X, d, p);
      int B = pole_bound(V);
      if (B == 0) continue;
      for (const auto& [e, c] : window_at_zero(V, -B, -1)) {
        (void)e;
        if (!c.is_zero()) fail(mu, key, p, "regularity of D(S) fails");
      }
    }

    Scalar total(nv);
    for (const Scalar& t : X) total += t;
    if (!total.is_zero()) S[mu].add(key, total);
  }

  const std::vector<NovikovSeries<Scalar>>* initial_ = nullptr;

  std::vector<NovikovSeries<Scalar>> run(const std::vector<NovikovSeries<Scalar>>& initial) {
    initial_ = &initial;
    for (int mu = 0; mu < rec.n_fixed; ++mu) {
      // The q^0 block is copied verbatim; its unit leading term anchors the
      // extreme splittings of D(S).
      const Scalar* lead = initial[mu].find(skey_zero(ctx));
      if (!lead || !(*lead - one).is_zero())
        throw ValidationError(
            "uniqueness-reconstruct: initial data must have unit q^0 t^0 coefficient");
      for (const auto& [key, val] : initial[mu].terms())
        if (curve_is_zero(key.beta)) S[mu].add(key, val);
    }
    // Group nonzero classes by theta-degree once.
    std::map<long, std::vector<Curve>> by_deg;
    for (const Curve& b : classes) by_deg[T.theta_degree(b)].push_back(b);
    for (int m = 0; m <= ctx.trunc.M; ++m) {
      auto texps = texps_of_total(ctx.n_tvars, m);
      for (const auto& [d, cls] : by_deg) {
        (void)d;
        for (int mu = 0; mu < rec.n_fixed; ++mu)
          for (const Curve& b : cls)
            for (const auto& t : texps) solve_key(mu, SKey{b, t});
      }
    }
    return std::move(S);
  }
};

}  // namespace

std::vector<NovikovSeries<Scalar>> uniqueness_reconstruct(
    const SeriesContext& ctx, const std::vector<NovikovSeries<Scalar>>& initial,
    const RecursionData& rec, const ReconstructOptions& opts) {
  if (rec.n_fixed <= 0) throw ValidationError("uniqueness-reconstruct: no fixed points");
  if (static_cast<int>(initial.size()) != rec.n_fixed)
    throw ValidationError("uniqueness-reconstruct: one initial series per fixed point required");
  if (opts.y_order < 2)
    throw ValidationError("uniqueness-reconstruct: y-order must be at least 2");
  for (const auto& s : initial)
    if (!s.ctx().compatible(ctx))
      throw ValidationError("uniqueness-reconstruct: initial data context mismatch");
  for (const RecursionTerm& t : rec.terms) {
    if (t.mu < 0 || t.mu >= rec.n_fixed || t.nu < 0 || t.nu >= rec.n_fixed || t.mu == t.nu)
      throw ValidationError("uniqueness-reconstruct: malformed recursion term");
    if (!ctx.target->is_effective(t.beta) || ctx.target->theta_degree(t.beta) < 1)
      throw ValidationError("uniqueness-reconstruct: recursion term class must be effective");
  }
  Solver solver(ctx, rec, opts.y_order);
  return solver.run(initial);
}

}  // namespace wallx
