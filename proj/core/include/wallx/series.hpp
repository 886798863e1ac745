#pragma once
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "wallx/errors.hpp"
#include "wallx/ratfunc.hpp"
#include "wallx/target.hpp"

namespace wallx {

// Truncation orders shared by all series bound to one computation:
// D caps the theta-degree beta(L_theta), M caps the total t-degree |k|,
// [z_min, z_max] is the stored Laurent window in z.
struct TruncationSpec {
  long D = 0;
  int M = 0;
  int z_min = 0;
  int z_max = 0;
};

struct SeriesContext {
  std::shared_ptr<const ToricTarget> target;
  TruncationSpec trunc;
  int n_tvars = 0;

  bool compatible(const SeriesContext& o) const {
    return target.get() == o.target.get() && trunc.D == o.trunc.D && trunc.M == o.trunc.M &&
           trunc.z_min == o.trunc.z_min && trunc.z_max == o.trunc.z_max &&
           n_tvars == o.n_tvars;
  }
  long max_grade() const { return trunc.D * (trunc.M + 1) + trunc.M; }
};

// Monomial key q^beta * t^texp.
struct SKey {
  Curve beta;
  std::vector<int> texp;

  bool operator<(const SKey& o) const {
    if (beta != o.beta) return beta < o.beta;
    return texp < o.texp;
  }
  bool operator==(const SKey& o) const { return beta == o.beta && texp == o.texp; }
};

inline SKey skey_zero(const SeriesContext& ctx) {
  return SKey{Curve(ctx.target->rank(), 0), std::vector<int>(ctx.n_tvars, 0)};
}

inline SKey skey_sum(const SKey& a, const SKey& b) {
  SKey r = a;
  for (std::size_t i = 0; i < r.beta.size(); ++i) r.beta[i] += b.beta[i];
  for (std::size_t i = 0; i < r.texp.size(); ++i) r.texp[i] += b.texp[i];
  return r;
}

inline int texp_total(const std::vector<int>& k) {
  int s = 0;
  for (int e : k) s += e;
  return s;
}

// Value-type hooks. CohClass supplies its own overloads (found by ADL).
inline bool value_is_zero(const Scalar& s) { return s.is_zero(); }
inline Scalar value_scale(const Scalar& v, const Scalar& c) { return v * c; }
inline Scalar value_scale_rat(const Scalar& v, const Rat& c) { return v.scaled(c); }
inline Scalar value_inverse(const Scalar& v) {
  if (v.is_zero()) throw ValidationError("not-invertible: zero leading value");
  return v.inverse();
}

// Sparse truncated power series over the Novikov monoid and t-variables.
// Stored keys always satisfy: beta effective, beta(L_theta) <= D, |texp| <= M;
// zero values are never stored.
template <class V>
class NovikovSeries {
 public:
  explicit NovikovSeries(SeriesContext ctx) : ctx_(std::move(ctx)) {}

  static NovikovSeries unit(const SeriesContext& ctx, const V& one) {
    NovikovSeries r(ctx);
    r.add(skey_zero(ctx), one);
    return r;
  }

  const SeriesContext& ctx() const { return ctx_; }
  const std::map<SKey, V>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  std::size_t term_count() const { return c_.size(); }

  const V* find(const SKey& k) const {
    auto it = c_.find(k);
    return it == c_.end() ? nullptr : &it->second;
  }

  // Accumulates v into the coefficient of q^beta t^texp, applying the
  // truncation caps and dropping exact zeros.
  void add(const SKey& k, const V& v) {
    if (static_cast<int>(k.beta.size()) != ctx_.target->rank() ||
        static_cast<int>(k.texp.size()) != ctx_.n_tvars)
      throw InternalCheckError("series key has wrong shape");
    for (int e : k.texp)
      if (e < 0) throw InternalCheckError("negative t-exponent in series key");
    if (!ctx_.target->is_effective(k.beta))
      throw InternalCheckError("non-effective curve class in series key");
    if (ctx_.target->theta_degree(k.beta) > ctx_.trunc.D) return;
    if (texp_total(k.texp) > ctx_.trunc.M) return;
    if (value_is_zero(v)) return;
    auto it = c_.find(k);
    if (it == c_.end()) {
      c_.emplace(k, v);
    } else {
      it->second = it->second + v;
      if (value_is_zero(it->second)) c_.erase(it);
    }
  }

  void set(const SKey& k, const V& v) {
    c_.erase(k);
    add(k, v);
  }

  NovikovSeries operator+(const NovikovSeries& o) const {
    require_compatible(o);
    NovikovSeries r = *this;
    for (const auto& [k, v] : o.c_) r.add(k, v);
    return r;
  }
  NovikovSeries operator-(const NovikovSeries& o) const {
    require_compatible(o);
    NovikovSeries r = *this;
    for (const auto& [k, v] : o.c_) r.add(k, value_scale_rat(v, Rat(-1)));
    return r;
  }
  NovikovSeries operator-() const { return scaled_rat(Rat(-1)); }
  NovikovSeries& operator+=(const NovikovSeries& o) { return *this = *this + o; }
  NovikovSeries& operator-=(const NovikovSeries& o) { return *this = *this - o; }

  // Convolution product (requires V*V).
  NovikovSeries operator*(const NovikovSeries& o) const {
    require_compatible(o);
    NovikovSeries r(ctx_);
    for (const auto& [ka, va] : c_) {
      long da = ctx_.target->theta_degree(ka.beta);
      int ta = texp_total(ka.texp);
      for (const auto& [kb, vb] : o.c_) {
        if (da + ctx_.target->theta_degree(kb.beta) > ctx_.trunc.D) continue;
        if (ta + texp_total(kb.texp) > ctx_.trunc.M) continue;
        r.add(skey_sum(ka, kb), va * vb);
      }
    }
    return r;
  }

  // Product with a scalar-valued series (requires value_scale(V, Scalar)).
  NovikovSeries mul_scalar_series(const NovikovSeries<Scalar>& o) const {
    if (!ctx_.compatible(o.ctx())) throw ValidationError("incompatible series operands");
    NovikovSeries r(ctx_);
    for (const auto& [ka, va] : c_) {
      long da = ctx_.target->theta_degree(ka.beta);
      int ta = texp_total(ka.texp);
      for (const auto& [kb, vb] : o.terms()) {
        if (da + ctx_.target->theta_degree(kb.beta) > ctx_.trunc.D) continue;
        if (ta + texp_total(kb.texp) > ctx_.trunc.M) continue;
        r.add(skey_sum(ka, kb), value_scale(va, vb));
      }
    }
    return r;
  }

  NovikovSeries scaled(const Scalar& c) const {
    NovikovSeries r(ctx_);
    for (const auto& [k, v] : c_) r.add(k, value_scale(v, c));
    return r;
  }
  NovikovSeries scaled_rat(const Rat& c) const {
    NovikovSeries r(ctx_);
    for (const auto& [k, v] : c_) r.add(k, value_scale_rat(v, c));
    return r;
  }

  // Multiplies by the monomial q^beta t^texp.
  NovikovSeries shifted(const SKey& s) const {
    NovikovSeries r(ctx_);
    for (const auto& [k, v] : c_) r.add(skey_sum(k, s), v);
    return r;
  }

  // Inverse of a series with invertible leading (beta=0, texp=0) value.
  NovikovSeries invert() const {
    const V* a0 = find(skey_zero(ctx_));
    if (!a0) throw ValidationError("not-invertible: missing unit leading term");
    V inv0 = value_inverse(*a0);
    V one = (*a0) * inv0;
    NovikovSeries u(ctx_);  // u = this * inv0 - 1, grade >= 1
    for (const auto& [k, v] : c_)
      if (!(k == skey_zero(ctx_))) u.add(k, v * inv0);
    NovikovSeries acc = unit(ctx_, one);
    NovikovSeries term = acc;
    long cap = ctx_.max_grade() + 1;
    for (long m = 1; m <= cap && !term.is_zero(); ++m) {
      term = term * u;
      acc += term.scaled_rat(Rat(m % 2 == 0 ? 1 : -1));
    }
    NovikovSeries r(ctx_);
    for (const auto& [k, v] : acc.c_) r.add(k, v * inv0);
    return r;
  }

  NovikovSeries theta_truncate(long cap) const {
    if (cap < 0) return *this;
    NovikovSeries r(ctx_);
    for (const auto& [k, v] : c_)
      if (ctx_.target->theta_degree(k.beta) <= cap) r.add(k, v);
    return r;
  }

  // Restricts to the q^0 part.
  NovikovSeries q0_part() const {
    NovikovSeries r(ctx_);
    Curve z(ctx_.target->rank(), 0);
    for (const auto& [k, v] : c_)
      if (k.beta == z) r.add(k, v);
    return r;
  }

  template <class F>
  auto map_values(F&& f) const -> NovikovSeries<std::decay_t<decltype(f(std::declval<const V&>()))>> {
    using W = std::decay_t<decltype(f(std::declval<const V&>()))>;
    NovikovSeries<W> r(ctx_);
    for (const auto& [k, v] : c_) r.add(k, f(v));
    return r;
  }

  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  template <class>
  friend class NovikovSeries;

  void require_compatible(const NovikovSeries& o) const {
    if (!ctx_.compatible(o.ctx_)) throw ValidationError("incompatible series operands");
  }

  SeriesContext ctx_;
  std::map<SKey, V> c_;
};

template <class V>
bool value_equals(const NovikovSeries<V>& a, const NovikovSeries<V>& b) {
  return (a - b).is_zero();
}

// exp of a series with no constant term.
inline NovikovSeries<Scalar> exp_series(const NovikovSeries<Scalar>& a) {
  if (a.find(skey_zero(a.ctx())))
    throw ValidationError("exp requires a series with zero constant term");
  int nv = a.ctx().target->n_scalar_vars();
  NovikovSeries<Scalar> acc = NovikovSeries<Scalar>::unit(a.ctx(), Scalar(nv, Rat(1)));
  NovikovSeries<Scalar> term = acc;
  long cap = a.ctx().max_grade() + 1;
  for (long m = 1; m <= cap && !term.is_zero(); ++m) {
    term = (term * a).scaled_rat(Rat(1, m));
    acc += term;
  }
  return acc;
}

// Laurent-in-z series with NovikovSeries coefficients. The z-window of the
// context clips stored exponents; everything else is per-slice.
template <class V>
class ZSeries {
 public:
  explicit ZSeries(SeriesContext ctx) : ctx_(std::move(ctx)) {}

  static ZSeries unit(const SeriesContext& ctx, const V& one) {
    ZSeries r(ctx);
    r.add(0, skey_zero(ctx), one);
    return r;
  }

  const SeriesContext& ctx() const { return ctx_; }
  const std::map<int, NovikovSeries<V>>& slices() const { return z_; }
  bool is_zero() const { return z_.empty(); }

  const NovikovSeries<V>* slice(int zexp) const {
    auto it = z_.find(zexp);
    return it == z_.end() ? nullptr : &it->second;
  }
  NovikovSeries<V> slice_or_zero(int zexp) const {
    auto it = z_.find(zexp);
    return it == z_.end() ? NovikovSeries<V>(ctx_) : it->second;
  }
  const V* find(int zexp, const SKey& k) const {
    auto it = z_.find(zexp);
    return it == z_.end() ? nullptr : it->second.find(k);
  }

  void add(int zexp, const SKey& k, const V& v) {
    if (zexp < ctx_.trunc.z_min || zexp > ctx_.trunc.z_max) return;
    auto it = z_.find(zexp);
    if (it == z_.end()) it = z_.emplace(zexp, NovikovSeries<V>(ctx_)).first;
    it->second.add(k, v);
    if (it->second.is_zero()) z_.erase(it);
  }
  void add_slice(int zexp, const NovikovSeries<V>& s) {
    if (!ctx_.compatible(s.ctx())) throw ValidationError("incompatible series operands");
    for (const auto& [k, v] : s.terms()) add(zexp, k, v);
  }
  void set(int zexp, const SKey& k, const V& v) {
    auto it = z_.find(zexp);
    if (it != z_.end()) {
      it->second.set(k, v);
      if (it->second.is_zero()) z_.erase(it);
      return;
    }
    add(zexp, k, v);
  }

  ZSeries operator+(const ZSeries& o) const {
    require_compatible(o);
    ZSeries r = *this;
    for (const auto& [e, s] : o.z_) r.add_slice(e, s);
    return r;
  }
  ZSeries operator-(const ZSeries& o) const {
    require_compatible(o);
    ZSeries r = *this;
    for (const auto& [e, s] : o.z_)
      for (const auto& [k, v] : s.terms()) r.add(e, k, value_scale_rat(v, Rat(-1)));
    return r;
  }
  ZSeries operator-() const { return scaled_rat(Rat(-1)); }
  ZSeries& operator+=(const ZSeries& o) { return *this = *this + o; }
  ZSeries& operator-=(const ZSeries& o) { return *this = *this - o; }

  ZSeries operator*(const ZSeries& o) const {
    require_compatible(o);
    ZSeries r(ctx_);
    for (const auto& [ea, sa] : z_)
      for (const auto& [eb, sb] : o.z_) {
        if (ea + eb < ctx_.trunc.z_min || ea + eb > ctx_.trunc.z_max) continue;
        r.add_slice(ea + eb, sa * sb);
      }
    return r;
  }

  ZSeries mul_scalar_series(const ZSeries<Scalar>& o) const {
    if (!ctx_.compatible(o.ctx())) throw ValidationError("incompatible series operands");
    ZSeries r(ctx_);
    for (const auto& [ea, sa] : z_)
      for (const auto& [eb, sb] : o.slices()) {
        if (ea + eb < ctx_.trunc.z_min || ea + eb > ctx_.trunc.z_max) continue;
        r.add_slice(ea + eb, sa.mul_scalar_series(sb));
      }
    return r;
  }

  ZSeries scaled(const Scalar& c) const {
    ZSeries r(ctx_);
    for (const auto& [e, s] : z_) r.add_slice(e, s.scaled(c));
    return r;
  }
  ZSeries scaled_rat(const Rat& c) const {
    ZSeries r(ctx_);
    for (const auto& [e, s] : z_) r.add_slice(e, s.scaled_rat(c));
    return r;
  }

  ZSeries negate_z() const {
    ZSeries r(ctx_);
    for (const auto& [e, s] : z_) r.add_slice(e, (e % 2 == 0) ? s : s.scaled_rat(Rat(-1)));
    return r;
  }

  // Inverse of a series whose leading (beta=0, texp=0) part is an invertible
  // value at z^0 plus (optionally) terms at z-exponent <= -1.
  ZSeries invert() const {
    SKey k0 = skey_zero(ctx_);
    const V* a0 = find(0, k0);
    if (!a0) throw ValidationError("not-invertible: missing unit leading term");
    for (const auto& [e, s] : z_)
      if (e > 0 && s.find(k0))
        throw ValidationError("not-invertible: positive z-power in the constant part");
    V inv0 = value_inverse(*a0);
    V one = (*a0) * inv0;
    ZSeries u(ctx_);  // u = this * inv0 - 1
    for (const auto& [e, s] : z_)
      for (const auto& [k, v] : s.terms())
        if (!(e == 0 && k == k0)) u.add(e, k, v * inv0);
    ZSeries acc = unit(ctx_, one);
    ZSeries term = acc;
    long cap = ctx_.max_grade() + (ctx_.trunc.z_max - ctx_.trunc.z_min) + 2;
    for (long m = 1; m <= cap && !term.is_zero(); ++m) {
      term = term * u;
      acc += term.scaled_rat(Rat(m % 2 == 0 ? 1 : -1));
    }
    ZSeries r(ctx_);
    for (const auto& [e, s] : acc.z_)
      for (const auto& [k, v] : s.terms()) r.add(e, k, v * inv0);
    if (!value_equals(r * *this, unit(ctx_, one)))
      throw InternalCheckError("series inversion failed to converge");
    return r;
  }

  ZSeries theta_truncate(long cap) const {
    if (cap < 0) return *this;
    ZSeries r(ctx_);
    for (const auto& [e, s] : z_) r.add_slice(e, s.theta_truncate(cap));
    return r;
  }

  // Keeps exactly the coefficients with z-exponent >= -(power-1).
  ZSeries z_truncate_mod(int power) const {
    ZSeries r(ctx_);
    for (const auto& [e, s] : z_)
      if (e >= -(power - 1)) r.add_slice(e, s);
    return r;
  }

  template <class F>
  auto map_values(F&& f) const -> ZSeries<std::decay_t<decltype(f(std::declval<const V&>()))>> {
    using W = std::decay_t<decltype(f(std::declval<const V&>()))>;
    ZSeries<W> r(ctx_);
    for (const auto& [e, s] : z_)
      for (const auto& [k, v] : s.terms()) r.add(e, k, f(v));
    return r;
  }

  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  template <class>
  friend class ZSeries;

  void require_compatible(const ZSeries& o) const {
    if (!ctx_.compatible(o.ctx_)) throw ValidationError("incompatible series operands");
  }

  SeriesContext ctx_;
  std::map<int, NovikovSeries<V>> z_;
};

template <class V>
bool value_equals(const ZSeries<V>& a, const ZSeries<V>& b) {
  return (a - b).is_zero();
}

struct ZViolation {
  Curve beta;
  std::vector<int> texp;
  int z_exp;
};

// Lists the keys carrying a nonzero strictly negative z-exponent entry.
template <class V>
std::vector<ZViolation> z_regular_check(const ZSeries<V>& a) {
  std::vector<ZViolation> out;
  for (const auto& [e, s] : a.slices()) {
    if (e >= 0) continue;
    for (const auto& [k, v] : s.terms()) out.push_back(ZViolation{k.beta, k.texp, e});
  }
  return out;
}

template <class V>
NovikovSeries<V> chamber_truncate(const NovikovSeries<V>& a, const Epsilon& eps) {
  return a.theta_truncate(eps.degree_cap());
}
template <class V>
ZSeries<V> chamber_truncate(const ZSeries<V>& a, const Epsilon& eps) {
  return a.theta_truncate(eps.degree_cap());
}

namespace detail {
void check_t_map(const SeriesContext& ctx, const std::vector<NovikovSeries<Scalar>>& tau);
}  // namespace detail

// Formal composition a(t -> tau(t)), truncated to the context orders.
template <class V>
NovikovSeries<V> substitute_t(const NovikovSeries<V>& a,
                              const std::vector<NovikovSeries<Scalar>>& tau) {
  const SeriesContext& ctx = a.ctx();
  detail::check_t_map(ctx, tau);
  int nv = ctx.target->n_scalar_vars();
  std::vector<std::vector<NovikovSeries<Scalar>>> pw(ctx.n_tvars);
  for (int i = 0; i < ctx.n_tvars; ++i) {
    pw[i].push_back(NovikovSeries<Scalar>::unit(ctx, Scalar(nv, Rat(1))));
    for (int p = 1; p <= ctx.trunc.M; ++p) pw[i].push_back(pw[i][p - 1] * tau[i]);
  }
  NovikovSeries<V> r(ctx);
  for (const auto& [k, v] : a.terms()) {
    NovikovSeries<Scalar> factor = NovikovSeries<Scalar>::unit(ctx, Scalar(nv, Rat(1)));
    for (int i = 0; i < ctx.n_tvars; ++i)
      if (k.texp[i] > 0) factor = factor * pw[i][k.texp[i]];
    SKey shift{k.beta, std::vector<int>(ctx.n_tvars, 0)};
    for (const auto& [kf, vf] : factor.terms()) r.add(skey_sum(kf, shift), value_scale(v, vf));
  }
  return r;
}

template <class V>
ZSeries<V> substitute_t(const ZSeries<V>& a, const std::vector<NovikovSeries<Scalar>>& tau) {
  ZSeries<V> r(a.ctx());
  for (const auto& [e, s] : a.slices()) r.add_slice(e, substitute_t(s, tau));
  return r;
}

// Functional inverse of a t-map tau_i = t_i + O(q): returns sigma with
// tau(sigma(t)) = t through the truncation.
std::vector<NovikovSeries<Scalar>> invert_t_map(const std::vector<NovikovSeries<Scalar>>& tau);

// The identity t-map in a given context.
std::vector<NovikovSeries<Scalar>> identity_t_map(const SeriesContext& ctx);

// Realizes q^beta -> q^beta * exp(sum_j g_j * (D_j . beta)) where the divisor
// D_j pairs with curve classes through the character row divisor_rows[j].
template <class V>
NovikovSeries<V> substitute_novikov(const NovikovSeries<V>& a,
                                    const std::vector<NovikovSeries<Scalar>>& g,
                                    const std::vector<IntVec>& divisor_rows) {
  const SeriesContext& ctx = a.ctx();
  if (g.size() != divisor_rows.size())
    throw ValidationError("substitute_novikov: mismatched divisor data");
  for (const auto& gj : g) {
    if (!ctx.compatible(gj.ctx())) throw ValidationError("incompatible series operands");
    if (gj.find(skey_zero(ctx)))
      throw ValidationError("substitute_novikov: exponent series must be O(q)");
  }
  int nv = ctx.target->n_scalar_vars();
  std::vector<NovikovSeries<Scalar>> ej;
  for (const auto& gj : g) ej.push_back(exp_series(gj));
  std::vector<std::map<long, NovikovSeries<Scalar>>> pw(g.size());
  auto power_of = [&](std::size_t j, long p) -> const NovikovSeries<Scalar>& {
    auto it = pw[j].find(p);
    if (it != pw[j].end()) return it->second;
    NovikovSeries<Scalar> base = p >= 0 ? ej[j] : ej[j].invert();
    long n = p >= 0 ? p : -p;
    NovikovSeries<Scalar> val = NovikovSeries<Scalar>::unit(ctx, Scalar(nv, Rat(1)));
    for (long m = 0; m < n; ++m) val = val * base;
    return pw[j].emplace(p, std::move(val)).first->second;
  };
  NovikovSeries<V> r(ctx);
  for (const auto& [k, v] : a.terms()) {
    NovikovSeries<Scalar> factor = NovikovSeries<Scalar>::unit(ctx, Scalar(nv, Rat(1)));
    for (std::size_t j = 0; j < g.size(); ++j) {
      long p = ctx.target->pair_curve(k.beta, divisor_rows[j]);
      if (p != 0) factor = factor * power_of(j, p);
    }
    for (const auto& [kf, vf] : factor.terms()) r.add(skey_sum(k, kf), value_scale(v, vf));
  }
  return r;
}

template <class V>
ZSeries<V> substitute_novikov(const ZSeries<V>& a, const std::vector<NovikovSeries<Scalar>>& g,
                              const std::vector<IntVec>& divisor_rows) {
  ZSeries<V> r(a.ctx());
  for (const auto& [e, s] : a.slices()) r.add_slice(e, substitute_novikov(s, g, divisor_rows));
  return r;
}

// Inverse exponent data h for the Novikov substitution: applying g then h is
// the identity.
std::vector<NovikovSeries<Scalar>> invert_novikov_map(const std::vector<NovikovSeries<Scalar>>& g,
                                                      const std::vector<IntVec>& divisor_rows);

std::string skey_str(const SKey& k);

template <class V>
std::string NovikovSeries<V>::str(const std::vector<std::string>& names) const {
  std::string out;
  for (const auto& [k, v] : c_) {
    if (!out.empty()) out += " + ";
    if constexpr (std::is_same_v<V, Scalar>) {
      out += "[" + skey_str(k) + "] " + v.str(names);
    } else {
      out += "[" + skey_str(k) + "] " + v.str();
    }
  }
  return out.empty() ? "0" : out;
}

template <class V>
std::string ZSeries<V>::str(const std::vector<std::string>& names) const {
  std::string out;
  for (const auto& [e, s] : z_) {
    if (!out.empty()) out += "\n";
    out += "z^" + std::to_string(e) + ": " + s.str(names);
  }
  return out.empty() ? "0" : out;
}

}  // namespace wallx
