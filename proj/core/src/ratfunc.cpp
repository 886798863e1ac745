#include "wallx/ratfunc.hpp"

#include <sstream>

#include "wallx/errors.hpp"

namespace wallx {

RatFunc RatFunc::from_poly(const Poly& p) {
  RatFunc r(p.nvars());
  if (p.is_zero()) return r;
  if (p.is_constant()) {
    r.c_ = p.constant_value();
    return r;
  }
  auto [c, prim] = p.normalized();
  r.c_ = c;
  r.f_.emplace(prim, 1);
  return r;
}

const Rat& RatFunc::rat_value() const {
  if (!f_.empty()) throw InternalCheckError("rat_value of non-rational scalar");
  return c_;
}

void RatFunc::push_factor(const Poly& factor, int exp) {
  if (exp == 0 || c_ == 0) return;
  if (factor.is_zero()) {
    if (exp > 0) {
      c_ = 0;
      f_.clear();
      return;
    }
    throw InternalCheckError("division by zero factor");
  }
  if (factor.is_constant()) {
    Rat v = factor.constant_value();
    for (int i = 0; i < (exp > 0 ? exp : -exp); ++i) {
      if (exp > 0) c_ *= v;
      else c_ /= v;
    }
    return;
  }
  auto [c, prim] = factor.normalized();
  for (int i = 0; i < (exp > 0 ? exp : -exp); ++i) {
    if (exp > 0) c_ *= c;
    else c_ /= c;
  }
  auto it = f_.find(prim);
  if (it == f_.end()) {
    f_.emplace(prim, exp);
  } else {
    it->second += exp;
    if (it->second == 0) f_.erase(it);
  }
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.c_ = -r.c_;
  return r;
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (nv_ != o.nv_) throw InternalCheckError("scalar arity mismatch");
  RatFunc r(nv_, c_ * o.c_);
  if (r.c_ == 0) return r;
  r.f_ = f_;
  for (auto& [p, e] : o.f_) {
    auto it = r.f_.find(p);
    if (it == r.f_.end()) {
      r.f_.emplace(p, e);
    } else {
      it->second += e;
      if (it->second == 0) r.f_.erase(it);
    }
  }
  return r;
}

RatFunc RatFunc::inverse() const {
  if (c_ == 0) throw InternalCheckError("not-invertible: zero scalar");
  RatFunc r(nv_, Rat(1) / c_);
  for (auto& [p, e] : f_) r.f_.emplace(p, -e);
  return r;
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::pow(int k) const {
  if (k == 0) return RatFunc(nv_, Rat(1));
  RatFunc base = k > 0 ? *this : inverse();
  RatFunc r(nv_, Rat(1));
  for (int i = 0; i < (k > 0 ? k : -k); ++i) r = r * base;
  return r;
}

RatFunc RatFunc::scaled(const Rat& c) const {
  if (c == 0) return RatFunc(nv_);
  RatFunc r = *this;
  r.c_ *= c;
  r.c_.canonicalize();
  return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (nv_ != o.nv_) throw InternalCheckError("scalar arity mismatch");
  if (c_ == 0) return o;
  if (o.c_ == 0) return *this;
  if (f_ == o.f_) {
    RatFunc r = *this;
    r.c_ += o.c_;
    if (r.c_ == 0) return RatFunc(nv_);
    return r;
  }
  // Shared part: min of the two exponents per factor (missing = 0).
  std::map<Poly, int, PolyLess> common;
  auto take_min = [&](const Poly& p, int ea, int eb) {
    int m = std::min(ea, eb);
    if (m != 0) common.emplace(p, m);
  };
  {
    auto ia = f_.begin();
    auto ib = o.f_.begin();
    PolyLess less;
    while (ia != f_.end() || ib != o.f_.end()) {
      if (ib == o.f_.end() || (ia != f_.end() && less(ia->first, ib->first))) {
        take_min(ia->first, ia->second, 0);
        ++ia;
      } else if (ia == f_.end() || less(ib->first, ia->first)) {
        take_min(ib->first, 0, ib->second);
        ++ib;
      } else {
        take_min(ia->first, ia->second, ib->second);
        ++ia;
        ++ib;
      }
    }
  }
  auto residual = [&](const RatFunc& x) {
    // x / common, expanded; every exponent difference is >= 0 by minimality.
    Poly acc = Poly::constant(nv_, x.c_);
    for (auto& [p, e] : x.f_) {
      auto it = common.find(p);
      int rem = e - (it == common.end() ? 0 : it->second);
      if (rem < 0) throw InternalCheckError("negative residual exponent");
      for (int i = 0; i < rem; ++i) acc = acc * p;
    }
    for (auto& [p, m] : common) {
      if (x.f_.count(p)) continue;
      int rem = -m;  // x has exponent 0 here; m < 0 necessarily
      if (rem < 0) throw InternalCheckError("negative residual exponent");
      for (int i = 0; i < rem; ++i) acc = acc * p;
    }
    return acc;
  };
  Poly S = residual(*this) + residual(o);
  if (S.is_zero()) return RatFunc(nv_);
  RatFunc out(nv_, Rat(1));
  out.f_ = std::move(common);
  // Cancel shared denominator factors against the expanded numerator sum.
  for (auto it = out.f_.begin(); it != out.f_.end();) {
    bool erased = false;
    while (it->second < 0) {
      auto q = S.divexact(it->first);
      if (!q) break;
      S = std::move(*q);
      if (++it->second == 0) {
        it = out.f_.erase(it);
        erased = true;
        break;
      }
    }
    if (!erased) ++it;
  }
  auto [c0, S0] = S.normalized();
  out.c_ = c0;
  if (!S0.is_one() && !S0.is_constant()) out.push_factor(S0, 1);
  else if (S0.is_constant()) out.c_ *= S0.constant_value();
  return out;
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::subst_var(int var, const Poly& value) const {
  if (c_ == 0) return RatFunc(nv_);
  RatFunc r(nv_, c_);
  for (auto& [p, e] : f_) {
    Poly q = p.subst_var(var, value);
    if (q.is_zero() && e < 0)
      throw InternalCheckError("substitution hits a pole");
    r.push_factor(q, e);
    if (r.is_zero()) return r;
  }
  return r;
}

RatFunc RatFunc::eval_vars(const std::vector<std::optional<Rat>>& vals) const {
  if (c_ == 0) return RatFunc(nv_);
  RatFunc r(nv_, c_);
  for (auto& [p, e] : f_) {
    Poly q = p.eval_vars(vals);
    if (q.is_zero() && e < 0)
      throw InternalCheckError("evaluation hits a pole");
    r.push_factor(q, e);
    if (r.is_zero()) return r;
  }
  return r;
}

std::pair<Poly, Poly> RatFunc::num_den_raw() const {
  Poly num = Poly::constant(nv_, c_);
  Poly den = Poly::constant(nv_, Rat(1));
  for (auto& [p, e] : f_) {
    for (int i = 0; i < (e > 0 ? e : -e); ++i) {
      if (e > 0) num = num * p;
      else den = den * p;
    }
  }
  if (num.is_zero()) return {num, Poly::constant(nv_, Rat(1))};
  return {num, den};
}

std::pair<Poly, Poly> RatFunc::num_den() const {
  auto [num, den] = num_den_raw();
  if (num.is_zero()) return {num, den};
  Poly g = Poly::gcd(num, den);
  if (!g.is_constant()) {
    num = *num.divexact(g);
    den = *den.divexact(g);
  }
  auto [cd, dprim] = den.normalized();
  num = num.scaled(Rat(1) / cd);
  return {num, dprim};
}

std::string RatFunc::str(const std::vector<std::string>& names) const {
  auto [n, d] = num_den();
  if (d.is_one()) return n.str(names);
  std::ostringstream os;
  os << "(" << n.str(names) << ")/(" << d.str(names) << ")";
  return os.str();
}

Rat nonequivariant_limit(const RatFunc& f) {
  if (f.is_zero()) return Rat(0);
  auto [num, den] = f.num_den();
  std::vector<std::optional<Rat>> zeros(f.nvars(), Rat(0));
  Poly d0 = den.eval_vars(zeros);
  if (!d0.is_zero()) {
    Poly n0 = num.eval_vars(zeros);
    return n0.is_zero() ? Rat(0) : n0.constant_value() / d0.constant_value();
  }
  if (!num.homogeneous() || !den.homogeneous())
    throw InternalCheckError("limit does not exist: inhomogeneous with vanishing denominator");
  int k = num.total_degree() - den.total_degree();
  if (k > 0) return Rat(0);
  throw InternalCheckError("limit does not exist: direction-dependent value");
}

}  // namespace wallx
