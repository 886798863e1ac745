#include "wallx/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "wallx/errors.hpp"

namespace wallx {

namespace {
int expo_sum(const Expo& e) { return std::accumulate(e.begin(), e.end(), 0); }
}  // namespace

namespace {
Rat canon(Rat r) {
  r.canonicalize();
  return r;
}
}  // namespace

Poly Poly::constant(int nvars, const Rat& c) {
  Poly p(nvars);
  if (c != 0) p.t_.emplace(Expo(nvars, 0), canon(c));
  return p;
}

Poly Poly::var(int nvars, int i, const Rat& coeff) {
  if (i < 0 || i >= nvars) throw InternalCheckError("variable index out of range");
  Poly p(nvars);
  if (coeff != 0) {
    Expo e(nvars, 0);
    e[i] = 1;
    p.t_.emplace(std::move(e), canon(coeff));
  }
  return p;
}

Poly Poly::monomial(int nvars, const Expo& e, const Rat& c) {
  if (static_cast<int>(e.size()) != nvars) throw InternalCheckError("monomial arity mismatch");
  Poly p(nvars);
  if (c != 0) p.t_.emplace(e, canon(c));
  return p;
}

bool Poly::is_constant() const {
  if (t_.empty()) return true;
  return t_.size() == 1 && expo_sum(t_.begin()->first) == 0;
}

bool Poly::is_one() const { return is_constant() && constant_value() == 1; }

Rat Poly::constant_value() const {
  if (t_.empty()) return Rat(0);
  if (!is_constant()) throw InternalCheckError("constant_value of non-constant polynomial");
  return t_.begin()->second;
}

int Poly::total_degree() const {
  int d = -1;
  for (auto& [e, c] : t_) d = std::max(d, expo_sum(e));
  return d;
}

int Poly::degree_in(int var) const {
  int d = 0;
  for (auto& [e, c] : t_) d = std::max(d, e[var]);
  return d;
}

bool Poly::uses_var(int var) const {
  for (auto& [e, c] : t_)
    if (e[var] != 0) return true;
  return false;
}

bool Poly::homogeneous() const {
  if (t_.empty()) return true;
  int d = expo_sum(t_.begin()->first);
  for (auto& [e, c] : t_)
    if (expo_sum(e) != d) return false;
  return true;
}

Poly& Poly::add_term(const Expo& e, const Rat& c) {
  if (static_cast<int>(e.size()) != nv_) throw InternalCheckError("term arity mismatch");
  if (c == 0) return *this;
  auto it = t_.find(e);
  if (it == t_.end()) {
    t_.emplace(e, canon(c));
  } else {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
  return *this;
}

Poly Poly::operator-() const {
  Poly r(nv_);
  for (auto& [e, c] : t_) r.t_.emplace(e, -c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (nv_ != o.nv_) throw InternalCheckError("polynomial arity mismatch");
  for (auto& [e, c] : o.t_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (nv_ != o.nv_) throw InternalCheckError("polynomial arity mismatch");
  for (auto& [e, c] : o.t_) add_term(e, -c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (nv_ != o.nv_) throw InternalCheckError("polynomial arity mismatch");
  Poly r(nv_);
  Expo e(nv_);
  for (auto& [ea, ca] : t_)
    for (auto& [eb, cb] : o.t_) {
      for (int i = 0; i < nv_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Poly Poly::scaled(const Rat& c) const {
  Poly r(nv_);
  if (c == 0) return r;
  Rat cc0 = canon(c);
  for (auto& [e, cc] : t_) r.t_.emplace(e, cc * cc0);
  return r;
}

Poly Poly::subst_var(int var, const Poly& value) const {
  if (value.nvars() != nv_) throw InternalCheckError("subst arity mismatch");
  // Group by exponent of `var`, then assemble with cached powers of `value`.
  std::map<int, Poly> groups;
  for (auto& [e, c] : t_) {
    Expo rest = e;
    int k = rest[var];
    rest[var] = 0;
    auto [it, fresh] = groups.try_emplace(k, nv_);
    it->second.add_term(rest, c);
  }
  Poly result(nv_);
  Poly pw = Poly::constant(nv_, Rat(1));
  int cur = 0;
  for (auto& [k, g] : groups) {
    while (cur < k) {
      pw = pw * value;
      ++cur;
    }
    result += g * pw;
  }
  return result;
}

Poly Poly::eval_vars(const std::vector<std::optional<Rat>>& vals) const {
  if (static_cast<int>(vals.size()) != nv_) throw InternalCheckError("eval arity mismatch");
  Poly r(nv_);
  Expo e2(nv_);
  for (auto& [e, c] : t_) {
    Rat cc = c;
    for (int i = 0; i < nv_; ++i) {
      if (vals[i]) {
        if (e[i] != 0) {
          Rat p = 1;
          for (int k = 0; k < e[i]; ++k) p *= *vals[i];
          cc *= p;
        }
        e2[i] = 0;
      } else {
        e2[i] = e[i];
      }
    }
    r.add_term(e2, cc);
  }
  return r;
}

Rat Poly::eval_all(const std::vector<Rat>& vals) const {
  std::vector<std::optional<Rat>> v(vals.begin(), vals.end());
  Poly r = eval_vars(v);
  return r.constant_value();
}

std::optional<Poly> Poly::divexact(const Poly& d) const {
  if (nv_ != d.nv_) throw InternalCheckError("divexact arity mismatch");
  if (d.is_zero()) throw InternalCheckError("division by zero polynomial");
  if (d.is_constant()) return scaled(Rat(1) / d.constant_value());
  Poly r = *this;
  Poly q(nv_);
  const auto& dl = *d.t_.rbegin();
  while (!r.is_zero()) {
    const auto& rl = *r.t_.rbegin();
    Expo e(nv_);
    for (int i = 0; i < nv_; ++i) {
      e[i] = rl.first[i] - dl.first[i];
      if (e[i] < 0) return std::nullopt;
    }
    Rat c = rl.second / dl.second;
    q.add_term(e, c);
    r -= Poly::monomial(nv_, e, c) * d;
  }
  return q;
}

std::pair<Rat, Poly> Poly::normalized() const {
  if (t_.empty()) return {Rat(0), Poly(nv_)};
  Int num_gcd = 0, den_lcm = 1;
  for (auto& [e, c] : t_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rat scale(den_lcm, num_gcd);  // multiply by this to make integer-primitive
  scale.canonicalize();
  if (t_.rbegin()->second * scale < 0) scale = -scale;
  return {Rat(1) / scale, scaled(scale)};
}

namespace {

// View of p as a univariate polynomial in `var` with Poly coefficients.
std::map<int, Poly> coeffs_in(const Poly& p, int var) {
  std::map<int, Poly> out;
  for (auto& [e, c] : p.terms()) {
    Expo rest = e;
    int k = rest[var];
    rest[var] = 0;
    auto [it, fresh] = out.try_emplace(k, p.nvars());
    it->second.add_term(rest, c);
  }
  return out;
}

Poly assemble_in(const std::map<int, Poly>& cs, int var, int nv) {
  Poly r(nv);
  for (auto& [k, c] : cs) {
    Expo e(nv, 0);
    e[var] = k;
    r += c * Poly::monomial(nv, e, Rat(1));
  }
  return r;
}

int highest_var(const Poly& a, const Poly& b) {
  for (int v = a.nvars() - 1; v >= 0; --v)
    if (a.uses_var(v) || b.uses_var(v)) return v;
  return -1;
}

// Pseudo-remainder of p by s in variable var (both nonzero, deg_var(p) >= deg_var(s) > 0).
Poly prem(Poly p, const Poly& s, int var) {
  int ds = s.degree_in(var);
  auto scs = coeffs_in(s, var);
  const Poly& lcs = scs.rbegin()->second;
  while (!p.is_zero() && p.degree_in(var) >= ds) {
    auto pcs = coeffs_in(p, var);
    int dp = pcs.rbegin()->first;
    const Poly& lcp = pcs.rbegin()->second;
    Expo shift(p.nvars(), 0);
    shift[var] = dp - ds;
    p = p * lcs - s * (lcp * Poly::monomial(p.nvars(), shift, Rat(1)));
  }
  return p;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.is_zero() ? b : b.normalized().second;
  if (b.is_zero()) return a.normalized().second;
  if (a.is_constant() || b.is_constant())
    return Poly::constant(a.nvars(), Rat(1));
  int v = highest_var(a, b);
  auto content_of = [&](const Poly& p) {
    auto cs = coeffs_in(p, v);
    Poly g(p.nvars());
    for (auto& [k, c] : cs) g = Poly::gcd(g, c);
    return g;
  };
  if (!a.uses_var(v)) return Poly::gcd(a, content_of(b));
  if (!b.uses_var(v)) return Poly::gcd(content_of(a), b);
  Poly ca = content_of(a), cb = content_of(b);
  Poly pa = *a.divexact(ca), pb = *b.divexact(cb);
  Poly g0 = Poly::gcd(ca, cb);
  Poly p = pa.degree_in(v) >= pb.degree_in(v) ? pa : pb;
  Poly s = pa.degree_in(v) >= pb.degree_in(v) ? pb : pa;
  while (true) {
    if (s.is_zero()) {
      Poly pp = *p.divexact(content_of(p));
      return (g0 * pp).normalized().second;
    }
    if (s.degree_in(v) == 0) return g0.normalized().second;
    Poly r = prem(p, s, v);
    p = s;
    s = r.is_zero() ? r : *r.divexact(content_of(r));
  }
}

int Poly::compare(const Poly& o) const {
  if (nv_ != o.nv_) return nv_ < o.nv_ ? -1 : 1;
  auto it = t_.begin(), jt = o.t_.begin();
  for (; it != t_.end() && jt != o.t_.end(); ++it, ++jt) {
    if (it->first != jt->first) return it->first < jt->first ? -1 : 1;
    if (it->second != jt->second) return it->second < jt->second ? -1 : 1;
  }
  if (it != t_.end()) return 1;
  if (jt != o.t_.end()) return -1;
  return 0;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const Rat& c = it->second;
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    Rat ac = abs(c);
    bool printed = false;
    if (ac != 1 || expo_sum(it->first) == 0) {
      os << ac.get_str();
      printed = true;
    }
    for (int i = 0; i < nv_; ++i) {
      if (it->first[i] == 0) continue;
      if (printed) os << "*";
      if (i < static_cast<int>(names.size())) os << names[i];
      else os << "x" << i;
      if (it->first[i] != 1) os << "^" << it->first[i];
      printed = true;
    }
  }
  return os.str();
}

}  // namespace wallx
