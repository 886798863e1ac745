#include "wallx/target.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "wallx/errors.hpp"
#include "wallx/minitoml.hpp"

namespace wallx {

Epsilon Epsilon::of(const Rat& v) {
  if (v <= 0) throw ValidationError("invalid-parameter: epsilon must be positive");
  return {Value, v};
}

Epsilon Epsilon::parse(const std::string& s) {
  if (s == "0+") return zero_plus();
  if (s == "inf" || s == "infinity" || s == "oo") return infinite();
  return of(rat_parse(s));
}

long Epsilon::degree_cap() const {
  switch (kind) {
    case ZeroPlus: return -1;
    case Infinite: return 0;
    case Value: {
      // floor(1/value)
      Rat inv = Rat(1) / value;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), inv.get_num().get_mpz_t(), inv.get_den().get_mpz_t());
      if (!q.fits_slong_p()) throw ValidationError("invalid-parameter: epsilon too small");
      return q.get_si();
    }
  }
  throw InternalCheckError("unreachable");
}

std::string Epsilon::str() const {
  switch (kind) {
    case ZeroPlus: return "0+";
    case Infinite: return "inf";
    case Value: return value.get_str();
  }
  return "";
}

namespace {

IntVec to_intvec(const std::vector<long long>& v) {
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Int(static_cast<long>(v[i]));
  return out;
}

// Exact test: target in the rational cone spanned by cols (enumerates
// independent subsets; Caratheodory).
bool in_rational_cone(const std::vector<IntVec>& cols, const IntVec& target, int l) {
  bool target_zero = true;
  for (auto& x : target) target_zero = target_zero && x == 0;
  if (target_zero) return true;
  int n = static_cast<int>(cols.size());
  std::vector<int> sel;
  bool found = false;
  std::function<void(int)> rec = [&](int start) {
    if (found) return;
    if (!sel.empty() && static_cast<int>(sel.size()) <= l) {
      int k = static_cast<int>(sel.size());
      RatMat a(l, RatVec(k));
      RatVec b(l);
      for (int r = 0; r < l; ++r) {
        for (int j = 0; j < k; ++j) a[r][j] = Rat(cols[sel[j]][r]);
        b[r] = Rat(target[r]);
      }
      if (auto c = solve(a, b)) {
        bool nonneg = true;
        for (auto& x : *c) nonneg = nonneg && x >= 0;
        if (nonneg) {
          found = true;
          return;
        }
      }
    }
    if (static_cast<int>(sel.size()) == l) return;
    for (int i = start; i < n; ++i) {
      sel.push_back(i);
      rec(i + 1);
      sel.pop_back();
      if (found) return;
    }
  };
  rec(0);
  return found;
}

}  // namespace

ToricTarget ToricTarget::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string nm = path;
  auto slash = nm.find_last_of('/');
  if (slash != std::string::npos) nm = nm.substr(slash + 1);
  auto dot = nm.find_last_of('.');
  if (dot != std::string::npos) nm = nm.substr(0, dot);
  ToricTarget t = parse(ss.str(), path);
  t.name_ = nm;
  return t;
}

ToricTarget ToricTarget::parse(const std::string& config_text, const std::string& origin) {
  TomlDoc doc = TomlDoc::parse_string(config_text, origin);
  ToricTarget t;
  t.name_ = origin;
  long long n = doc.get_int("target", "n_coords");
  long long l = doc.get_int("target", "rank");
  if (n < 1 || n > 64) throw ValidationError("n_coords out of range");
  if (l < 1 || l > n) throw ValidationError("rank out of range");
  t.n_ = static_cast<int>(n);
  t.l_ = static_cast<int>(l);
  auto w = doc.get_int_mat("target", "weights");
  if (static_cast<long long>(w.size()) != l)
    throw ValidationError("weights must have `rank` rows");
  for (auto& row : w)
    if (static_cast<long long>(row.size()) != n)
      throw ValidationError("each weights row must have `n_coords` entries");
  t.xi_.assign(t.n_, IntVec(t.l_));
  for (int r = 0; r < t.l_; ++r)
    for (int i = 0; i < t.n_; ++i) t.xi_[i][r] = Int(static_cast<long>(w[r][i]));
  auto th = doc.get_int_list("target", "theta");
  if (static_cast<long long>(th.size()) != l) throw ValidationError("theta must have `rank` entries");
  t.theta_ = to_intvec(th);
  if (doc.has("twist", "convex"))
    for (auto& row : doc.get_int_mat("twist", "convex")) {
      if (static_cast<long long>(row.size()) != l)
        throw ValidationError("convex twist rows must have `rank` entries");
      t.convex_.push_back(to_intvec(row));
    }
  if (doc.has("twist", "concave"))
    for (auto& row : doc.get_int_mat("twist", "concave")) {
      if (static_cast<long long>(row.size()) != l)
        throw ValidationError("concave twist rows must have `rank` entries");
      t.concave_.push_back(to_intvec(row));
    }
  t.torus_ = doc.get_bool_or("torus", "enabled", true);
  t.validate_and_derive();
  return t;
}

void ToricTarget::validate_and_derive() {
  bool theta_zero = true;
  for (auto& x : theta_) theta_zero = theta_zero && x == 0;
  if (theta_zero) throw ValidationError("theta = 0: no stability chamber");

  // theta must lie in the span of the columns.
  {
    RatMat m;
    for (int r = 0; r < l_; ++r) {
      RatVec row(n_ + 1);
      for (int i = 0; i < n_; ++i) row[i] = Rat(xi_[i][r]);
      row[n_] = Rat(theta_[r]);
      m.push_back(std::move(row));
    }
    RatMat mcols_only = m;
    for (auto& row : mcols_only) row.pop_back();
    auto p1 = rref(mcols_only);
    auto p2 = rref(m);
    if (p2.size() != p1.size())
      throw ValidationError("theta lies outside the span of the weight columns");
  }

  // Wall check: theta must not lie in the cone of any l-1 columns.
  {
    std::vector<int> sel;
    std::function<bool(int, int)> rec = [&](int start, int need) -> bool {
      if (need == 0) {
        std::vector<IntVec> cols;
        for (int i : sel) cols.push_back(xi_[i]);
        return in_rational_cone(cols, theta_, l_);
      }
      for (int i = start; i <= n_ - need; ++i) {
        sel.push_back(i);
        bool hit = rec(i + 1, need - 1);
        sel.pop_back();
        if (hit) return true;
      }
      return false;
    };
    // For rank 1 the cone of zero columns is {0}, and theta != 0 already holds.
    bool on_wall = l_ == 1 ? false : rec(0, l_ - 1);
    if (on_wall)
      throw ValidationError("theta lies on a wall (stable locus differs from semistable locus)");
  }

  // Fixed points: l-subsets with invertible column matrix and theta in the open cone.
  {
    std::vector<int> sel;
    std::function<void(int, int)> rec = [&](int start, int need) {
      if (need == 0) {
        RatMat a(l_, RatVec(l_));
        for (int r = 0; r < l_; ++r)
          for (int j = 0; j < l_; ++j) a[r][j] = Rat(xi_[sel[j]][r]);
        auto inv = invert(a);
        if (!inv) return;
        RatVec c(l_, Rat(0));
        for (int r = 0; r < l_; ++r)
          for (int j = 0; j < l_; ++j) c[r] += (*inv)[r][j] * Rat(theta_[j]);
        for (auto& x : c)
          if (x <= 0) return;
        FixedPoint fp;
        fp.sigma = sel;
        fp.xi_inv = *inv;
        fps_.push_back(std::move(fp));
        return;
      }
      for (int i = start; i <= n_ - need; ++i) {
        sel.push_back(i);
        rec(i + 1, need - 1);
        sel.pop_back();
      }
    };
    rec(0, l_);
  }
  if (fps_.empty()) throw ValidationError("empty fixed-point set: no stable points");

  // Isolatedness: tangent weights must be formally nonzero.
  for (auto& fp : fps_)
    for (auto& w : tangent_weights(fp))
      if (w.is_zero()) throw ValidationError("non-isolated fixed point: zero tangent weight");

  // Convex twist classes must admit a nonnegative integer combination of the columns.
  for (std::size_t a = 0; a < convex_.size(); ++a) {
    const IntVec& eps = convex_[a];
    bool ok = false;
    std::vector<int> sel;
    std::function<void(int)> rec = [&](int start) {
      if (ok) return;
      if (!sel.empty() && static_cast<int>(sel.size()) <= l_) {
        int k = static_cast<int>(sel.size());
        RatMat m(l_, RatVec(k));
        RatVec b(l_);
        for (int r = 0; r < l_; ++r) {
          for (int j = 0; j < k; ++j) m[r][j] = Rat(xi_[sel[j]][r]);
          b[r] = Rat(eps[r]);
        }
        if (auto c = solve(m, b)) {
          bool good = true;
          for (auto& x : *c) good = good && x >= 0 && x.get_den() == 1;
          if (good) {
            ok = true;
            return;
          }
        }
      }
      if (static_cast<int>(sel.size()) >= l_) return;
      for (int i = start; i < n_; ++i) {
        sel.push_back(i);
        rec(i + 1);
        sel.pop_back();
        if (ok) return;
      }
    };
    rec(0);
    if (!ok) {
      // One-deep grid fallback: fix the multiplicity of one column, solve the rest.
      for (int i = 0; i < n_ && !ok; ++i)
        for (long tmult = 1; tmult <= 50 && !ok; ++tmult) {
          IntVec rest(l_);
          for (int r = 0; r < l_; ++r) rest[r] = eps[r] - tmult * xi_[i][r];
          std::vector<int> sel2;
          std::function<void(int)> rec2 = [&](int start) {
            if (ok) return;
            if (!sel2.empty() && static_cast<int>(sel2.size()) <= l_) {
              int k = static_cast<int>(sel2.size());
              RatMat m(l_, RatVec(k));
              RatVec b(l_);
              for (int r = 0; r < l_; ++r) {
                for (int j = 0; j < k; ++j) m[r][j] = Rat(xi_[sel2[j]][r]);
                b[r] = Rat(rest[r]);
              }
              if (auto c = solve(m, b)) {
                bool good = true;
                for (auto& x : *c) good = good && x >= 0 && x.get_den() == 1;
                if (good) ok = true;
              }
            }
            if (ok || static_cast<int>(sel2.size()) >= l_) return;
            for (int j = start; j < n_; ++j) {
              sel2.push_back(j);
              rec2(j + 1);
              sel2.pop_back();
              if (ok) return;
            }
          };
          rec2(0);
        }
    }
    if (!ok)
      throw ValidationError("convex twist class #" + std::to_string(a + 1) +
                            " is not a nonnegative integer combination of the weight columns");
  }

  // GIT chamber of theta: intersection of the fixed-point simplicial cones,
  // described by the rows of the inverted column matrices.
  {
    std::set<IntVec> rows;
    for (auto& fp : fps_)
      for (int r = 0; r < l_; ++r) {
        std::vector<Rat> row(l_);
        for (int j = 0; j < l_; ++j) row[j] = fp.xi_inv[r][j];
        rows.insert(primitive_vector(row));
      }
    IntMat rows_v(rows.begin(), rows.end());
    chamber_rays_ = cone_rays(rows_v, l_);
    eff_rays_ = cone_rays(chamber_rays_, l_);
    for (auto& r : eff_rays_) {
      Int d = 0;
      for (int j = 0; j < l_; ++j) d += r[j] * theta_[j];
      if (d <= 0)
        throw ValidationError(
            "effective cone touches the zero-theta-degree hyperplane: degenerate grading");
    }
  }
}

Poly ToricTarget::mu(const FixedPoint& fp, const IntVec& eta) const {
  int nv = n_scalar_vars();
  Poly p(nv);
  for (int k = 0; k < l_; ++k) {
    Rat coeff = 0;
    for (int j = 0; j < l_; ++j) coeff += fp.xi_inv[k][j] * Rat(eta[j]);
    if (coeff != 0) p += Poly::var(nv, fp.sigma[k], coeff);
  }
  return p;
}

Poly ToricTarget::divisor_restriction(const FixedPoint& fp, int i) const {
  return Poly::var(n_scalar_vars(), i) - mu(fp, xi_[i]);
}

std::vector<Poly> ToricTarget::tangent_weights(const FixedPoint& fp) const {
  std::vector<Poly> out;
  for (int i = 0; i < n_; ++i) {
    if (std::find(fp.sigma.begin(), fp.sigma.end(), i) != fp.sigma.end()) continue;
    out.push_back(divisor_restriction(fp, i));
  }
  return out;
}

RatFunc ToricTarget::euler_tangent(const FixedPoint& fp) const {
  RatFunc e(n_scalar_vars(), Rat(1));
  for (auto& w : tangent_weights(fp)) e.push_factor(w, 1);
  return e;
}

Poly ToricTarget::convex_restriction(const FixedPoint& fp, int a) const {
  return -mu(fp, convex_[a]);
}

Poly ToricTarget::concave_restriction(const FixedPoint& fp, int a) const {
  return Poly::var(n_scalar_vars(), extra_var(a)) - mu(fp, concave_[a]);
}

bool ToricTarget::is_effective(const Curve& b) const {
  for (auto& r : chamber_rays_) {
    Int s = 0;
    for (int j = 0; j < l_; ++j) s += r[j] * static_cast<long>(b[j]);
    if (s < 0) return false;
  }
  return true;
}

long ToricTarget::pair_curve(const Curve& b, const IntVec& character) const {
  Int s = 0;
  for (int j = 0; j < l_; ++j) s += character[j] * static_cast<long>(b[j]);
  if (!s.fits_slong_p()) throw InternalCheckError("curve pairing overflow");
  return s.get_si();
}

long ToricTarget::theta_degree(const Curve& b) const { return pair_curve(b, theta_); }

std::vector<Curve> ToricTarget::effective_classes(long max_theta_degree) const {
  if (max_theta_degree < 0) throw ValidationError("max theta-degree must be nonnegative");
  std::vector<Rat> lo(l_, Rat(0)), hi(l_, Rat(0));
  for (auto& r : eff_rays_) {
    Int rd = 0;
    for (int j = 0; j < l_; ++j) rd += r[j] * theta_[j];
    Rat cap = Rat(max_theta_degree) / Rat(rd);
    for (int j = 0; j < l_; ++j) {
      Rat c = Rat(r[j]) * cap;
      if (c > 0) hi[j] += c;
      else lo[j] += c;
    }
  }
  std::vector<long> lo_i(l_), hi_i(l_);
  for (int j = 0; j < l_; ++j) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), lo[j].get_num().get_mpz_t(), lo[j].get_den().get_mpz_t());
    lo_i[j] = f.get_si();
    mpz_cdiv_q(f.get_mpz_t(), hi[j].get_num().get_mpz_t(), hi[j].get_den().get_mpz_t());
    hi_i[j] = f.get_si();
  }
  std::vector<Curve> out;
  Curve b(l_);
  std::function<void(int)> rec = [&](int j) {
    if (j == l_) {
      if (!is_effective(b)) return;
      long d = theta_degree(b);
      if (d < 0 || d > max_theta_degree) return;
      out.push_back(b);
      return;
    }
    for (long v = lo_i[j]; v <= hi_i[j]; ++v) {
      b[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), [&](const Curve& x, const Curve& y) {
    long dx = theta_degree(x), dy = theta_degree(y);
    if (dx != dy) return dx < dy;
    return x < y;
  });
  return out;
}

Grading ToricTarget::grading(const Curve& b) const {
  if (!is_effective(b)) throw ValidationError("grading of a non-effective class");
  Grading g;
  g.ltheta_degree = theta_degree(b);
  g.anticanonical_degree = 0;
  for (int i = 0; i < n_; ++i) g.anticanonical_degree += pair_curve(b, xi_[i]);
  long tw = g.anticanonical_degree;
  for (auto& e : convex_) tw -= pair_curve(b, e);
  for (auto& e : concave_) tw += pair_curve(b, e);
  g.twisted_index = tw;
  return g;
}

Classification ToricTarget::classify(long probe_bound) const {
  // Exact sign decision on the extreme rays; index value from a bounded probe.
  bool any_negative = false, any_zero = false;
  for (auto& r : eff_rays_) {
    Curve b(l_);
    for (int j = 0; j < l_; ++j) {
      if (!r[j].fits_slong_p()) throw InternalCheckError("ray entry overflow");
      b[j] = r[j].get_si();
    }
    long t = grading(b).twisted_index;
    if (t < 0) any_negative = true;
    if (t == 0) any_zero = true;
  }
  Classification c;
  c.probe_bound = probe_bound;
  long min_index = 0;
  bool have = false;
  for (auto& b : effective_classes(probe_bound)) {
    if (theta_degree(b) == 0) continue;
    long t = grading(b).twisted_index;
    if (!have || t < min_index) {
      min_index = t;
      have = true;
    }
  }
  c.index = have ? min_index : 0;
  if (any_negative) {
    c.kind = Classification::General;
  } else if (any_zero) {
    c.kind = Classification::SemiPositive;
    c.index = 0;
  } else {
    c.kind = Classification::Fano;
  }
  return c;
}

std::vector<Rat> ToricTarget::walls(const Curve& b) const {
  long d = theta_degree(b);
  std::vector<Rat> out;
  for (long k = 1; k <= d; ++k) out.push_back(Rat(1, k));
  return out;
}

}  // namespace wallx
