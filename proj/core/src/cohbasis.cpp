#include "wallx/cohbasis.hpp"

#include <algorithm>

namespace wallx {

namespace {

// All exponent vectors in `nvars` variables with total degree `deg`, in
// lexicographic order.
void monomials_of_degree(int nvars, int deg, Expo& cur, int pos, std::vector<Expo>& out) {
  if (pos == nvars - 1) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[pos] = e;
    monomials_of_degree(nvars, deg - e, cur, pos + 1, out);
  }
}

std::vector<Expo> monomials_of_degree(int nvars, int deg) {
  std::vector<Expo> out;
  Expo cur(nvars, 0);
  if (nvars == 0) {
    if (deg == 0) out.push_back(cur);
    return out;
  }
  monomials_of_degree(nvars, deg, cur, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

// Minimal transversals of the fixed-point index sets: the monomial relations
// of the classical ring are exactly the products over such subsets.
std::vector<std::vector<int>> minimal_hitting_sets(int n, const std::vector<FixedPoint>& fps) {
  std::vector<std::vector<int>> found;
  auto hits_all = [&](unsigned mask) {
    for (const auto& fp : fps) {
      bool hit = false;
      for (int j : fp.sigma)
        if (mask & (1u << j)) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  };
  auto contains_found = [&](unsigned mask) {
    for (const auto& t : found) {
      bool sub = true;
      for (int j : t)
        if (!(mask & (1u << j))) {
          sub = false;
          break;
        }
      if (sub) return true;
    }
    return false;
  };
  std::vector<unsigned> by_size;
  for (unsigned mask = 1; mask < (1u << n); ++mask) by_size.push_back(mask);
  std::sort(by_size.begin(), by_size.end(), [](unsigned a, unsigned b) {
    int ca = __builtin_popcount(a), cb = __builtin_popcount(b);
    return ca != cb ? ca < cb : a < b;
  });
  for (unsigned mask : by_size) {
    if (contains_found(mask)) continue;
    if (!hits_all(mask)) continue;
    std::vector<int> t;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) t.push_back(j);
    found.push_back(t);
  }
  return found;
}

}  // namespace

CohBasisPtr CohBasis::build(std::shared_ptr<const ToricTarget> target) {
  std::shared_ptr<CohBasis> b(new CohBasis());
  b->target_ = std::move(target);
  b->build_classical_ring();
  b->build_equivariant_data();
  return b;
}

void CohBasis::build_classical_ring() {
  const ToricTarget& t = *target_;
  const int l = t.rank();
  const int nf = n_fixed();

  // Relation generators in the l character variables.
  std::vector<Poly> gens;
  for (const auto& hs : minimal_hitting_sets(t.n_coords(), t.fixed_points())) {
    Poly g = Poly::constant(l, Rat(1));
    for (int i : hs) {
      Poly lin(l);
      for (int a = 0; a < l; ++a) {
        Rat c(t.xi(i)[a]);
        if (c != 0) lin += Poly::var(l, a, c);
      }
      g = g * lin;
    }
    if (g.is_zero()) throw InternalCheckError("degenerate ring relation");
    gens.push_back(g);
  }

  int total = 0;
  std::vector<std::pair<Expo, std::vector<std::pair<int, Rat>>>> nf_pending;
  std::vector<std::pair<Expo, int>> nf_basis;
  for (int p = 0; p <= 2 * t.n_coords() + 2; ++p) {
    std::vector<Expo> monos = monomials_of_degree(l, p);
    std::map<Expo, int> index;
    for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = static_cast<int>(i);
    RatMat rel;
    for (const Poly& g : gens) {
      int dg = g.total_degree();
      if (dg > p) continue;
      for (const Expo& m : monomials_of_degree(l, p - dg)) {
        RatVec row(monos.size(), Rat(0));
        for (const auto& [ge, gc] : g.terms()) {
          Expo e = ge;
          for (int a = 0; a < l; ++a) e[a] += m[a];
          row[index.at(e)] += gc;
        }
        rel.push_back(std::move(row));
      }
    }
    std::vector<int> pivots = rel.empty() ? std::vector<int>{} : rref(rel);
    std::vector<bool> is_pivot(monos.size(), false);
    for (int c : pivots) is_pivot[c] = true;

    int dim_p = static_cast<int>(monos.size()) - static_cast<int>(pivots.size());
    std::vector<int> global_index(monos.size(), -1);
    if (dim_p > 0) {
      for (std::size_t i = 0; i < monos.size(); ++i) {
        if (is_pivot[i]) continue;
        global_index[i] = static_cast<int>(monomials_.size());
        monomials_.push_back(monos[i]);
        degrees_.push_back(p);
      }
      top_degree_ = p;
    }
    // Normal forms at this degree: a pivot monomial rewrites through its RREF
    // row, which only involves non-pivot columns of the same degree.
    for (std::size_t r = 0; r < rel.size(); ++r) {
      // locate pivot of row r
      int pc = -1;
      for (std::size_t c = 0; c < monos.size(); ++c)
        if (rel[r][c] != 0) {
          pc = static_cast<int>(c);
          break;
        }
      if (pc < 0) continue;
      std::vector<std::pair<int, Rat>> expr;
      for (std::size_t c = pc + 1; c < monos.size(); ++c) {
        if (rel[r][c] == 0) continue;
        if (is_pivot[c]) throw InternalCheckError("normal form rewrite hit a pivot column");
        expr.emplace_back(global_index[c], -rel[r][c]);
      }
      nf_pending.emplace_back(monos[pc], std::move(expr));
    }
    for (std::size_t i = 0; i < monos.size(); ++i)
      if (!is_pivot[i]) nf_basis.emplace_back(monos[i], global_index[i]);

    total += dim_p;
    if (dim_p == 0) break;
  }
  if (total != nf)
    throw InternalCheckError("classical ring dimension does not match the fixed-point count");

  const int dim = static_cast<int>(monomials_.size());
  for (const auto& [mono, gi] : nf_basis) {
    std::vector<Rat> v(dim, Rat(0));
    v[gi] = 1;
    nf_[mono] = std::move(v);
  }
  for (const auto& [mono, expr] : nf_pending) {
    std::vector<Rat> v(dim, Rat(0));
    for (const auto& [gi, c] : expr) v[gi] = c;
    nf_[mono] = std::move(v);
  }
  zero_nf_.assign(dim, Rat(0));

  for (int i = 0; i < dim; ++i)
    if (degrees_[i] == 1) {
      h2_.push_back(i);
      int a = -1;
      for (int k = 0; k < l; ++k)
        if (monomials_[i][k] == 1) a = k;
      IntVec ch(l, Int(0));
      ch[a] = 1;
      h2_chars_.push_back(ch);
    }

  st_.assign(dim, std::vector<std::vector<Rat>>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      Expo e = monomials_[i];
      for (int a = 0; a < l; ++a) e[a] += monomials_[j][a];
      st_[i][j] = normal_form(e);
      st_[j][i] = st_[i][j];
    }
}

const std::vector<Rat>& CohBasis::normal_form(const Expo& mono) const {
  auto it = nf_.find(mono);
  if (it != nf_.end()) return it->second;
  int deg = 0;
  for (int e : mono) deg += e;
  if (deg > top_degree_) return zero_nf_;
  throw InternalCheckError("normal form requested for an unreduced monomial");
}

std::vector<Rat> CohBasis::structure_product(int i, int j) const { return st_.at(i).at(j); }

std::vector<Rat> CohBasis::character_class(const IntVec& eta) const {
  const int l = target_->rank();
  std::vector<Rat> out(dim(), Rat(0));
  for (int a = 0; a < l; ++a) {
    if (eta[a] == 0) continue;
    Expo e(l, 0);
    e[a] = 1;
    const std::vector<Rat>& nf = normal_form(e);
    for (int k = 0; k < dim(); ++k) out[k] += Rat(eta[a]) * nf[k];
  }
  return out;
}

std::vector<Rat> CohBasis::divisor_class(int i) const { return character_class(target_->xi(i)); }

void CohBasis::build_equivariant_data() {
  const ToricTarget& t = *target_;
  const int l = t.rank();
  const int nf = n_fixed();
  const int nv = t.n_scalar_vars();
  const int d = dim();

  restr_.assign(nf, std::vector<Scalar>());
  for (int s = 0; s < nf; ++s) {
    const FixedPoint& fp = t.fixed_points()[s];
    std::vector<Scalar> chars(l);
    for (int a = 0; a < l; ++a) {
      IntVec ea(l, Int(0));
      ea[a] = 1;
      chars[a] = Scalar::from_poly(-t.mu(fp, ea));
    }
    restr_[s].reserve(d);
    for (int i = 0; i < d; ++i) {
      Scalar r(nv, Rat(1));
      for (int a = 0; a < l; ++a)
        for (int e = 0; e < monomials_[i][a]; ++e) r *= chars[a];
      restr_[s].push_back(std::move(r));
    }
    euler_.push_back(t.euler_tangent(fp));
    Scalar tw(nv, Rat(1));
    for (int a = 0; a < static_cast<int>(t.convex_twist().size()); ++a)
      tw *= Scalar::from_poly(t.convex_restriction(fp, a));
    for (int a = 0; a < static_cast<int>(t.concave_twist().size()); ++a)
      tw = tw / Scalar::from_poly(t.concave_restriction(fp, a));
    twist_.push_back(tw);
    locw_.push_back(tw / euler_.back());
  }

  gram_.assign(d, std::vector<Scalar>(d, Scalar(nv, Rat(0))));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      Scalar g(nv, Rat(0));
      for (int s = 0; s < nf; ++s) g += restr_[s][i] * restr_[s][j] * locw_[s];
      gram_[i][j] = g;
      gram_[j][i] = g;
    }

  // Dual basis: gamma^i = sum_j X[j][i] gamma_j with G X = Id.
  dual_restr_.assign(d, std::vector<Scalar>(nf, Scalar(nv, Rat(0))));
  for (int i = 0; i < d; ++i) {
    std::vector<Scalar> rhs(d, Scalar(nv, Rat(0)));
    rhs[i] = Scalar(nv, Rat(1));
    ScalarSolveResult res = solve_scalar_system(gram_, rhs);
    if (res.status != SolveStatus::Unique)
      throw ValidationError("degenerate twisted pairing: no dual basis");
    for (int s = 0; s < nf; ++s) {
      Scalar v(nv, Rat(0));
      for (int j = 0; j < d; ++j) v += res.solution[j] * restr_[s][j];
      dual_restr_[i][s] = std::move(v);
    }
  }
}

Scalar CohBasis::pairing(const CohClass& a, const CohClass& b) const {
  CohClass fa = a.to_fixed_point();
  CohClass fb = b.to_fixed_point();
  Scalar out(target_->n_scalar_vars(), Rat(0));
  for (int s = 0; s < n_fixed(); ++s) out += fa.coeff(s) * fb.coeff(s) * locw_[s];
  return out;
}

Rat CohBasis::integral(const CohClass& a) const {
  CohClass fa = a.to_fixed_point();
  Scalar out(target_->n_scalar_vars(), Rat(0));
  for (int s = 0; s < n_fixed(); ++s) out += fa.coeff(s) * locw_[s];
  return nonequivariant_limit(out);
}

CohClass CohBasis::dual_element(int i) const {
  return CohClass(shared_from_this(), CohMode::FixedPoint, dual_restr_.at(i));
}

CohClass CohBasis::basis_element(int i, CohMode mode) const {
  const int nv = target_->n_scalar_vars();
  if (mode == CohMode::Ambient) {
    std::vector<Scalar> c(dim(), Scalar(nv, Rat(0)));
    c.at(i) = Scalar(nv, Rat(1));
    return CohClass(shared_from_this(), CohMode::Ambient, std::move(c));
  }
  std::vector<Scalar> c;
  c.reserve(n_fixed());
  for (int s = 0; s < n_fixed(); ++s) c.push_back(restr_[s].at(i));
  return CohClass(shared_from_this(), CohMode::FixedPoint, std::move(c));
}

CohClass CohBasis::ambient(std::vector<Scalar> coeffs) const {
  return CohClass(shared_from_this(), CohMode::Ambient, std::move(coeffs));
}

CohClass CohBasis::ambient_rat(const std::vector<Rat>& coeffs) const {
  const int nv = target_->n_scalar_vars();
  std::vector<Scalar> c;
  c.reserve(coeffs.size());
  for (const Rat& r : coeffs) c.push_back(Scalar(nv, r));
  return CohClass(shared_from_this(), CohMode::Ambient, std::move(c));
}

CohClass CohBasis::fixed_point_class(std::vector<Scalar> restrictions) const {
  return CohClass(shared_from_this(), CohMode::FixedPoint, std::move(restrictions));
}

CohClass CohBasis::delta(int s) const {
  const int nv = target_->n_scalar_vars();
  std::vector<Scalar> c(n_fixed(), Scalar(nv, Rat(0)));
  c.at(s) = Scalar(nv, Rat(1));
  return CohClass(shared_from_this(), CohMode::FixedPoint, std::move(c));
}

std::vector<Scalar> CohBasis::fp_to_ambient(const std::vector<Scalar>& values) const {
  const int d = dim();
  if (static_cast<int>(values.size()) != n_fixed())
    throw InternalCheckError("fixed-point vector has wrong length");
  std::vector<std::vector<Scalar>> a(n_fixed(), std::vector<Scalar>());
  for (int s = 0; s < n_fixed(); ++s) a[s] = restr_[s];
  ScalarSolveResult res = solve_scalar_system(a, values);
  if (res.status != SolveStatus::Unique)
    throw InternalCheckError("equivariant basis restrictions are degenerate");
  (void)d;
  return res.solution;
}

// ---------------------------------------------------------------------------

CohClass::CohClass(CohBasisPtr basis, CohMode mode, std::vector<Scalar> coeffs)
    : basis_(std::move(basis)), mode_(mode), c_(std::move(coeffs)) {
  std::size_t want = mode_ == CohMode::Ambient ? basis_->dim() : basis_->n_fixed();
  if (c_.size() != want) throw InternalCheckError("cohomology class has wrong length");
}

CohClass CohClass::zero(const CohBasisPtr& basis, CohMode mode) {
  int nv = basis->target()->n_scalar_vars();
  std::size_t n = mode == CohMode::Ambient ? basis->dim() : basis->n_fixed();
  return CohClass(basis, mode, std::vector<Scalar>(n, Scalar(nv, Rat(0))));
}

CohClass CohClass::unit(const CohBasisPtr& basis, CohMode mode) {
  int nv = basis->target()->n_scalar_vars();
  if (mode == CohMode::Ambient) {
    std::vector<Scalar> c(basis->dim(), Scalar(nv, Rat(0)));
    c[0] = Scalar(nv, Rat(1));
    return CohClass(basis, mode, std::move(c));
  }
  return CohClass(basis, mode, std::vector<Scalar>(basis->n_fixed(), Scalar(nv, Rat(1))));
}

bool CohClass::is_zero() const {
  for (const Scalar& s : c_)
    if (!s.is_zero()) return false;
  return true;
}

void CohClass::require_same(const CohClass& o) const {
  if (basis_.get() != o.basis_.get() || mode_ != o.mode_)
    throw ValidationError("incompatible cohomology operands");
}

CohClass CohClass::operator+(const CohClass& o) const {
  require_same(o);
  std::vector<Scalar> c = c_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
  return CohClass(basis_, mode_, std::move(c));
}

CohClass CohClass::operator-(const CohClass& o) const {
  require_same(o);
  std::vector<Scalar> c = c_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c_[i];
  return CohClass(basis_, mode_, std::move(c));
}

CohClass CohClass::operator-() const { return scaled_rat(Rat(-1)); }

CohClass CohClass::operator*(const CohClass& o) const {
  require_same(o);
  const int nv = basis_->target()->n_scalar_vars();
  if (mode_ == CohMode::FixedPoint) {
    std::vector<Scalar> c = c_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= o.c_[i];
    return CohClass(basis_, mode_, std::move(c));
  }
  const int d = basis_->dim();
  std::vector<Scalar> c(d, Scalar(nv, Rat(0)));
  for (int i = 0; i < d; ++i) {
    if (c_[i].is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (o.c_[j].is_zero()) continue;
      Scalar prod = c_[i] * o.c_[j];
      const std::vector<Rat>& st = basis_->structure_product(i, j);
      for (int k = 0; k < d; ++k)
        if (st[k] != 0) c[k] += prod.scaled(st[k]);
    }
  }
  return CohClass(basis_, mode_, std::move(c));
}

CohClass CohClass::scaled(const Scalar& s) const {
  std::vector<Scalar> c = c_;
  for (auto& x : c) x *= s;
  return CohClass(basis_, mode_, std::move(c));
}

CohClass CohClass::scaled_rat(const Rat& r) const {
  std::vector<Scalar> c = c_;
  for (auto& x : c) x = x.scaled(r);
  return CohClass(basis_, mode_, std::move(c));
}

CohClass CohClass::inverse() const {
  const int nv = basis_->target()->n_scalar_vars();
  if (mode_ == CohMode::FixedPoint) {
    std::vector<Scalar> c = c_;
    for (auto& x : c) {
      if (x.is_zero()) throw ValidationError("not-invertible: zero fixed-point restriction");
      x = x.inverse();
    }
    return CohClass(basis_, mode_, std::move(c));
  }
  const int d = basis_->dim();
  std::vector<std::vector<Scalar>> m(d, std::vector<Scalar>(d, Scalar(nv, Rat(0))));
  for (int i = 0; i < d; ++i) {
    if (c_[i].is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      const std::vector<Rat>& st = basis_->structure_product(i, j);
      for (int k = 0; k < d; ++k)
        if (st[k] != 0) m[k][j] += c_[i].scaled(st[k]);
    }
  }
  std::vector<Scalar> rhs(d, Scalar(nv, Rat(0)));
  rhs[0] = Scalar(nv, Rat(1));
  ScalarSolveResult res = solve_scalar_system(m, rhs);
  if (res.status != SolveStatus::Unique) throw ValidationError("not-invertible cohomology class");
  return CohClass(basis_, mode_, std::move(res.solution));
}

CohClass CohClass::to_fixed_point() const {
  if (mode_ == CohMode::FixedPoint) return *this;
  const int nv = basis_->target()->n_scalar_vars();
  std::vector<Scalar> f(basis_->n_fixed(), Scalar(nv, Rat(0)));
  for (int s = 0; s < basis_->n_fixed(); ++s)
    for (int i = 0; i < basis_->dim(); ++i)
      if (!c_[i].is_zero()) f[s] += c_[i] * basis_->restriction(i, s);
  return CohClass(basis_, CohMode::FixedPoint, std::move(f));
}

CohClass CohClass::to_ambient() const {
  if (mode_ == CohMode::Ambient) return *this;
  return CohClass(basis_, CohMode::Ambient, basis_->fp_to_ambient(c_));
}

std::string CohClass::str() const {
  std::string out = mode_ == CohMode::Ambient ? "amb(" : "fp(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ", ";
    out += c_[i].str();
  }
  return out + ")";
}

}  // namespace wallx
