#include "wallx/cone.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "wallx/errors.hpp"
#include "wallx/linalg.hpp"

namespace wallx {

IntVec primitive_vector(const std::vector<Rat>& v) {
  Int den_lcm = 1, num_gcd = 0;
  for (auto& x : v) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num().get_mpz_t());
  }
  if (num_gcd == 0) return IntVec(v.size(), 0);
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat s = v[i] * Rat(den_lcm) / Rat(num_gcd);
    if (s.get_den() != 1) {
      // fall back: scale by full lcm only
      s = v[i] * Rat(den_lcm);
      Int g = 0;
      for (auto& y : v) {
        Rat t = y * Rat(den_lcm);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.get_num().get_mpz_t());
      }
      for (std::size_t j = 0; j < v.size(); ++j) {
        Rat scaled = v[j] * Rat(den_lcm) / Rat(g);
        out[j] = Int(scaled.get_num());
      }
      return out;
    }
    out[i] = Int(s.get_num());
  }
  return out;
}

Rat dot(const IntVec& a, const std::vector<Rat>& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

int rank_of(const IntMat& rows, int dim) {
  RatMat m;
  for (auto& r : rows) {
    RatVec rr(dim);
    for (int j = 0; j < dim; ++j) rr[j] = Rat(r[j]);
    m.push_back(std::move(rr));
  }
  if (m.empty()) return 0;
  return static_cast<int>(rref(m).size());
}

// Kernel vector of a subset of rows when the subset has rank dim-1.
std::optional<std::vector<Rat>> kernel_dir(const IntMat& rows, const std::vector<int>& idx,
                                           int dim) {
  RatMat m;
  for (int i : idx) {
    RatVec rr(dim);
    for (int j = 0; j < dim; ++j) rr[j] = Rat(rows[i][j]);
    m.push_back(std::move(rr));
  }
  if (m.empty()) {
    if (dim != 1) return std::nullopt;
    return std::vector<Rat>{Rat(1)};
  }
  auto piv = rref(m);
  if (static_cast<int>(piv.size()) != dim - 1) return std::nullopt;
  // free column = the one not in piv
  std::vector<bool> is_piv(dim, false);
  for (int c : piv) is_piv[c] = true;
  int free_col = -1;
  for (int c = 0; c < dim; ++c)
    if (!is_piv[c]) {
      free_col = c;
      break;
    }
  std::vector<Rat> v(dim, Rat(0));
  v[free_col] = 1;
  for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][free_col];
  return v;
}

}  // namespace

IntMat cone_rays(const IntMat& rows, int dim) {
  for (auto& r : rows)
    if (static_cast<int>(r.size()) != dim) throw InternalCheckError("cone row arity mismatch");
  if (rank_of(rows, dim) != dim)
    throw ValidationError("degenerate cone: inequality system does not have full rank");
  int n = static_cast<int>(rows.size());
  std::set<IntVec> rays;
  std::vector<int> idx(dim - 1);
  // Iterate over all (dim-1)-subsets of rows; dim==1 uses the empty subset.
  std::vector<int> sel;
  auto consider = [&](const std::vector<int>& subset) {
    auto v = kernel_dir(rows, subset, dim);
    if (!v) return;
    for (int sign = 0; sign < 2; ++sign) {
      std::vector<Rat> cand = *v;
      if (sign) for (auto& x : cand) x = -x;
      bool ok = true;
      for (auto& r : rows)
        if (dot(r, cand) < 0) {
          ok = false;
          break;
        }
      if (ok) {
        IntVec p = primitive_vector(cand);
        bool nonzero = false;
        for (auto& x : p) nonzero = nonzero || x != 0;
        if (nonzero) rays.insert(p);
      }
    }
  };
  std::function<void(int, int)> rec = [&](int start, int need) {
    if (need == 0) {
      consider(sel);
      return;
    }
    for (int i = start; i <= n - need; ++i) {
      sel.push_back(i);
      rec(i + 1, need - 1);
      sel.pop_back();
    }
  };
  if (dim == 1) consider({});
  else rec(0, dim - 1);
  return IntMat(rays.begin(), rays.end());
}

}  // namespace wallx
