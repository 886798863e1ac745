#include "wallx/linalg.hpp"

#include "wallx/errors.hpp"

namespace wallx {

std::vector<int> rref(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[r], m[pr]);
    Rat inv = Rat(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::optional<RatMat> invert(const RatMat& m) {
  int n = static_cast<int>(m.size());
  RatMat aug(n, RatVec(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[i].size()) != n) throw InternalCheckError("invert: non-square");
    for (int j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (static_cast<int>(piv.size()) != n || piv.back() != n - 1) return std::nullopt;
  for (int i = 0; i < n; ++i)
    if (piv[i] != i) return std::nullopt;
  RatMat inv(n, RatVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

std::optional<RatVec> solve(const RatMat& a, const RatVec& b) {
  int rows = static_cast<int>(a.size());
  if (rows == 0) return std::nullopt;
  int cols = static_cast<int>(a[0].size());
  RatMat aug(rows, RatVec(cols + 1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  auto piv = rref(aug);
  for (int i = 0; i < rows; ++i) {
    bool zero_row = true;
    for (int j = 0; j < cols; ++j)
      if (aug[i][j] != 0) {
        zero_row = false;
        break;
      }
    if (zero_row && aug[i][cols] != 0) return std::nullopt;  // inconsistent
  }
  if (static_cast<int>(piv.size()) != cols) return std::nullopt;  // underdetermined
  RatVec x(cols, Rat(0));
  for (int i = 0; i < static_cast<int>(piv.size()); ++i) x[piv[i]] = aug[i][cols];
  return x;
}

ScalarSolveResult solve_scalar_system(std::vector<std::vector<RatFunc>> a,
                                      std::vector<RatFunc> b) {
  int rows = static_cast<int>(a.size());
  int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    // Prefer structurally simple pivots: plain rationals, then fewest factors.
    int pr = -1;
    std::size_t best = SIZE_MAX;
    for (int i = r; i < rows; ++i) {
      if (a[i][c].is_zero()) continue;
      std::size_t cost = a[i][c].is_rational() ? 0 : 1 + a[i][c].factors().size();
      if (cost < best) {
        best = cost;
        pr = i;
      }
    }
    if (pr < 0) continue;
    std::swap(a[r], a[pr]);
    std::swap(b[r], b[pr]);
    RatFunc inv = a[r][c].inverse();
    for (int j = c; j < cols; ++j)
      if (!a[r][j].is_zero()) a[r][j] = a[r][j] * inv;
    b[r] = b[r] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      RatFunc f = a[i][c];
      for (int j = c; j < cols; ++j)
        if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
      if (!b[r].is_zero()) b[i] -= f * b[r];
      a[i][c] = RatFunc(f.nvars());
    }
    pivots.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (!b[i].is_zero()) return {SolveStatus::Inconsistent, {}};
  if (static_cast<int>(pivots.size()) != cols) return {SolveStatus::Underdetermined, {}};
  std::vector<RatFunc> x(cols);
  for (int i = 0; i < cols; ++i) x[i] = b[i];
  return {SolveStatus::Unique, std::move(x)};
}

}  // namespace wallx
