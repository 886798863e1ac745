#pragma once
#include <optional>
#include <vector>

#include "wallx/ratfunc.hpp"

namespace wallx {

using RatMat = std::vector<std::vector<Rat>>;
using RatVec = std::vector<Rat>;

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(RatMat& m);

// Exact inverse of a square rational matrix; nullopt if singular.
std::optional<RatMat> invert(const RatMat& m);

// Solves A x = b exactly. nullopt if inconsistent or underdetermined.
std::optional<RatVec> solve(const RatMat& a, const RatVec& b);

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct ScalarSolveResult {
  SolveStatus status;
  std::vector<RatFunc> solution;  // engaged iff status == Unique
};

// Exact Gaussian elimination over the rational-function field.
ScalarSolveResult solve_scalar_system(std::vector<std::vector<RatFunc>> a,
                                      std::vector<RatFunc> b);

}  // namespace wallx
