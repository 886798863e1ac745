#pragma once
#include <vector>

#include "wallx/rational.hpp"

namespace wallx {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

// Scales a rational vector by a positive rational so entries become coprime integers.
IntVec primitive_vector(const std::vector<Rat>& v);

// Extreme rays of {x in R^dim : r . x >= 0 for every row r}. The row system must
// have full rank dim (pointed cone); throws otherwise. Rays are primitive integer
// vectors, deduplicated and sorted.
IntMat cone_rays(const IntMat& rows, int dim);

// r . x as exact rationals.
Rat dot(const IntVec& a, const std::vector<Rat>& b);
Int dot(const IntVec& a, const IntVec& b);

}  // namespace wallx
