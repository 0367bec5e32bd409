#pragma once

#include <optional>
#include <vector>

#include "core/rat.hpp"

namespace polymax {

using Matrix = std::vector<Vec>;  // row-major

int rank(Matrix m);

/// Unique solution of A x = b for square A; nullopt when A is singular.
std::optional<Vec> solve_square(Matrix a, Vec b);

/// Basis of the null space of A (rows may be fewer than columns).
std::vector<Vec> kernel_basis(Matrix a);

}  // namespace polymax
