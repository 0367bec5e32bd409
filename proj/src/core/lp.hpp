#pragma once

#include <vector>

#include "core/affine.hpp"
#include "core/rat.hpp"

namespace polymax {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rat value;  // optimal objective, valid when kOptimal
  Vec point;  // an optimal point, valid when kOptimal
};

/// One constraint: fn(x) >= 0, or fn(x) == 0 when equality is set.
struct LpConstraint {
  AffineFunctional fn;
  bool equality = false;
};

/// Exact rational simplex over free variables x in Q^n.
/// Maximizes objective.slope . x + objective.constant subject to constraints.
LpResult lp_maximize(int n, const AffineFunctional& objective,
                     const std::vector<LpConstraint>& constraints);

LpResult lp_minimize(int n, const AffineFunctional& objective,
                     const std::vector<LpConstraint>& constraints);

bool lp_feasible(int n, const std::vector<LpConstraint>& constraints);

}  // namespace polymax
