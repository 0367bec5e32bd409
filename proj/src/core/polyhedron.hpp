#pragma once

#include <optional>
#include <vector>

#include "core/affine.hpp"
#include "core/lp.hpp"
#include "core/rat.hpp"

namespace polymax {

/// Closed halfspace {x : fn(x) >= 0}; the slope must be nonzero.
struct HalfSpace {
  AffineFunctional fn;
};

/// Finite intersection of rational closed halfspaces. An empty list is R^n.
class RationalPolyhedron {
 public:
  RationalPolyhedron(int n, std::vector<HalfSpace> halfspaces);
  static RationalPolyhedron whole_space(int n) { return RationalPolyhedron(n, {}); }

  int dim() const { return n_; }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }

  bool contains(const Vec& x) const;
  std::vector<LpConstraint> lp_constraints() const;

 private:
  int n_;
  std::vector<HalfSpace> halfspaces_;
};

/// Nonempty subset B = {x in P : fn_i(x) = 0 for i in active}. The region
/// encodes each equality as a pair of opposite halfspaces appended to P's
/// list. `active` is the full implicit-equality set of B, which is a
/// point-set-canonical signature: two facets are equal iff their sets match.
struct Facet {
  std::vector<int> active;
  RationalPolyhedron region;
  bool proper = true;  // false iff equal to P as a point set
};

/// All facets (the improper one included), deduplicated by point set.
/// Errors when P has more than 12 halfspaces.
std::vector<Facet> facets(const RationalPolyhedron& p);

/// Exact vertex list, deduplicated and lexicographically sorted. n <= 3.
std::vector<Vec> vertices(const RationalPolyhedron& p);

/// Exactly n constraints with linearly independent slopes.
bool is_affine_orthant(const RationalPolyhedron& p);

/// Membership in the interior relative to the affine hull. n <= 3.
bool interior_contains(const RationalPolyhedron& p, const Vec& x);

bool is_empty(const RationalPolyhedron& p);
/// n <= 3; decided by recession-cone linear programs.
bool is_bounded(const RationalPolyhedron& p);

/// Indices of constraints identically zero on P (P nonempty).
std::vector<int> implicit_equalities(const RationalPolyhedron& p);

std::optional<Vec> feasible_point(const RationalPolyhedron& p);
/// A point of the relative interior; nullopt iff P is empty.
std::optional<Vec> relative_interior_point(const RationalPolyhedron& p);

/// Dimension of the affine hull; -1 for the empty set.
int dimension(const RationalPolyhedron& p);

/// P with equalities fn_i = 0 appended (as opposite halfspace pairs).
RationalPolyhedron with_equalities(const RationalPolyhedron& p, const std::vector<int>& idx);

}  // namespace polymax
