#pragma once

#include <vector>

#include "core/detectnd.hpp"
#include "core/oracle.hpp"
#include "core/polyfun.hpp"

namespace polymax {

/// Translate of the tropical line by `center`: three rays (down, left,
/// diagonal) meeting exactly at the center.
struct TropicalLineTranslate {
  Vec center;
  LineParam down, left, diag;
};
TropicalLineTranslate tropical_line(const Vec& center);

/// Transintegral polyhedral with all slope entries nonnegative integers
/// (checked on the canonical form).
bool is_tropical_polynomial(const PolyhedralFunction& f);

/// Symbolic restrictions of f to the three rays, minimal on t >= 0.
struct TropicalRestrictions {
  PolyhedralFunction down, left, diag;
};
TropicalRestrictions restrict_to_tropical_line(const PolyhedralFunction& f, const Vec& center);

/// Ray restrictions of a black box as 1-D oracles on t >= 0. The returned
/// oracles borrow `o`, which must outlive them; queries outside the parent
/// domain fail there.
struct TropicalRayOracles {
  FunctionOracle down, left, diag;
};
TropicalRayOracles restrict_to_tropical_line(const FunctionOracle& o, const Vec& center);

/// Detection on a 2-D box: transintegral reconstruction of the three ray
/// restrictions per center, then grid reconstruction of the three closed
/// components of the box minus the tropical line through the
/// lexicographically smallest center, with exact boundary agreement.
NdOutcome detect_tropical(const FunctionOracle& o, const Box& box,
                          const std::vector<Vec>& centers, const Rat& ray_length, int budget,
                          const Rat& grid_step);

}  // namespace polymax
