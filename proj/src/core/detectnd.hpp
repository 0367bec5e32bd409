#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/detect1d.hpp"
#include "core/oracle.hpp"
#include "core/polyfun.hpp"
#include "core/polyhedron.hpp"

namespace polymax {

/// Axis-aligned sampling grid; each step must divide its box side exactly.
struct GridSpec {
  Box box;
  std::vector<Rat> step;
};

/// A certified rectangular domain of affinity discovered on the grid.
struct CellRecord {
  RationalPolyhedron region;
  AffineFunctional ambient;
  std::vector<Vec> corners;
  Vec center;
};

struct NdReconstruction {
  PolyhedralFunction function;
  std::vector<CellRecord> cells;
};

/// One supplied line (or axis grid line) and its 1-D detection result.
struct LineRecord {
  LineParam line;
  Rat t_lo, t_hi;  // queried parameter range (rays are truncated)
  DetectOutcome outcome;
  std::string tag;
};

struct NdOutcome {
  OutcomeTag tag = OutcomeTag::kExhausted;
  std::optional<NdReconstruction> reconstruction;
  std::optional<Witness> witness;
  std::vector<LineRecord> lines;  // skeleton / tropical supplied lines only
  std::map<Vec, Rat, VecLess> queries;
  std::string note;
  int rounds_used = 0;
};

/// Axis-line sampling reconstruction: 1-D detection along every grid line,
/// ambient candidates at interior nodes away from breakpoints, rectangle
/// cells certified by corner+center equality, global step halving (3 rounds)
/// when the assembled function misses a logged query. `region`, when given,
/// clips lines and nodes to a polyhedron inside the box.
NdOutcome reconstruct_box(const FunctionOracle& o, const GridSpec& grid, int budget,
                          IntegralityClass mode,
                          const RationalPolyhedron* region = nullptr);

struct SlopeBoundInterval {
  Vec direction;
  Rat lo, hi;
};

struct SlopeBoundReport {
  std::vector<SlopeBoundInterval> intervals;
  /// Canonical slopes ambient somewhere on P, with a per-direction
  /// containment verdict (all true certifies the bound).
  std::vector<std::pair<Vec, bool>> ambient_slopes;
  bool all_certified = true;
};

/// Exact per-direction bounds on ambient slopes from boundary directional
/// derivatives, for P contained in an affine orthant (checked). Directions
/// default to exact small-integer vectors with the mixed-sign property.
SlopeBoundReport slope_bound(const PolyhedralFunction& f, const RationalPolyhedron& p,
                             const std::optional<std::vector<Vec>>& directions = std::nullopt);

/// Line-sampling detection on a polyhedron: every vertex covered by a line,
/// a translate of every unbounded 1-D facet present, 1-D detection on each
/// line, an interior-box reconstruction, and exact restriction consistency.
NdOutcome detect_on_skeleton(const FunctionOracle& o, const RationalPolyhedron& p,
                             const std::vector<LineParam>& lines, int budget);

/// Parameter length at which ray lines are truncated for querying.
inline const long kRayTruncation = 8;

}  // namespace polymax
