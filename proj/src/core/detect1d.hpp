#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/oracle.hpp"
#include "core/polyfun.hpp"
#include "core/rat.hpp"

namespace polymax {

enum class OutcomeTag { kAccept, kReject, kExhausted };
const char* to_string(OutcomeTag t);

/// A logged triple exactly violating t f(x) + (1-t) f(y) >= f(tx+(1-t)y).
struct JensenWitness {
  Vec x, y;
  Rat t;
  Rat lhs, rhs;
};

/// An exactly certified chord slope on an affine subinterval.
struct SlopeWitness {
  Rat lo, hi;      // certified-affine subinterval
  Rat slope;       // the non-integer slope
  std::string where;  // line location for multi-line detectors
};

/// A failed membership in Z + Z x_1 + ... + Z x_n.
struct MembershipWitness {
  Vec x;
  Rat value;
  std::string detail;  // the exact failing computation
};

using Witness = std::variant<JensenWitness, SlopeWitness, MembershipWitness>;
std::string witness_summary(const Witness& w);

/// Convex integer-slope piecewise-affine function on [a, b]: slopes strictly
/// increase left to right and adjacent pieces agree at their breakpoint.
struct Reconstruction1D {
  struct Piece {
    long slope;
    Rat constant;
  };
  std::vector<Piece> pieces;
  std::vector<Rat> breakpoints;  // size pieces.size() - 1
  Rat a, b;

  Rat eval(const Rat& t) const;
  PolyhedralFunction to_polyfun() const;
};

struct DetectOutcome {
  OutcomeTag tag = OutcomeTag::kExhausted;
  std::optional<Reconstruction1D> reconstruction;
  std::optional<Witness> witness;
  std::map<Rat, Rat> queries;  // full query log, by point
  std::string note;            // budget report / diagnostics
};

struct SlopeProbe {
  enum class Tag { kSlope, kExhausted, kJensen };
  Tag tag = Tag::kExhausted;
  Rat slope;             // chord slope in standard orientation
  Rat certified_lo, certified_hi;  // subinterval certified affine
  std::optional<JensenWitness> jensen;
};

/// Halves h until the midpoint of [x, x+sign*h] lies exactly on the chord;
/// for a convex oracle that certifies affinity there and yields the exact
/// chord slope. Exhausts after `budget` halvings.
SlopeProbe one_sided_slope(const FunctionOracle& o, const Rat& x, int sign,
                           const Rat& h0, int budget);

/// Reconstructs a convex integer-slope piecewise-affine function on [a, b]
/// by recursive support-line splitting. Accept carries the full query log;
/// non-integer certified slopes and logged Jensen violations reject.
DetectOutcome reconstruct_transintegral(const FunctionOracle& o, const Rat& a,
                                        const Rat& b, int budget);

/// Integral detection: membership of sampled values in Z + Z x first (Farey
/// order on the open interval), then reconstruction, then integrality of the
/// piece constants via a coprime-denominator sample per piece.
DetectOutcome detect_integral_values(const FunctionOracle& o, const Rat& a,
                                     const Rat& b, int budget, int samples);

/// Deterministic rational samples of the open interval (a, b), ordered by
/// denominator then numerator.
std::vector<Rat> farey_points(const Rat& a, const Rat& b, int count);

}  // namespace polymax
