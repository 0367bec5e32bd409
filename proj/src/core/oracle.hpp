#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "core/polyfun.hpp"
#include "core/polyhedron.hpp"
#include "core/rat.hpp"

namespace polymax {

/// Deterministic black-box map from rational points to rationals, total on
/// its domain polyhedron. Results are cached by exact point; the query
/// counter reports distinct evaluations. Safe for concurrent queries.
class FunctionOracle {
 public:
  FunctionOracle(int n, RationalPolyhedron domain, std::function<Rat(const Vec&)> fn,
                 std::string description);

  FunctionOracle(FunctionOracle&&) = default;
  FunctionOracle& operator=(FunctionOracle&&) = default;

  int dim() const { return n_; }
  const RationalPolyhedron& domain() const { return domain_; }
  const std::string& description() const { return description_; }

  Rat query(const Vec& x) const;  // errors outside the domain
  long query_count() const;
  std::map<Vec, Rat, VecLess> log_snapshot() const;

 private:
  struct Cache {
    mutable std::mutex mu;
    std::map<Vec, Rat, VecLess> values;
    long misses = 0;
  };
  int n_;
  RationalPolyhedron domain_;
  std::function<Rat(const Vec&)> fn_;
  std::string description_;
  std::unique_ptr<Cache> cache_;
};

FunctionOracle from_polyfun(const PolyhedralFunction& f, RationalPolyhedron domain);
FunctionOracle from_polyfun(const PolyhedralFunction& f);  // domain R^n

/// Named test oracles: "square", "halfslope", "abs", "sawtooth-nonconvex",
/// "trop-conic", "halfslope2d", "sawtooth2d-nonconvex".
FunctionOracle builtin_oracle(const std::string& name);
std::vector<std::string> builtin_oracle_names();

struct ConvexityReport {
  bool pass = true;
  std::optional<std::tuple<Vec, Vec, Rat>> witness;  // (x, y, t) violating Jensen
  Rat witness_lhs, witness_rhs;                      // t f(x) + (1-t) f(y) vs f(tx+(1-t)y)
  long queries_used = 0;
  std::string sample_description;
};

/// Verifies t f(x) + (1-t) f(y) >= f(tx + (1-t)y) exactly for every listed
/// pair and t; the first violation (in iteration order) becomes the witness.
ConvexityReport jensen_check(const FunctionOracle& o,
                             const std::vector<std::pair<Vec, Vec>>& pairs,
                             const std::vector<Rat>& ts);

/// Closed rational box, one interval per axis.
struct Box {
  std::vector<std::pair<Rat, Rat>> sides;
  int dim() const { return static_cast<int>(sides.size()); }
};

/// Grid points of one box side at the given resolution (must divide the side).
std::vector<Rat> box_axis_grid(const Box& box, int axis, const Rat& resolution);

/// Jensen midpoint checks along every axis-parallel grid line of the box.
ConvexityReport axis_convexity_check(const FunctionOracle& o, const Box& box,
                                     const Rat& resolution);

/// Maximum absolute axis-direction secant slope over adjacent grid points:
/// an exact lower bound for the Lipschitz constant.
Rat lipschitz_estimate(const FunctionOracle& o, const Box& box, const Rat& resolution);

}  // namespace polymax
