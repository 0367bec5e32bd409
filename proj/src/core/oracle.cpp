#include "core/oracle.hpp"

#include <sstream>

#include "core/errors.hpp"

namespace polymax {

FunctionOracle::FunctionOracle(int n, RationalPolyhedron domain,
                               std::function<Rat(const Vec&)> fn, std::string description)
    : n_(n),
      domain_(std::move(domain)),
      fn_(std::move(fn)),
      description_(std::move(description)),
      cache_(std::make_unique<Cache>()) {
  require(domain_.dim() == n_, ErrorCode::kDimensionMismatch, "oracle domain dimension mismatch");
}

Rat FunctionOracle::query(const Vec& x) const {
  require(static_cast<int>(x.size()) == n_, ErrorCode::kDimensionMismatch,
          "query: point dimension mismatch");
  require(domain_.contains(x), ErrorCode::kDomain,
          "query outside the oracle domain at (" + vec_str(x) + ")");
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->values.find(x);
    if (it != cache_->values.end()) return it->second;
  }
  Rat v = fn_(x);
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto [it, inserted] = cache_->values.emplace(x, v);
  if (inserted) cache_->misses++;
  return it->second;
}

long FunctionOracle::query_count() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->misses;
}

std::map<Vec, Rat, VecLess> FunctionOracle::log_snapshot() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->values;
}

FunctionOracle from_polyfun(const PolyhedralFunction& f, RationalPolyhedron domain) {
  require(f.dim() == domain.dim(), ErrorCode::kDimensionMismatch,
          "from_polyfun: domain dimension mismatch");
  PolyhedralFunction copy = f;
  return FunctionOracle(f.dim(), std::move(domain),
                        [copy](const Vec& x) { return copy.eval(x); },
                        "polyfun");
}

FunctionOracle from_polyfun(const PolyhedralFunction& f) {
  return from_polyfun(f, RationalPolyhedron::whole_space(f.dim()));
}

namespace {

Rat sawtooth(const Rat& t) {
  // Slopes -1, +1, -1 with kinks at 0 and 1; the second kink is concave.
  if (t.sign() <= 0) return -t;
  if (t <= Rat(1)) return t;
  return Rat(2) - t;
}

}  // namespace

FunctionOracle builtin_oracle(const std::string& name) {
  if (name == "square")
    return FunctionOracle(1, RationalPolyhedron::whole_space(1),
                          [](const Vec& x) { return x[0] * x[0]; }, "builtin:square");
  if (name == "halfslope")
    return from_polyfun(PolyhedralFunction(1, {{{Rat(1, 2)}, Rat(0)}, {{Rat(0)}, Rat(0)}}));
  if (name == "abs")
    return from_polyfun(PolyhedralFunction(1, {{{Rat(1)}, Rat(0)}, {{Rat(-1)}, Rat(0)}}));
  if (name == "sawtooth-nonconvex")
    return FunctionOracle(1, RationalPolyhedron::whole_space(1),
                          [](const Vec& x) { return sawtooth(x[0]); },
                          "builtin:sawtooth-nonconvex");
  if (name == "trop-conic")
    return from_polyfun(PolyhedralFunction(
        2, {{{Rat(2), Rat(0)}, Rat(0)},
            {{Rat(1), Rat(1)}, Rat(0)},
            {{Rat(0), Rat(2)}, Rat(0)},
            {{Rat(0), Rat(0)}, Rat(0)}}));
  if (name == "halfslope2d")
    return from_polyfun(PolyhedralFunction(
        2, {{{Rat(1, 2), Rat(0)}, Rat(0)},
            {{Rat(0), Rat(1)}, Rat(0)},
            {{Rat(0), Rat(0)}, Rat(0)}}));
  if (name == "sawtooth2d-nonconvex")
    return FunctionOracle(2, RationalPolyhedron::whole_space(2),
                          [](const Vec& x) { return sawtooth(x[0]) + x[1].abs(); },
                          "builtin:sawtooth2d-nonconvex");
  fail(ErrorCode::kUnknownName, "unknown builtin oracle: " + name);
}

std::vector<std::string> builtin_oracle_names() {
  return {"square", "halfslope", "abs", "sawtooth-nonconvex", "trop-conic",
          "halfslope2d", "sawtooth2d-nonconvex"};
}

namespace {

std::string oracle_name(const FunctionOracle& o) {
  return o.description().empty() ? "oracle" : o.description();
}

}  // namespace

ConvexityReport jensen_check(const FunctionOracle& o,
                             const std::vector<std::pair<Vec, Vec>>& pairs,
                             const std::vector<Rat>& ts) {
  ConvexityReport rep;
  std::ostringstream desc;
  desc << oracle_name(o) << ": " << pairs.size() << " pairs x " << ts.size() << " t-values";
  rep.sample_description = desc.str();
  long before = o.query_count();
  for (const auto& [x, y] : pairs) {
    Rat fx = o.query(x), fy = o.query(y);
    for (const auto& t : ts) {
      require(Rat(0) <= t && t <= Rat(1), ErrorCode::kInvalidArgument,
              "jensen t outside [0,1]");
      Vec mid = add(scale(x, t), scale(y, Rat(1) - t));
      Rat lhs = t * fx + (Rat(1) - t) * fy;
      Rat rhs = o.query(mid);
      if (lhs < rhs) {
        rep.pass = false;
        rep.witness = {x, y, t};
        rep.witness_lhs = lhs;
        rep.witness_rhs = rhs;
        rep.queries_used = o.query_count() - before;
        return rep;
      }
    }
  }
  rep.queries_used = o.query_count() - before;
  return rep;
}

std::vector<Rat> box_axis_grid(const Box& box, int axis, const Rat& resolution) {
  require(resolution.sign() > 0, ErrorCode::kInvalidArgument, "resolution must be positive");
  const auto& [lo, hi] = box.sides[static_cast<size_t>(axis)];
  require(lo <= hi, ErrorCode::kInvalidArgument, "box side with lo > hi");
  Rat len = hi - lo;
  Rat steps = len / resolution;
  require(steps.is_integer(), ErrorCode::kInvalidArgument,
          "resolution must divide the box side exactly");
  std::vector<Rat> g;
  long k = steps.to_long();
  for (long i = 0; i <= k; i++) g.push_back(lo + resolution * Rat(i));
  return g;
}

namespace {

// Enumerates grid lines: for each axis, every combination of grid values on
// the other axes; visit() receives the points of the line in order.
template <typename F>
void for_each_grid_line(const Box& box, const Rat& resolution, F&& visit) {
  int n = box.dim();
  std::vector<std::vector<Rat>> grids;
  for (int i = 0; i < n; i++) grids.push_back(box_axis_grid(box, i, resolution));
  for (int axis = 0; axis < n; axis++) {
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    while (true) {
      std::vector<Vec> line;
      for (const auto& t : grids[static_cast<size_t>(axis)]) {
        Vec p(static_cast<size_t>(n));
        for (int c = 0; c < n; c++)
          p[static_cast<size_t>(c)] =
              (c == axis) ? t : grids[static_cast<size_t>(c)][idx[static_cast<size_t>(c)]];
        line.push_back(std::move(p));
      }
      visit(axis, line);
      int c = 0;
      while (c < n) {
        if (c == axis) { c++; continue; }
        if (++idx[static_cast<size_t>(c)] < grids[static_cast<size_t>(c)].size()) break;
        idx[static_cast<size_t>(c)] = 0;
        c++;
      }
      if (c == n) break;
    }
  }
}

}  // namespace

ConvexityReport axis_convexity_check(const FunctionOracle& o, const Box& box,
                                     const Rat& resolution) {
  require(box.dim() == o.dim(), ErrorCode::kDimensionMismatch, "box dimension mismatch");
  ConvexityReport rep;
  std::ostringstream desc;
  desc << oracle_name(o) << ": axis-parallel grid lines at resolution "
       << resolution.str();
  rep.sample_description = desc.str();
  long before = o.query_count();
  ConvexityReport failure;
  bool failed = false;
  for_each_grid_line(box, resolution, [&](int, const std::vector<Vec>& line) {
    if (failed || line.size() < 3) return;
    std::vector<std::pair<Vec, Vec>> pairs;
    for (size_t k = 1; k + 1 < line.size(); k++) pairs.emplace_back(line[k - 1], line[k + 1]);
    ConvexityReport r = jensen_check(o, pairs, {Rat(1, 2)});
    if (!r.pass) {
      failure = r;
      failed = true;
    }
  });
  if (failed) {
    failure.queries_used = o.query_count() - before;
    failure.sample_description = rep.sample_description;
    return failure;
  }
  rep.queries_used = o.query_count() - before;
  return rep;
}

Rat lipschitz_estimate(const FunctionOracle& o, const Box& box, const Rat& resolution) {
  require(box.dim() == o.dim(), ErrorCode::kDimensionMismatch, "box dimension mismatch");
  Rat best(0);
  for_each_grid_line(box, resolution, [&](int, const std::vector<Vec>& line) {
    for (size_t k = 1; k < line.size(); k++) {
      Rat secant = (o.query(line[k]) - o.query(line[k - 1])) / resolution;
      best = max(best, secant.abs());
    }
  });
  return best;
}

}  // namespace polymax
