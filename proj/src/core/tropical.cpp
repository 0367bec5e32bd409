#include "core/tropical.hpp"

#include <sstream>

#include "core/errors.hpp"

namespace polymax {

namespace {

const char* kRayNames[3] = {"down", "left", "diag"};

Vec ray_direction(int k) {
  switch (k) {
    case 0: return {Rat(0), Rat(-1)};
    case 1: return {Rat(-1), Rat(0)};
    default: return {Rat(1), Rat(1)};
  }
}

// Minimal representation of a 1-D function on [t0, inf): envelope pieces
// whose dominance interval meets the open ray.
PolyhedralFunction ray_canonicalize(const PolyhedralFunction& f, const Rat& t0) {
  Pieces1D pieces = pieces_1d(f);
  std::vector<AffineFunctional> kept;
  for (size_t k = 0; k < pieces.lines.size(); k++) {
    bool last = k + 1 == pieces.lines.size();
    if (last || pieces.breakpoints[k] > t0) kept.push_back(pieces.lines[k]);
  }
  return PolyhedralFunction(1, std::move(kept));
}


FunctionOracle borrow_ray(const FunctionOracle& o, const Vec& center, int k) {
  LineParam ray = LineParam::ray(center, ray_direction(k), Rat(0));
  const FunctionOracle* parent = &o;
  return FunctionOracle(1, RationalPolyhedron(1, {{{{Rat(1)}, Rat(0)}}}),
                        [parent, ray](const Vec& t) { return parent->query(ray.at(t[0])); },
                        o.description() + " restricted to the " + std::string(kRayNames[k]) +
                            " ray at (" + vec_str(center) + ")");
}

}  // namespace

TropicalLineTranslate tropical_line(const Vec& center) {
  require(center.size() == 2, ErrorCode::kDimensionMismatch, "tropical line center must be 2-D");
  TropicalLineTranslate t;
  t.center = center;
  t.down = LineParam::ray(center, ray_direction(0), Rat(0));
  t.left = LineParam::ray(center, ray_direction(1), Rat(0));
  t.diag = LineParam::ray(center, ray_direction(2), Rat(0));
  return t;
}

bool is_tropical_polynomial(const PolyhedralFunction& f) {
  PolyhedralFunction fc = canonicalize(f);
  for (const auto& fn : fc.functionals())
    for (const auto& a : fn.slope)
      if (!a.is_integer() || a.sign() < 0) return false;
  return true;
}

TropicalRestrictions restrict_to_tropical_line(const PolyhedralFunction& f, const Vec& center) {
  require(f.dim() == 2, ErrorCode::kDimensionMismatch, "tropical restriction needs a 2-D function");
  TropicalLineTranslate line = tropical_line(center);
  return {ray_canonicalize(restrict_line(f, line.down), Rat(0)),
          ray_canonicalize(restrict_line(f, line.left), Rat(0)),
          ray_canonicalize(restrict_line(f, line.diag), Rat(0))};
}

TropicalRayOracles restrict_to_tropical_line(const FunctionOracle& o, const Vec& center) {
  require(o.dim() == 2, ErrorCode::kDimensionMismatch, "tropical restriction needs a 2-D oracle");
  require(center.size() == 2, ErrorCode::kDimensionMismatch, "tropical line center must be 2-D");
  return {borrow_ray(o, center, 0), borrow_ray(o, center, 1), borrow_ray(o, center, 2)};
}

namespace {

struct TropDetector {
  const FunctionOracle& o;
  std::map<Vec, Rat, VecLess> log;
  Rat q(const Vec& p) {
    Rat v = o.query(p);
    log.emplace(p, v);
    return v;
  }
};

FunctionOracle ray_oracle(TropDetector& d, const LineParam& ray, const Rat& length) {
  std::vector<HalfSpace> hs;
  hs.push_back({{{Rat(1)}, Rat(0)}});
  hs.push_back({{{Rat(-1)}, length}});
  TropDetector* det = &d;
  LineParam l = ray;
  return FunctionOracle(1, RationalPolyhedron(1, std::move(hs)),
                        [det, l](const Vec& t) { return det->q(l.at(t[0])); },
                        "tropical ray restriction");
}

Witness lift_ray_witness(const Witness& w, const LineParam& ray, const std::string& where) {
  if (const auto* j = std::get_if<JensenWitness>(&w)) {
    JensenWitness out = *j;
    out.x = ray.at(j->x[0]);
    out.y = ray.at(j->y[0]);
    return out;
  }
  if (const auto* s = std::get_if<SlopeWitness>(&w)) {
    SlopeWitness out = *s;
    out.where = where;
    return out;
  }
  return w;
}

// The three closed components of R^2 minus the tropical line through c.
std::vector<RationalPolyhedron> line_components(const Vec& c) {
  const Rat& cx = c[0];
  const Rat& cy = c[1];
  std::vector<RationalPolyhedron> comps;
  comps.emplace_back(2, std::vector<HalfSpace>{{{{Rat(-1), Rat(0)}, cx}}, {{{Rat(0), Rat(-1)}, cy}}});
  comps.emplace_back(2, std::vector<HalfSpace>{{{{Rat(1), Rat(0)}, -cx}},
                                               {{{Rat(1), Rat(-1)}, cy - cx}}});
  comps.emplace_back(2, std::vector<HalfSpace>{{{{Rat(0), Rat(1)}, -cy}},
                                               {{{Rat(-1), Rat(1)}, cx - cy}}});
  return comps;
}

// Parameter range of {c + t d : t >= 0} inside the box; nullopt if empty.
std::optional<std::pair<Rat, Rat>> ray_box_range(const Vec& c, const Vec& d, const Box& box) {
  Rat t_lo(0), t_hi;
  bool hi_set = false;
  for (int axis = 0; axis < 2; axis++) {
    const Rat& lo = box.sides[static_cast<size_t>(axis)].first;
    const Rat& hi = box.sides[static_cast<size_t>(axis)].second;
    const Rat& base = c[static_cast<size_t>(axis)];
    const Rat& dv = d[static_cast<size_t>(axis)];
    if (dv.is_zero()) {
      if (base < lo || base > hi) return std::nullopt;
      continue;
    }
    Rat ta = (lo - base) / dv;
    Rat tb = (hi - base) / dv;
    if (ta > tb) std::swap(ta, tb);
    t_lo = max(t_lo, ta);
    if (!hi_set || tb < t_hi) t_hi = tb;
    hi_set = true;
  }
  if (!hi_set || t_lo > t_hi) return std::nullopt;
  return std::make_pair(t_lo, t_hi);
}

}  // namespace

NdOutcome detect_tropical(const FunctionOracle& o, const Box& box,
                          const std::vector<Vec>& centers, const Rat& ray_length, int budget,
                          const Rat& grid_step) {
  require(o.dim() == 2, ErrorCode::kDimensionMismatch, "tropical detection needs a 2-D oracle");
  require(box.dim() == 2, ErrorCode::kDimensionMismatch, "tropical detection needs a 2-D box");
  require(!centers.empty(), ErrorCode::kInvalidArgument, "at least one center required");
  require(ray_length.sign() > 0, ErrorCode::kInvalidArgument, "ray length must be positive");
  for (const auto& c : centers)
    require(c.size() == 2, ErrorCode::kDimensionMismatch, "centers must be 2-D");

  TropDetector d{o, {}};
  std::vector<LineRecord> records;
  for (const auto& c : centers) {
    for (int k = 0; k < 3; k++) {
      LineParam ray = LineParam::ray(c, ray_direction(k), Rat(0));
      Vec tip = ray.at(ray_length);
      std::ostringstream id;
      id << "center=(" << vec_str(c) << ") ray=" << kRayNames[k];
      require(o.domain().contains(c) && o.domain().contains(tip), ErrorCode::kPrecondition,
              "truncated ray leaves the oracle domain: " + id.str());
      FunctionOracle ro = ray_oracle(d, ray, ray_length);
      DetectOutcome r = reconstruct_transintegral(ro, Rat(0), ray_length, budget);
      if (r.tag != OutcomeTag::kAccept) {
        NdOutcome out;
        out.tag = r.tag;
        if (r.witness) out.witness = lift_ray_witness(*r.witness, ray, id.str());
        out.note = id.str() + " " + std::string(to_string(r.tag)) + ": " + r.note;
        records.push_back({ray, Rat(0), ray_length, std::move(r), id.str()});
        out.lines = std::move(records);
        out.queries = d.log;
        return out;
      }
      records.push_back({ray, Rat(0), ray_length, std::move(r), id.str()});
    }
  }

  // Designated line: lexicographically smallest center.
  Vec c0 = centers[0];
  for (const auto& c : centers)
    if (lex_compare(c, c0) < 0) c0 = c;

  std::vector<RationalPolyhedron> comps = line_components(c0);
  std::vector<PolyhedralFunction> parts;
  std::vector<CellRecord> cells;
  GridSpec grid;
  grid.box = box;
  grid.step = {grid_step, grid_step};
  int rounds = 0;
  for (size_t k = 0; k < comps.size(); k++) {
    NdOutcome nd = reconstruct_box(o, grid, budget, IntegralityClass::kTransIntegral, &comps[k]);
    for (const auto& kv : nd.queries) d.log.emplace(kv.first, kv.second);
    rounds = std::max(rounds, nd.rounds_used);
    if (nd.tag != OutcomeTag::kAccept) {
      nd.note = "component " + std::to_string(k) + ": " + nd.note;
      nd.lines = std::move(records);
      nd.queries = d.log;
      return nd;
    }
    parts.push_back(nd.reconstruction->function);
    for (auto& cell : nd.reconstruction->cells) cells.push_back(std::move(cell));
  }

  // Boundary agreement along the three rays of the designated line.
  const int boundary_pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; k++) {
    LineParam ray = LineParam::ray(c0, ray_direction(k), Rat(0));
    auto range = ray_box_range(c0, ray.direction, box);
    if (!range) continue;
    const PolyhedralFunction& fa = parts[static_cast<size_t>(boundary_pairs[k][0])];
    const PolyhedralFunction& fb = parts[static_cast<size_t>(boundary_pairs[k][1])];
    PolyhedralFunction ra = restrict_line(fa, ray);
    PolyhedralFunction rb = restrict_line(fb, ray);
    bool agree = range->first == range->second
                     ? ra.eval({range->first}) == rb.eval({range->first})
                     : equal_on_interval(ra, rb, range->first, range->second);
    if (!agree) {
      NdOutcome out;
      out.tag = OutcomeTag::kExhausted;
      out.note = std::string("component reconstructions disagree on the ") + kRayNames[k] +
                 " ray of the designated tropical line";
      out.lines = std::move(records);
      out.queries = d.log;
      return out;
    }
  }

  PolyhedralFunction f = trop_add(trop_add(parts[0], parts[1]), parts[2]);
  for (const auto& [p, v] : d.log) {
    if (f.eval(p) != v) {
      NdOutcome out;
      out.tag = OutcomeTag::kExhausted;
      out.note = "assembled function misses the logged query at (" + vec_str(p) + ")";
      out.lines = std::move(records);
      out.queries = d.log;
      return out;
    }
  }

  NdOutcome out;
  out.tag = OutcomeTag::kAccept;
  out.reconstruction = NdReconstruction{std::move(f), std::move(cells)};
  out.lines = std::move(records);
  out.queries = d.log;
  out.rounds_used = rounds;
  return out;
}

}  // namespace polymax
