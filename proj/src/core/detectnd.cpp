#include "core/detectnd.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/lp.hpp"

namespace polymax {

namespace {

struct NdDetector {
  const FunctionOracle& o;
  int budget;
  std::map<Vec, Rat, VecLess> log;

  Rat q(const Vec& p) {
    Rat v = o.query(p);
    log.emplace(p, v);
    return v;
  }
};

std::string line_desc(const LineParam& line) {
  std::ostringstream os;
  os << "line base=(" << vec_str(line.base) << ") dir=(" << vec_str(line.direction) << ")";
  return os.str();
}

Witness lift_witness(const Witness& w, const LineParam& line, const std::string& where) {
  if (const auto* j = std::get_if<JensenWitness>(&w)) {
    JensenWitness out = *j;
    out.x = line.at(j->x[0]);
    out.y = line.at(j->y[0]);
    return out;
  }
  if (const auto* s = std::get_if<SlopeWitness>(&w)) {
    SlopeWitness out = *s;
    out.where = where;
    return out;
  }
  return w;
}

// Clips {base + t dir : t in [t_lo, t_hi]} to a polyhedron. nullopt when the
// clipped range is empty or a single point.
std::optional<std::pair<Rat, Rat>> clip_to_region(const Vec& base, const Vec& dir, Rat t_lo,
                                                  Rat t_hi, const RationalPolyhedron* region) {
  if (region) {
    for (const auto& h : region->halfspaces()) {
      Rat v0 = h.fn.eval(base);
      Rat dv = h.fn.slope_dot(dir);
      if (dv.is_zero()) {
        if (v0.sign() < 0) return std::nullopt;
      } else if (dv.sign() > 0) {
        t_lo = max(t_lo, -v0 / dv);
      } else {
        t_hi = min(t_hi, -v0 / dv);
      }
    }
  }
  if (!(t_lo < t_hi)) return std::nullopt;
  return std::make_pair(t_lo, t_hi);
}

FunctionOracle restriction_oracle(NdDetector& d, const LineParam& line, const Rat& t_lo,
                                  const Rat& t_hi) {
  std::vector<HalfSpace> hs;
  hs.push_back({{{Rat(1)}, -t_lo}});
  hs.push_back({{{Rat(-1)}, t_hi}});
  NdDetector* det = &d;
  LineParam l = line;
  return FunctionOracle(
      1, RationalPolyhedron(1, std::move(hs)),
      [det, l](const Vec& t) { return det->q(l.at(t[0])); },
      "restriction of " + d.o.description());
}

// Per-round state of the grid algorithm.
struct RoundData {
  bool failed = false;  // refine and retry
  std::string fail_note;
  std::optional<NdOutcome> hard;  // reject / exhausted to propagate
  std::vector<AffineFunctional> candidates;
  std::map<Vec, AffineFunctional, VecLess> node_candidates;
  std::vector<CellRecord> cells;
};

void hard_outcome(RoundData& rd, OutcomeTag tag, std::optional<Witness> w, std::string note) {
  NdOutcome out;
  out.tag = tag;
  out.witness = std::move(w);
  out.note = std::move(note);
  rd.hard = std::move(out);
}

// Slope of the reconstruction piece strictly containing t, if t is neither a
// breakpoint nor an endpoint of the reconstructed interval.
std::optional<long> interior_slope(const Reconstruction1D& rec, const Rat& t) {
  if (!(rec.a < t && t < rec.b)) return std::nullopt;
  size_t k = 0;
  for (const auto& bp : rec.breakpoints) {
    if (t == bp) return std::nullopt;
    if (t > bp) k++;
  }
  return rec.pieces[k].slope;
}

RationalPolyhedron box_polyhedron(const Vec& lo, const Vec& hi) {
  int n = static_cast<int>(lo.size());
  std::vector<HalfSpace> hs;
  for (int i = 0; i < n; i++) {
    hs.push_back({{basis_vec(n, i), -lo[static_cast<size_t>(i)]}});
    hs.push_back({{scale(basis_vec(n, i), Rat(-1)), hi[static_cast<size_t>(i)]}});
  }
  return RationalPolyhedron(n, std::move(hs));
}

RoundData run_round(NdDetector& d, const Box& box, const std::vector<Rat>& steps,
                    IntegralityClass mode, const RationalPolyhedron* region) {
  RoundData rd;
  int n = box.dim();
  std::vector<std::vector<Rat>> grids;
  for (int i = 0; i < n; i++) grids.push_back(box_axis_grid(box, i, steps[static_cast<size_t>(i)]));

  // 1-D detection along every axis-parallel grid line, clipped to the region.
  std::vector<std::map<Vec, Reconstruction1D, VecLess>> line_recs(static_cast<size_t>(n));
  for (int axis = 0; axis < n; axis++) {
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    while (true) {
      Vec others;
      Vec base = zero_vec(n);
      for (int c = 0; c < n; c++) {
        if (c == axis) continue;
        base[static_cast<size_t>(c)] = grids[static_cast<size_t>(c)][idx[static_cast<size_t>(c)]];
        others.push_back(base[static_cast<size_t>(c)]);
      }
      LineParam line = LineParam::full(base, basis_vec(n, axis));
      auto range = clip_to_region(base, line.direction, grids[static_cast<size_t>(axis)].front(),
                                  grids[static_cast<size_t>(axis)].back(), region);
      if (range) {
        FunctionOracle ro = restriction_oracle(d, line, range->first, range->second);
        DetectOutcome r = reconstruct_transintegral(ro, range->first, range->second, d.budget);
        if (r.tag == OutcomeTag::kReject) {
          hard_outcome(rd, OutcomeTag::kReject,
                       lift_witness(*r.witness, line, line_desc(line)),
                       "reject on " + line_desc(line) + ": " + r.note);
          return rd;
        }
        if (r.tag == OutcomeTag::kExhausted) {
          hard_outcome(rd, OutcomeTag::kExhausted, std::nullopt,
                       "exhausted on " + line_desc(line) + ": " + r.note);
          return rd;
        }
        line_recs[static_cast<size_t>(axis)].emplace(others, std::move(*r.reconstruction));
      }
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

  // Candidate ambient functionals at interior nodes away from breakpoints.
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  while (true) {
    Vec node(static_cast<size_t>(n));
    for (int c = 0; c < n; c++)
      node[static_cast<size_t>(c)] = grids[static_cast<size_t>(c)][idx[static_cast<size_t>(c)]];
    if (!region || region->contains(node)) {
      Rat v = d.q(node);
      if (mode == IntegralityClass::kIntegral && !group_membership(v, node)) {
        hard_outcome(rd, OutcomeTag::kReject,
                     MembershipWitness{node, v, group_membership_trace(v, node)},
                     "node value outside Z + Z x1 + ... + Z xn");
        return rd;
      }
      Vec slopes(static_cast<size_t>(n));
      bool defined = true;
      for (int axis = 0; axis < n && defined; axis++) {
        Vec others;
        for (int c = 0; c < n; c++)
          if (c != axis) others.push_back(node[static_cast<size_t>(c)]);
        auto it = line_recs[static_cast<size_t>(axis)].find(others);
        if (it == line_recs[static_cast<size_t>(axis)].end()) {
          defined = false;
          break;
        }
        auto s = interior_slope(it->second, node[static_cast<size_t>(axis)]);
        if (!s) {
          defined = false;
          break;
        }
        slopes[static_cast<size_t>(axis)] = Rat(*s);
      }
      if (defined) {
        AffineFunctional cand{slopes, v - dot(slopes, node)};
        rd.node_candidates.emplace(node, std::move(cand));
      }
    }
    int c = 0;
    while (c < n && ++idx[static_cast<size_t>(c)] >= grids[static_cast<size_t>(c)].size())
      idx[static_cast<size_t>(c++)] = 0;
    if (c == n) break;
  }

  if (rd.node_candidates.empty()) {
    rd.failed = true;
    rd.fail_note = "no ambient candidates on this grid";
    return rd;
  }

  // Distinct candidates, sorted.
  for (const auto& [node, fn] : rd.node_candidates) rd.candidates.push_back(fn);
  std::sort(rd.candidates.begin(), rd.candidates.end());
  rd.candidates.erase(std::unique(rd.candidates.begin(), rd.candidates.end()),
                      rd.candidates.end());

  // Merge same-candidate nodes into rectangles and certify corner+center.
  for (const auto& fn : rd.candidates) {
    std::set<std::vector<long>> mine;
    std::map<std::vector<long>, Vec> node_of;
    for (const auto& [node, cand] : rd.node_candidates) {
      if (!(cand == fn)) continue;
      std::vector<long> key(static_cast<size_t>(n));
      for (int c = 0; c < n; c++) {
        Rat rel = (node[static_cast<size_t>(c)] - grids[static_cast<size_t>(c)].front()) /
                  steps[static_cast<size_t>(c)];
        key[static_cast<size_t>(c)] = rel.to_long();
      }
      node_of.emplace(key, node);
      mine.insert(std::move(key));
    }
    std::set<std::vector<long>> used;
    for (const auto& start : mine) {
      if (used.count(start)) continue;
      std::vector<long> lo = start, hi = start;
      // Round-robin growth in all 2n directions: a whole face must be made
      // of same-candidate nodes to extend. Rectangles may overlap; `used`
      // only rules out already-covered starting corners.
      auto face_present = [&](int axis, long level) {
        std::vector<long> probe = lo;
        probe[static_cast<size_t>(axis)] = level;
        std::function<bool(int)> walk = [&](int c) -> bool {
          if (c == n) return mine.count(probe) > 0;
          if (c == axis) return walk(c + 1);
          for (long k = lo[static_cast<size_t>(c)]; k <= hi[static_cast<size_t>(c)]; k++) {
            probe[static_cast<size_t>(c)] = k;
            if (!walk(c + 1)) return false;
          }
          return true;
        };
        return walk(0);
      };
      bool grew = true;
      while (grew) {
        grew = false;
        for (int axis = 0; axis < n; axis++) {
          if (face_present(axis, hi[static_cast<size_t>(axis)] + 1)) {
            hi[static_cast<size_t>(axis)]++;
            grew = true;
          }
          if (face_present(axis, lo[static_cast<size_t>(axis)] - 1)) {
            lo[static_cast<size_t>(axis)]--;
            grew = true;
          }
        }
      }
      // Mark covered nodes.
      std::vector<long> it = lo;
      while (true) {
        used.insert(it);
        int c = 0;
        while (c < n) {
          it[static_cast<size_t>(c)]++;
          if (it[static_cast<size_t>(c)] <= hi[static_cast<size_t>(c)]) break;
          it[static_cast<size_t>(c)] = lo[static_cast<size_t>(c)];
          c++;
        }
        if (c == n) break;
      }
      bool full_dim = true;
      for (int c = 0; c < n; c++)
        if (hi[static_cast<size_t>(c)] == lo[static_cast<size_t>(c)]) full_dim = false;
      if (!full_dim) continue;
      Vec plo(static_cast<size_t>(n)), phi(static_cast<size_t>(n));
      for (int c = 0; c < n; c++) {
        plo[static_cast<size_t>(c)] = grids[static_cast<size_t>(c)].front() +
                                      steps[static_cast<size_t>(c)] * Rat(lo[static_cast<size_t>(c)]);
        phi[static_cast<size_t>(c)] = grids[static_cast<size_t>(c)].front() +
                                      steps[static_cast<size_t>(c)] * Rat(hi[static_cast<size_t>(c)]);
      }
      Vec center = scale(add(plo, phi), Rat(1, 2));
      Rat cv = d.q(center);
      if (cv != fn.eval(center)) {
        if (cv > fn.eval(center)) {
          // The center sits above the chord of two opposite corners.
          Rat lhs = (d.q(plo) + d.q(phi)) / Rat(2);
          hard_outcome(rd, OutcomeTag::kReject,
                       JensenWitness{plo, phi, Rat(1, 2), lhs, cv},
                       "cell center above its corner chord");
          return rd;
        }
        rd.failed = true;
        rd.fail_note = "cell center below its ambient functional";
        return rd;
      }
      std::vector<Vec> corners;
      for (unsigned mask = 0; mask < (1u << n); mask++) {
        Vec corner(static_cast<size_t>(n));
        for (int c = 0; c < n; c++)
          corner[static_cast<size_t>(c)] =
              (mask & (1u << c)) ? phi[static_cast<size_t>(c)] : plo[static_cast<size_t>(c)];
        corners.push_back(std::move(corner));
      }
      rd.cells.push_back(CellRecord{box_polyhedron(plo, phi), fn, std::move(corners), center});
    }
  }
  return rd;
}

// A sample point inside an axis box with all coordinate denominators
// coprime to s; used by the integral-mode constant check.
std::optional<Vec> coprime_sample(const Vec& lo, const Vec& hi, const mpz_class& s) {
  for (mpz_class sp = 1; sp <= 1000000; sp++) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), sp.get_mpz_t(), s.get_mpz_t());
    if (g != 1) continue;
    Vec x(lo.size());
    bool ok = true;
    for (size_t c = 0; c < lo.size(); c++) {
      mpz_class p = (lo[c] * Rat(sp)).floor() + 1;
      Rat cand(p, sp);
      if (!(cand < hi[c])) { ok = false; break; }
      x[c] = cand;
    }
    if (ok) return x;
  }
  return std::nullopt;
}

}  // namespace

NdOutcome reconstruct_box(const FunctionOracle& o, const GridSpec& grid, int budget,
                          IntegralityClass mode, const RationalPolyhedron* region) {
  int n = o.dim();
  require(n == 2 || n == 3, ErrorCode::kUnsupported, "grid reconstruction needs n in {2, 3}");
  require(grid.box.dim() == n, ErrorCode::kDimensionMismatch, "grid box dimension mismatch");
  require(static_cast<int>(grid.step.size()) == n, ErrorCode::kInvalidArgument,
          "one step per axis required");
  require(mode != IntegralityClass::kGeneral, ErrorCode::kInvalidArgument,
          "mode must be integral or transintegral");
  if (!region) {
    for (unsigned mask = 0; mask < (1u << n); mask++) {
      Vec corner(static_cast<size_t>(n));
      for (int c = 0; c < n; c++)
        corner[static_cast<size_t>(c)] = (mask & (1u << c)) ? grid.box.sides[static_cast<size_t>(c)].second
                                                            : grid.box.sides[static_cast<size_t>(c)].first;
      require(o.domain().contains(corner), ErrorCode::kDomain, "grid box leaves the oracle domain");
    }
  } else {
    require(region->dim() == n, ErrorCode::kDimensionMismatch, "region dimension mismatch");
  }

  NdDetector d{o, budget, {}};
  std::vector<Rat> steps = grid.step;
  std::string last_note;
  int round = 0;
  for (; round <= 3; round++) {
    RoundData rd = run_round(d, grid.box, steps, mode, region);
    if (rd.hard) {
      rd.hard->queries = d.log;
      rd.hard->rounds_used = round + 1;
      return std::move(*rd.hard);
    }
    if (!rd.failed) {
      PolyhedralFunction f = canonicalize(PolyhedralFunction(n, rd.candidates));
      bool ok = true;
      if (mode == IntegralityClass::kIntegral) {
        for (const auto& fn : f.functionals()) {
          if (fn.constant.is_integer()) continue;
          const CellRecord* home = nullptr;
          for (const auto& cell : rd.cells)
            if (cell.ambient == fn) { home = &cell; break; }
          if (!home) {
            ok = false;
            last_note = "non-integer constant " + fn.constant.str() + " without a certified cell";
            break;
          }
          Vec lo = home->corners.front(), hi = home->corners.back();
          auto x0 = coprime_sample(lo, hi, fn.constant.den());
          require(x0.has_value(), ErrorCode::kInternal, "no coprime sample inside the cell");
          Rat v0 = d.q(*x0);
          if (!group_membership(v0, *x0)) {
            NdOutcome out;
            out.tag = OutcomeTag::kReject;
            out.witness = MembershipWitness{
                *x0, v0,
                "ambient constant " + fn.constant.str() + " is not an integer; " +
                    group_membership_trace(v0, *x0)};
            out.queries = d.log;
            out.rounds_used = round + 1;
            return out;
          }
          ok = false;
          last_note = "non-integer constant " + fn.constant.str() +
                      " but the sampled value stayed in the group";
          break;
        }
      }
      if (ok) {
        const std::pair<const Vec, Rat>* mismatch = nullptr;
        for (const auto& kv : d.log) {
          if (f.eval(kv.first) != kv.second) { mismatch = &kv; break; }
        }
        if (!mismatch) {
          NdOutcome out;
          out.tag = OutcomeTag::kAccept;
          out.reconstruction = NdReconstruction{std::move(f), std::move(rd.cells)};
          out.queries = d.log;
          out.rounds_used = round + 1;
          return out;
        }
        last_note = "assembled function misses the logged query at (" +
                    vec_str(mismatch->first) + ")";
      }
    } else {
      last_note = rd.fail_note;
    }
    for (auto& s : steps) s = s / Rat(2);
  }
  NdOutcome out;
  out.tag = OutcomeTag::kExhausted;
  out.note = "refinement rounds exhausted: " + last_note;
  out.queries = d.log;
  out.rounds_used = round;
  return out;
}

namespace {

// Orthant functionals certifying P's containment: a bounded P uses the
// coordinate box, otherwise some n of P's own constraints with independent
// slopes. Errors when neither works.
std::vector<Vec> orthant_slopes_for(const RationalPolyhedron& p) {
  int n = p.dim();
  if (is_bounded(p)) {
    std::vector<Vec> s;
    for (int i = 0; i < n; i++) s.push_back(basis_vec(n, i));
    return s;
  }
  size_t m = p.halfspaces().size();
  std::vector<int> subset;
  std::vector<Vec> found;
  std::function<bool(size_t)> rec = [&](size_t start) -> bool {
    if (static_cast<int>(subset.size()) == n) {
      Matrix rows;
      for (int i : subset) rows.push_back(p.halfspaces()[static_cast<size_t>(i)].fn.slope);
      if (rank(rows) == n) {
        found = rows;
        return true;
      }
      return false;
    }
    for (size_t i = start; i < m; i++) {
      subset.push_back(static_cast<int>(i));
      if (rec(i + 1)) return true;
      subset.pop_back();
    }
    return false;
  };
  require(rec(0), ErrorCode::kPrecondition,
          "P is not verifiably contained in an affine orthant "
          "(unbounded and no n constraints with independent slopes)");
  return found;
}

bool mixed_sign_direction(const std::vector<Vec>& orthant, const Vec& z) {
  bool pos = false, neg = false;
  for (const auto& mu : orthant) {
    int s = dot(mu, z).sign();
    if (s == 0) return false;
    (s > 0 ? pos : neg) = true;
  }
  return pos && neg;
}

std::vector<Vec> default_directions(const std::vector<Vec>& orthant, int n) {
  std::vector<Vec> chosen;
  Matrix rows;
  auto try_add = [&](const Vec& z) {
    if (static_cast<int>(chosen.size()) == n) return;
    if (!mixed_sign_direction(orthant, z)) return;
    Matrix probe = rows;
    probe.push_back(z);
    if (rank(probe) != static_cast<int>(probe.size())) return;
    rows = std::move(probe);
    chosen.push_back(z);
  };
  for (int i = 0; i < n; i++) {
    Vec z = basis_vec(n, i);
    z = sub(z, basis_vec(n, (i + 1) % n));
    try_add(z);
  }
  // Exhaustive small-integer completion when the defaults degenerate.
  std::vector<long> digits(static_cast<size_t>(n), -3);
  while (static_cast<int>(chosen.size()) < n) {
    Vec z(static_cast<size_t>(n));
    for (int i = 0; i < n; i++) z[static_cast<size_t>(i)] = Rat(digits[static_cast<size_t>(i)]);
    if (!is_zero_vec(z)) try_add(z);
    int c = 0;
    while (c < n && ++digits[static_cast<size_t>(c)] > 3) digits[static_cast<size_t>(c++)] = -3;
    if (c == n) break;
  }
  require(static_cast<int>(chosen.size()) == n, ErrorCode::kPrecondition,
          "no basis of directions satisfies the sign condition");
  return chosen;
}

// P-constraint indices identically zero on R (R nonempty).
std::vector<int> zero_set_on(const RationalPolyhedron& p, const RationalPolyhedron& r) {
  std::vector<int> out;
  auto cs = r.lp_constraints();
  for (size_t k = 0; k < p.halfspaces().size(); k++) {
    LpResult res = lp_maximize(p.dim(), p.halfspaces()[k].fn, cs);
    if (res.status == LpStatus::kOptimal && res.value.is_zero()) out.push_back(static_cast<int>(k));
  }
  return out;
}

RationalPolyhedron intersect(const RationalPolyhedron& a, const RationalPolyhedron& b) {
  std::vector<HalfSpace> hs = a.halfspaces();
  hs.insert(hs.end(), b.halfspaces().begin(), b.halfspaces().end());
  return RationalPolyhedron(a.dim(), std::move(hs));
}

}  // namespace

SlopeBoundReport slope_bound(const PolyhedralFunction& f, const RationalPolyhedron& p,
                             const std::optional<std::vector<Vec>>& directions) {
  int n = p.dim();
  require(n >= 2 && n <= 3, ErrorCode::kUnsupported, "slope_bound needs n in {2, 3}");
  require(f.dim() == n, ErrorCode::kDimensionMismatch, "slope_bound: dimension mismatch");
  require(dimension(p) == n, ErrorCode::kPrecondition,
          "slope_bound needs a full-dimensional nonempty P");
  std::vector<Vec> orthant = orthant_slopes_for(p);

  std::vector<Vec> dirs;
  if (directions) {
    require(static_cast<int>(directions->size()) == n, ErrorCode::kInvalidArgument,
            "need exactly n directions");
    Matrix rows;
    for (const auto& z : *directions) {
      require(mixed_sign_direction(orthant, z), ErrorCode::kPrecondition,
              "supplied direction (" + vec_str(z) + ") violates the sign condition");
      rows.push_back(z);
    }
    require(rank(rows) == n, ErrorCode::kPrecondition, "supplied directions are dependent");
    dirs = *directions;
  } else {
    dirs = default_directions(orthant, n);
  }

  PolyhedralFunction fc = canonicalize(f);

  // Boundary pieces: facet x domain-of-affinity intersections, with their
  // implicit-equality sets (against P) and active functional sets.
  struct Piece {
    std::vector<int> active_fns;
    std::vector<int> zero_constraints;
  };
  std::vector<Piece> pieces;
  for (const auto& facet : facets(p)) {
    if (!facet.proper) continue;
    for (size_t i = 0; i < fc.functionals().size(); i++) {
      RationalPolyhedron r =
          intersect(facet.region, domain_of_affinity(fc, static_cast<int>(i)).region);
      if (is_empty(r)) continue;
      Piece piece;
      piece.zero_constraints = zero_set_on(p, r);
      auto cs = r.lp_constraints();
      for (size_t j = 0; j < fc.functionals().size(); j++) {
        AffineFunctional diff = fc.functionals()[i] - fc.functionals()[j];
        LpResult res = lp_maximize(n, diff, cs);
        if (res.status == LpStatus::kOptimal && res.value.is_zero())
          piece.active_fns.push_back(static_cast<int>(j));
      }
      pieces.push_back(std::move(piece));
    }
  }

  SlopeBoundReport rep;
  for (const auto& z : dirs) {
    bool have_lo = false, have_hi = false;
    Rat lo, hi;
    for (const auto& piece : pieces) {
      bool entry = true, exit = true;
      for (int k : piece.zero_constraints) {
        int s = p.halfspaces()[static_cast<size_t>(k)].fn.slope_dot(z).sign();
        if (s < 0) entry = false;
        if (s > 0) exit = false;
      }
      if (!entry && !exit) continue;
      Rat fwd, bwd;
      bool first = true;
      for (int j : piece.active_fns) {
        Rat vz = fc.functionals()[static_cast<size_t>(j)].slope_dot(z);
        if (first) { fwd = vz; bwd = -vz; }
        else { fwd = max(fwd, vz); bwd = max(bwd, -vz); }
        first = false;
      }
      if (entry) {
        if (!have_lo || fwd < lo) lo = fwd;
        have_lo = true;
      }
      if (exit) {
        Rat v = -bwd;  // -f'(., -z)
        if (!have_hi || v > hi) hi = v;
        have_hi = true;
      }
    }
    require(have_lo && have_hi, ErrorCode::kInternal,
            "no boundary entry/exit pieces for direction (" + vec_str(z) + ")");
    rep.intervals.push_back({z, lo, hi});
  }

  // Canonical functionals ambient on P: a domain of affinity needs a
  // full-dimensional coincidence region, not a mere touching point.
  for (size_t i = 0; i < fc.functionals().size(); i++) {
    RationalPolyhedron coincidence =
        intersect(p, domain_of_affinity(fc, static_cast<int>(i)).region);
    if (dimension(coincidence) != n) continue;
    bool inside = true;
    for (const auto& iv : rep.intervals) {
      Rat v = fc.functionals()[i].slope_dot(iv.direction);
      if (v < iv.lo || v > iv.hi) inside = false;
    }
    rep.ambient_slopes.emplace_back(fc.functionals()[i].slope, inside);
    rep.all_certified = rep.all_certified && inside;
  }
  return rep;
}

namespace {

// Reparameterizes a rational line to a primitive integer direction (a
// positive multiple), so restrictions of transintegral functions have
// integer slopes. The point set is unchanged.
LineParam normalize_direction(const LineParam& line) {
  mpz_class l = 1;
  for (const auto& d : line.direction) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.den().get_mpz_t());
  mpz_class g = 0;
  for (const auto& d : line.direction) {
    mpz_class num = (d * Rat(l)).num();
    mpz_class a = ::abs(num);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  Rat factor(l, g);  // direction' = direction * factor, t' = t / factor
  if (factor == Rat(1)) return line;
  LineParam out = line;
  out.direction = scale(line.direction, factor);
  out.t0 = line.t0 / factor;
  out.t1 = line.t1 / factor;
  return out;
}

std::optional<Rat> line_parameter(const LineParam& line, const Vec& v) {
  int n = static_cast<int>(line.base.size());
  int k = -1;
  for (int i = 0; i < n; i++)
    if (!line.direction[static_cast<size_t>(i)].is_zero()) { k = i; break; }
  if (k < 0) return std::nullopt;
  Rat t = (v[static_cast<size_t>(k)] - line.base[static_cast<size_t>(k)]) /
          line.direction[static_cast<size_t>(k)];
  if (line.at(t) != v) return std::nullopt;
  switch (line.kind) {
    case LineParam::Kind::kFullLine: return t;
    case LineParam::Kind::kRay: return t >= line.t0 ? std::optional<Rat>(t) : std::nullopt;
    case LineParam::Kind::kSegment:
      return (line.t0 <= t && t <= line.t1) ? std::optional<Rat>(t) : std::nullopt;
  }
  return std::nullopt;
}

bool positively_parallel(const Vec& a, const Vec& b) {
  size_t n = a.size();
  for (size_t i = 0; i < n; i++)
    for (size_t j = i + 1; j < n; j++)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return dot(a, b).sign() > 0;
}

}  // namespace

NdOutcome detect_on_skeleton(const FunctionOracle& o, const RationalPolyhedron& p,
                             const std::vector<LineParam>& lines, int budget) {
  int n = o.dim();
  require(p.dim() == n, ErrorCode::kDimensionMismatch, "skeleton: dimension mismatch");
  require(n >= 2 && n <= 3, ErrorCode::kUnsupported, "skeleton detection needs n in {2, 3}");
  require(dimension(p) == n, ErrorCode::kPrecondition,
          "skeleton detection needs a full-dimensional P");
  orthant_slopes_for(p);  // errors when not verifiably orthant-contained

  std::vector<LineParam> norm_lines;
  for (const auto& l : lines) norm_lines.push_back(normalize_direction(l));

  // Line hygiene: interiors inside int(P).
  for (size_t i = 0; i < norm_lines.size(); i++) {
    const LineParam& l = norm_lines[i];
    require(static_cast<int>(l.base.size()) == n, ErrorCode::kDimensionMismatch,
            "line dimension mismatch");
    std::string id = "line " + std::to_string(i);
    switch (l.kind) {
      case LineParam::Kind::kFullLine:
        fail(ErrorCode::kPrecondition,
             id + ": a full line cannot lie inside an orthant-contained polyhedron");
      case LineParam::Kind::kSegment: {
        require(l.t0 < l.t1, ErrorCode::kPrecondition, id + ": degenerate segment");
        require(p.contains(l.at(l.t0)) && p.contains(l.at(l.t1)), ErrorCode::kPrecondition,
                id + ": endpoints leave P");
        require(interior_contains(p, l.at((l.t0 + l.t1) / Rat(2))), ErrorCode::kPrecondition,
                id + ": interior not inside int(P)");
        break;
      }
      case LineParam::Kind::kRay: {
        for (const auto& h : p.halfspaces())
          require(h.fn.slope_dot(l.direction).sign() >= 0, ErrorCode::kPrecondition,
                  id + ": ray direction leaves the recession cone of P");
        require(p.contains(l.at(l.t0)), ErrorCode::kPrecondition, id + ": ray start leaves P");
        require(interior_contains(p, l.at(l.t0 + Rat(1))), ErrorCode::kPrecondition,
                id + ": ray interior not inside int(P)");
        break;
      }
    }
  }

  // (c): every vertex covered by some line.
  for (const auto& v : vertices(p)) {
    bool covered = false;
    for (const auto& l : norm_lines)
      if (line_parameter(l, v)) { covered = true; break; }
    require(covered, ErrorCode::kPrecondition,
            "vertex (" + vec_str(v) + ") is not covered by any line");
  }

  // (d): a translate of every unbounded one-dimensional facet.
  for (const auto& facet : facets(p)) {
    if (!facet.proper) continue;
    if (dimension(facet.region) != 1 || is_bounded(facet.region)) continue;
    Matrix eq_rows;
    for (int k : facet.active) eq_rows.push_back(p.halfspaces()[static_cast<size_t>(k)].fn.slope);
    auto kern = kernel_basis(eq_rows);
    require(kern.size() == 1, ErrorCode::kInternal, "one-dimensional facet without a line hull");
    Vec dir = kern[0];
    Vec p0 = *feasible_point(facet.region);
    // Orient the ray: which side of the hull line stays in the facet.
    bool plus_unbounded = true, minus_unbounded = true;
    for (const auto& h : facet.region.halfspaces()) {
      int s = h.fn.slope_dot(dir).sign();
      if (s < 0) plus_unbounded = false;
      if (s > 0) minus_unbounded = false;
    }
    require(plus_unbounded != minus_unbounded, ErrorCode::kInternal,
            "unbounded facet with ambiguous ray direction");
    if (minus_unbounded) dir = scale(dir, Rat(-1));
    bool matched = false;
    for (const auto& l : norm_lines)
      if (l.kind == LineParam::Kind::kRay && positively_parallel(l.direction, dir)) {
        matched = true;
        break;
      }
    std::ostringstream os;
    os << "unbounded one-dimensional facet through (" << vec_str(p0) << ") with direction ("
       << vec_str(dir) << ") has no ray translate among the lines";
    require(matched, ErrorCode::kPrecondition, os.str());
  }

  // 1-D detection along each supplied line.
  NdDetector d{o, budget, {}};
  std::vector<LineRecord> records;
  for (size_t i = 0; i < norm_lines.size(); i++) {
    const LineParam& l = norm_lines[i];
    Rat t_lo = l.t0;
    Rat t_hi = l.kind == LineParam::Kind::kSegment ? l.t1 : l.t0 + Rat(kRayTruncation);
    FunctionOracle ro = restriction_oracle(d, l, t_lo, t_hi);
    DetectOutcome r = reconstruct_transintegral(ro, t_lo, t_hi, budget);
    std::string id = "line " + std::to_string(i);
    if (r.tag != OutcomeTag::kAccept) {
      NdOutcome out;
      out.tag = r.tag;
      if (r.witness) out.witness = lift_witness(*r.witness, l, id + ": " + line_desc(l));
      out.note = id + " " + std::string(to_string(r.tag)) + ": " + r.note;
      out.queries = d.log;
      records.push_back({l, t_lo, t_hi, std::move(r), id});
      out.lines = std::move(records);
      return out;
    }
    records.push_back({l, t_lo, t_hi, std::move(r), id});
  }

  // Interior box reconstruction.
  Vec c = *relative_interior_point(p);
  Rat r(2);
  for (const auto& h : p.halfspaces()) {
    Rat norm1(0);
    for (const auto& a : h.fn.slope) norm1 += a.abs();
    r = min(r, h.fn.eval(c) / norm1);
  }
  r = r / Rat(2);
  GridSpec grid;
  for (int i = 0; i < n; i++) {
    grid.box.sides.emplace_back(c[static_cast<size_t>(i)] - r, c[static_cast<size_t>(i)] + r);
    grid.step.push_back(r / Rat(2));
  }
  NdOutcome nd = reconstruct_box(o, grid, budget, IntegralityClass::kTransIntegral);
  for (const auto& kv : nd.queries) d.log.emplace(kv.first, kv.second);
  if (nd.tag != OutcomeTag::kAccept) {
    nd.note = "interior reconstruction: " + nd.note;
    nd.queries = d.log;
    nd.lines = std::move(records);
    return nd;
  }
  const PolyhedralFunction& f = nd.reconstruction->function;

  // Restriction consistency on every supplied line.
  for (const auto& rec : records) {
    PolyhedralFunction sym = restrict_line(f, rec.line);
    PolyhedralFunction measured = rec.outcome.reconstruction->to_polyfun();
    if (!equal_on_interval(sym, measured, rec.t_lo, rec.t_hi)) {
      NdOutcome out;
      out.tag = OutcomeTag::kExhausted;
      out.note = rec.tag + ": interior reconstruction restricted to the line does not match "
                 "the line detection";
      out.queries = d.log;
      out.lines = std::move(records);
      return out;
    }
  }

  NdOutcome out;
  out.tag = OutcomeTag::kAccept;
  out.reconstruction = std::move(*nd.reconstruction);
  out.queries = d.log;
  out.lines = std::move(records);
  out.rounds_used = nd.rounds_used;
  return out;
}

}  // namespace polymax
