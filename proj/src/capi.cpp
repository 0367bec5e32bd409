#include "polymax.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include "core/certificate.hpp"
#include "core/detect1d.hpp"
#include "core/detectnd.hpp"
#include "core/errors.hpp"
#include "core/jsonio.hpp"
#include "core/oracle.hpp"
#include "core/polyfun.hpp"
#include "core/polyhedron.hpp"
#include "core/tropical.hpp"

using namespace polymax;

struct pm_function {
  PolyhedralFunction fn;
};
struct pm_polyhedron {
  RationalPolyhedron poly;
};
struct pm_oracle {
  FunctionOracle oracle;
};
struct pm_outcome {
  int tag;
  njson cert;
  std::optional<PolyhedralFunction> fn;
};

namespace {

thread_local std::string g_last_error;

pm_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kParse: return PM_ERR_PARSE;
    case ErrorCode::kDimensionMismatch: return PM_ERR_DIMENSION;
    case ErrorCode::kDomain: return PM_ERR_DOMAIN;
    case ErrorCode::kPrecondition: return PM_ERR_PRECONDITION;
    case ErrorCode::kUnknownName: return PM_ERR_UNKNOWN_NAME;
    case ErrorCode::kInvalidArgument: return PM_ERR_INVALID_ARGUMENT;
    case ErrorCode::kUnsupported: return PM_ERR_UNSUPPORTED;
    case ErrorCode::kInternal: return PM_ERR_INTERNAL;
  }
  return PM_ERR_INTERNAL;
}

template <typename F>
pm_status wrap(F&& body) {
  try {
    body();
    return PM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Rat parse_rat_arg(const char* s, const char* what) {
  require(s != nullptr, ErrorCode::kInvalidArgument, std::string(what) + " is null");
  auto r = Rat::parse(s);
  require(r.has_value(), ErrorCode::kParse,
          std::string("malformed rational in ") + what + ": " + s);
  return *r;
}

Vec parse_vec_arg(const char* s, const char* what) {
  require(s != nullptr, ErrorCode::kInvalidArgument, std::string(what) + " is null");
  auto v = parse_vec(s);
  require(v.has_value(), ErrorCode::kParse,
          std::string("malformed vector in ") + what + ": " + s);
  return *v;
}

Box parse_box_arg(const char* s) {
  require(s != nullptr, ErrorCode::kInvalidArgument, "box is null");
  return Box{box_from_json(parse_json(s))};
}

njson convexity_report_json(const ConvexityReport& rep) {
  njson j;
  j["pass"] = rep.pass;
  j["queries_used"] = rep.queries_used;
  j["sample"] = rep.sample_description;
  if (rep.witness) {
    const auto& [x, y, t] = *rep.witness;
    j["witness"] = njson{{"x", vec_json(x)},
                         {"y", vec_json(y)},
                         {"t", rat_json(t)},
                         {"lhs", rat_json(rep.witness_lhs)},
                         {"rhs", rat_json(rep.witness_rhs)}};
  }
  return j;
}

pm_outcome* make_outcome_1d(const DetectOutcome& out, const Rat& a, const Rat& b,
                            const std::string& algorithm, njson params) {
  pm_outcome* oc = new pm_outcome;
  oc->tag = static_cast<int>(out.tag);
  oc->cert = certificate_1d(out, a, b, algorithm, std::move(params));
  if (out.reconstruction) oc->fn = out.reconstruction->to_polyfun();
  return oc;
}

pm_outcome* make_outcome_nd(const NdOutcome& out, const GridSpec* grid,
                            const std::string& algorithm, njson params) {
  pm_outcome* oc = new pm_outcome;
  oc->tag = static_cast<int>(out.tag);
  oc->cert = certificate_nd(out, grid, algorithm, std::move(params));
  if (out.reconstruction) oc->fn = out.reconstruction->function;
  return oc;
}

}  // namespace

extern "C" {

const char* pm_version(void) { return "polymax 1.0.0"; }

const char* pm_last_error(void) { return g_last_error.c_str(); }

void pm_string_free(char* s) { std::free(s); }

pm_status pm_rat_add(const char* a, const char* b, char** out) {
  return wrap([&] {
    *out = dup_string((parse_rat_arg(a, "a") + parse_rat_arg(b, "b")).str());
  });
}

pm_status pm_rat_cmp(const char* a, const char* b, int* out) {
  return wrap([&] {
    Rat ra = parse_rat_arg(a, "a"), rb = parse_rat_arg(b, "b");
    *out = ra < rb ? -1 : (ra == rb ? 0 : 1);
  });
}

/* ---- functions ---- */

pm_status pm_function_parse(const char* json, pm_function** out) {
  return wrap([&] {
    require(json && out, ErrorCode::kInvalidArgument, "null argument");
    *out = new pm_function{function_from_json(parse_json(json))};
  });
}

char* pm_function_to_json(const pm_function* f) {
  return dup_string(dumps(function_json(f->fn)));
}

void pm_function_free(pm_function* f) { delete f; }

int pm_function_dim(const pm_function* f) { return f->fn.dim(); }

pm_status pm_function_eval(const pm_function* f, const char* point, char** value_out) {
  return wrap([&] {
    *value_out = dup_string(f->fn.eval(parse_vec_arg(point, "point")).str());
  });
}

pm_status pm_function_canonicalize(const pm_function* f, pm_function** out) {
  return wrap([&] { *out = new pm_function{canonicalize(f->fn)}; });
}

pm_status pm_function_classify(const pm_function* f, char** class_out) {
  return wrap([&] { *class_out = dup_string(to_string(classify(f->fn))); });
}

pm_status pm_function_trop_add(const pm_function* f, const pm_function* g, pm_function** out) {
  return wrap([&] { *out = new pm_function{trop_add(f->fn, g->fn)}; });
}

pm_status pm_function_trop_mul(const pm_function* f, const pm_function* g, pm_function** out) {
  return wrap([&] { *out = new pm_function{trop_mul(f->fn, g->fn)}; });
}

pm_status pm_function_restrict(const pm_function* f, const char* base, const char* direction,
                               pm_function** out) {
  return wrap([&] {
    LineParam line = LineParam::full(parse_vec_arg(base, "base"),
                                     parse_vec_arg(direction, "direction"));
    *out = new pm_function{restrict_line(f->fn, line)};
  });
}

pm_status pm_function_dir_deriv(const pm_function* f, const char* x, const char* z,
                                char** value_out) {
  return wrap([&] {
    *value_out =
        dup_string(dir_deriv(f->fn, parse_vec_arg(x, "x"), parse_vec_arg(z, "z")).str());
  });
}

pm_status pm_function_support_at(const pm_function* f, const char* x,
                                 char** functional_json_out) {
  return wrap([&] {
    *functional_json_out =
        dup_string(dumps(functional_json(support_at(f->fn, parse_vec_arg(x, "x")))));
  });
}

pm_status pm_function_domains(const pm_function* f, char** json_out) {
  return wrap([&] {
    njson out = njson::array();
    for (size_t i = 0; i < f->fn.functionals().size(); i++) {
      DomainOfAffinity d = domain_of_affinity(f->fn, static_cast<int>(i));
      out.push_back(njson{{"functional", functional_json(d.functional)},
                          {"region", polyhedron_json(d.region)}});
    }
    *json_out = dup_string(dumps(out));
  });
}

pm_status pm_function_is_tropical(const pm_function* f, int* out) {
  return wrap([&] { *out = is_tropical_polynomial(f->fn) ? 1 : 0; });
}

pm_status pm_function_tropical_restrictions(const pm_function* f, const char* center,
                                            char** json_out) {
  return wrap([&] {
    TropicalRestrictions r =
        restrict_to_tropical_line(f->fn, parse_vec_arg(center, "center"));
    njson out{{"down", function_json(r.down)},
              {"left", function_json(r.left)},
              {"diag", function_json(r.diag)}};
    *json_out = dup_string(dumps(out));
  });
}

pm_status pm_function_pieces1d(const pm_function* f, char** json_out) {
  return wrap([&] {
    Pieces1D p = pieces_1d(f->fn);
    njson lines = njson::array();
    for (const auto& l : p.lines) lines.push_back(functional_json(l));
    njson bps = njson::array();
    for (const auto& b : p.breakpoints) bps.push_back(rat_json(b));
    *json_out = dup_string(dumps(njson{{"lines", lines}, {"breakpoints", bps}}));
  });
}

pm_status pm_function_cells2d(const pm_function* f, const char* box_json, char** json_out) {
  return wrap([&] {
    require(f->fn.dim() == 2, ErrorCode::kDimensionMismatch, "cells2d needs a 2-D function");
    Box box = parse_box_arg(box_json);
    require(box.dim() == 2, ErrorCode::kDimensionMismatch, "cells2d needs a 2-D box");
    PolyhedralFunction fc = canonicalize(f->fn);
    std::vector<HalfSpace> box_hs;
    for (int i = 0; i < 2; i++) {
      box_hs.push_back({{basis_vec(2, i), -box.sides[static_cast<size_t>(i)].first}});
      box_hs.push_back(
          {{scale(basis_vec(2, i), Rat(-1)), box.sides[static_cast<size_t>(i)].second}});
    }
    njson cells = njson::array();
    for (size_t i = 0; i < fc.functionals().size(); i++) {
      DomainOfAffinity d = domain_of_affinity(fc, static_cast<int>(i));
      std::vector<HalfSpace> hs = d.region.halfspaces();
      hs.insert(hs.end(), box_hs.begin(), box_hs.end());
      RationalPolyhedron clipped(2, std::move(hs));
      if (dimension(clipped) != 2) continue;
      std::vector<Vec> vs = vertices(clipped);
      // Exact counterclockwise order around the vertex centroid.
      Vec c = zero_vec(2);
      for (const auto& v : vs) c = add(c, v);
      c = scale(c, Rat(1, static_cast<long>(vs.size())));
      auto lower_half = [&](const Vec& v) {
        Vec dlt = sub(v, c);
        return (dlt[1] < Rat(0) || (dlt[1].is_zero() && dlt[0] < Rat(0))) ? 1 : 0;
      };
      std::sort(vs.begin(), vs.end(), [&](const Vec& a, const Vec& b) {
        int ha = lower_half(a), hb = lower_half(b);
        if (ha != hb) return ha < hb;
        Vec da = sub(a, c), db = sub(b, c);
        Rat cross = da[0] * db[1] - da[1] * db[0];
        if (!cross.is_zero()) return cross.sign() > 0;
        return lex_compare(a, b) < 0;
      });
      njson poly = njson::array();
      for (const auto& v : vs) poly.push_back(vec_json(v));
      cells.push_back(
          njson{{"ambient", functional_json(fc.functionals()[i])}, {"vertices", poly}});
    }
    *json_out = dup_string(dumps(cells));
  });
}

/* ---- polyhedra ---- */

pm_status pm_polyhedron_parse(const char* json, pm_polyhedron** out) {
  return wrap([&] {
    require(json && out, ErrorCode::kInvalidArgument, "null argument");
    *out = new pm_polyhedron{polyhedron_from_json(parse_json(json))};
  });
}

char* pm_polyhedron_to_json(const pm_polyhedron* p) {
  return dup_string(dumps(polyhedron_json(p->poly)));
}

void pm_polyhedron_free(pm_polyhedron* p) { delete p; }

pm_status pm_polyhedron_contains(const pm_polyhedron* p, const char* point, int* out) {
  return wrap([&] { *out = p->poly.contains(parse_vec_arg(point, "point")) ? 1 : 0; });
}

pm_status pm_polyhedron_interior_contains(const pm_polyhedron* p, const char* point, int* out) {
  return wrap(
      [&] { *out = interior_contains(p->poly, parse_vec_arg(point, "point")) ? 1 : 0; });
}

pm_status pm_polyhedron_facets(const pm_polyhedron* p, char** json_out) {
  return wrap([&] {
    njson out = njson::array();
    for (const auto& facet : facets(p->poly)) {
      njson f;
      f["active"] = facet.active;
      f["proper"] = facet.proper;
      f["region"] = polyhedron_json(facet.region);
      f["dimension"] = dimension(facet.region);
      out.push_back(std::move(f));
    }
    *json_out = dup_string(dumps(out));
  });
}

pm_status pm_polyhedron_vertices(const pm_polyhedron* p, char** json_out) {
  return wrap([&] {
    njson out = njson::array();
    for (const auto& v : vertices(p->poly)) out.push_back(vec_json(v));
    *json_out = dup_string(dumps(out));
  });
}

pm_status pm_polyhedron_is_affine_orthant(const pm_polyhedron* p, int* out) {
  return wrap([&] { *out = is_affine_orthant(p->poly) ? 1 : 0; });
}

/* ---- oracles ---- */

pm_status pm_oracle_builtin(const char* name, pm_oracle** out) {
  return wrap([&] {
    require(name && out, ErrorCode::kInvalidArgument, "null argument");
    *out = new pm_oracle{builtin_oracle(name)};
  });
}

pm_status pm_oracle_from_function(const pm_function* f, const pm_polyhedron* domain,
                                  pm_oracle** out) {
  return wrap([&] {
    require(f && out, ErrorCode::kInvalidArgument, "null argument");
    *out = new pm_oracle{domain ? from_polyfun(f->fn, domain->poly) : from_polyfun(f->fn)};
  });
}

void pm_oracle_free(pm_oracle* o) { delete o; }

int pm_oracle_dim(const pm_oracle* o) { return o->oracle.dim(); }

pm_status pm_oracle_query(pm_oracle* o, const char* point, char** value_out) {
  return wrap([&] {
    *value_out = dup_string(o->oracle.query(parse_vec_arg(point, "point")).str());
  });
}

long long pm_oracle_query_count(const pm_oracle* o) { return o->oracle.query_count(); }

pm_status pm_oracle_jensen_box(pm_oracle* o, const char* box_json, const char* resolution,
                               const char* ts, char** report_json, int* pass_out) {
  return wrap([&] {
    Box box = parse_box_arg(box_json);
    Rat res = parse_rat_arg(resolution, "resolution");
    Vec tvals = parse_vec_arg(ts ? ts : "1/4,1/2,3/4", "ts");
    int n = box.dim();
    require(n == o->oracle.dim(), ErrorCode::kDimensionMismatch, "box dimension mismatch");
    // All pairs of grid points sharing an axis-parallel grid line.
    std::vector<std::vector<Rat>> grids;
    for (int i = 0; i < n; i++) grids.push_back(box_axis_grid(box, i, res));
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int axis = 0; axis < n; axis++) {
      std::vector<size_t> idx(static_cast<size_t>(n), 0);
      while (true) {
        const auto& line = grids[static_cast<size_t>(axis)];
        for (size_t a = 0; a < line.size(); a++) {
          for (size_t b = a + 1; b < line.size(); b++) {
            Vec pa(static_cast<size_t>(n)), pb(static_cast<size_t>(n));
            for (int c = 0; c < n; c++) {
              Rat v = c == axis
                          ? line[a]
                          : grids[static_cast<size_t>(c)][idx[static_cast<size_t>(c)]];
              pa[static_cast<size_t>(c)] = v;
              pb[static_cast<size_t>(c)] = c == axis ? line[b] : v;
            }
            pairs.emplace_back(std::move(pa), std::move(pb));
          }
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
    require(pairs.size() * tvals.size() <= 500000, ErrorCode::kInvalidArgument,
            "jensen sample too large; coarsen the resolution");
    ConvexityReport rep = jensen_check(o->oracle, pairs, tvals);
    if (report_json) *report_json = dup_string(dumps(convexity_report_json(rep)));
    if (pass_out) *pass_out = rep.pass ? 1 : 0;
  });
}

pm_status pm_oracle_lipschitz(pm_oracle* o, const char* box_json, const char* resolution,
                              char** value_out) {
  return wrap([&] {
    Rat v = lipschitz_estimate(o->oracle, parse_box_arg(box_json),
                               parse_rat_arg(resolution, "resolution"));
    *value_out = dup_string(v.str());
  });
}

/* ---- detectors ---- */

pm_status pm_detect1d(pm_oracle* o, const char* a, const char* b, int budget,
                      pm_outcome** out) {
  return wrap([&] {
    Rat ra = parse_rat_arg(a, "interval start"), rb = parse_rat_arg(b, "interval end");
    DetectOutcome r = reconstruct_transintegral(o->oracle, ra, rb, budget);
    *out = make_outcome_1d(r, ra, rb, "detect1d", njson{{"budget", budget}});
  });
}

pm_status pm_detect_integral(pm_oracle* o, const char* a, const char* b, int budget,
                             int samples, pm_outcome** out) {
  return wrap([&] {
    Rat ra = parse_rat_arg(a, "interval start"), rb = parse_rat_arg(b, "interval end");
    DetectOutcome r = detect_integral_values(o->oracle, ra, rb, budget, samples);
    *out = make_outcome_1d(r, ra, rb, "detect-integral",
                           njson{{"budget", budget}, {"samples", samples}});
  });
}

pm_status pm_detectnd(pm_oracle* o, const char* box_json, const char* step, int budget,
                      int integral_mode, pm_outcome** out) {
  return wrap([&] {
    GridSpec grid;
    grid.box = parse_box_arg(box_json);
    Rat s = parse_rat_arg(step, "step");
    for (int i = 0; i < grid.box.dim(); i++) grid.step.push_back(s);
    NdOutcome r = reconstruct_box(o->oracle, grid, budget,
                                  integral_mode ? IntegralityClass::kIntegral
                                                : IntegralityClass::kTransIntegral);
    *out = make_outcome_nd(r, &grid, "detectnd",
                           njson{{"budget", budget},
                                 {"step", s.str()},
                                 {"mode", integral_mode ? "integral" : "transintegral"}});
  });
}

pm_status pm_detect_skeleton(pm_oracle* o, const pm_polyhedron* p, const char* lines_json,
                             int budget, pm_outcome** out) {
  return wrap([&] {
    require(lines_json, ErrorCode::kInvalidArgument, "lines are null");
    njson spec = parse_json(lines_json);
    require(spec.is_array() && !spec.empty(), ErrorCode::kParse,
            "lines must be a nonempty array");
    std::vector<LineParam> lines;
    for (const auto& l : spec) {
      require(l.contains("base") && l.contains("direction") && l.contains("kind"),
              ErrorCode::kParse, "line needs base, direction, kind");
      Vec base = parse_vec_arg(l.at("base").get<std::string>().c_str(), "line base");
      Vec dir = parse_vec_arg(l.at("direction").get<std::string>().c_str(), "line direction");
      std::string kind = l.at("kind").get<std::string>();
      Rat t0 = l.contains("t0")
                   ? parse_rat_arg(l.at("t0").get<std::string>().c_str(), "t0")
                   : Rat(0);
      if (kind == "segment") {
        require(l.contains("t1"), ErrorCode::kParse, "segment needs t1");
        Rat t1 = parse_rat_arg(l.at("t1").get<std::string>().c_str(), "t1");
        lines.push_back(LineParam::segment(base, dir, t0, t1));
      } else if (kind == "ray") {
        lines.push_back(LineParam::ray(base, dir, t0));
      } else {
        fail(ErrorCode::kParse, "unknown line kind: " + kind);
      }
    }
    NdOutcome r = detect_on_skeleton(o->oracle, p->poly, lines, budget);
    *out = make_outcome_nd(r, nullptr, "skeleton",
                           njson{{"budget", budget},
                                 {"polyhedron", polyhedron_json(p->poly)},
                                 {"ray_truncation", kRayTruncation}});
  });
}

pm_status pm_detect_tropical(pm_oracle* o, const char* box_json, const char* centers_json,
                             const char* ray_length, const char* step, int budget,
                             pm_outcome** out) {
  return wrap([&] {
    Box box = parse_box_arg(box_json);
    require(centers_json, ErrorCode::kInvalidArgument, "centers are null");
    njson cj = parse_json(centers_json);
    require(cj.is_array() && !cj.empty(), ErrorCode::kParse,
            "centers must be a nonempty array");
    std::vector<Vec> centers;
    for (const auto& c : cj)
      centers.push_back(parse_vec_arg(c.get<std::string>().c_str(), "center"));
    Rat len = parse_rat_arg(ray_length, "ray length");
    Rat s = parse_rat_arg(step, "step");
    NdOutcome r = detect_tropical(o->oracle, box, centers, len, budget, s);
    GridSpec grid{box, {s, s}};
    Vec c0 = centers[0];
    for (const auto& c : centers)
      if (lex_compare(c, c0) < 0) c0 = c;
    *out = make_outcome_nd(r, &grid, "detect-tropical",
                           njson{{"budget", budget},
                                 {"ray_length", len.str()},
                                 {"step", s.str()},
                                 {"centers", cj},
                                 {"designated_center", vec_json(c0)}});
  });
}

pm_status pm_slope_bound(const pm_function* f, const pm_polyhedron* p,
                         const char* directions_json, char** report_json,
                         int* certified_out) {
  return wrap([&] {
    std::optional<std::vector<Vec>> dirs;
    if (directions_json) {
      njson dj = parse_json(directions_json);
      require(dj.is_array(), ErrorCode::kParse, "directions must be an array");
      std::vector<Vec> ds;
      for (const auto& d : dj)
        ds.push_back(parse_vec_arg(d.get<std::string>().c_str(), "direction"));
      dirs = std::move(ds);
    }
    SlopeBoundReport rep = slope_bound(f->fn, p->poly, dirs);
    njson j;
    njson ivs = njson::array();
    for (const auto& iv : rep.intervals)
      ivs.push_back(njson{{"direction", vec_json(iv.direction)},
                          {"lo", rat_json(iv.lo)},
                          {"hi", rat_json(iv.hi)}});
    j["intervals"] = ivs;
    njson slopes = njson::array();
    for (const auto& [slope, inside] : rep.ambient_slopes)
      slopes.push_back(njson{{"slope", vec_json(slope)}, {"within_bounds", inside}});
    j["ambient_slopes"] = slopes;
    j["certified"] = rep.all_certified;
    if (report_json) *report_json = dup_string(dumps(j));
    if (certified_out) *certified_out = rep.all_certified ? 1 : 0;
  });
}

int pm_outcome_tag(const pm_outcome* oc) { return oc->tag; }

char* pm_outcome_certificate(const pm_outcome* oc) { return dup_string(dumps(oc->cert)); }

pm_status pm_outcome_function(const pm_outcome* oc, pm_function** out) {
  return wrap([&] {
    require(oc->fn.has_value(), ErrorCode::kPrecondition, "outcome carries no reconstruction");
    *out = new pm_function{*oc->fn};
  });
}

void pm_outcome_free(pm_outcome* oc) { delete oc; }

pm_status pm_verify_certificate(const char* cert_json, pm_oracle* o, char** report_json,
                                int* ok_out) {
  return wrap([&] {
    require(cert_json, ErrorCode::kInvalidArgument, "certificate is null");
    ReplayReport rep = verify_certificate(parse_json(cert_json), o->oracle);
    if (report_json) *report_json = dup_string(dumps(replay_report_json(rep)));
    if (ok_out) *ok_out = rep.ok ? 1 : 0;
  });
}

}  // extern "C"
