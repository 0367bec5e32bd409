#include "core/certificate.hpp"

#include "core/errors.hpp"

namespace polymax {

njson witness_json(const Witness& w) {
  njson j;
  if (const auto* jw = std::get_if<JensenWitness>(&w)) {
    j["kind"] = "jensen";
    j["x"] = vec_json(jw->x);
    j["y"] = vec_json(jw->y);
    j["t"] = rat_json(jw->t);
    j["lhs"] = rat_json(jw->lhs);
    j["rhs"] = rat_json(jw->rhs);
  } else if (const auto* sw = std::get_if<SlopeWitness>(&w)) {
    j["kind"] = "slope";
    j["interval"] = njson::array({rat_json(sw->lo), rat_json(sw->hi)});
    j["slope"] = rat_json(sw->slope);
    if (!sw->where.empty()) j["where"] = sw->where;
  } else if (const auto* mw = std::get_if<MembershipWitness>(&w)) {
    j["kind"] = "membership";
    j["x"] = vec_json(mw->x);
    j["value"] = rat_json(mw->value);
    j["detail"] = mw->detail;
  }
  j["summary"] = witness_summary(w);
  return j;
}

namespace {

njson reconstruction_json(const Reconstruction1D& rec) {
  njson pieces = njson::array();
  for (const auto& p : rec.pieces)
    pieces.push_back(njson{{"slope", p.slope}, {"const", rat_json(p.constant)}});
  njson bps = njson::array();
  for (const auto& b : rec.breakpoints) bps.push_back(rat_json(b));
  return njson{{"pieces", pieces}, {"breakpoints", bps}};
}

njson queries_1d_json(const std::map<Rat, Rat>& log) {
  njson q = njson::array();
  for (const auto& [t, v] : log) q.push_back(njson::array({rat_json(t), rat_json(v)}));
  return q;
}

njson queries_nd_json(const std::map<Vec, Rat, VecLess>& log) {
  njson q = njson::array();
  for (const auto& [p, v] : log) q.push_back(njson::array({vec_json(p), rat_json(v)}));
  return q;
}

}  // namespace

njson certificate_1d(const DetectOutcome& out, const Rat& a, const Rat& b,
                     const std::string& algorithm, njson params) {
  njson cert;
  cert["algorithm"] = algorithm;
  cert["interval"] = njson::array({rat_json(a), rat_json(b)});
  cert["outcome"] = to_string(out.tag);
  cert["params"] = std::move(params);
  cert["promise"] = "convex-on-interval";
  if (out.reconstruction) {
    njson rec = reconstruction_json(*out.reconstruction);
    cert["pieces"] = rec["pieces"];
    cert["breakpoints"] = rec["breakpoints"];
  }
  cert["queries"] = queries_1d_json(out.queries);
  if (out.witness) cert["witness"] = witness_json(*out.witness);
  if (!out.note.empty()) cert["note"] = out.note;
  return cert;
}

njson certificate_nd(const NdOutcome& out, const GridSpec* grid,
                     const std::string& algorithm, njson params) {
  njson cert;
  cert["algorithm"] = algorithm;
  cert["outcome"] = to_string(out.tag);
  cert["params"] = std::move(params);
  cert["promise"] = algorithm == "detect-tropical"
                        ? "convex-on-region; ray evidence covers the supplied centers only"
                        : "convex-on-region";
  if (grid) {
    njson steps = njson::array();
    for (const auto& s : grid->step) steps.push_back(rat_json(s));
    cert["grid"] = njson{{"box", box_json(grid->box.sides)}, {"step", steps}};
  }
  if (out.reconstruction) {
    cert["function"] = function_json(out.reconstruction->function);
    njson cells = njson::array();
    for (const auto& c : out.reconstruction->cells)
      cells.push_back(njson{{"region", polyhedron_json(c.region)},
                            {"ambient", functional_json(c.ambient)}});
    cert["cells"] = cells;
  }
  if (!out.lines.empty()) {
    njson lines = njson::array();
    for (const auto& rec : out.lines) {
      njson l;
      l["base"] = vec_json(rec.line.base);
      l["direction"] = vec_json(rec.line.direction);
      l["t"] = njson::array({rat_json(rec.t_lo), rat_json(rec.t_hi)});
      l["tag"] = rec.tag;
      l["outcome"] = to_string(rec.outcome.tag);
      if (rec.outcome.reconstruction) {
        njson r = reconstruction_json(*rec.outcome.reconstruction);
        l["pieces"] = r["pieces"];
        l["breakpoints"] = r["breakpoints"];
      }
      lines.push_back(std::move(l));
    }
    cert["lines"] = lines;
  }
  if (out.rounds_used > 0) cert["rounds"] = out.rounds_used;
  cert["queries"] = queries_nd_json(out.queries);
  if (out.witness) cert["witness"] = witness_json(*out.witness);
  if (!out.note.empty()) cert["note"] = out.note;
  return cert;
}

namespace {

struct LoggedQuery {
  Vec point;
  Rat value;
};

std::vector<LoggedQuery> parse_queries(const njson& cert) {
  std::vector<LoggedQuery> out;
  if (!cert.contains("queries")) return out;
  for (const auto& q : cert.at("queries")) {
    require(q.is_array() && q.size() == 2, ErrorCode::kParse, "query entry must be [point, value]");
    LoggedQuery lq;
    if (q[0].is_array())
      lq.point = vec_from_json(q[0]);
    else
      lq.point = {rat_from_json(q[0])};
    lq.value = rat_from_json(q[1]);
    out.push_back(std::move(lq));
  }
  return out;
}

// Accept-side evaluator rebuilt from the certificate: 1-D pieces or an n-D
// function, whichever is present.
std::optional<PolyhedralFunction> cert_function(const njson& cert) {
  if (cert.contains("function")) return function_from_json(cert.at("function"));
  if (cert.contains("pieces")) {
    std::vector<AffineFunctional> lines;
    for (const auto& p : cert.at("pieces")) {
      require(p.contains("slope") && p.contains("const"), ErrorCode::kParse,
              "piece needs slope and const");
      lines.push_back({{Rat(p.at("slope").get<long>())}, rat_from_json(p.at("const"))});
    }
    if (lines.empty()) return std::nullopt;
    return PolyhedralFunction(1, std::move(lines));
  }
  return std::nullopt;
}

}  // namespace

ReplayReport verify_certificate(const njson& cert, const FunctionOracle& o) {
  require(cert.is_object() && cert.contains("outcome"), ErrorCode::kParse,
          "certificate needs an \"outcome\"");
  ReplayReport rep;
  bool accept = cert.at("outcome").get<std::string>() == "accept";
  std::optional<PolyhedralFunction> f = accept ? cert_function(cert) : std::nullopt;
  for (const auto& lq : parse_queries(cert)) {
    rep.replayed++;
    Rat actual = o.query(lq.point);
    bool bad = actual != lq.value;
    if (!bad && f && static_cast<int>(lq.point.size()) == f->dim())
      bad = f->eval(lq.point) != lq.value;
    if (bad) {
      rep.mismatches++;
      if (rep.first_mismatch.empty())
        rep.first_mismatch = "(" + vec_str(lq.point) + "): logged " + lq.value.str() +
                             ", oracle " + actual.str();
    }
  }
  rep.ok = rep.mismatches == 0;
  return rep;
}

njson replay_report_json(const ReplayReport& r) {
  njson j;
  j["ok"] = r.ok;
  j["replayed"] = r.replayed;
  j["mismatches"] = r.mismatches;
  if (!r.first_mismatch.empty()) j["first_mismatch"] = r.first_mismatch;
  return j;
}

}  // namespace polymax
