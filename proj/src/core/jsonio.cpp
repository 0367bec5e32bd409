#include "core/jsonio.hpp"

#include "core/errors.hpp"

namespace polymax {

njson rat_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const njson& j) {
  require(j.is_string(), ErrorCode::kParse, "expected a rational string, got " + j.dump());
  auto r = Rat::parse(j.get<std::string>());
  require(r.has_value(), ErrorCode::kParse, "malformed rational: " + j.get<std::string>());
  return *r;
}

njson vec_json(const Vec& v) {
  njson a = njson::array();
  for (const auto& x : v) a.push_back(rat_json(x));
  return a;
}

Vec vec_from_json(const njson& j) {
  require(j.is_array(), ErrorCode::kParse, "expected an array of rationals");
  Vec v;
  for (const auto& e : j) v.push_back(rat_from_json(e));
  return v;
}

njson functional_json(const AffineFunctional& fn) {
  return njson{{"slope", vec_json(fn.slope)}, {"const", rat_json(fn.constant)}};
}

AffineFunctional functional_from_json(const njson& j) {
  require(j.is_object() && j.contains("slope") && j.contains("const"), ErrorCode::kParse,
          "functional needs \"slope\" and \"const\"");
  return {vec_from_json(j.at("slope")), rat_from_json(j.at("const"))};
}

njson function_json(const PolyhedralFunction& f) {
  njson fns = njson::array();
  for (const auto& fn : f.functionals()) fns.push_back(functional_json(fn));
  return njson{{"n", f.dim()}, {"functionals", fns}};
}

PolyhedralFunction function_from_json(const njson& j) {
  require(j.is_object() && j.contains("n") && j.contains("functionals"), ErrorCode::kParse,
          "function needs \"n\" and \"functionals\"");
  require(j.at("n").is_number_integer(), ErrorCode::kParse, "\"n\" must be an integer");
  int n = j.at("n").get<int>();
  std::vector<AffineFunctional> fns;
  for (const auto& e : j.at("functionals")) fns.push_back(functional_from_json(e));
  require(!fns.empty(), ErrorCode::kParse, "\"functionals\" must be nonempty");
  return PolyhedralFunction(n, std::move(fns));
}

njson polyhedron_json(const RationalPolyhedron& p) {
  njson hs = njson::array();
  for (const auto& h : p.halfspaces()) hs.push_back(functional_json(h.fn));
  return njson{{"n", p.dim()}, {"halfspaces", hs}};
}

RationalPolyhedron polyhedron_from_json(const njson& j) {
  require(j.is_object() && j.contains("n") && j.contains("halfspaces"), ErrorCode::kParse,
          "polyhedron needs \"n\" and \"halfspaces\"");
  require(j.at("n").is_number_integer(), ErrorCode::kParse, "\"n\" must be an integer");
  int n = j.at("n").get<int>();
  std::vector<HalfSpace> hs;
  for (const auto& e : j.at("halfspaces")) hs.push_back({functional_from_json(e)});
  return RationalPolyhedron(n, std::move(hs));
}

njson box_json(const std::vector<std::pair<Rat, Rat>>& sides) {
  njson a = njson::array();
  for (const auto& [lo, hi] : sides) a.push_back(njson::array({rat_json(lo), rat_json(hi)}));
  return a;
}

std::vector<std::pair<Rat, Rat>> box_from_json(const njson& j) {
  require(j.is_array() && !j.empty(), ErrorCode::kParse, "box must be a nonempty array of sides");
  std::vector<std::pair<Rat, Rat>> sides;
  for (const auto& e : j) {
    require(e.is_array() && e.size() == 2, ErrorCode::kParse, "box side must be [lo, hi]");
    sides.emplace_back(rat_from_json(e[0]), rat_from_json(e[1]));
  }
  return sides;
}

njson parse_json(const std::string& text) {
  njson j = njson::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorCode::kParse, "malformed JSON");
  return j;
}

std::string dumps(const njson& j) { return j.dump(2); }

}  // namespace polymax
