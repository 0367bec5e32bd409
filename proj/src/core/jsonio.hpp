#pragma once

#include <json.hpp>

#include <string>

#include "core/polyfun.hpp"
#include "core/polyhedron.hpp"
#include "core/rat.hpp"

namespace polymax {

using njson = nlohmann::json;

njson rat_json(const Rat& r);
Rat rat_from_json(const njson& j);

njson vec_json(const Vec& v);
Vec vec_from_json(const njson& j);

njson functional_json(const AffineFunctional& fn);
AffineFunctional functional_from_json(const njson& j);

/// {"n": <int>, "functionals": [{"slope": ["<rat>", ...], "const": "<rat>"}, ...]}
njson function_json(const PolyhedralFunction& f);
PolyhedralFunction function_from_json(const njson& j);

/// {"n": <int>, "halfspaces": [{"slope": [...], "const": "<rat>"}, ...]}
njson polyhedron_json(const RationalPolyhedron& p);
RationalPolyhedron polyhedron_from_json(const njson& j);

/// [["lo","hi"], ...]
njson box_json(const std::vector<std::pair<Rat, Rat>>& sides);
std::vector<std::pair<Rat, Rat>> box_from_json(const njson& j);

njson parse_json(const std::string& text);  // errors with kParse
std::string dumps(const njson& j);          // sorted keys, 2-space indent

}  // namespace polymax
