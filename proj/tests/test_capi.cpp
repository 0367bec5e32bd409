// Exercises the shared-library C surface end to end: handles, status codes,
// string formats, detector outcomes, and certificate replay.
#include <doctest.h>

#include <string>

#include "polymax.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  pm_string_free(s);
  return out;
}

struct Fn {
  pm_function* p = nullptr;
  ~Fn() { pm_function_free(p); }
};
struct Poly {
  pm_polyhedron* p = nullptr;
  ~Poly() { pm_polyhedron_free(p); }
};
struct Oracle {
  pm_oracle* p = nullptr;
  ~Oracle() { pm_oracle_free(p); }
};
struct Outcome {
  pm_outcome* p = nullptr;
  ~Outcome() { pm_outcome_free(p); }
};

const char* kDemoFn =
    R"({"n": 2, "functionals": [{"slope": ["1","1"], "const": "0"},
                                {"slope": ["2","0"], "const": "-1"},
                                {"slope": ["0","0"], "const": "0"}]})";

}  // namespace

TEST_CASE("c api: version, rational helpers, error reporting") {
  CHECK(std::string(pm_version()).find("polymax") == 0);
  char* s = nullptr;
  REQUIRE(pm_rat_add("1/3", "1/6", &s) == PM_OK);
  CHECK(take(s) == "1/2");
  int c = 0;
  REQUIRE(pm_rat_cmp("2/4", "1/2", &c) == PM_OK);
  CHECK(c == 0);
  CHECK(pm_rat_add("x", "0", &s) == PM_ERR_PARSE);
  CHECK(std::string(pm_last_error()).find("malformed") != std::string::npos);
}

TEST_CASE("c api: function lifecycle and operations") {
  Fn f;
  REQUIRE(pm_function_parse(kDemoFn, &f.p) == PM_OK);
  CHECK(pm_function_dim(f.p) == 2);

  char* v = nullptr;
  REQUIRE(pm_function_eval(f.p, "1,2", &v) == PM_OK);
  CHECK(take(v) == "3");
  CHECK(pm_function_eval(f.p, "1", &v) == PM_ERR_DIMENSION);
  CHECK(pm_function_eval(f.p, "1,zz", &v) == PM_ERR_PARSE);

  char* cls = nullptr;
  REQUIRE(pm_function_classify(f.p, &cls) == PM_OK);
  CHECK(take(cls) == "integral");

  Fn canon;
  REQUIRE(pm_function_canonicalize(f.p, &canon.p) == PM_OK);
  std::string json1 = take(pm_function_to_json(canon.p));
  Fn reparsed;
  REQUIRE(pm_function_parse(json1.c_str(), &reparsed.p) == PM_OK);
  Fn canon2;
  REQUIRE(pm_function_canonicalize(reparsed.p, &canon2.p) == PM_OK);
  CHECK(take(pm_function_to_json(canon2.p)) == json1);

  char* dderiv = nullptr;
  REQUIRE(pm_function_dir_deriv(f.p, "0,0", "1,-1", &dderiv) == PM_OK);
  CHECK(take(dderiv) == "0");
  REQUIRE(pm_function_dir_deriv(f.p, "1,0", "1,0", &dderiv) == PM_OK);
  CHECK(take(dderiv) == "2");

  Fn r;
  REQUIRE(pm_function_restrict(f.p, "0,0", "1,1", &r.p) == PM_OK);
  CHECK(pm_function_dim(r.p) == 1);

  char* doms = nullptr;
  REQUIRE(pm_function_domains(f.p, &doms) == PM_OK);
  CHECK(take(doms).find("region") != std::string::npos);

  int trop = -1;
  REQUIRE(pm_function_is_tropical(f.p, &trop) == PM_OK);
  CHECK(trop == 1);

  char* pieces = nullptr;
  REQUIRE(pm_function_pieces1d(r.p, &pieces) == PM_OK);
  CHECK(take(pieces).find("breakpoints") != std::string::npos);

  char* cells = nullptr;
  REQUIRE(pm_function_cells2d(f.p, R"([["-2","2"],["-2","2"]])", &cells) == PM_OK);
  CHECK(take(cells).find("vertices") != std::string::npos);
}

TEST_CASE("c api: polyhedra") {
  Poly p;
  const char* tri =
      R"({"n": 2, "halfspaces": [{"slope": ["1","0"], "const": "0"},
                                 {"slope": ["0","1"], "const": "0"},
                                 {"slope": ["-1","-1"], "const": "1"}]})";
  REQUIRE(pm_polyhedron_parse(tri, &p.p) == PM_OK);
  int in = 0;
  REQUIRE(pm_polyhedron_contains(p.p, "1/4,1/4", &in) == PM_OK);
  CHECK(in == 1);
  REQUIRE(pm_polyhedron_interior_contains(p.p, "0,1/2", &in) == PM_OK);
  CHECK(in == 0);
  char* verts = nullptr;
  REQUIRE(pm_polyhedron_vertices(p.p, &verts) == PM_OK);
  CHECK(take(verts).find("\"1\"") != std::string::npos);
  char* facets = nullptr;
  REQUIRE(pm_polyhedron_facets(p.p, &facets) == PM_OK);
  CHECK(take(facets).find("proper") != std::string::npos);
  int orth = -1;
  REQUIRE(pm_polyhedron_is_affine_orthant(p.p, &orth) == PM_OK);
  CHECK(orth == 0);
}

TEST_CASE("c api: oracles, jensen, lipschitz") {
  Oracle sq;
  REQUIRE(pm_oracle_builtin("square", &sq.p) == PM_OK);
  char* v = nullptr;
  REQUIRE(pm_oracle_query(sq.p, "3/2", &v) == PM_OK);
  CHECK(take(v) == "9/4");
  CHECK(pm_oracle_query_count(sq.p) == 1);
  pm_oracle* bad = nullptr;
  CHECK(pm_oracle_builtin("nope", &bad) == PM_ERR_UNKNOWN_NAME);

  Fn f;
  REQUIRE(pm_function_parse(kDemoFn, &f.p) == PM_OK);
  Oracle fo;
  REQUIRE(pm_oracle_from_function(f.p, nullptr, &fo.p) == PM_OK);
  int pass = 0;
  char* rep = nullptr;
  REQUIRE(pm_oracle_jensen_box(fo.p, R"([["-1","1"],["-1","1"]])", "1/2", "1/4,1/2,3/4",
                               &rep, &pass) == PM_OK);
  CHECK(pass == 1);
  CHECK(take(rep).find("\"pass\": true") != std::string::npos);

  Oracle saw;
  REQUIRE(pm_oracle_builtin("sawtooth-nonconvex", &saw.p) == PM_OK);
  REQUIRE(pm_oracle_jensen_box(saw.p, R"([["-1","3"]])", "1/2", "1/2", &rep, &pass) == PM_OK);
  CHECK(pass == 0);
  std::string report = take(rep);
  CHECK(report.find("witness") != std::string::npos);

  char* lip = nullptr;
  Fn two;
  REQUIRE(pm_function_parse(
              R"({"n": 2, "functionals": [{"slope": ["2","0"], "const": "0"},
                                          {"slope": ["0","-1"], "const": "0"}]})",
              &two.p) == PM_OK);
  Oracle to;
  REQUIRE(pm_oracle_from_function(two.p, nullptr, &to.p) == PM_OK);
  REQUIRE(pm_oracle_lipschitz(to.p, R"([["-1","1"],["-1","1"]])", "1/2", &lip) == PM_OK);
  CHECK(take(lip) == "2");
}

TEST_CASE("c api: detectors and certificate replay") {
  Oracle hs;
  REQUIRE(pm_oracle_builtin("halfslope", &hs.p) == PM_OK);
  Outcome rej;
  REQUIRE(pm_detect1d(hs.p, "-1", "2", 64, &rej.p) == PM_OK);
  CHECK(pm_outcome_tag(rej.p) == 1);
  std::string cert = take(pm_outcome_certificate(rej.p));
  CHECK(cert.find("\"slope\": \"1/2\"") != std::string::npos);
  pm_function* none = nullptr;
  CHECK(pm_outcome_function(rej.p, &none) == PM_ERR_PRECONDITION);

  Fn f;
  REQUIRE(pm_function_parse(
              R"({"n": 1, "functionals": [{"slope": ["0"], "const": "0"},
                                          {"slope": ["1"], "const": "-1"},
                                          {"slope": ["3"], "const": "-5"}]})",
              &f.p) == PM_OK);
  Oracle o;
  REQUIRE(pm_oracle_from_function(f.p, nullptr, &o.p) == PM_OK);
  Outcome acc;
  REQUIRE(pm_detect1d(o.p, "0", "3", 64, &acc.p) == PM_OK);
  REQUIRE(pm_outcome_tag(acc.p) == 0);
  Fn rec;
  REQUIRE(pm_outcome_function(acc.p, &rec.p) == PM_OK);
  char* at2 = nullptr;
  REQUIRE(pm_function_eval(rec.p, "5/2", &at2) == PM_OK);
  CHECK(take(at2) == "5/2");

  std::string acc_cert = take(pm_outcome_certificate(acc.p));
  Oracle fresh;
  REQUIRE(pm_oracle_from_function(f.p, nullptr, &fresh.p) == PM_OK);
  int ok = 0;
  char* vrep = nullptr;
  REQUIRE(pm_verify_certificate(acc_cert.c_str(), fresh.p, &vrep, &ok) == PM_OK);
  CHECK(ok == 1);
  CHECK(take(vrep).find("\"mismatches\": 0") != std::string::npos);

  // 2-D grid detector through the C surface.
  Fn g;
  REQUIRE(pm_function_parse(
              R"({"n": 2, "functionals": [{"slope": ["1","1"], "const": "0"},
                                          {"slope": ["0","0"], "const": "0"}]})",
              &g.p) == PM_OK);
  Oracle go;
  REQUIRE(pm_oracle_from_function(g.p, nullptr, &go.p) == PM_OK);
  Outcome nd;
  REQUIRE(pm_detectnd(go.p, R"([["-2","2"],["-2","2"]])", "1/2", 64, 0, &nd.p) == PM_OK);
  CHECK(pm_outcome_tag(nd.p) == 0);

  // Tropical detection and replay through the C surface.
  Oracle to2;
  REQUIRE(pm_oracle_from_function(g.p, nullptr, &to2.p) == PM_OK);
  Outcome trop;
  REQUIRE(pm_detect_tropical(to2.p, R"([["-4","4"],["-4","4"]])", R"(["0,0","1,-1"])", "2",
                             "1/2", 64, &trop.p) == PM_OK);
  CHECK(pm_outcome_tag(trop.p) == 0);
  std::string trop_cert = take(pm_outcome_certificate(trop.p));
  Oracle to3;
  REQUIRE(pm_oracle_from_function(g.p, nullptr, &to3.p) == PM_OK);
  REQUIRE(pm_verify_certificate(trop_cert.c_str(), to3.p, &vrep, &ok) == PM_OK);
  CHECK(ok == 1);
  pm_string_free(vrep);
}
