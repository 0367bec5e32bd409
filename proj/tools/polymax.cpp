// polymax command-line front end. Talks to the library exclusively through
// the C API in polymax.h; all exact values cross as strings.
//
// Exit codes: 0 accept/success, 1 reject (with witness), 2 exhausted,
// 3 usage or format error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "polymax.h"

namespace {

using njson = nlohmann::json;

constexpr int kExitReject = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitUsage = 3;

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "polymax: " << msg << "\n";
  std::exit(kExitUsage);
}

void check(pm_status st) {
  if (st != PM_OK) die(pm_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pm_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) die("cannot write file: " + out_path);
    out << text << "\n";
  }
}

using FnPtr = std::unique_ptr<pm_function, decltype(&pm_function_free)>;
using PolyPtr = std::unique_ptr<pm_polyhedron, decltype(&pm_polyhedron_free)>;
using OraclePtr = std::unique_ptr<pm_oracle, decltype(&pm_oracle_free)>;
using OutcomePtr = std::unique_ptr<pm_outcome, decltype(&pm_outcome_free)>;

FnPtr load_function(const std::string& path) {
  pm_function* f = nullptr;
  check(pm_function_parse(read_file(path).c_str(), &f));
  return FnPtr(f, pm_function_free);
}

PolyPtr load_polyhedron(const std::string& path) {
  pm_polyhedron* p = nullptr;
  check(pm_polyhedron_parse(read_file(path).c_str(), &p));
  return PolyPtr(p, pm_polyhedron_free);
}

// "x0 x1 y0 y1 [z0 z1]" -> [["x0","x1"],["y0","y1"],...]
std::string box_to_json(const std::string& spec) {
  std::istringstream ss(spec);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  if (toks.empty() || toks.size() % 2 != 0) die("--box needs an even number of bounds");
  njson box = njson::array();
  for (size_t i = 0; i < toks.size(); i += 2)
    box.push_back(njson::array({toks[i], toks[i + 1]}));
  return box.dump();
}

// "0,0;1,-1" -> ["0,0","1,-1"]
std::string semi_list_to_json(const std::string& spec, const std::string& what) {
  njson arr = njson::array();
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t semi = spec.find(';', pos);
    std::string tok =
        semi == std::string::npos ? spec.substr(pos) : spec.substr(pos, semi - pos);
    if (!tok.empty()) arr.push_back(tok);
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  if (arr.empty()) die(what + " needs at least one entry");
  return arr.dump();
}

// "builtin:square" or "file:fn.json" (+ optional polyhedron or box domain).
OraclePtr make_oracle(const std::string& spec, const std::string& domain_path,
                      const std::string& box_spec) {
  pm_oracle* o = nullptr;
  if (spec.rfind("builtin:", 0) == 0) {
    check(pm_oracle_builtin(spec.substr(8).c_str(), &o));
    return OraclePtr(o, pm_oracle_free);
  }
  if (spec.rfind("file:", 0) == 0) {
    FnPtr f = load_function(spec.substr(5));
    PolyPtr domain(nullptr, pm_polyhedron_free);
    if (!domain_path.empty()) {
      domain = load_polyhedron(domain_path);
    } else if (!box_spec.empty()) {
      njson box = njson::parse(box_to_json(box_spec));
      int n = static_cast<int>(box.size());
      njson hs = njson::array();
      for (int i = 0; i < n; i++) {
        njson lo_slope = njson::array(), hi_slope = njson::array();
        for (int c = 0; c < n; c++) {
          lo_slope.push_back(c == i ? "1" : "0");
          hi_slope.push_back(c == i ? "-1" : "0");
        }
        std::string lo = box[i][0].get<std::string>();
        if (!lo.empty() && lo[0] == '+') lo = lo.substr(1);
        std::string neg = !lo.empty() && lo[0] == '-' ? lo.substr(1) : "-" + lo;
        hs.push_back(njson{{"slope", lo_slope}, {"const", neg}});
        hs.push_back(njson{{"slope", hi_slope}, {"const", box[i][1].get<std::string>()}});
      }
      njson pj{{"n", n}, {"halfspaces", hs}};
      pm_polyhedron* p = nullptr;
      check(pm_polyhedron_parse(pj.dump().c_str(), &p));
      domain = PolyPtr(p, pm_polyhedron_free);
    }
    check(pm_oracle_from_function(f.get(), domain.get(), &o));
    return OraclePtr(o, pm_oracle_free);
  }
  die("--oracle must be builtin:<name> or file:<path>");
}

int finish_outcome(pm_outcome* oc_raw, const std::string& out_path) {
  OutcomePtr oc(oc_raw, pm_outcome_free);
  emit(take(pm_outcome_certificate(oc.get())), out_path);
  switch (pm_outcome_tag(oc.get())) {
    case 0: return 0;
    case 1: return kExitReject;
    default: return kExitExhausted;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polymax: exact algebra and oracle detection for integer-slope "
               "convex piecewise-affine functions"};
  app.require_subcommand(1);

  std::string fn_path, fn2_path, poly_path, oracle_spec, out_path;
  std::string point, base, dir, zdir, center;
  std::string box_spec, step = "1/2", resolution = "1/8", ray_length = "4";
  std::string ts = "1/4,1/2,3/4", centers_spec, lines_path, cert_path, directions_spec;
  std::vector<std::string> interval;
  int budget = 64, samples = 100;
  bool integral_mode = false;

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the main artifact to a file");
  };

  auto* eval = app.add_subcommand("eval", "evaluate a function at a point");
  eval->add_option("-f,--function", fn_path)->required();
  eval->add_option("-x,--point", point)->required();

  auto* canon = app.add_subcommand("canon", "canonical minimal form");
  canon->add_option("-f,--function", fn_path)->required();
  add_out(canon);

  auto* tadd = app.add_subcommand("tropadd", "tropical sum (pointwise max)");
  tadd->add_option("-f,--function", fn_path)->required();
  tadd->add_option("-g,--other", fn2_path)->required();
  add_out(tadd);

  auto* tmul = app.add_subcommand("tropmul", "tropical product (pointwise sum)");
  tmul->add_option("-f,--function", fn_path)->required();
  tmul->add_option("-g,--other", fn2_path)->required();
  add_out(tmul);

  auto* restr = app.add_subcommand("restrict", "restriction to a rational line");
  restr->add_option("-f,--function", fn_path)->required();
  restr->add_option("--base", base)->required();
  restr->add_option("--dir", dir)->required();
  add_out(restr);

  auto* dd = app.add_subcommand("dirderiv", "exact directional derivative");
  dd->add_option("-f,--function", fn_path)->required();
  dd->add_option("-x,--point", point)->required();
  dd->add_option("-z,--direction", zdir)->required();

  auto* doms = app.add_subcommand("domains", "maximal domains of affinity");
  doms->add_option("-f,--function", fn_path)->required();
  add_out(doms);

  auto* fac = app.add_subcommand("facets", "facet enumeration");
  fac->add_option("-P,--polyhedron", poly_path)->required();
  add_out(fac);

  auto* verts = app.add_subcommand("vertices", "vertex enumeration");
  verts->add_option("-P,--polyhedron", poly_path)->required();
  add_out(verts);

  auto* jensen = app.add_subcommand("jensen", "Jensen convexity check on a box grid");
  jensen->add_option("--oracle", oracle_spec)->required();
  jensen->add_option("--box", box_spec)->required();
  jensen->add_option("--resolution", resolution, "grid resolution (default 1/8)");
  jensen->add_option("--ts", ts, "combination weights (default 1/4,1/2,3/4)");
  jensen->add_option("-P,--polyhedron", poly_path, "oracle domain for file oracles");
  add_out(jensen);

  auto* d1 = app.add_subcommand("detect1d", "transintegral reconstruction on an interval");
  d1->add_option("--oracle", oracle_spec)->required();
  d1->add_option("--interval", interval, "a b")->expected(2)->required();
  d1->add_option("--budget", budget, "halvings per slope probe (default 64)");
  d1->add_option("-P,--polyhedron", poly_path);
  add_out(d1);

  auto* di = app.add_subcommand("detect-integral", "integral-value detection on an interval");
  di->add_option("--oracle", oracle_spec)->required();
  di->add_option("--interval", interval, "a b")->expected(2)->required();
  di->add_option("--budget", budget);
  di->add_option("--samples", samples, "membership samples (default 100)");
  di->add_option("-P,--polyhedron", poly_path);
  add_out(di);

  auto* dnd = app.add_subcommand("detectnd", "grid reconstruction on a box");
  dnd->add_option("--oracle", oracle_spec)->required();
  dnd->add_option("--box", box_spec)->required();
  dnd->add_option("--step", step, "grid step (default 1/2)");
  dnd->add_option("--budget", budget);
  dnd->add_flag("--integral", integral_mode, "also require integral values");
  dnd->add_option("-P,--polyhedron", poly_path);
  add_out(dnd);

  auto* skel = app.add_subcommand("skeleton", "line-sampling detection on a polyhedron");
  skel->add_option("--oracle", oracle_spec)->required();
  skel->add_option("-P,--polyhedron", poly_path)->required();
  skel->add_option("--lines", lines_path, "JSON file with the line list")->required();
  skel->add_option("--budget", budget);
  add_out(skel);

  auto* tline = app.add_subcommand("tropline", "symbolic restrictions to a tropical line");
  tline->add_option("-f,--function", fn_path)->required();
  tline->add_option("--center", center)->required();
  add_out(tline);

  auto* dtrop = app.add_subcommand("detect-tropical", "tropical-line detection on a 2-D box");
  dtrop->add_option("--oracle", oracle_spec)->required();
  dtrop->add_option("--box", box_spec)->required();
  dtrop->add_option("--centers", centers_spec, "semicolon-separated centers")->required();
  dtrop->add_option("--ray-length", ray_length, "ray truncation (default 4)");
  dtrop->add_option("--step", step);
  dtrop->add_option("--budget", budget);
  dtrop->add_option("-P,--polyhedron", poly_path);
  add_out(dtrop);

  auto* sb = app.add_subcommand("slope-bound", "boundary slope bounds on a polyhedron");
  sb->add_option("-f,--function", fn_path)->required();
  sb->add_option("-P,--polyhedron", poly_path)->required();
  sb->add_option("--directions", directions_spec, "semicolon-separated directions");
  add_out(sb);

  auto* vc = app.add_subcommand("verify-cert", "replay a certificate against an oracle");
  vc->add_option("--cert", cert_path)->required();
  vc->add_option("--oracle", oracle_spec)->required();
  vc->add_option("-P,--polyhedron", poly_path);
  vc->add_option("--box", box_spec);
  add_out(vc);

  auto* p1 = app.add_subcommand("plot1d", "TSV samples plus an exact segment list");
  p1->add_option("-f,--function", fn_path)->required();
  p1->add_option("--interval", interval, "a b")->expected(2)->required();
  p1->add_option("--step", step, "sample step (default 1/16)");
  p1->add_option("--segments-out", out_path, "write the JSON segment list here");

  auto* p2 = app.add_subcommand("plot2d", "cell polygons with ambient labels");
  p2->add_option("-f,--function", fn_path)->required();
  p2->add_option("--box", box_spec)->required();
  add_out(p2);

  CLI11_PARSE(app, argc, argv);

  if (eval->parsed()) {
    FnPtr f = load_function(fn_path);
    char* v = nullptr;
    check(pm_function_eval(f.get(), point.c_str(), &v));
    std::cout << take(v) << "\n";
    return 0;
  }
  if (canon->parsed()) {
    FnPtr f = load_function(fn_path);
    pm_function* c = nullptr;
    check(pm_function_canonicalize(f.get(), &c));
    FnPtr canon_fn(c, pm_function_free);
    emit(take(pm_function_to_json(canon_fn.get())), out_path);
    return 0;
  }
  if (tadd->parsed() || tmul->parsed()) {
    FnPtr f = load_function(fn_path), g = load_function(fn2_path);
    pm_function* r = nullptr;
    check(tadd->parsed() ? pm_function_trop_add(f.get(), g.get(), &r)
                         : pm_function_trop_mul(f.get(), g.get(), &r));
    FnPtr res(r, pm_function_free);
    emit(take(pm_function_to_json(res.get())), out_path);
    return 0;
  }
  if (restr->parsed()) {
    FnPtr f = load_function(fn_path);
    pm_function* r = nullptr;
    check(pm_function_restrict(f.get(), base.c_str(), dir.c_str(), &r));
    FnPtr res(r, pm_function_free);
    char* cls = nullptr;
    check(pm_function_classify(res.get(), &cls));
    njson out{{"class", take(cls)},
              {"function", njson::parse(take(pm_function_to_json(res.get())))}};
    emit(out.dump(2), out_path);
    return 0;
  }
  if (dd->parsed()) {
    FnPtr f = load_function(fn_path);
    char* v = nullptr;
    check(pm_function_dir_deriv(f.get(), point.c_str(), zdir.c_str(), &v));
    std::cout << take(v) << "\n";
    return 0;
  }
  if (doms->parsed()) {
    FnPtr f = load_function(fn_path);
    char* j = nullptr;
    check(pm_function_domains(f.get(), &j));
    emit(take(j), out_path);
    return 0;
  }
  if (fac->parsed() || verts->parsed()) {
    PolyPtr p = load_polyhedron(poly_path);
    char* j = nullptr;
    check(fac->parsed() ? pm_polyhedron_facets(p.get(), &j)
                        : pm_polyhedron_vertices(p.get(), &j));
    emit(take(j), out_path);
    return 0;
  }
  if (jensen->parsed()) {
    OraclePtr o = make_oracle(oracle_spec, poly_path, box_spec);
    char* rep = nullptr;
    int pass = 0;
    check(pm_oracle_jensen_box(o.get(), box_to_json(box_spec).c_str(), resolution.c_str(),
                               ts.c_str(), &rep, &pass));
    emit(take(rep), out_path);
    return pass ? 0 : kExitReject;
  }
  if (d1->parsed() || di->parsed()) {
    OraclePtr o = make_oracle(oracle_spec, poly_path, "");
    pm_outcome* oc = nullptr;
    check(d1->parsed()
              ? pm_detect1d(o.get(), interval[0].c_str(), interval[1].c_str(), budget, &oc)
              : pm_detect_integral(o.get(), interval[0].c_str(), interval[1].c_str(), budget,
                                   samples, &oc));
    return finish_outcome(oc, out_path);
  }
  if (dnd->parsed()) {
    OraclePtr o = make_oracle(oracle_spec, poly_path, box_spec);
    pm_outcome* oc = nullptr;
    check(pm_detectnd(o.get(), box_to_json(box_spec).c_str(), step.c_str(), budget,
                      integral_mode ? 1 : 0, &oc));
    return finish_outcome(oc, out_path);
  }
  if (skel->parsed()) {
    PolyPtr p = load_polyhedron(poly_path);
    OraclePtr o = make_oracle(oracle_spec, poly_path, "");
    pm_outcome* oc = nullptr;
    check(pm_detect_skeleton(o.get(), p.get(), read_file(lines_path).c_str(), budget, &oc));
    return finish_outcome(oc, out_path);
  }
  if (tline->parsed()) {
    FnPtr f = load_function(fn_path);
    char* j = nullptr;
    check(pm_function_tropical_restrictions(f.get(), center.c_str(), &j));
    emit(take(j), out_path);
    return 0;
  }
  if (dtrop->parsed()) {
    OraclePtr o = make_oracle(oracle_spec, poly_path, box_spec);
    pm_outcome* oc = nullptr;
    check(pm_detect_tropical(o.get(), box_to_json(box_spec).c_str(),
                             semi_list_to_json(centers_spec, "--centers").c_str(),
                             ray_length.c_str(), step.c_str(), budget, &oc));
    return finish_outcome(oc, out_path);
  }
  if (sb->parsed()) {
    FnPtr f = load_function(fn_path);
    PolyPtr p = load_polyhedron(poly_path);
    char* rep = nullptr;
    int certified = 0;
    std::string dirs_json;
    if (!directions_spec.empty())
      dirs_json = semi_list_to_json(directions_spec, "--directions");
    check(pm_slope_bound(f.get(), p.get(), dirs_json.empty() ? nullptr : dirs_json.c_str(),
                         &rep, &certified));
    emit(take(rep), out_path);
    return certified ? 0 : kExitReject;
  }
  if (vc->parsed()) {
    OraclePtr o = make_oracle(oracle_spec, poly_path, box_spec);
    char* rep = nullptr;
    int ok = 0;
    check(pm_verify_certificate(read_file(cert_path).c_str(), o.get(), &rep, &ok));
    emit(take(rep), out_path);
    return ok ? 0 : kExitReject;
  }
  if (p1->parsed()) {
    if (!p1->count("--step")) step = "1/16";
    FnPtr f = load_function(fn_path);
    if (pm_function_dim(f.get()) != 1) die("plot1d needs a 1-D function");
    char* pieces = nullptr;
    check(pm_function_pieces1d(f.get(), &pieces));
    std::string pieces_json = take(pieces);
    std::ostringstream tsv;
    std::string t = interval[0];
    while (true) {
      int cmp = 0;
      check(pm_rat_cmp(t.c_str(), interval[1].c_str(), &cmp));
      if (cmp > 0) break;
      char* v = nullptr;
      check(pm_function_eval(f.get(), t.c_str(), &v));
      tsv << t << "\t" << take(v) << "\n";
      char* next = nullptr;
      check(pm_rat_add(t.c_str(), step.c_str(), &next));
      t = take(next);
    }
    std::cout << tsv.str();
    if (!out_path.empty()) {
      njson seg = njson::parse(pieces_json);
      seg["interval"] = njson::array({interval[0], interval[1]});
      std::ofstream outf(out_path);
      if (!outf) die("cannot write file: " + out_path);
      outf << seg.dump(2) << "\n";
    }
    return 0;
  }
  if (p2->parsed()) {
    FnPtr f = load_function(fn_path);
    char* j = nullptr;
    check(pm_function_cells2d(f.get(), box_to_json(box_spec).c_str(), &j));
    emit(take(j), out_path);
    return 0;
  }
  die("no subcommand handled");
}
