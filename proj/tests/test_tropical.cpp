#include "core/tropical.hpp"
#include "testutil.hpp"

using namespace polymax;
using pmtest::Rng;

namespace {

Box square4() { return Box{{{Rat(-4), Rat(4)}, {Rat(-4), Rat(4)}}}; }

std::vector<RationalPolyhedron> components_at(const Vec& c) {
  const Rat& cx = c[0];
  const Rat& cy = c[1];
  std::vector<RationalPolyhedron> comps;
  comps.emplace_back(
      2, std::vector<HalfSpace>{{{{Rat(-1), Rat(0)}, cx}}, {{{Rat(0), Rat(-1)}, cy}}});
  comps.emplace_back(2, std::vector<HalfSpace>{{{{Rat(1), Rat(0)}, -cx}},
                                               {{{Rat(1), Rat(-1)}, cy - cx}}});
  comps.emplace_back(2, std::vector<HalfSpace>{{{{Rat(0), Rat(1)}, -cy}},
                                               {{{Rat(-1), Rat(1)}, cx - cy}}});
  return comps;
}

}  // namespace

TEST_CASE("tropical_line geometry: rays meet pairwise only at the center") {
  TropicalLineTranslate t = tropical_line({Rat(1), Rat(-2)});
  CHECK(t.down.at(Rat(0)) == t.center);
  CHECK(t.left.at(Rat(0)) == t.center);
  CHECK(t.diag.at(Rat(0)) == t.center);
  // Any pair of distinct rays shares only t = 0: directions are pairwise
  // non-parallel, so equality of points forces both parameters to zero.
  for (const Rat& s : pmtest::grid(Rat(1, 4), Rat(3), Rat(1, 4))) {
    CHECK(t.down.at(s) != t.left.at(s));
    CHECK(t.down.at(s) != t.diag.at(s));
    CHECK(t.left.at(s) != t.diag.at(s));
  }
}

TEST_CASE("is_tropical_polynomial") {
  CHECK(is_tropical_polynomial(
      pmtest::parse_fn(2, {{{2, 0}, Rat(0)}, {{1, 1}, Rat(0)}, {{0, 0}, Rat(0)}})));
  CHECK(!is_tropical_polynomial(pmtest::parse_fn(2, {{{1, -1}, Rat(0)}})));
  PolyhedralFunction frac(2, {{{Rat(1, 2), Rat(0)}, Rat(0)}, {{Rat(0), Rat(0)}, Rat(0)}});
  CHECK(!is_tropical_polynomial(frac));
  // A negative-slope functional that is dominated disappears canonically.
  CHECK(is_tropical_polynomial(
      pmtest::parse_fn(2, {{{1, 1}, Rat(0)}, {{1, 1}, Rat(-5)}})));
}

TEST_CASE("restrict_to_tropical_line: worked examples (minimal on the ray)") {
  PolyhedralFunction f = pmtest::parse_fn(2, {{{1, 0}, Rat(0)}, {{0, 1}, Rat(0)}, {{0, 0}, Rat(0)}});
  TropicalRestrictions r = restrict_to_tropical_line(f, {Rat(0), Rat(0)});
  REQUIRE(r.diag.functionals().size() == 1);
  CHECK(r.diag.functionals()[0] == AffineFunctional{{Rat(1)}, Rat(0)});
  REQUIRE(r.down.functionals().size() == 1);
  CHECK(r.down.functionals()[0] == AffineFunctional{{Rat(0)}, Rat(0)});
  REQUIRE(r.left.functionals().size() == 1);
  CHECK(r.left.functionals()[0] == AffineFunctional{{Rat(0)}, Rat(0)});

  PolyhedralFunction g = pmtest::parse_fn(2, {{{1, 0}, Rat(0)}});
  TropicalRestrictions rg = restrict_to_tropical_line(g, {Rat(1), Rat(5)});
  REQUIRE(rg.left.functionals().size() == 1);
  CHECK(rg.left.functionals()[0] == AffineFunctional{{Rat(-1)}, Rat(1)});

  PolyhedralFunction zero = pmtest::parse_fn(2, {{{0, 0}, Rat(0)}});
  TropicalRestrictions rz = restrict_to_tropical_line(zero, {Rat(-7), Rat(2)});
  for (const auto* h : {&rz.down, &rz.left, &rz.diag}) {
    REQUIRE(h->functionals().size() == 1);
    CHECK(is_zero_vec(h->functionals()[0].slope));
  }
}

TEST_CASE("restrict_to_tropical_line on an oracle yields borrowing 1-D ray oracles") {
  FunctionOracle o = from_polyfun(
      pmtest::parse_fn(2, {{{1, 0}, Rat(0)}, {{0, 1}, Rat(0)}, {{0, 0}, Rat(0)}}));
  TropicalRayOracles rays = restrict_to_tropical_line(o, {Rat(1), Rat(-2)});
  // down: f(1, -2 - t); left: f(1 - t, -2); diag: f(1 + t, -2 + t).
  CHECK(rays.down.query({Rat(3)}) == Rat(1));
  CHECK(rays.left.query({Rat(2)}) == Rat(0));
  CHECK(rays.diag.query({Rat(4)}) == Rat(5));
  CHECK_THROWS_AS(rays.down.query({Rat(-1)}), Error);  // rays live on t >= 0
  // Distinct parent points queried through the rays all hit the parent cache.
  CHECK(o.query_count() == 3);
}

TEST_CASE("(a) => (c): symbolic ray restrictions of transintegral f are transintegral") {
  Rng rng(229);
  for (int i = 0; i < 100; i++) {
    PolyhedralFunction f = pmtest::rnd_transintegral(rng, 2, 4, 4, 4, 4);
    for (int k = 0; k < 10; k++) {
      Vec c = rng.point(2, 4, 4);
      TropicalRestrictions r = restrict_to_tropical_line(f, c);
      for (const auto* h : {&r.down, &r.left, &r.diag})
        for (const auto& fn : h->functionals()) CHECK(fn.slope[0].is_integer());
    }
  }
}

TEST_CASE("detect_tropical accepts max(x, y, 0) and matches canonically") {
  PolyhedralFunction f = pmtest::parse_fn(2, {{{1, 0}, Rat(0)}, {{0, 1}, Rat(0)}, {{0, 0}, Rat(0)}});
  FunctionOracle o = from_polyfun(f);
  std::vector<Vec> centers = {{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}, {Rat(-2), Rat(1)}};
  NdOutcome r = detect_tropical(o, square4(), centers, Rat(2), 64, Rat(1, 2));
  REQUIRE(r.tag == OutcomeTag::kAccept);
  CHECK(r.reconstruction->function.functionals() == canonicalize(f).functionals());
  // Every ray record accepted and every logged query reproduced.
  CHECK(r.lines.size() == 9);
  for (const auto& [p, v] : r.queries) CHECK(r.reconstruction->function.eval(p) == v);
}

TEST_CASE("detect_tropical rejects max(x/2, y, 0) on a leftward ray") {
  FunctionOracle o = builtin_oracle("halfslope2d");
  std::vector<Vec> centers = {{Rat(2), Rat(-3)}, {Rat(0), Rat(0)}};
  NdOutcome r = detect_tropical(o, square4(), centers, Rat(2), 64, Rat(1, 2));
  REQUIRE(r.tag == OutcomeTag::kReject);
  const auto* sw = std::get_if<SlopeWitness>(&*r.witness);
  REQUIRE(sw != nullptr);
  CHECK(sw->slope == Rat(-1, 2));
  CHECK(sw->where.find("ray=left") != std::string::npos);
}

TEST_CASE("detect_tropical accepts a constant") {
  FunctionOracle o = from_polyfun(pmtest::parse_fn(2, {{{0, 0}, Rat(0)}}));
  NdOutcome r = detect_tropical(o, square4(), {{Rat(0), Rat(0)}}, Rat(4), 64, Rat(1, 2));
  REQUIRE(r.tag == OutcomeTag::kAccept);
  REQUIRE(r.reconstruction->function.functionals().size() == 1);
}

TEST_CASE("detect_tropical round-trips random tropical polynomials") {
  Rng rng(233);
  std::vector<Vec> centers = {{Rat(-2), Rat(1)}, {Rat(0), Rat(0)}, {Rat(1), Rat(-1)},
                              {Rat(1, 2), Rat(1, 2)}, {Rat(-1), Rat(-2)}};
  Vec c0 = centers[0];
  for (const auto& c : centers)
    if (lex_compare(c, c0) < 0) c0 = c;
  auto comps = components_at(c0);
  for (int i = 0; i < 6; i++) {
    PolyhedralFunction f =
        pmtest::nice_tropical_instance(rng, 4, 3, 4, Rat(-7, 2), Rat(7, 2), comps);
    FunctionOracle o = from_polyfun(f);
    NdOutcome r = detect_tropical(o, square4(), centers, Rat(4), 64, Rat(1, 2));
    REQUIRE(r.tag == OutcomeTag::kAccept);
    CHECK(r.reconstruction->function.functionals() == f.functionals());
    CHECK(is_tropical_polynomial(r.reconstruction->function));
  }
}

TEST_CASE("tropical closure of the semiring operations") {
  Rng rng(239);
  for (int i = 0; i < 40; i++) {
    auto mk = [&] {
      int k = static_cast<int>(rng.pick(1, 3));
      std::vector<AffineFunctional> fns;
      for (int j = 0; j < k; j++)
        fns.push_back({{Rat(rng.pick(0, 3)), Rat(rng.pick(0, 3))}, rng.rat(3, 4)});
      return PolyhedralFunction(2, std::move(fns));
    };
    PolyhedralFunction f = mk(), g = mk();
    CHECK(is_tropical_polynomial(trop_add(f, g)));
    CHECK(is_tropical_polynomial(trop_mul(f, g)));
  }
}

TEST_CASE("detect_tropical validates its inputs") {
  FunctionOracle o = from_polyfun(pmtest::parse_fn(2, {{{0, 0}, Rat(0)}}),
                                  RationalPolyhedron(
                                      2, {{{{Rat(1), Rat(0)}, Rat(1)}}, {{{Rat(-1), Rat(0)}, Rat(1)}},
                                          {{{Rat(0), Rat(1)}, Rat(1)}}, {{{Rat(0), Rat(-1)}, Rat(1)}}}));
  // Ray leaves the domain box [-1,1]^2.
  CHECK_THROWS_AS(
      detect_tropical(o, Box{{{Rat(-1), Rat(1)}, {Rat(-1), Rat(1)}}}, {{Rat(0), Rat(0)}},
                      Rat(3), 64, Rat(1, 2)),
      Error);
}
