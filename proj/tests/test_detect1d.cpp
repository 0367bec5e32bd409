#include <cmath>

#include "core/detect1d.hpp"
#include "testutil.hpp"

using namespace polymax;
using pmtest::Rng;

namespace {

RationalPolyhedron interval(const Rat& lo, const Rat& hi) {
  return RationalPolyhedron(1, {{{{Rat(1)}, -lo}}, {{{Rat(-1)}, hi}}});
}

}  // namespace

TEST_CASE("one_sided_slope: affine, strictly convex, fractional") {
  FunctionOracle f = from_polyfun(pmtest::parse_fn(1, {{{1}, Rat(0)}, {{0}, Rat(0)}}));
  SlopeProbe p = one_sided_slope(f, Rat(0), +1, Rat(1), 64);
  REQUIRE(p.tag == SlopeProbe::Tag::kSlope);
  CHECK(p.slope == Rat(1));

  FunctionOracle sq = builtin_oracle("square");
  CHECK(one_sided_slope(sq, Rat(0), +1, Rat(1), 40).tag == SlopeProbe::Tag::kExhausted);

  FunctionOracle hs = builtin_oracle("halfslope");
  SlopeProbe h = one_sided_slope(hs, Rat(1), +1, Rat(1), 64);
  REQUIRE(h.tag == SlopeProbe::Tag::kSlope);
  CHECK(h.slope == Rat(1, 2));

  // Left slope at the kink of |x| in standard orientation is -1.
  SlopeProbe l = one_sided_slope(builtin_oracle("abs"), Rat(0), -1, Rat(1), 64);
  REQUIRE(l.tag == SlopeProbe::Tag::kSlope);
  CHECK(l.slope == Rat(-1));
}

TEST_CASE("reconstruct_transintegral: three-piece worked example with grid oracle") {
  PolyhedralFunction f =
      pmtest::parse_fn(1, {{{0}, Rat(0)}, {{1}, Rat(-1)}, {{3}, Rat(-5)}});
  FunctionOracle o = from_polyfun(f, interval(Rat(0), Rat(3)));
  DetectOutcome r = reconstruct_transintegral(o, Rat(0), Rat(3), 64);
  REQUIRE(r.tag == OutcomeTag::kAccept);
  const Reconstruction1D& rec = *r.reconstruction;
  REQUIRE(rec.pieces.size() == 3);
  CHECK(rec.pieces[0].slope == 0);
  CHECK(rec.pieces[1].slope == 1);
  CHECK(rec.pieces[2].slope == 3);
  REQUIRE(rec.breakpoints.size() == 2);
  CHECK(rec.breakpoints[0] == Rat(1));
  CHECK(rec.breakpoints[1] == Rat(2));
  for (long k = 0; k <= 48; k++) CHECK(rec.eval(Rat(k, 16)) == o.query({Rat(k, 16)}));
  // Accept reproduces every logged query.
  for (const auto& [t, v] : r.queries) CHECK(rec.eval(t) == v);
}

TEST_CASE("reconstruct_transintegral: constant, reject, exhausted") {
  FunctionOracle c = from_polyfun(pmtest::parse_fn(1, {{{0}, Rat(5)}}), interval(Rat(0), Rat(1)));
  DetectOutcome rc = reconstruct_transintegral(c, Rat(0), Rat(1), 64);
  REQUIRE(rc.tag == OutcomeTag::kAccept);
  REQUIRE(rc.reconstruction->pieces.size() == 1);
  CHECK(rc.reconstruction->pieces[0].slope == 0);
  CHECK(rc.reconstruction->pieces[0].constant == Rat(5));

  FunctionOracle hs = builtin_oracle("halfslope");
  DetectOutcome rh = reconstruct_transintegral(hs, Rat(-1), Rat(2), 64);
  REQUIRE(rh.tag == OutcomeTag::kReject);
  const auto* sw = std::get_if<SlopeWitness>(&*rh.witness);
  REQUIRE(sw != nullptr);
  CHECK(sw->slope == Rat(1, 2));
  // The certified subinterval really is affine with that slope.
  Rat mid = (sw->lo + sw->hi) / Rat(2);
  CHECK(hs.query({mid}) == (hs.query({sw->lo}) + hs.query({sw->hi})) / Rat(2));
  CHECK((hs.query({sw->hi}) - hs.query({sw->lo})) / (sw->hi - sw->lo) == Rat(1, 2));

  DetectOutcome rs = reconstruct_transintegral(builtin_oracle("square"), Rat(0), Rat(1), 40);
  CHECK(rs.tag == OutcomeTag::kExhausted);
}

TEST_CASE("reconstruct_transintegral rejects a non-convex oracle with a Jensen triple") {
  FunctionOracle o = builtin_oracle("sawtooth-nonconvex");
  DetectOutcome r = reconstruct_transintegral(o, Rat(-1), Rat(3), 64);
  REQUIRE(r.tag == OutcomeTag::kReject);
  const auto* jw = std::get_if<JensenWitness>(&*r.witness);
  REQUIRE(jw != nullptr);
  // The witness triple re-verifies against the oracle from scratch.
  Rat fx = o.query(jw->x), fy = o.query(jw->y);
  Vec mid = add(scale(jw->x, jw->t), scale(jw->y, Rat(1) - jw->t));
  CHECK(jw->t * fx + (Rat(1) - jw->t) * fy == jw->lhs);
  CHECK(o.query(mid) == jw->rhs);
  CHECK(jw->lhs < jw->rhs);
}

TEST_CASE("farey_points: open interval, deterministic denominator-first order") {
  auto pts = farey_points(Rat(0), Rat(1), 5);
  REQUIRE(pts.size() == 5);
  CHECK(pts[0] == Rat(1, 2));
  CHECK(pts[1] == Rat(1, 3));
  CHECK(pts[2] == Rat(2, 3));
  CHECK(pts[3] == Rat(1, 4));
  CHECK(pts[4] == Rat(3, 4));
  for (const auto& p : farey_points(Rat(-1, 2), Rat(1, 2), 40)) {
    CHECK(Rat(-1, 2) < p);
    CHECK(p < Rat(1, 2));
  }
}

TEST_CASE("detect_integral_values: worked examples") {
  // max(t, 1-t) on [0,1]: integral, breakpoint 1/2.
  FunctionOracle o = from_polyfun(pmtest::parse_fn(1, {{{1}, Rat(0)}, {{-1}, Rat(1)}}),
                                  interval(Rat(0), Rat(1)));
  DetectOutcome r = detect_integral_values(o, Rat(0), Rat(1), 64, 20);
  REQUIRE(r.tag == OutcomeTag::kAccept);
  REQUIRE(r.reconstruction->pieces.size() == 2);
  CHECK(r.reconstruction->pieces[0].slope == -1);
  CHECK(r.reconstruction->pieces[0].constant == Rat(1));
  CHECK(r.reconstruction->pieces[1].slope == 1);
  CHECK(r.reconstruction->pieces[1].constant == Rat(0));
  CHECK(r.reconstruction->breakpoints[0] == Rat(1, 2));
  for (long k = 0; k <= 20; k++)
    CHECK(r.reconstruction->eval(Rat(k, 20)) == o.query({Rat(k, 20)}));
  CHECK(group_membership(o.query({Rat(1, 3)}), {Rat(1, 3)}));

  // max(t + 1/2): transintegral but not integral. The first failing Farey
  // sample is x = 1/3 (1/2 passes: value 5/6... no, f(1/2) = 1 is in Z/2).
  FunctionOracle h = from_polyfun(pmtest::parse_fn(1, {{{1}, Rat(1, 2)}}),
                                  interval(Rat(0), Rat(1)));
  DetectOutcome rh = detect_integral_values(h, Rat(0), Rat(1), 64, 20);
  REQUIRE(rh.tag == OutcomeTag::kReject);
  const auto* mw = std::get_if<MembershipWitness>(&*rh.witness);
  REQUIRE(mw != nullptr);
  CHECK(mw->x == Vec{Rat(1, 3)});
  CHECK(mw->value == Rat(5, 6));
  CHECK(!group_membership(mw->value, mw->x));

  FunctionOracle z = from_polyfun(pmtest::parse_fn(1, {{{0}, Rat(0)}}), interval(Rat(0), Rat(1)));
  CHECK(detect_integral_values(z, Rat(0), Rat(1), 64, 20).tag == OutcomeTag::kAccept);
}

TEST_CASE("detect_integral_values: integer-slope pieces with fractional constants reject") {
  // Pieces pass the low-denominator samples but the per-piece constant check
  // finds a coprime-denominator sample that fails membership.
  FunctionOracle o = from_polyfun(pmtest::parse_fn(1, {{{0}, Rat(1, 2)}, {{2}, Rat(-3, 2)}}),
                                  interval(Rat(0), Rat(2)));
  DetectOutcome r = detect_integral_values(o, Rat(0), Rat(2), 64, 6);
  REQUIRE(r.tag == OutcomeTag::kReject);
  const auto* mw = std::get_if<MembershipWitness>(&*r.witness);
  REQUIRE(mw != nullptr);
  CHECK(!group_membership(mw->value, mw->x));
}

TEST_CASE("round-trip on random transintegral 1-D functions") {
  Rng rng(101);
  for (int i = 0; i < 60; i++) {
    pmtest::Convex1D gen = pmtest::rnd_convex_1d(rng, Rat(0), Rat(10), 6, -6, 6, 20);
    FunctionOracle o = from_polyfun(gen.f, interval(Rat(0), Rat(10)));
    DetectOutcome r = reconstruct_transintegral(o, Rat(0), Rat(10), 64);
    REQUIRE(r.tag == OutcomeTag::kAccept);
    const Reconstruction1D& rec = *r.reconstruction;
    // Canonical equality with the generator's exact form.
    CHECK(canonicalize(rec.to_polyfun()).functionals() == canonicalize(gen.f).functionals());
    // Piece bound from the end slopes.
    long sa = rec.pieces.front().slope, sb = rec.pieces.back().slope;
    CHECK(static_cast<long>(rec.pieces.size()) <= sb - sa + 1);
    // Adjacent pieces agree at breakpoints; slopes strictly increase.
    for (size_t k = 0; k + 1 < rec.pieces.size(); k++) {
      CHECK(rec.pieces[k].slope < rec.pieces[k + 1].slope);
      const Rat& bp = rec.breakpoints[k];
      CHECK(Rat(rec.pieces[k].slope) * bp + rec.pieces[k].constant ==
            Rat(rec.pieces[k + 1].slope) * bp + rec.pieces[k + 1].constant);
    }
    // Every logged query reproduced.
    for (const auto& [t, v] : r.queries) CHECK(rec.eval(t) == v);
  }
}

TEST_CASE("query complexity stays within the stated budget") {
  Rng rng(103);
  for (int i = 0; i < 40; i++) {
    pmtest::Convex1D gen = pmtest::rnd_convex_1d(rng, Rat(0), Rat(10), 6, -6, 6, 20);
    FunctionOracle o = from_polyfun(gen.f, interval(Rat(0), Rat(10)));
    DetectOutcome r = reconstruct_transintegral(o, Rat(0), Rat(10), 64);
    REQUIRE(r.tag == OutcomeTag::kAccept);
    // Minimum breakpoint gap g, including the interval ends.
    std::vector<Rat> cuts = {Rat(0)};
    for (const auto& bp : r.reconstruction->breakpoints) cuts.push_back(bp);
    cuts.push_back(Rat(10));
    Rat g = cuts[1] - cuts[0];
    for (size_t k = 1; k + 1 < cuts.size(); k++) g = min(g, cuts[k + 1] - cuts[k]);
    double ratio = 10.0 / (g.num().get_d() / g.den().get_d());
    double bound = 8.0 * static_cast<double>(r.reconstruction->pieces.size()) *
                   (2.0 + std::log2(ratio));
    CHECK(static_cast<double>(r.queries.size()) <= bound);
  }
}

TEST_CASE("identical inputs give identical outcomes and logs") {
  Rng rng(107);
  pmtest::Convex1D gen = pmtest::rnd_convex_1d(rng, Rat(0), Rat(10), 6, -6, 6, 20);
  FunctionOracle o1 = from_polyfun(gen.f, interval(Rat(0), Rat(10)));
  FunctionOracle o2 = from_polyfun(gen.f, interval(Rat(0), Rat(10)));
  DetectOutcome a = reconstruct_transintegral(o1, Rat(0), Rat(10), 64);
  DetectOutcome b = reconstruct_transintegral(o2, Rat(0), Rat(10), 64);
  REQUIRE(a.tag == b.tag);
  CHECK(a.queries == b.queries);
  CHECK(a.reconstruction->breakpoints == b.reconstruction->breakpoints);
}

TEST_CASE("interval preconditions") {
  FunctionOracle o = from_polyfun(pmtest::parse_fn(1, {{{1}, Rat(0)}}), interval(Rat(0), Rat(1)));
  CHECK_THROWS_AS(reconstruct_transintegral(o, Rat(1), Rat(0), 64), Error);
  CHECK_THROWS_AS(reconstruct_transintegral(o, Rat(0), Rat(2), 64), Error);
}
