#include <thread>

#include "core/oracle.hpp"
#include "testutil.hpp"

using namespace polymax;
using pmtest::Rng;

namespace {

RationalPolyhedron interval(long lo, long hi) {
  return RationalPolyhedron(1, {{{{Rat(1)}, Rat(-lo)}}, {{{Rat(-1)}, Rat(hi)}}});
}

}  // namespace

TEST_CASE("from_polyfun: evaluation, domain enforcement, caching") {
  FunctionOracle o = from_polyfun(pmtest::parse_fn(1, {{{1}, Rat(0)}, {{0}, Rat(0)}}),
                                  interval(-1, 1));
  CHECK(o.query({Rat(1, 2)}) == Rat(1, 2));
  CHECK_THROWS_AS(o.query({Rat(2)}), Error);

  FunctionOracle c = from_polyfun(pmtest::parse_fn(1, {{{0}, Rat(0)}}));
  CHECK(c.query({Rat(99)}) == Rat(0));

  FunctionOracle t = from_polyfun(
      pmtest::parse_fn(2, {{{1, 1}, Rat(0)}, {{0, 0}, Rat(0)}}),
      RationalPolyhedron(2, {{{{Rat(1), Rat(0)}, Rat(0)}}, {{{Rat(0), Rat(1)}, Rat(0)}},
                             {{{Rat(-1), Rat(-1)}, Rat(1)}}}));
  CHECK(t.query({Rat(1, 4), Rat(1, 4)}) == Rat(1, 2));

  // Distinct-point accounting with caching.
  CHECK(o.query_count() == 1);
  o.query({Rat(1, 2)});
  o.query({Rat(1, 2)});
  CHECK(o.query_count() == 1);
  o.query({Rat(1, 4)});
  CHECK(o.query_count() == 2);
}

TEST_CASE("builtin oracles") {
  CHECK(builtin_oracle("square").query({Rat(3, 2)}) == Rat(9, 4));
  CHECK(builtin_oracle("halfslope").query({Rat(2)}) == Rat(1));
  CHECK(builtin_oracle("abs").query({Rat(-3)}) == Rat(3));
  CHECK(builtin_oracle("sawtooth-nonconvex").query({Rat(3, 2)}) == Rat(1, 2));
  CHECK(builtin_oracle("trop-conic").query({Rat(1), Rat(2)}) == Rat(4));
  CHECK(builtin_oracle("halfslope2d").query({Rat(4), Rat(1)}) == Rat(2));
  CHECK_THROWS_AS(builtin_oracle("nope"), Error);
  for (const auto& name : builtin_oracle_names()) CHECK_NOTHROW(builtin_oracle(name));
}

TEST_CASE("oracle queries are identical across repeats and threads") {
  FunctionOracle o = builtin_oracle("square");
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; w++) {
    workers.emplace_back([&o] {
      for (long k = -40; k <= 40; k++) CHECK(o.query({Rat(k, 4)}) == Rat(k * k, 16));
    });
  }
  for (auto& t : workers) t.join();
  CHECK(o.query_count() == 81);
}

TEST_CASE("jensen_check passes on convex oracles and t in {0,1} never witnesses") {
  Rng rng(83);
  for (int i = 0; i < 50; i++) {
    int n = static_cast<int>(rng.pick(1, 2));
    FunctionOracle o = from_polyfun(pmtest::rnd_transintegral(rng, n, 4, 3, 4, 3));
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int k = 0; k < 8; k++) pairs.emplace_back(rng.point(n, 4, 3), rng.point(n, 4, 3));
    ConvexityReport rep = jensen_check(o, pairs, {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)});
    CHECK(rep.pass);
    CHECK(rep.queries_used > 0);
  }
}

TEST_CASE("jensen_check rejects the non-convex sawtooth with a re-verifiable witness") {
  FunctionOracle o = builtin_oracle("sawtooth-nonconvex");
  // Independent brute-force search for a violating triple with denominators
  // at most 8 locates one, so the checker must also find a witness.
  bool brute_found = false;
  for (long xi = -16; xi <= 32 && !brute_found; xi++) {
    for (long yi = xi + 1; yi <= 32 && !brute_found; yi++) {
      Rat x(xi, 8), y(yi, 8);
      Rat fx = o.query({x}), fy = o.query({y});
      for (long tn = 1; tn < 8 && !brute_found; tn++) {
        Rat t(tn, 8);
        Rat mid = t * x + (Rat(1) - t) * y;
        if (t * fx + (Rat(1) - t) * fy < o.query({mid})) brute_found = true;
      }
    }
  }
  CHECK(brute_found);

  std::vector<std::pair<Vec, Vec>> pairs = {{{Rat(0)}, {Rat(2)}}};
  ConvexityReport rep = jensen_check(o, pairs, {Rat(1, 2)});
  CHECK(!rep.pass);
  REQUIRE(rep.witness.has_value());
  // Re-verify the witness triple from scratch.
  const auto& [x, y, t] = *rep.witness;
  Rat lhs = t * o.query(x) + (Rat(1) - t) * o.query(y);
  Rat rhs = o.query(add(scale(x, t), scale(y, Rat(1) - t)));
  CHECK(lhs < rhs);
  CHECK(lhs == rep.witness_lhs);
  CHECK(rhs == rep.witness_rhs);
}

TEST_CASE("axis_convexity_check over a box") {
  FunctionOracle o = from_polyfun(pmtest::parse_fn(2, {{{1, 1}, Rat(0)}, {{0, 0}, Rat(0)}}));
  Box box{{{Rat(-1), Rat(1)}, {Rat(-1), Rat(1)}}};
  CHECK(axis_convexity_check(o, box, Rat(1, 4)).pass);

  FunctionOracle bad = builtin_oracle("sawtooth2d-nonconvex");
  ConvexityReport rep = axis_convexity_check(bad, Box{{{Rat(-1), Rat(3)}, {Rat(-1), Rat(1)}}},
                                             Rat(1, 2));
  CHECK(!rep.pass);
  REQUIRE(rep.witness.has_value());
  const auto& [x, y, t] = *rep.witness;
  CHECK(t * bad.query(x) + (Rat(1) - t) * bad.query(y) <
        bad.query(add(scale(x, t), scale(y, Rat(1) - t))));

  // A box degenerate to a point passes vacuously.
  FunctionOracle one = from_polyfun(pmtest::parse_fn(1, {{{1}, Rat(0)}}));
  CHECK(axis_convexity_check(one, Box{{{Rat(0), Rat(0)}}}, Rat(1, 4)).pass);
  // Resolution must divide the side.
  CHECK_THROWS_AS(axis_convexity_check(one, Box{{{Rat(0), Rat(1)}}}, Rat(3, 7)), Error);
}

TEST_CASE("jensen_check never fails on max-affine oracles (200 random)") {
  Rng rng(89);
  for (int i = 0; i < 200; i++) {
    int n = static_cast<int>(rng.pick(1, 2));
    FunctionOracle o = from_polyfun(pmtest::rnd_general(rng, n, 5, 4, 4));
    std::vector<std::pair<Vec, Vec>> pairs = {{rng.point(n, 3, 4), rng.point(n, 3, 4)}};
    CHECK(jensen_check(o, pairs, {rng.unit(9)}).pass);
  }
}

TEST_CASE("lipschitz_estimate: exact secant extremes") {
  // max(2x, -y): exhaustive secants over the 25-point grid give exactly 2.
  FunctionOracle o = from_polyfun(pmtest::parse_fn(2, {{{2, 0}, Rat(0)}, {{0, -1}, Rat(0)}}));
  Box box{{{Rat(-1), Rat(1)}, {Rat(-1), Rat(1)}}};
  Rat expected(0);
  for (long xi = -2; xi <= 2; xi++) {
    for (long yi = -2; yi <= 2; yi++) {
      Vec p{Rat(xi, 2), Rat(yi, 2)};
      for (int axis = 0; axis < 2; axis++) {
        Vec q = p;
        q[static_cast<size_t>(axis)] += Rat(1, 2);
        if (q[static_cast<size_t>(axis)] > Rat(1)) continue;
        Rat secant = (o.query(q) - o.query(p)) / Rat(1, 2);
        expected = max(expected, secant.abs());
      }
    }
  }
  CHECK(expected == Rat(2));
  CHECK(lipschitz_estimate(o, box, Rat(1, 2)) == Rat(2));

  FunctionOracle c = from_polyfun(pmtest::parse_fn(2, {{{0, 0}, Rat(7)}}));
  CHECK(lipschitz_estimate(c, box, Rat(1, 2)) == Rat(0));
  CHECK(lipschitz_estimate(builtin_oracle("abs"), Box{{{Rat(-1), Rat(1)}}}, Rat(1, 4)) == Rat(1));
}
