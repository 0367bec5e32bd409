#include "testutil.hpp"

using namespace polymax;
using pmtest::Rng;

TEST_CASE("rational parsing and printing round-trips in lowest terms") {
  CHECK(Rat::parse("3/6")->str() == "1/2");
  CHECK(Rat::parse("-4/2")->str() == "-2");
  CHECK(Rat::parse("+7")->str() == "7");
  CHECK(Rat::parse("0/5")->str() == "0");
  CHECK(!Rat::parse("1/0").has_value());
  CHECK(!Rat::parse("").has_value());
  CHECK(!Rat::parse("1.5").has_value());
  CHECK(!Rat::parse("2/-3").has_value());
  CHECK(!Rat::parse("a/3").has_value());
  Rng rng(7);
  for (int i = 0; i < 200; i++) {
    Rat r = rng.rat(1000, 997);
    CHECK(*Rat::parse(r.str()) == r);
  }
}

TEST_CASE("rational arithmetic is exact") {
  Rat a(1, 3), b(1, 6);
  CHECK(a + b == Rat(1, 2));
  CHECK(a - b == Rat(1, 6));
  CHECK(a * b == Rat(1, 18));
  CHECK(a / b == Rat(2));
  CHECK((-a).str() == "-1/3");
  CHECK(Rat(7, 2).floor() == 3);
  CHECK(Rat(7, 2).ceil() == 4);
  CHECK(Rat(-7, 2).floor() == -4);
  CHECK(Rat(-7, 2).ceil() == -3);
  CHECK_THROWS_AS(Rat(1) / Rat(0), Error);
  // No overflow: (2/3)^64 keeps the full 102-bit denominator.
  Rat p(2, 3);
  Rat acc(1);
  for (int i = 0; i < 64; i++) acc *= p;
  mpz_class d3 = 1;
  for (int i = 0; i < 64; i++) d3 *= 3;
  CHECK(acc.den() == d3);
}

TEST_CASE("vector parsing and formats") {
  Vec v = *parse_vec("1/2,-3,0");
  CHECK(v.size() == 3);
  CHECK(v[0] == Rat(1, 2));
  CHECK(vec_str(v) == "1/2,-3,0");
  CHECK(!parse_vec("1,,2").has_value());
  CHECK(parse_vec(" 1 , 2 ").has_value());
}

TEST_CASE("eval_functional matches direct substitution") {
  AffineFunctional f{{Rat(2), Rat(-1)}, Rat(3)};
  CHECK(f.eval({Rat(1), Rat(1)}) == Rat(4));
  AffineFunctional c{{Rat(0), Rat(0)}, Rat(7, 2)};
  CHECK(c.eval({Rat(5), Rat(-9)}) == Rat(7, 2));
  AffineFunctional s{{Rat(1), Rat(1)}, Rat(0)};
  CHECK(s.eval({Rat(1, 3), Rat(2, 3)}) == Rat(1));
  CHECK_THROWS_AS(f.eval({Rat(1)}), Error);
}

TEST_CASE("classify_functional picks the most restrictive class") {
  CHECK(classify(AffineFunctional{{Rat(2), Rat(-1)}, Rat(3)}) == IntegralityClass::kIntegral);
  CHECK(classify(AffineFunctional{{Rat(2), Rat(-1)}, Rat(1, 2)}) ==
        IntegralityClass::kTransIntegral);
  CHECK(classify(AffineFunctional{{Rat(1, 2), Rat(0)}, Rat(0)}) == IntegralityClass::kGeneral);
}

TEST_CASE("classify_functional is monotone under denominator clearing") {
  Rng rng(11);
  for (int i = 0; i < 100; i++) {
    AffineFunctional f{rng.point(2, 5, 4), rng.rat(5, 4)};
    if (classify(f) != IntegralityClass::kGeneral) continue;
    mpz_class l = 1;
    for (const auto& a : f.slope) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.den().get_mpz_t());
    AffineFunctional scaled{scale(f.slope, Rat(l)), f.constant};
    CHECK(classify(scaled) != IntegralityClass::kGeneral);
  }
}

TEST_CASE("group_membership worked examples") {
  CHECK(group_membership(Rat(5, 3), {Rat(2, 3)}));
  CHECK(!group_membership(Rat(1, 2), {Rat(2, 3)}));
  CHECK(group_membership(Rat(7, 6), {Rat(1, 2), Rat(1, 3)}));
}

namespace {

// Independent route: enumerate integer combinations c0 + sum c_i x_i = v
// with |c_i| <= 2 L (|v| + sum|x_i| + 1), entirely in integer arithmetic
// over a common denominator.
bool brute_membership(const Rat& v, const Vec& x) {
  mpz_class big_l = 1;
  for (const auto& xi : x) mpz_lcm(big_l.get_mpz_t(), big_l.get_mpz_t(), xi.den().get_mpz_t());
  Rat bound_r = Rat(2) * Rat(big_l) * (v.abs() + Rat(1));
  for (const auto& xi : x) bound_r += Rat(2) * Rat(big_l) * xi.abs();
  long bound = bound_r.ceil().get_si();

  mpz_class d = big_l;
  mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.den().get_mpz_t());
  long dl = d.get_si();
  long vs = (v * Rat(d)).num().get_si();
  std::vector<long> xs;
  for (const auto& xi : x) xs.push_back((xi * Rat(d)).num().get_si());

  if (x.size() == 1) {
    for (long c1 = -bound; c1 <= bound; c1++)
      if ((vs - c1 * xs[0]) % dl == 0) return true;
    return false;
  }
  for (long c1 = -bound; c1 <= bound; c1++) {
    long rem = vs - c1 * xs[0];
    for (long c2 = -bound; c2 <= bound; c2++)
      if ((rem - c2 * xs[1]) % dl == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("group_membership agrees with brute-force search on 500 instances") {
  Rng rng(2024);
  for (int i = 0; i < 500; i++) {
    bool two = i % 3 == 0;
    Vec x;
    Rat v;
    if (two) {
      long den = rng.pick(1, 12);
      x = {Rat(rng.pick(-2, 2), den), Rat(rng.pick(-2, 2), den)};
      v = Rat(rng.pick(-6, 6), rng.pick(1, 12));
    } else {
      x = {Rat(rng.pick(-6, 6), rng.pick(1, 12))};
      v = rng.rat(6, 12);
    }
    CAPTURE(v.str());
    CAPTURE(vec_str(x));
    CHECK(group_membership(v, x) == brute_membership(v, x));
  }
}

TEST_CASE("eval_functional is exactly affine on 200 random instances") {
  Rng rng(5);
  for (int i = 0; i < 200; i++) {
    int n = static_cast<int>(rng.pick(1, 3));
    AffineFunctional f{rng.point(n, 9, 7), rng.rat(9, 7)};
    Vec x = rng.point(n, 9, 5), y = rng.point(n, 9, 5);
    Rat t = rng.unit(9);
    Vec mix = add(scale(x, t), scale(y, Rat(1) - t));
    CHECK(f.eval(mix) == t * f.eval(x) + (Rat(1) - t) * f.eval(y));
  }
}
