#include "core/affine.hpp"

#include <sstream>

namespace polymax {

Rat AffineFunctional::eval(const Vec& x) const {
  return dot(slope, x) + constant;
}

Rat AffineFunctional::slope_dot(const Vec& z) const {
  return dot(slope, z);
}

bool operator==(const AffineFunctional& a, const AffineFunctional& b) {
  return a.constant == b.constant && a.slope == b.slope;
}

int lex_compare(const AffineFunctional& a, const AffineFunctional& b) {
  int c = lex_compare(a.slope, b.slope);
  if (c != 0) return c;
  if (a.constant < b.constant) return -1;
  if (b.constant < a.constant) return 1;
  return 0;
}

bool operator<(const AffineFunctional& a, const AffineFunctional& b) {
  return lex_compare(a, b) < 0;
}

AffineFunctional operator-(const AffineFunctional& a, const AffineFunctional& b) {
  return AffineFunctional{sub(a.slope, b.slope), a.constant - b.constant};
}

IntegralityClass classify(const AffineFunctional& f) {
  for (const auto& a : f.slope)
    if (!a.is_integer()) return IntegralityClass::kGeneral;
  return f.constant.is_integer() ? IntegralityClass::kIntegral
                                 : IntegralityClass::kTransIntegral;
}

IntegralityClass join(IntegralityClass a, IntegralityClass b) {
  return static_cast<IntegralityClass>(
      std::max(static_cast<int>(a), static_cast<int>(b)));
}

const char* to_string(IntegralityClass c) {
  switch (c) {
    case IntegralityClass::kIntegral: return "integral";
    case IntegralityClass::kTransIntegral: return "transintegral";
    case IntegralityClass::kGeneral: return "general";
  }
  return "general";
}

namespace {

struct GroupData {
  mpz_class L;  // lcm of coordinate denominators
  mpz_class g;  // gcd(L, L x_1, ..., L x_n); the group is (g/L) Z
};

GroupData group_data(const Vec& x) {
  GroupData d;
  d.L = 1;
  for (const auto& xi : x) mpz_lcm(d.L.get_mpz_t(), d.L.get_mpz_t(), xi.den().get_mpz_t());
  d.g = d.L;
  for (const auto& xi : x) {
    mpz_class Lx = d.L * xi.num() / xi.den();
    mpz_gcd(d.g.get_mpz_t(), d.g.get_mpz_t(), Lx.get_mpz_t());
  }
  return d;
}

}  // namespace

bool group_membership(const Rat& v, const Vec& x) {
  GroupData d = group_data(x);
  return (v * Rat(d.L, d.g)).is_integer();
}

std::string group_membership_trace(const Rat& v, const Vec& x) {
  GroupData d = group_data(x);
  Rat scaled = v * Rat(d.L, d.g);
  std::ostringstream os;
  os << "Z + Z-span of (" << vec_str(x) << ") is (" << Rat(d.g, d.L).str()
     << ")Z; v*L/g = " << v.str() << " * " << d.L.get_str() << "/"
     << d.g.get_str() << " = " << scaled.str() << " is "
     << (scaled.is_integer() ? "" : "not ") << "an integer";
  return os.str();
}

}  // namespace polymax
