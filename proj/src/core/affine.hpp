#pragma once

#include <string>

#include "core/rat.hpp"

namespace polymax {

/// x |-> a_1 x_1 + ... + a_n x_n + b. The slope (a_1..a_n) is the associated
/// linear functional and is meaningful without the constant.
struct AffineFunctional {
  Vec slope;
  Rat constant;

  int dim() const { return static_cast<int>(slope.size()); }
  Rat eval(const Vec& x) const;
  /// The linear part applied to z, i.e. mu(z).
  Rat slope_dot(const Vec& z) const;
};

bool operator==(const AffineFunctional& a, const AffineFunctional& b);
/// Lexicographic on (slope, constant); the tie-break order used everywhere.
int lex_compare(const AffineFunctional& a, const AffineFunctional& b);
bool operator<(const AffineFunctional& a, const AffineFunctional& b);

AffineFunctional operator-(const AffineFunctional& a, const AffineFunctional& b);

enum class IntegralityClass { kIntegral, kTransIntegral, kGeneral };

/// Most restrictive class the functional satisfies.
IntegralityClass classify(const AffineFunctional& f);
/// Least restrictive of the two (the class of a set of functionals).
IntegralityClass join(IntegralityClass a, IntegralityClass b);
const char* to_string(IntegralityClass c);

/// Decides v in Z + Z x_1 + ... + Z x_n exactly: with L the lcm of the
/// coordinate denominators and g = gcd(L, L x_1, ..., L x_n), the group is
/// (g/L) Z, so the test is v L / g in Z.
bool group_membership(const Rat& v, const Vec& x);
/// Human-readable trace of the computation above, for reject witnesses.
std::string group_membership_trace(const Rat& v, const Vec& x);

}  // namespace polymax
