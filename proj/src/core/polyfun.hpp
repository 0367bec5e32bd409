#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "core/affine.hpp"
#include "core/polyhedron.hpp"
#include "core/rat.hpp"

namespace polymax {

/// Pointwise maximum of a nonempty finite set of affine functionals.
/// Immutable; equality of canonical forms is equality of functions on R^n.
class PolyhedralFunction {
 public:
  PolyhedralFunction(int n, std::vector<AffineFunctional> fns);

  int dim() const { return n_; }
  const std::vector<AffineFunctional>& functionals() const { return fns_; }

  Rat eval(const Vec& x) const;
  /// Indices attaining the maximum at x; never empty.
  std::vector<int> active_set(const Vec& x) const;

 private:
  int n_;
  std::vector<AffineFunctional> fns_;
};

/// Unique minimal representation over R^n: a functional is kept iff it is
/// somewhere strictly above the max of all the others (an exact rational
/// feasibility problem; in one dimension, an upper-envelope sweep).
/// Duplicates collapse; output sorted lexicographically by (slope, constant).
PolyhedralFunction canonicalize(const PolyhedralFunction& f);

/// Tropical sum: pointwise max. Union of representations, canonicalized.
PolyhedralFunction trop_add(const PolyhedralFunction& f, const PolyhedralFunction& g);
/// Tropical product: pointwise sum. Pairwise functional sums, canonicalized.
PolyhedralFunction trop_mul(const PolyhedralFunction& f, const PolyhedralFunction& g);

/// An active functional at x (so f(x) = lambda(x) and f >= lambda on R^n);
/// ties broken by lexicographically smallest (slope, constant).
AffineFunctional support_at(const PolyhedralFunction& f, const Vec& x);

/// f'(x, z) = max of mu_i(z) over the active set; exact.
Rat dir_deriv(const PolyhedralFunction& f, const Vec& x, const Vec& z);

/// Class of the canonical form (join over canonical functionals).
IntegralityClass classify(const PolyhedralFunction& f);

/// F-rational parameterized line (or ray / segment of one).
struct LineParam {
  enum class Kind { kFullLine, kRay, kSegment };

  Vec base;
  Vec direction;
  Kind kind = Kind::kFullLine;
  Rat t0, t1;  // kRay: [t0, inf); kSegment: [t0, t1]

  static LineParam full(Vec base, Vec direction);
  static LineParam ray(Vec base, Vec direction, Rat t0);
  static LineParam segment(Vec base, Vec direction, Rat t0, Rat t1);

  Vec at(const Rat& t) const;
};

/// t |-> f(base + t direction) as a 1-D polyhedral function, canonicalized.
PolyhedralFunction restrict_line(const PolyhedralFunction& f, const LineParam& line);

/// Maximal region where functional i is ambient: {x : fn_i(x) >= fn_j(x)}.
struct DomainOfAffinity {
  AffineFunctional functional;
  RationalPolyhedron region;
};
DomainOfAffinity domain_of_affinity(const PolyhedralFunction& f, int i);

/// Checks f = lambda on T and on z; with z in the interior of conv(T)
/// (verified exactly for full-dimensional hulls, n <= 3, errors otherwise)
/// this certifies f = lambda on conv(T).
bool certify_affine_on_hull(const PolyhedralFunction& f, const std::vector<Vec>& points,
                            const Vec& z, const AffineFunctional& lambda);

/// Canonical 1-D structure: lines sorted by slope, breakpoints between them.
struct Pieces1D {
  std::vector<AffineFunctional> lines;
  std::vector<Rat> breakpoints;  // size lines.size() - 1, strictly increasing
};
Pieces1D pieces_1d(const PolyhedralFunction& f);

/// Exact equality of two 1-D functions on [a, b].
bool equal_on_interval(const PolyhedralFunction& f, const PolyhedralFunction& g,
                       const Rat& a, const Rat& b);

/// g_m(t) = inf_u { f(x1 + t(x2-x1) + u z) - m u } as a 1-D function of t,
/// computed symbolically; nullopt when the infimum is -infinity
/// (m outside [min mu_i(z), max mu_i(z)]).
std::optional<PolyhedralFunction> partial_conjugate(const PolyhedralFunction& f,
                                                    const Vec& x1, const Vec& x2,
                                                    const Vec& z, long m);

struct PartialConjugateResult {
  std::vector<long> slope_set;  // integers m with finite g_m
  std::map<long, PolyhedralFunction> profiles;
  std::map<long, bool> finite;
};
PartialConjugateResult partial_conjugate_all(const PolyhedralFunction& f, const Vec& x1,
                                             const Vec& x2, const Vec& z);

struct SlopeDecompositionReport {
  bool ok = true;
  std::optional<std::pair<Rat, Rat>> witness;  // (t, u) where the identity fails
  std::optional<long> offending_m;             // m whose g_m is -infinity
  Rat lhs, rhs;                                // values at the witness
};
/// Checks f(x1 + t(x2-x1) + u z) = sup_m { g_m(t) + m u } exactly on the
/// sample grid. A slope-set override exercises negative controls.
SlopeDecompositionReport verify_slope_decomposition(
    const PolyhedralFunction& f, const Vec& x1, const Vec& x2, const Vec& z,
    const std::vector<Rat>& ts, const std::vector<Rat>& us,
    const std::optional<std::vector<long>>& slope_set_override = std::nullopt);

}  // namespace polymax
