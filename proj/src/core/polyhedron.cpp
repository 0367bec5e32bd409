#include "core/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "core/errors.hpp"
#include "core/linalg.hpp"

namespace polymax {

RationalPolyhedron::RationalPolyhedron(int n, std::vector<HalfSpace> halfspaces)
    : n_(n), halfspaces_(std::move(halfspaces)) {
  require(n >= 1, ErrorCode::kInvalidArgument, "polyhedron dimension must be >= 1");
  for (const auto& h : halfspaces_) {
    require(h.fn.dim() == n, ErrorCode::kDimensionMismatch, "halfspace dimension mismatch");
    require(!is_zero_vec(h.fn.slope), ErrorCode::kInvalidArgument,
            "halfspace requires a nonzero slope");
  }
}

bool RationalPolyhedron::contains(const Vec& x) const {
  require(static_cast<int>(x.size()) == n_, ErrorCode::kDimensionMismatch,
          "contains: point dimension mismatch");
  for (const auto& h : halfspaces_)
    if (h.fn.eval(x).sign() < 0) return false;
  return true;
}

std::vector<LpConstraint> RationalPolyhedron::lp_constraints() const {
  std::vector<LpConstraint> cs;
  cs.reserve(halfspaces_.size());
  for (const auto& h : halfspaces_) cs.push_back({h.fn, false});
  return cs;
}

bool is_empty(const RationalPolyhedron& p) {
  return !lp_feasible(p.dim(), p.lp_constraints());
}

std::optional<Vec> feasible_point(const RationalPolyhedron& p) {
  AffineFunctional zero{zero_vec(p.dim()), Rat(0)};
  LpResult r = lp_maximize(p.dim(), zero, p.lp_constraints());
  if (r.status == LpStatus::kInfeasible) return std::nullopt;
  return r.point;
}

std::vector<int> implicit_equalities(const RationalPolyhedron& p) {
  std::vector<int> eq;
  auto cs = p.lp_constraints();
  for (size_t i = 0; i < p.halfspaces().size(); i++) {
    LpResult r = lp_maximize(p.dim(), p.halfspaces()[i].fn, cs);
    if (r.status == LpStatus::kOptimal && r.value.is_zero()) eq.push_back(static_cast<int>(i));
  }
  return eq;
}

std::optional<Vec> relative_interior_point(const RationalPolyhedron& p) {
  if (is_empty(p)) return std::nullopt;
  std::vector<int> eq = implicit_equalities(p);
  std::vector<bool> is_eq(p.halfspaces().size(), false);
  for (int i : eq) is_eq[static_cast<size_t>(i)] = true;
  // Maximize delta with fn_i(x) >= delta off the equality set, delta <= 1.
  int n = p.dim();
  std::vector<LpConstraint> cs;
  for (size_t i = 0; i < p.halfspaces().size(); i++) {
    const auto& fn = p.halfspaces()[i].fn;
    Vec s = fn.slope;
    s.push_back(is_eq[i] ? Rat(0) : Rat(-1));
    cs.push_back({{std::move(s), fn.constant}, is_eq[i]});
  }
  Vec cap = zero_vec(n + 1);
  cap[static_cast<size_t>(n)] = Rat(-1);
  cs.push_back({{std::move(cap), Rat(1)}, false});
  Vec obj = zero_vec(n + 1);
  obj[static_cast<size_t>(n)] = Rat(1);
  LpResult r = lp_maximize(n + 1, {std::move(obj), Rat(0)}, cs);
  if (r.status != LpStatus::kOptimal || r.value.sign() <= 0) return std::nullopt;
  r.point.pop_back();
  return r.point;
}

int dimension(const RationalPolyhedron& p) {
  if (is_empty(p)) return -1;
  std::vector<int> eq = implicit_equalities(p);
  Matrix rows;
  for (int i : eq) rows.push_back(p.halfspaces()[static_cast<size_t>(i)].fn.slope);
  return p.dim() - (rows.empty() ? 0 : rank(rows));
}

RationalPolyhedron with_equalities(const RationalPolyhedron& p, const std::vector<int>& idx) {
  std::vector<HalfSpace> hs = p.halfspaces();
  for (int i : idx) {
    const auto& fn = p.halfspaces()[static_cast<size_t>(i)].fn;
    hs.push_back({AffineFunctional{scale(fn.slope, Rat(-1)), -fn.constant}});
  }
  return RationalPolyhedron(p.dim(), std::move(hs));
}

std::vector<Facet> facets(const RationalPolyhedron& p) {
  size_t m = p.halfspaces().size();
  require(m <= 12, ErrorCode::kPrecondition,
          "facet enumeration budget is 12 halfspaces, got " + std::to_string(m));
  std::vector<Facet> out;
  if (is_empty(p)) return out;
  std::vector<int> improper_sig = implicit_equalities(p);

  std::map<std::vector<int>, Facet> by_signature;
  for (unsigned mask = 0; mask < (1u << m); mask++) {
    // Constraint system of B_I.
    std::vector<LpConstraint> cs = p.lp_constraints();
    std::vector<int> chosen;
    for (size_t i = 0; i < m; i++) {
      if (mask & (1u << i)) {
        cs[i].equality = true;
        chosen.push_back(static_cast<int>(i));
      }
    }
    if (!lp_feasible(p.dim(), cs)) continue;
    // Point-set signature: every constraint identically zero on B_I.
    std::vector<int> sig = chosen;
    for (size_t k = 0; k < m; k++) {
      if (mask & (1u << k)) continue;
      LpResult r = lp_maximize(p.dim(), p.halfspaces()[k].fn, cs);
      if (r.status == LpStatus::kOptimal && r.value.is_zero()) sig.push_back(static_cast<int>(k));
    }
    std::sort(sig.begin(), sig.end());
    if (by_signature.count(sig)) continue;
    by_signature.emplace(sig, Facet{sig, with_equalities(p, sig), sig != improper_sig});
  }
  for (auto& [sig, f] : by_signature) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), [](const Facet& a, const Facet& b) {
    if (a.active.size() != b.active.size()) return a.active.size() < b.active.size();
    return a.active < b.active;
  });
  return out;
}

std::vector<Vec> vertices(const RationalPolyhedron& p) {
  int n = p.dim();
  require(n <= 3, ErrorCode::kUnsupported, "vertex enumeration limited to dimension <= 3");
  size_t m = p.halfspaces().size();
  std::vector<Vec> out;
  if (m < static_cast<size_t>(n)) return out;
  std::vector<int> idx(static_cast<size_t>(n));
  // All n-subsets of constraints; a vertex is a unique solution of the
  // corresponding equality system that lies in P.
  auto try_subset = [&](const std::vector<int>& subset) {
    Matrix a;
    Vec b;
    for (int i : subset) {
      a.push_back(p.halfspaces()[static_cast<size_t>(i)].fn.slope);
      b.push_back(-p.halfspaces()[static_cast<size_t>(i)].fn.constant);
    }
    auto x = solve_square(a, b);
    if (x && p.contains(*x)) out.push_back(*x);
  };
  std::vector<int> subset;
  std::function<void(size_t, int)> rec = [&](size_t start, int need) {
    if (need == 0) {
      try_subset(subset);
      return;
    }
    for (size_t i = start; i + static_cast<size_t>(need) <= m; i++) {
      subset.push_back(static_cast<int>(i));
      rec(i + 1, need - 1);
      subset.pop_back();
    }
  };
  rec(0, n);
  std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_affine_orthant(const RationalPolyhedron& p) {
  if (static_cast<int>(p.halfspaces().size()) != p.dim()) return false;
  Matrix rows;
  for (const auto& h : p.halfspaces()) rows.push_back(h.fn.slope);
  return rank(rows) == p.dim();
}

bool interior_contains(const RationalPolyhedron& p, const Vec& x) {
  require(p.dim() <= 3, ErrorCode::kUnsupported, "interior test limited to dimension <= 3");
  if (!p.contains(x)) return false;
  std::vector<int> eq = implicit_equalities(p);
  std::vector<bool> is_eq(p.halfspaces().size(), false);
  for (int i : eq) is_eq[static_cast<size_t>(i)] = true;
  for (size_t i = 0; i < p.halfspaces().size(); i++) {
    if (is_eq[i]) continue;  // identically zero on the affine hull
    if (p.halfspaces()[i].fn.eval(x).is_zero()) return false;
  }
  return true;
}

bool is_bounded(const RationalPolyhedron& p) {
  require(p.dim() <= 3, ErrorCode::kUnsupported, "boundedness test limited to dimension <= 3");
  if (is_empty(p)) return true;
  // Recession cone {d : mu_i(d) >= 0} clipped to [-1,1]^n; bounded iff the
  // only direction is 0.
  int n = p.dim();
  std::vector<LpConstraint> cs;
  for (const auto& h : p.halfspaces()) cs.push_back({{h.fn.slope, Rat(0)}, false});
  for (int j = 0; j < n; j++) {
    Vec lo = basis_vec(n, j);
    cs.push_back({{lo, Rat(1)}, false});
    cs.push_back({{scale(lo, Rat(-1)), Rat(1)}, false});
  }
  for (int j = 0; j < n; j++) {
    AffineFunctional obj{basis_vec(n, j), Rat(0)};
    LpResult up = lp_maximize(n, obj, cs);
    if (up.status != LpStatus::kOptimal || !up.value.is_zero()) return false;
    LpResult dn = lp_minimize(n, obj, cs);
    if (dn.status != LpStatus::kOptimal || !dn.value.is_zero()) return false;
  }
  return true;
}

}  // namespace polymax
