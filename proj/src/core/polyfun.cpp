#include "core/polyfun.hpp"

#include <algorithm>
#include <functional>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/lp.hpp"

namespace polymax {

PolyhedralFunction::PolyhedralFunction(int n, std::vector<AffineFunctional> fns)
    : n_(n), fns_(std::move(fns)) {
  require(n >= 1, ErrorCode::kInvalidArgument, "function dimension must be >= 1");
  require(!fns_.empty(), ErrorCode::kInvalidArgument, "a polyhedral function needs at least one functional");
  for (const auto& f : fns_)
    require(f.dim() == n, ErrorCode::kDimensionMismatch, "functional dimension mismatch");
}

Rat PolyhedralFunction::eval(const Vec& x) const {
  require(static_cast<int>(x.size()) == n_, ErrorCode::kDimensionMismatch,
          "eval: point dimension mismatch");
  Rat best = fns_[0].eval(x);
  for (size_t i = 1; i < fns_.size(); i++) best = max(best, fns_[i].eval(x));
  return best;
}

std::vector<int> PolyhedralFunction::active_set(const Vec& x) const {
  Rat v = eval(x);
  std::vector<int> idx;
  for (size_t i = 0; i < fns_.size(); i++)
    if (fns_[i].eval(x) == v) idx.push_back(static_cast<int>(i));
  return idx;
}

namespace {

// Upper envelope of distinct-slope lines sorted by slope (convex-hull-trick
// sweep). Keeps exactly the lines that are strict maxima somewhere.
std::vector<AffineFunctional> envelope_1d(std::vector<AffineFunctional> lines) {
  // Collapse equal slopes to the largest constant.
  std::sort(lines.begin(), lines.end());
  std::vector<AffineFunctional> distinct;
  for (auto& l : lines) {
    if (!distinct.empty() && distinct.back().slope == l.slope)
      distinct.back().constant = max(distinct.back().constant, l.constant);
    else
      distinct.push_back(l);
  }
  auto cross_x = [](const AffineFunctional& a, const AffineFunctional& b) {
    return (a.constant - b.constant) / (b.slope[0] - a.slope[0]);
  };
  std::vector<AffineFunctional> st;
  for (const auto& l : distinct) {
    while (st.size() >= 2) {
      const auto& b = st[st.size() - 1];
      const auto& a = st[st.size() - 2];
      // b survives iff it beats a strictly before it loses to l.
      if (cross_x(a, b) < cross_x(b, l)) break;
      st.pop_back();
    }
    st.push_back(l);
  }
  return st;
}

// Deterministic probe points used to short-circuit the essentiality LP: a
// functional that is the unique strict maximum at any probe is essential.
std::vector<Vec> probe_points(int n) {
  std::vector<Vec> pts;
  std::vector<Rat> scales = {Rat(1), Rat(3), Rat(17, 5)};
  for (const auto& s : scales) {
    std::vector<int> digits(static_cast<size_t>(n), 0);
    while (true) {
      Vec p(static_cast<size_t>(n));
      for (int i = 0; i < n; i++) p[static_cast<size_t>(i)] = Rat(digits[static_cast<size_t>(i)] - 1) * s;
      pts.push_back(std::move(p));
      int k = 0;
      while (k < n && digits[static_cast<size_t>(k)] == 2) digits[static_cast<size_t>(k++)] = 0;
      if (k == n) break;
      digits[static_cast<size_t>(k)]++;
    }
  }
  // A couple of generic points off every small rational hyperplane.
  Vec g1(static_cast<size_t>(n)), g2(static_cast<size_t>(n));
  const long primes[] = {13, 29, 43};
  for (int i = 0; i < n; i++) {
    g1[static_cast<size_t>(i)] = Rat(primes[i], 7 + i);
    g2[static_cast<size_t>(i)] = Rat(-primes[i], 11 + i);
  }
  pts.push_back(g1);
  pts.push_back(g2);
  return pts;
}

}  // namespace

PolyhedralFunction canonicalize(const PolyhedralFunction& f) {
  std::vector<AffineFunctional> fns = f.functionals();
  std::sort(fns.begin(), fns.end());
  fns.erase(std::unique(fns.begin(), fns.end()), fns.end());
  if (fns.size() == 1) return PolyhedralFunction(f.dim(), fns);
  if (f.dim() == 1) return PolyhedralFunction(1, envelope_1d(std::move(fns)));

  size_t m = fns.size();
  std::vector<char> essential(m, 0), decided(m, 0);
  for (const auto& p : probe_points(f.dim())) {
    size_t best = 0;
    bool unique = true;
    Rat bv = fns[0].eval(p);
    for (size_t i = 1; i < m; i++) {
      Rat v = fns[i].eval(p);
      if (v > bv) { bv = v; best = i; unique = true; }
      else if (v == bv) unique = false;
    }
    if (unique && !decided[best]) { essential[best] = 1; decided[best] = 1; }
  }
  int n = f.dim();
  for (size_t i = 0; i < m; i++) {
    if (decided[i]) continue;
    // max delta s.t. fn_i - fn_j >= delta for all j != i, delta <= 1.
    std::vector<LpConstraint> cs;
    for (size_t j = 0; j < m; j++) {
      if (j == i) continue;
      AffineFunctional d = fns[i] - fns[j];
      d.slope.push_back(Rat(-1));
      cs.push_back({std::move(d), false});
    }
    Vec cap = zero_vec(n + 1);
    cap[static_cast<size_t>(n)] = Rat(-1);
    cs.push_back({{std::move(cap), Rat(1)}, false});
    Vec obj = zero_vec(n + 1);
    obj[static_cast<size_t>(n)] = Rat(1);
    LpResult r = lp_maximize(n + 1, {std::move(obj), Rat(0)}, cs);
    essential[i] = (r.status == LpStatus::kOptimal && r.value.sign() > 0) ? 1 : 0;
  }
  std::vector<AffineFunctional> kept;
  for (size_t i = 0; i < m; i++)
    if (essential[i]) kept.push_back(fns[i]);
  return PolyhedralFunction(f.dim(), std::move(kept));
}

PolyhedralFunction trop_add(const PolyhedralFunction& f, const PolyhedralFunction& g) {
  require(f.dim() == g.dim(), ErrorCode::kDimensionMismatch, "trop_add: dimension mismatch");
  std::vector<AffineFunctional> fns = f.functionals();
  fns.insert(fns.end(), g.functionals().begin(), g.functionals().end());
  return canonicalize(PolyhedralFunction(f.dim(), std::move(fns)));
}

PolyhedralFunction trop_mul(const PolyhedralFunction& f, const PolyhedralFunction& g) {
  require(f.dim() == g.dim(), ErrorCode::kDimensionMismatch, "trop_mul: dimension mismatch");
  std::vector<AffineFunctional> fns;
  for (const auto& a : f.functionals())
    for (const auto& b : g.functionals())
      fns.push_back({add(a.slope, b.slope), a.constant + b.constant});
  return canonicalize(PolyhedralFunction(f.dim(), std::move(fns)));
}

AffineFunctional support_at(const PolyhedralFunction& f, const Vec& x) {
  std::vector<int> act = f.active_set(x);
  const AffineFunctional* best = &f.functionals()[static_cast<size_t>(act[0])];
  for (int i : act) {
    const AffineFunctional& cand = f.functionals()[static_cast<size_t>(i)];
    if (lex_compare(cand, *best) < 0) best = &cand;
  }
  return *best;
}

Rat dir_deriv(const PolyhedralFunction& f, const Vec& x, const Vec& z) {
  require(static_cast<int>(z.size()) == f.dim(), ErrorCode::kDimensionMismatch,
          "dir_deriv: direction dimension mismatch");
  require(!is_zero_vec(z), ErrorCode::kInvalidArgument, "dir_deriv: zero direction");
  std::vector<int> act = f.active_set(x);
  Rat best = f.functionals()[static_cast<size_t>(act[0])].slope_dot(z);
  for (size_t k = 1; k < act.size(); k++)
    best = max(best, f.functionals()[static_cast<size_t>(act[k])].slope_dot(z));
  return best;
}

IntegralityClass classify(const PolyhedralFunction& f) {
  PolyhedralFunction c = canonicalize(f);
  IntegralityClass cls = IntegralityClass::kIntegral;
  for (const auto& fn : c.functionals()) cls = join(cls, classify(fn));
  return cls;
}

LineParam LineParam::full(Vec base, Vec direction) {
  LineParam l;
  l.base = std::move(base);
  l.direction = std::move(direction);
  l.kind = Kind::kFullLine;
  require(!is_zero_vec(l.direction), ErrorCode::kInvalidArgument, "line requires nonzero direction");
  return l;
}

LineParam LineParam::ray(Vec base, Vec direction, Rat t0) {
  LineParam l = full(std::move(base), std::move(direction));
  l.kind = Kind::kRay;
  l.t0 = std::move(t0);
  return l;
}

LineParam LineParam::segment(Vec base, Vec direction, Rat t0, Rat t1) {
  LineParam l = full(std::move(base), std::move(direction));
  l.kind = Kind::kSegment;
  require(t0 <= t1, ErrorCode::kInvalidArgument, "segment with t0 > t1");
  l.t0 = std::move(t0);
  l.t1 = std::move(t1);
  return l;
}

Vec LineParam::at(const Rat& t) const {
  return add(base, scale(direction, t));
}

PolyhedralFunction restrict_line(const PolyhedralFunction& f, const LineParam& line) {
  require(static_cast<int>(line.base.size()) == f.dim() &&
              static_cast<int>(line.direction.size()) == f.dim(),
          ErrorCode::kDimensionMismatch, "restrict: line dimension mismatch");
  require(!is_zero_vec(line.direction), ErrorCode::kInvalidArgument, "restrict: zero direction");
  std::vector<AffineFunctional> lines;
  for (const auto& fn : f.functionals())
    lines.push_back({{fn.slope_dot(line.direction)}, fn.slope_dot(line.base) + fn.constant});
  return canonicalize(PolyhedralFunction(1, std::move(lines)));
}

DomainOfAffinity domain_of_affinity(const PolyhedralFunction& f, int i) {
  require(i >= 0 && i < static_cast<int>(f.functionals().size()),
          ErrorCode::kInvalidArgument, "domain_of_affinity: index out of range");
  const AffineFunctional& fi = f.functionals()[static_cast<size_t>(i)];
  std::vector<HalfSpace> hs;
  bool empty = false;
  for (size_t j = 0; j < f.functionals().size(); j++) {
    if (static_cast<int>(j) == i) continue;
    AffineFunctional d = fi - f.functionals()[j];
    if (is_zero_vec(d.slope)) {
      if (d.constant.sign() < 0) empty = true;  // fn_j everywhere above fn_i
      continue;                                 // constraint is vacuous or impossible
    }
    hs.push_back({std::move(d)});
  }
  if (empty) {
    Vec e1 = basis_vec(f.dim(), 0);
    hs = {HalfSpace{{e1, Rat(-1)}}, HalfSpace{{scale(e1, Rat(-1)), Rat(0)}}};
  }
  return {fi, RationalPolyhedron(f.dim(), std::move(hs))};
}

bool certify_affine_on_hull(const PolyhedralFunction& f, const std::vector<Vec>& points,
                            const Vec& z, const AffineFunctional& lambda) {
  int n = f.dim();
  require(n <= 3, ErrorCode::kUnsupported, "hull certification limited to dimension <= 3");
  require(!points.empty(), ErrorCode::kInvalidArgument, "empty point set");
  for (const auto& p : points)
    require(static_cast<int>(p.size()) == n, ErrorCode::kDimensionMismatch, "point dimension mismatch");
  require(static_cast<int>(z.size()) == n && lambda.dim() == n,
          ErrorCode::kDimensionMismatch, "certify: dimension mismatch");

  Matrix diffs;
  for (size_t i = 1; i < points.size(); i++) diffs.push_back(sub(points[i], points[0]));
  require(!diffs.empty() && rank(diffs) == n, ErrorCode::kPrecondition,
          "hull of the point set is degenerate; interiority unverifiable");

  // z is interior iff z +- delta e_i lies in conv(points) for some delta > 0
  // and every axis i (the cross-polytope around z). One LP decides it:
  // variables are delta followed by one barycentric weight block per probe.
  size_t t = points.size();
  int nv = 1 + static_cast<int>(2 * static_cast<size_t>(n) * t);
  std::vector<LpConstraint> cs;
  for (int probe = 0; probe < 2 * n; probe++) {
    int axis = probe / 2;
    Rat sign = (probe % 2 == 0) ? Rat(1) : Rat(-1);
    size_t base = 1 + static_cast<size_t>(probe) * t;
    for (int c = 0; c < n; c++) {
      Vec row = zero_vec(nv);
      for (size_t j = 0; j < t; j++) row[base + j] = points[j][static_cast<size_t>(c)];
      if (c == axis) row[0] = -sign;
      cs.push_back({{std::move(row), -z[static_cast<size_t>(c)]}, true});
    }
    Vec sum = zero_vec(nv);
    for (size_t j = 0; j < t; j++) sum[base + j] = Rat(1);
    cs.push_back({{std::move(sum), Rat(-1)}, true});
    for (size_t j = 0; j < t; j++) {
      Vec w = zero_vec(nv);
      w[base + j] = Rat(1);
      cs.push_back({{std::move(w), Rat(0)}, false});
    }
  }
  Vec obj = zero_vec(nv);
  obj[0] = Rat(1);
  LpResult r = lp_maximize(nv, {std::move(obj), Rat(0)}, cs);
  require(r.status == LpStatus::kOptimal && r.value.sign() > 0, ErrorCode::kPrecondition,
          "z is not in the interior of the convex hull of the point set");

  for (const auto& p : points)
    if (f.eval(p) != lambda.eval(p)) return false;
  return f.eval(z) == lambda.eval(z);
}

Pieces1D pieces_1d(const PolyhedralFunction& f) {
  require(f.dim() == 1, ErrorCode::kDimensionMismatch, "pieces_1d needs a 1-D function");
  PolyhedralFunction c = canonicalize(f);
  Pieces1D out;
  out.lines = c.functionals();
  for (size_t i = 0; i + 1 < out.lines.size(); i++) {
    const auto& a = out.lines[i];
    const auto& b = out.lines[i + 1];
    out.breakpoints.push_back((a.constant - b.constant) / (b.slope[0] - a.slope[0]));
  }
  return out;
}

bool equal_on_interval(const PolyhedralFunction& f, const PolyhedralFunction& g,
                       const Rat& a, const Rat& b) {
  require(f.dim() == 1 && g.dim() == 1, ErrorCode::kDimensionMismatch,
          "equal_on_interval needs 1-D functions");
  require(a <= b, ErrorCode::kInvalidArgument, "equal_on_interval: empty interval");
  std::vector<Rat> pts = {a, b};
  for (const auto& fn : {std::cref(f), std::cref(g)})
    for (const auto& t : pieces_1d(fn.get()).breakpoints)
      if (a < t && t < b) pts.push_back(t);
  std::sort(pts.begin(), pts.end());
  for (const auto& t : pts)
    if (f.eval({t}) != g.eval({t})) return false;
  return true;
}

namespace {

struct ConjugateFrame {
  std::vector<AffineFunctional> c;  // c_i as 1-D affine functions of t
  std::vector<Rat> s_mu;            // mu_i(z)
};

ConjugateFrame conjugate_frame(const PolyhedralFunction& f, const Vec& x1, const Vec& x2,
                               const Vec& z) {
  require(f.dim() == 2, ErrorCode::kUnsupported, "partial conjugate is defined for n = 2");
  require(x1 != x2, ErrorCode::kInvalidArgument, "partial conjugate: x1 = x2");
  require(!is_zero_vec(z), ErrorCode::kInvalidArgument, "partial conjugate: z = 0");
  ConjugateFrame fr;
  Vec d = sub(x2, x1);
  PolyhedralFunction fc = canonicalize(f);
  for (const auto& fn : fc.functionals()) {
    fr.c.push_back({{fn.slope_dot(d)}, fn.slope_dot(x1) + fn.constant});
    fr.s_mu.push_back(fn.slope_dot(z));
  }
  return fr;
}

// inf over u of max_i (c_i(t) + s_i u) via exact LP duality: the optimal dual
// weights sit on singletons with s_i = 0 and on sign-mixing pairs.
std::optional<PolyhedralFunction> conjugate_profile(const ConjugateFrame& fr, long m) {
  std::vector<AffineFunctional> cand;
  size_t k = fr.c.size();
  std::vector<Rat> s(k);
  bool has_nonpos = false, has_nonneg = false;
  for (size_t i = 0; i < k; i++) {
    s[i] = fr.s_mu[i] - Rat(m);
    if (s[i].sign() <= 0) has_nonpos = true;
    if (s[i].sign() >= 0) has_nonneg = true;
  }
  if (!has_nonpos || !has_nonneg) return std::nullopt;
  for (size_t i = 0; i < k; i++)
    if (s[i].is_zero()) cand.push_back(fr.c[i]);
  for (size_t i = 0; i < k; i++) {
    if (s[i].sign() >= 0) continue;
    for (size_t j = 0; j < k; j++) {
      if (s[j].sign() <= 0) continue;
      Rat w = Rat(1) / (s[j] - s[i]);
      cand.push_back({{(s[j] * fr.c[i].slope[0] - s[i] * fr.c[j].slope[0]) * w},
                      (s[j] * fr.c[i].constant - s[i] * fr.c[j].constant) * w});
    }
  }
  return canonicalize(PolyhedralFunction(1, std::move(cand)));
}

}  // namespace

std::optional<PolyhedralFunction> partial_conjugate(const PolyhedralFunction& f,
                                                    const Vec& x1, const Vec& x2,
                                                    const Vec& z, long m) {
  return conjugate_profile(conjugate_frame(f, x1, x2, z), m);
}

PartialConjugateResult partial_conjugate_all(const PolyhedralFunction& f, const Vec& x1,
                                             const Vec& x2, const Vec& z) {
  ConjugateFrame fr = conjugate_frame(f, x1, x2, z);
  Rat lo = fr.s_mu[0], hi = fr.s_mu[0];
  for (const auto& v : fr.s_mu) {
    lo = min(lo, v);
    hi = max(hi, v);
  }
  PartialConjugateResult out;
  mpz_class a = lo.ceil(), b = hi.floor();
  for (mpz_class m = a; m <= b; m++) {
    long mi = Rat(m).to_long();
    auto prof = conjugate_profile(fr, mi);
    out.slope_set.push_back(mi);
    out.finite[mi] = prof.has_value();
    if (prof) out.profiles.emplace(mi, std::move(*prof));
  }
  return out;
}

SlopeDecompositionReport verify_slope_decomposition(
    const PolyhedralFunction& f, const Vec& x1, const Vec& x2, const Vec& z,
    const std::vector<Rat>& ts, const std::vector<Rat>& us,
    const std::optional<std::vector<long>>& slope_set_override) {
  ConjugateFrame fr = conjugate_frame(f, x1, x2, z);
  SlopeDecompositionReport rep;
  std::vector<long> ms;
  if (slope_set_override) {
    ms = *slope_set_override;
  } else {
    for (long m : partial_conjugate_all(f, x1, x2, z).slope_set) ms.push_back(m);
  }
  require(!ms.empty(), ErrorCode::kPrecondition, "slope set is empty");
  std::map<long, PolyhedralFunction> gm;
  for (long m : ms) {
    auto prof = conjugate_profile(fr, m);
    if (!prof) {
      rep.ok = false;
      rep.offending_m = m;
      return rep;
    }
    gm.emplace(m, std::move(*prof));
  }
  Vec d = sub(x2, x1);
  for (const auto& t : ts) {
    for (const auto& u : us) {
      Vec p = add(add(x1, scale(d, t)), scale(z, u));
      Rat lhs = f.eval(p);
      bool first = true;
      Rat rhs;
      for (const auto& [m, g] : gm) {
        Rat v = g.eval({t}) + Rat(m) * u;
        if (first || v > rhs) rhs = v;
        first = false;
      }
      if (lhs != rhs) {
        rep.ok = false;
        rep.witness = {t, u};
        rep.lhs = lhs;
        rep.rhs = rhs;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace polymax
