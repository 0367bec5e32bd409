#include "core/detect1d.hpp"

#include <sstream>

#include "core/errors.hpp"

namespace polymax {

const char* to_string(OutcomeTag t) {
  switch (t) {
    case OutcomeTag::kAccept: return "accept";
    case OutcomeTag::kReject: return "reject";
    case OutcomeTag::kExhausted: return "exhausted";
  }
  return "exhausted";
}

std::string witness_summary(const Witness& w) {
  std::ostringstream os;
  if (const auto* j = std::get_if<JensenWitness>(&w)) {
    os << "Jensen violation at x=(" << vec_str(j->x) << "), y=(" << vec_str(j->y)
       << "), t=" << j->t.str() << ": " << j->lhs.str() << " < " << j->rhs.str();
  } else if (const auto* s = std::get_if<SlopeWitness>(&w)) {
    os << "certified non-integer slope " << s->slope.str() << " on ["
       << s->lo.str() << ", " << s->hi.str() << "]";
    if (!s->where.empty()) os << " (" << s->where << ")";
  } else if (const auto* m = std::get_if<MembershipWitness>(&w)) {
    os << "integral-value membership fails at (" << vec_str(m->x) << "), value "
       << m->value.str() << ": " << m->detail;
  }
  return os.str();
}

Rat Reconstruction1D::eval(const Rat& t) const {
  size_t k = 0;
  while (k < breakpoints.size() && t > breakpoints[k]) k++;
  return Rat(pieces[k].slope) * t + pieces[k].constant;
}

PolyhedralFunction Reconstruction1D::to_polyfun() const {
  std::vector<AffineFunctional> lines;
  for (const auto& p : pieces) lines.push_back({{Rat(p.slope)}, p.constant});
  return PolyhedralFunction(1, std::move(lines));
}

namespace {

struct Detector {
  const FunctionOracle& o;
  int budget;
  std::map<Rat, Rat> log;

  Rat q(const Rat& t) {
    Rat v = o.query({t});
    log.emplace(t, v);
    return v;
  }
};

SlopeProbe probe(Detector& d, const Rat& x, int sign, const Rat& h0) {
  require(h0.sign() > 0, ErrorCode::kInvalidArgument, "one_sided_slope: h0 must be positive");
  SlopeProbe res;
  Rat h = h0;
  Rat fx = d.q(x);
  for (int halvings = 0;; halvings++) {
    Rat y = x + Rat(sign) * h;
    Rat fy = d.q(y);
    Rat mid = (x + y) / Rat(2);
    Rat fm = d.q(mid);
    Rat chord = (fx + fy) / Rat(2);
    if (fm == chord) {
      res.tag = SlopeProbe::Tag::kSlope;
      res.slope = (fy - fx) / (y - x);
      res.certified_lo = min(x, y);
      res.certified_hi = max(x, y);
      return res;
    }
    if (fm > chord) {
      res.tag = SlopeProbe::Tag::kJensen;
      res.jensen = JensenWitness{{x}, {y}, Rat(1, 2), chord, fm};
      return res;
    }
    if (halvings == d.budget) break;
    h = h / Rat(2);
  }
  res.tag = SlopeProbe::Tag::kExhausted;
  return res;
}

std::optional<JensenWitness> scan_log(const std::map<Rat, Rat>& log) {
  if (log.size() < 3) return std::nullopt;
  auto it = log.begin();
  std::pair<Rat, Rat> p1 = *it++;
  std::pair<Rat, Rat> p2 = *it++;
  for (; it != log.end(); ++it) {
    std::pair<Rat, Rat> p3 = *it;
    // Secant decrease between consecutive points is a Jensen violation.
    if ((p2.second - p1.second) * (p3.first - p2.first) >
        (p3.second - p2.second) * (p2.first - p1.first)) {
      Rat t = (p3.first - p2.first) / (p3.first - p1.first);
      Rat lhs = t * p1.second + (Rat(1) - t) * p3.second;
      return JensenWitness{{p1.first}, {p3.first}, t, lhs, p2.second};
    }
    p1 = p2;
    p2 = p3;
  }
  return std::nullopt;
}

struct Segment {
  Rat lo, hi;
  long slope;
  Rat constant;
};

// Control-flow result of the recursion: either segments or a final outcome.
struct RecResult {
  bool failed = false;
  std::vector<Segment> segs;
  DetectOutcome outcome;  // valid when failed
};

DetectOutcome inconsistent(Detector& d, const std::string& note) {
  DetectOutcome out;
  out.queries = d.log;
  if (auto w = scan_log(d.log)) {
    out.tag = OutcomeTag::kReject;
    out.witness = *w;
    out.note = note;
  } else {
    out.tag = OutcomeTag::kExhausted;
    out.note = note + "; no logged Jensen violation";
  }
  return out;
}

DetectOutcome exhausted(Detector& d, const std::string& note) {
  DetectOutcome out;
  out.tag = OutcomeTag::kExhausted;
  out.queries = d.log;
  out.note = note;
  return out;
}

DetectOutcome reject(Detector& d, Witness w) {
  DetectOutcome out;
  out.tag = OutcomeTag::kReject;
  out.witness = std::move(w);
  out.queries = d.log;
  return out;
}

// Probes the slope adjacent to x on the given side and insists it is an
// integer; any other result ends the reconstruction.
struct SlopeOrFail {
  bool failed = false;
  long slope = 0;
  DetectOutcome outcome;
};

SlopeOrFail integer_slope(Detector& d, const Rat& x, int sign, const Rat& h0) {
  SlopeOrFail r;
  SlopeProbe p = probe(d, x, sign, h0);
  switch (p.tag) {
    case SlopeProbe::Tag::kJensen:
      r.failed = true;
      r.outcome = reject(d, *p.jensen);
      return r;
    case SlopeProbe::Tag::kExhausted:
      r.failed = true;
      r.outcome = exhausted(d, "slope probe at " + x.str() + " exhausted the halving budget");
      return r;
    case SlopeProbe::Tag::kSlope:
      if (!p.slope.is_integer()) {
        r.failed = true;
        r.outcome = reject(d, SlopeWitness{p.certified_lo, p.certified_hi, p.slope, ""});
        return r;
      }
      r.slope = p.slope.to_long();
      return r;
  }
  r.failed = true;
  r.outcome = exhausted(d, "unreachable probe state");
  return r;
}

RecResult recurse(Detector& d, const Rat& lo, const Rat& hi, const Rat& f_lo,
                  const Rat& f_hi, long s_lo, long s_hi, int depth) {
  RecResult res;
  auto bail = [&](DetectOutcome o) {
    res.failed = true;
    res.outcome = std::move(o);
    return res;
  };
  if (s_lo == s_hi) {
    Rat mid = (lo + hi) / Rat(2);
    Rat fm = d.q(mid);
    if (fm == (f_lo + f_hi) / Rat(2) && f_hi - f_lo == Rat(s_lo) * (hi - lo)) {
      res.segs.push_back({lo, hi, s_lo, f_lo - Rat(s_lo) * lo});
      return res;
    }
    return bail(inconsistent(d, "equal end slopes without an affine chord"));
  }
  if (s_lo > s_hi)
    return bail(inconsistent(d, "decreasing one-sided slopes"));
  Rat chord = (f_hi - f_lo) / (hi - lo);
  if (chord < Rat(s_lo) || Rat(s_hi) < chord)
    return bail(inconsistent(d, "chord slope outside the end-slope range"));
  // Intersection of the two boundary support lines.
  Rat xstar = (f_hi - Rat(s_hi) * hi - f_lo + Rat(s_lo) * lo) / (Rat(s_lo) - Rat(s_hi));
  if (!(lo < xstar && xstar < hi))
    return bail(inconsistent(d, "support lines meet outside the interval"));
  Rat vline = f_lo + Rat(s_lo) * (xstar - lo);
  Rat v = d.q(xstar);
  if (v < vline)
    return bail(inconsistent(d, "value below both support lines"));
  if (v == vline) {
    Rat m1 = d.q((lo + xstar) / Rat(2));
    Rat m2 = d.q((xstar + hi) / Rat(2));
    if (m1 == (f_lo + v) / Rat(2) && m2 == (v + f_hi) / Rat(2)) {
      res.segs.push_back({lo, xstar, s_lo, f_lo - Rat(s_lo) * lo});
      res.segs.push_back({xstar, hi, s_hi, f_hi - Rat(s_hi) * hi});
      return res;
    }
    return bail(inconsistent(d, "support-line split fails the midpoint check"));
  }
  // Strictly above: at least one more slope value inside each half.
  if (depth == 0)
    return bail(exhausted(d, "slope-splitting depth bound hit"));
  SlopeOrFail sl = integer_slope(d, xstar, -1, (xstar - lo) / Rat(2));
  if (sl.failed) return bail(std::move(sl.outcome));
  SlopeOrFail sr = integer_slope(d, xstar, +1, (hi - xstar) / Rat(2));
  if (sr.failed) return bail(std::move(sr.outcome));
  RecResult left = recurse(d, lo, xstar, f_lo, v, s_lo, sl.slope, depth - 1);
  if (left.failed) return left;
  RecResult right = recurse(d, xstar, hi, v, f_hi, sr.slope, s_hi, depth - 1);
  if (right.failed) return right;
  res.segs = std::move(left.segs);
  for (auto& s : right.segs) {
    if (!res.segs.empty() && res.segs.back().slope == s.slope) {
      if (res.segs.back().constant != s.constant)
        return bail(inconsistent(d, "equal slopes with different intercepts at a split"));
      res.segs.back().hi = s.hi;
    } else {
      res.segs.push_back(std::move(s));
    }
  }
  return res;
}

DetectOutcome finish(Detector& d, const Rat& a, const Rat& b, std::vector<Segment> segs) {
  Reconstruction1D rec;
  rec.a = a;
  rec.b = b;
  for (size_t i = 0; i < segs.size(); i++) {
    if (i > 0) {
      if (segs[i - 1].slope >= segs[i].slope)
        return inconsistent(d, "piece slopes not strictly increasing");
      rec.breakpoints.push_back(segs[i].lo);
    }
    rec.pieces.push_back({segs[i].slope, segs[i].constant});
  }
  for (const auto& [t, v] : d.log) {
    if (rec.eval(t) != v)
      return inconsistent(d, "reconstruction does not reproduce a logged query at " + t.str());
  }
  DetectOutcome out;
  out.tag = OutcomeTag::kAccept;
  out.reconstruction = std::move(rec);
  out.queries = d.log;
  return out;
}

DetectOutcome reconstruct_core(Detector& d, const Rat& a, const Rat& b) {
  Rat f_a = d.q(a);
  Rat f_b = d.q(b);
  SlopeOrFail sa = integer_slope(d, a, +1, (b - a) / Rat(2));
  if (sa.failed) return sa.outcome;
  SlopeOrFail sb = integer_slope(d, b, -1, (b - a) / Rat(2));
  if (sb.failed) return sb.outcome;
  if (sa.slope > sb.slope) return inconsistent(d, "decreasing one-sided slopes");
  int depth = static_cast<int>(sb.slope - sa.slope) + 2;
  RecResult r = recurse(d, a, b, f_a, f_b, sa.slope, sb.slope, depth);
  if (r.failed) return r.outcome;
  return finish(d, a, b, std::move(r.segs));
}

void check_interval(const FunctionOracle& o, const Rat& a, const Rat& b) {
  require(a < b, ErrorCode::kInvalidArgument, "detection interval needs a < b");
  require(o.dim() == 1, ErrorCode::kDimensionMismatch, "1-D detection needs a 1-D oracle");
  require(o.domain().contains({a}) && o.domain().contains({b}), ErrorCode::kDomain,
          "detection interval leaves the oracle domain");
}

}  // namespace

SlopeProbe one_sided_slope(const FunctionOracle& o, const Rat& x, int sign,
                           const Rat& h0, int budget) {
  require(sign == 1 || sign == -1, ErrorCode::kInvalidArgument, "sign must be +-1");
  Detector d{o, budget, {}};
  return probe(d, x, sign, h0);
}

DetectOutcome reconstruct_transintegral(const FunctionOracle& o, const Rat& a,
                                        const Rat& b, int budget) {
  check_interval(o, a, b);
  Detector d{o, budget, {}};
  return reconstruct_core(d, a, b);
}

std::vector<Rat> farey_points(const Rat& a, const Rat& b, int count) {
  require(a < b, ErrorCode::kInvalidArgument, "farey_points: empty interval");
  require(count >= 0, ErrorCode::kInvalidArgument, "farey_points: negative count");
  std::vector<Rat> pts;
  for (mpz_class q = 1; static_cast<int>(pts.size()) < count; q++) {
    require(q <= 1000000, ErrorCode::kPrecondition,
            "farey_points: denominator cap hit before collecting the samples");
    mpz_class p = (a * Rat(q)).floor() + 1;
    mpz_class p_end = (b * Rat(q)).ceil() - 1;
    for (; p <= p_end && static_cast<int>(pts.size()) < count; p++) {
      mpz_class g, ap = ::abs(p);
      mpz_gcd(g.get_mpz_t(), ap.get_mpz_t(), q.get_mpz_t());
      if (g == 1) {
        Rat x(p, q);
        if (a < x && x < b) pts.push_back(x);
      }
    }
  }
  return pts;
}

DetectOutcome detect_integral_values(const FunctionOracle& o, const Rat& a,
                                     const Rat& b, int budget, int samples) {
  check_interval(o, a, b);
  Detector d{o, budget, {}};
  for (const Rat& x : farey_points(a, b, samples)) {
    Rat v = d.q(x);
    if (!group_membership(v, {x}))
      return reject(d, MembershipWitness{{x}, v, group_membership_trace(v, {x})});
  }
  DetectOutcome out = reconstruct_core(d, a, b);
  if (out.tag != OutcomeTag::kAccept) return out;
  const Reconstruction1D& rec = *out.reconstruction;
  for (size_t k = 0; k < rec.pieces.size(); k++) {
    const Rat& c = rec.pieces[k].constant;
    if (c.is_integer()) continue;
    // Per the constant-term argument: sample the piece at a point whose
    // denominator is coprime to the constant's; membership must fail there.
    Rat plo = k == 0 ? rec.a : rec.breakpoints[k - 1];
    Rat phi = k == rec.pieces.size() - 1 ? rec.b : rec.breakpoints[k];
    mpz_class s = c.den();
    Rat x0;
    bool found = false;
    for (mpz_class sp = 1; sp <= 1000000 && !found; sp++) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), sp.get_mpz_t(), s.get_mpz_t());
      if (g != 1) continue;
      mpz_class p = (plo * Rat(sp)).floor() + 1;
      if (Rat(p, sp) < phi) {
        x0 = Rat(p, sp);
        found = true;
      }
    }
    require(found, ErrorCode::kInternal, "no coprime-denominator sample in the piece");
    Rat v0 = d.q(x0);
    if (!group_membership(v0, {x0})) {
      DetectOutcome rej = reject(
          d, MembershipWitness{{x0}, v0,
                               "piece " + std::to_string(k) + " has non-integer constant " +
                                   c.str() + "; " + group_membership_trace(v0, {x0})});
      return rej;
    }
    // Membership held, so the oracle disagrees with the reconstructed piece.
    return inconsistent(d, "piece constant " + c.str() +
                               " is non-integer but the sampled value stayed in the group");
  }
  out.queries = d.log;
  return out;
}

}  // namespace polymax
