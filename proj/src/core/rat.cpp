#include "core/rat.hpp"

#include <cctype>
#include <sstream>

namespace polymax {

Rat::Rat(long n, long d) {
  require(d != 0, ErrorCode::kInvalidArgument, "rational with zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rat::Rat(const mpz_class& n, const mpz_class& d) {
  require(sgn(d) != 0, ErrorCode::kInvalidArgument, "rational with zero denominator");
  v_ = mpq_class(n) / mpq_class(d);
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  require(!o.is_zero(), ErrorCode::kInvalidArgument, "division by zero");
  v_ /= o.v_;
  return *this;
}

std::optional<Rat> Rat::parse(std::string_view s) {
  // Accepted: [+-]digits optionally followed by "/" digits (nonzero).
  if (s.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    i++;
  }
  size_t num_start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) i++;
  if (i == num_start) return std::nullopt;
  mpz_class num(std::string(s.substr(num_start, i - num_start)), 10);
  if (neg) num = -num;
  if (i == s.size()) return Rat(num);
  if (s[i] != '/') return std::nullopt;
  i++;
  size_t den_start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) i++;
  if (i == den_start || i != s.size()) return std::nullopt;
  mpz_class den(std::string(s.substr(den_start)), 10);
  if (den == 0) return std::nullopt;
  return Rat(num, den);
}

std::string Rat::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rat::decimal(int digits) const {
  if (is_integer()) return v_.get_num().get_str();
  mpf_class f(v_, 64 + 4 * digits);
  mp_exp_t exp;
  std::string mant = f.get_str(exp, 10, digits);
  // Reassemble a plain decimal string from mantissa/exponent.
  bool neg = !mant.empty() && mant[0] == '-';
  std::string d = neg ? mant.substr(1) : mant;
  std::ostringstream out;
  if (neg) out << '-';
  if (exp <= 0) {
    out << "0.";
    for (mp_exp_t k = 0; k < -exp; k++) out << '0';
    out << d;
  } else if (static_cast<size_t>(exp) >= d.size()) {
    out << d;
    for (size_t k = d.size(); k < static_cast<size_t>(exp); k++) out << '0';
  } else {
    out << d.substr(0, exp) << '.' << d.substr(exp);
  }
  return out.str();
}

mpz_class Rat::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

mpz_class Rat::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

long Rat::to_long() const {
  require(is_integer(), ErrorCode::kInvalidArgument, "expected an integer, got " + str());
  mpz_class n = num();
  require(n.fits_slong_p(), ErrorCode::kUnsupported,
          "integer out of machine range: " + n.get_str());
  return n.get_si();
}

Rat dot(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch, "dot: dimension mismatch");
  Rat s;
  for (size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch, "add: dimension mismatch");
  Vec r(a);
  for (size_t i = 0; i < a.size(); i++) r[i] += b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch, "sub: dimension mismatch");
  Vec r(a);
  for (size_t i = 0; i < a.size(); i++) r[i] -= b[i];
  return r;
}

Vec scale(const Vec& a, const Rat& s) {
  Vec r(a);
  for (auto& x : r) x *= s;
  return r;
}

bool is_zero_vec(const Vec& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

int lex_compare(const Vec& a, const Vec& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; i++) {
    if (a[i] < b[i]) return -1;
    if (b[i] < a[i]) return 1;
  }
  if (a.size() < b.size()) return -1;
  if (a.size() > b.size()) return 1;
  return 0;
}

Vec zero_vec(int n) { return Vec(static_cast<size_t>(n)); }

Vec basis_vec(int n, int i) {
  Vec v(static_cast<size_t>(n));
  v[static_cast<size_t>(i)] = Rat(1);
  return v;
}

std::optional<Vec> parse_vec(std::string_view s) {
  Vec out;
  size_t pos = 0;
  while (true) {
    size_t comma = s.find(',', pos);
    std::string_view tok = comma == std::string_view::npos
                               ? s.substr(pos)
                               : s.substr(pos, comma - pos);
    // Trim surrounding spaces.
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    auto r = Rat::parse(tok);
    if (!r) return std::nullopt;
    out.push_back(*r);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string vec_str(const Vec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); i++) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s;
}

}  // namespace polymax
