#include "bslab/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bslab {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.front() == '+') s.erase(0, 1);
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-')) {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
  }
  Rational q;
  if (q.set_str(s, 10) != 0) {
    throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational frac(const Rational& q) { return q - Rational(floor(q)); }

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double d) {
  if (!std::isfinite(d)) throw std::domain_error("non-finite double has no exact rational value");
  Rational q(d);
  return q;
}

Integer pow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Rational pow(const Rational& base, unsigned long exp) {
  Rational r(pow(Integer(base.get_num()), exp), pow(Integer(base.get_den()), exp));
  r.canonicalize();
  return r;
}

std::size_t bit_size(const Rational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

double Scalar::approx() const {
  if (is_exact()) return exact().get_d();
  return std::get<double>(value_);
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-exact()));
  return Scalar(-std::get<double>(value_));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() + b.exact()));
  return Scalar(a.approx() + b.approx());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() - b.exact()));
  return Scalar(a.approx() - b.approx());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() * b.exact()));
  return Scalar(a.approx() * b.approx());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    if (b.exact() == 0) throw std::domain_error("division by zero");
    return Scalar(Rational(a.exact() / b.exact()));
  }
  return Scalar(a.approx() / b.approx());
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  return a.approx() == b.approx();
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    int c = cmp(a.exact(), b.exact());
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return a.approx() <=> b.approx();
}

int Scalar::sign() const {
  if (is_exact()) return sgn(exact());
  double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

std::string Scalar::str() const {
  if (is_exact()) return to_string(exact());
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

Scalar floor(const Scalar& s) {
  if (s.is_exact()) return Scalar(Rational(floor(s.exact())));
  return Scalar(std::floor(s.approx()));
}

Scalar frac(const Scalar& s) {
  if (s.is_exact()) return Scalar(frac(s.exact()));
  double d = s.approx();
  double f = d - std::floor(d);
  if (f >= 1.0) f = 0.0;
  return Scalar(f);
}

Scalar abs(const Scalar& s) { return s.sign() < 0 ? -s : s; }
Scalar min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

}  // namespace bslab
