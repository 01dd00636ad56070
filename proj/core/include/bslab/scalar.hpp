#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <string>
#include <string_view>
#include <variant>

namespace bslab {

using Integer = mpz_class;

/// mpq_class whose numerator/denominator constructors canonicalize; gmpxx
/// leaves e.g. 4/6 as is, which breaks comparisons.
class Rational : public mpq_class {
 public:
  using mpq_class::mpq_class;
  using mpq_class::operator=;
  Rational() = default;
  Rational(const mpq_class& q) : mpq_class(q) {}  // NOLINT(runtime/explicit)
  Rational(mpq_class&& q) : mpq_class(std::move(q)) {}  // NOLINT(runtime/explicit)
  template <class T, class U>
  Rational(const __gmp_expr<T, U>& e) : mpq_class(e) {}  // NOLINT(runtime/explicit)
  Rational(const mpz_class& num, const mpz_class& den) : mpq_class(num, den) { canonicalize(); }
  template <std::integral A, std::integral B>
  Rational(A num, B den) : mpq_class(mpz_class(num), mpz_class(den)) {
    canonicalize();
  }
  template <std::integral A>
  Rational(A num, const mpz_class& den) : mpq_class(mpz_class(num), den) {
    canonicalize();
  }
  template <std::integral B>
  Rational(const mpz_class& num, B den) : mpq_class(num, mpz_class(den)) {
    canonicalize();
  }
};

/// Parses "p/q" or "p" (optionally signed). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
Rational frac(const Rational& q);
double to_double(const Rational& q);
/// Exact value of a finite double.
Rational from_double(double d);
Integer pow(const Integer& base, unsigned long exp);
Rational pow(const Rational& base, unsigned long exp);
/// Total bit size of numerator and denominator.
std::size_t bit_size(const Rational& q);

/// A real number that is either an exact rational or a double. Arithmetic
/// stays exact while both operands are exact.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational q) : value_(std::move(q)) {}  // NOLINT(runtime/explicit)
  Scalar(double d) : value_(d) {}               // NOLINT(runtime/explicit)
  Scalar(int i) : value_(Rational(i)) {}        // NOLINT(runtime/explicit)
  Scalar(long i) : value_(Rational(i)) {}       // NOLINT(runtime/explicit)

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const { return std::get<Rational>(value_); }
  double approx() const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

  int sign() const;
  std::string str() const;

 private:
  std::variant<Rational, double> value_;
};

Scalar floor(const Scalar& s);
Scalar frac(const Scalar& s);
Scalar abs(const Scalar& s);
Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

}  // namespace bslab
