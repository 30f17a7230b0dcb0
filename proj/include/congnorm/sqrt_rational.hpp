// Exact real numbers of the shape q*sqrt(n) and 2x2 matrices over them.
//
// Every matrix that appears in this library has all of its nonzero entries
// sharing one squarefree radicand (the radicand of mu, or of a scaling), so a
// single-radical representation is closed under the products we need. Sums
// of two nonzero terms with different radicands leave the representable set
// and raise std::domain_error.
#pragma once

#include <gmpxx.h>

#include <array>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "congnorm/numtheory.hpp"

namespace congnorm {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(Int num, Int den = 1) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p" or "p/q" (optional sign) into a reduced rational.
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0 || r.get_den() == 0) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
  r.canonicalize();
  return r;
}

class SqrtRat {
 public:
  SqrtRat() = default;
  SqrtRat(Int v) : q_(make_rational(v)) {}  // NOLINT(google-explicit-constructor)
  SqrtRat(Rational q) : q_(std::move(q)) { q_.canonicalize(); }  // NOLINT
  SqrtRat(Rational q, Int radicand) : q_(std::move(q)), n_(1) {
    q_.canonicalize();
    require_positive(radicand, "radicand");
    const auto [s, t] = square_part(radicand);
    q_ *= BigInt(static_cast<long>(s));
    n_ = t;
    if (q_ == 0) n_ = 1;
  }

  /// sqrt(k) for k >= 0.
  static SqrtRat sqrt_of(Int k) {
    if (k < 0) throw std::domain_error("sqrt of a negative integer");
    if (k == 0) return {};
    return {Rational(1), k};
  }

  /// sqrt(r) for a nonnegative rational r = p/q, written sqrt(p*q)/q.
  static SqrtRat sqrt_of(const Rational& r) {
    if (r < 0) throw std::domain_error("sqrt of a negative rational");
    if (r == 0) return {};
    const BigInt num = r.get_num();
    const BigInt den = r.get_den();
    const BigInt prod = num * den;
    if (!prod.fits_slong_p()) throw std::overflow_error("radicand too large");
    return {Rational(1, den), static_cast<Int>(prod.get_si())};
  }

  const Rational& coefficient() const { return q_; }
  Int radicand() const { return n_; }

  bool is_zero() const { return q_ == 0; }
  bool is_rational() const { return n_ == 1; }
  bool is_integer() const { return n_ == 1 && congnorm::is_integer(q_); }

  const Rational& rational() const {
    if (n_ != 1) throw std::domain_error("value " + str() + " is irrational");
    return q_;
  }

  SqrtRat operator-() const {
    SqrtRat r = *this;
    r.q_ = -r.q_;
    return r;
  }

  friend SqrtRat operator*(const SqrtRat& x, const SqrtRat& y) {
    if (x.is_zero() || y.is_zero()) return {};
    const Int g = std::gcd(x.n_, y.n_);
    SqrtRat r;
    r.q_ = x.q_ * y.q_ * BigInt(static_cast<long>(g));
    r.n_ = (x.n_ / g) * (y.n_ / g);
    return r;
  }

  SqrtRat inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    SqrtRat r;
    r.q_ = 1 / (q_ * BigInt(static_cast<long>(n_)));
    r.n_ = n_;
    return r;
  }

  friend SqrtRat operator/(const SqrtRat& x, const SqrtRat& y) { return x * y.inverse(); }

  friend SqrtRat operator+(const SqrtRat& x, const SqrtRat& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.n_ != y.n_) {
      throw std::domain_error("sum " + x.str() + " + " + y.str() + " mixes radicands");
    }
    SqrtRat r;
    r.q_ = x.q_ + y.q_;
    r.n_ = r.q_ == 0 ? 1 : x.n_;
    return r;
  }

  friend SqrtRat operator-(const SqrtRat& x, const SqrtRat& y) { return x + (-y); }

  SqrtRat& operator+=(const SqrtRat& y) { return *this = *this + y; }
  SqrtRat& operator-=(const SqrtRat& y) { return *this = *this - y; }
  SqrtRat& operator*=(const SqrtRat& y) { return *this = *this * y; }

  friend bool operator==(const SqrtRat& x, const SqrtRat& y) { return x.q_ == y.q_ && x.n_ == y.n_; }

  std::string str() const {
    if (n_ == 1) return q_.get_str();
    if (q_ == 1) return "sqrt(" + std::to_string(n_) + ")";
    if (q_ == -1) return "-sqrt(" + std::to_string(n_) + ")";
    return q_.get_str() + "*sqrt(" + std::to_string(n_) + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const SqrtRat& x) { return os << x.str(); }

 private:
  Rational q_ = 0;
  Int n_ = 1;
};

/// Integrality of x + y where the two terms may carry different radicands;
/// sqrt(n1) and sqrt(n2) are linearly independent over Q for distinct
/// squarefree n1, n2, so a mixed nonzero sum is never an integer.
inline bool sum_is_integer(const SqrtRat& x, const SqrtRat& y) {
  if (x.is_zero() || y.is_zero() || x.radicand() == y.radicand()) return (x + y).is_integer();
  return false;
}

/// Row-major 2x2 matrix (e f; g h).
struct Matrix2 {
  SqrtRat e, f, g, h;

  static Matrix2 identity() { return {1, 0, 0, 1}; }

  SqrtRat det() const { return e * h - f * g; }

  /// Adjugate; the inverse for determinant-one matrices.
  Matrix2 adjugate() const { return {h, -f, -g, e}; }

  Matrix2 inverse() const {
    const SqrtRat d = det();
    if (d.is_zero()) throw std::domain_error("singular matrix");
    const SqrtRat di = d.inverse();
    return {h * di, -f * di, -g * di, e * di};
  }

  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
    return {x.e * y.e + x.f * y.g, x.e * y.f + x.f * y.h, x.g * y.e + x.h * y.g,
            x.g * y.f + x.h * y.h};
  }

  friend Matrix2 operator+(const Matrix2& x, const Matrix2& y) {
    return {x.e + y.e, x.f + y.f, x.g + y.g, x.h + y.h};
  }

  friend Matrix2 operator*(const SqrtRat& s, const Matrix2& x) {
    return {s * x.e, s * x.f, s * x.g, s * x.h};
  }

  SqrtRat trace() const { return e + h; }

  bool is_integral() const { return e.is_integer() && f.is_integer() && g.is_integer() && h.is_integer(); }

  std::array<SqrtRat, 4> entries() const { return {e, f, g, h}; }

  friend bool operator==(const Matrix2&, const Matrix2&) = default;

  std::string str() const {
    return "((" + e.str() + ", " + f.str() + "), (" + g.str() + ", " + h.str() + "))";
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix2& m) { return os << m.str(); }
};

/// Trace pairing (X, Y) = Tr(XY) on 2x2 matrices.
inline SqrtRat trace_pairing(const Matrix2& x, const Matrix2& y) { return (x * y).trace(); }

/// Integer 2x2 matrix with arbitrary-precision entries.
struct IntMatrix2 {
  BigInt a = 1, b = 0, c = 0, d = 1;

  static IntMatrix2 identity() { return {}; }
  static IntMatrix2 S() { return {0, -1, 1, 0}; }
  static IntMatrix2 T() { return {1, 1, 0, 1}; }

  BigInt det() const { return a * d - b * c; }

  /// Inverse of a determinant-one matrix.
  IntMatrix2 inverse() const { return {d, -b, -c, a}; }

  friend IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }

  friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;

  Matrix2 as_matrix() const {
    return {SqrtRat(Rational(a)), SqrtRat(Rational(b)), SqrtRat(Rational(c)), SqrtRat(Rational(d))};
  }

  std::string str() const {
    return "((" + a.get_str() + ", " + b.get_str() + "), (" + c.get_str() + ", " + d.get_str() + "))";
  }
};

inline Int mod_big(const BigInt& x, Int n) {
  BigInt r = x % BigInt(static_cast<long>(n));
  if (r < 0) r += n;
  return static_cast<Int>(r.get_si());
}

/// Converts an integral Matrix2 to IntMatrix2; throws if some entry is not an integer.
inline IntMatrix2 to_int_matrix(const Matrix2& m) {
  if (!m.is_integral()) throw std::domain_error("matrix " + m.str() + " is not integral");
  return {m.e.rational().get_num(), m.f.rational().get_num(), m.g.rational().get_num(),
          m.h.rational().get_num()};
}

}  // namespace congnorm
