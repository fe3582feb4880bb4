#pragma once

// Number types shared by every module: exact rationals (GMP), Gaussian
// rationals, runtime-precision reals (MPFR) and the tagged Scalar that
// carries either an exact or a floating value.

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <variant>

namespace cuspbasis {

using i64 = std::int64_t;
using Integer = mpz_class;
using Rational = mpq_class;
using Real = boost::multiprecision::mpfr_float;

// ---------------------------------------------------------------------------
// Working precision

int precision_bits();
void set_precision_bits(int bits);

/// Sets the MPFR working precision for the current scope.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  int saved_;
};

// ---------------------------------------------------------------------------
// Complex numbers over an arbitrary real type. std::complex is only specified
// for the built-in floating types, so the MPFR path needs its own.

template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() : re(0), im(0) {}
  Complex(const T& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(const T& r, const T& i) : re(r), im(i) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const T& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    T den = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const T& s) {
    re /= s;
    im /= s;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const T& s) { return a *= s; }
  friend Complex operator*(const T& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator/(Complex a, const T& s) { return a /= s; }
  friend Complex operator-(const Complex& a) { return Complex(T(-a.re), T(-a.im)); }
};

template <class T>
Complex<T> conj(const Complex<T>& z) {
  return Complex<T>(z.re, T(-z.im));
}

template <class T>
T norm(const Complex<T>& z) {
  return T(z.re * z.re + z.im * z.im);
}

template <class T>
T abs(const Complex<T>& z) {
  using std::sqrt;
  return T(sqrt(norm(z)));
}

/// z^n for integer n (negative allowed).
template <class T>
Complex<T> ipow(Complex<T> z, i64 n) {
  if (n < 0) return Complex<T>(T(1)) / ipow(z, -n);
  Complex<T> r(T(1));
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

/// exp(2 pi i z).
template <class T>
Complex<T> e2pii(const Complex<T>& z);

template <class T>
T pi_v();

template <>
inline double pi_v<double>() {
  return 3.14159265358979323846264338327950288;
}

template <>
inline Real pi_v<Real>() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

template <class T>
Complex<T> e2pii(const Complex<T>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  const T two_pi = 2 * pi_v<T>();
  T mod = exp(T(-two_pi * z.im));
  T arg = two_pi * z.re;
  return Complex<T>(T(mod * cos(arg)), T(mod * sin(arg)));
}

using ComplexReal = Complex<Real>;

// ---------------------------------------------------------------------------
// Conversions into the floating types.

template <class T>
T to_float(const Rational& q);

template <>
inline double to_float<double>(const Rational& q) {
  return q.get_d();
}

template <>
inline Real to_float<Real>(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

template <class T>
T to_float(const Real& x);

template <>
inline double to_float<double>(const Real& x) {
  return x.convert_to<double>();
}

template <>
inline Real to_float<Real>(const Real& x) {
  return x;
}

template <class T>
Complex<T> to_float(const ComplexReal& z) {
  return Complex<T>(to_float<T>(z.re), to_float<T>(z.im));
}

inline double to_double(double x) { return x; }
inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline ComplexReal from_double(std::complex<double> z) {
  return ComplexReal(Real(z.real()), Real(z.imag()));
}

inline ComplexReal from_double(const Complex<double>& z) {
  return ComplexReal(Real(z.re), Real(z.im));
}

// ---------------------------------------------------------------------------
// Exact values.

struct GaussianRational {
  Rational re{0};
  Rational im{0};

  bool is_real() const { return im == 0; }
  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Either an exact Gaussian rational or a complex float at working precision.
/// Exact op exact stays exact; anything touching a float becomes a float.
class Scalar {
 public:
  Scalar() : v_(GaussianRational{}) {}
  Scalar(long n) : v_(GaussianRational{Rational(n), Rational(0)}) {}  // NOLINT
  Scalar(int n) : Scalar(static_cast<long>(n)) {}                    // NOLINT
  Scalar(const Rational& q) : v_(GaussianRational{q, Rational(0)}) {}  // NOLINT
  Scalar(const Integer& z) : v_(GaussianRational{Rational(z), Rational(0)}) {}  // NOLINT
  Scalar(GaussianRational g) : v_(std::move(g)) {}                     // NOLINT
  Scalar(ComplexReal z) : v_(std::move(z)) {}                          // NOLINT
  static Scalar from_complex(std::complex<double> z) { return Scalar(from_double(z)); }

  bool is_exact() const { return std::holds_alternative<GaussianRational>(v_); }
  /// Exact and real.
  bool is_rational() const { return is_exact() && exact().is_real(); }
  bool is_zero() const;

  const GaussianRational& exact() const { return std::get<GaussianRational>(v_); }
  const Rational& rational() const;
  ComplexReal approx() const;
  std::complex<double> to_complex() const;

  Scalar conj() const;
  /// |z|^2, exact when z is.
  Scalar norm() const;
  double abs() const { return std::abs(to_complex()); }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  /// Exact comparison when both are exact, value comparison otherwise.
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// "p/q", "p/q+r/s*i" for exact values; fixed-format decimals otherwise.
  std::string str(int digits = 20) const;

 private:
  std::variant<GaussianRational, ComplexReal> v_;
};

/// sqrt of a nonnegative rational, as a float at working precision.
Real sqrt_real(const Rational& q);
/// Exact square root if q is the square of a rational.
bool exact_sqrt(const Rational& q, Rational& root);

// ---------------------------------------------------------------------------
// Text.

/// Parses "a", "a/b", or a decimal such as "-1.25e-3" exactly.
Rational parse_rational(const std::string& s);
std::string format_real(const Real& x, int digits);
std::string format_double(double x, int digits = 17);

}  // namespace cuspbasis
