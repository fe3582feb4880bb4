#include "cuspbasis/numeric.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "cuspbasis/errors.hpp"

namespace cuspbasis {

namespace {

int digits10_for_bits(int bits) {
  return static_cast<int>(std::ceil(bits * 0.30102999566398120)) + 1;
}

struct PrecisionState {
  int bits = 0;
  PrecisionState() { apply(128); }
  void apply(int b) {
    bits = b;
    Real::default_precision(digits10_for_bits(b));
  }
};

PrecisionState& state() {
  thread_local PrecisionState s;
  return s;
}

[[maybe_unused]] const int kInitPrecision = (state(), 0);

}  // namespace

int precision_bits() { return state().bits; }

void set_precision_bits(int bits) {
  if (bits < 53) throw PreconditionError("precision must be at least 53 bits");
  state().apply(bits);
}

PrecisionGuard::PrecisionGuard(int bits) : saved_(precision_bits()) { set_precision_bits(bits); }

PrecisionGuard::~PrecisionGuard() { state().apply(saved_); }

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  Rational den = b.norm();
  if (den == 0) throw DomainError("division by zero");
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

// ---------------------------------------------------------------------------

bool Scalar::is_zero() const {
  if (is_exact()) return exact().is_zero();
  const auto& z = std::get<ComplexReal>(v_);
  return z.re == 0 && z.im == 0;
}

const Rational& Scalar::rational() const {
  if (!is_rational()) throw PreconditionError("value is not an exact rational: " + str());
  return exact().re;
}

ComplexReal Scalar::approx() const {
  if (!is_exact()) {
    // Re-round to the current working precision.
    const auto& z = std::get<ComplexReal>(v_);
    return ComplexReal(Real(z.re), Real(z.im));
  }
  const auto& g = exact();
  return ComplexReal(to_float<Real>(g.re), to_float<Real>(g.im));
}

std::complex<double> Scalar::to_complex() const {
  if (is_exact()) return {exact().re.get_d(), exact().im.get_d()};
  const auto& z = std::get<ComplexReal>(v_);
  return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

Scalar Scalar::conj() const {
  if (is_exact()) return Scalar(exact().conj());
  return Scalar(cuspbasis::conj(std::get<ComplexReal>(v_)));
}

Scalar Scalar::norm() const {
  if (is_exact()) return Scalar(exact().norm());
  return Scalar(ComplexReal(cuspbasis::norm(std::get<ComplexReal>(v_)), Real(0)));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(a.exact() + b.exact());
  return Scalar(a.approx() + b.approx());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(a.exact() - b.exact());
  return Scalar(a.approx() - b.approx());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(a.exact() * b.exact());
  return Scalar(a.approx() * b.approx());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(a.exact() / b.exact());
  if (b.is_zero()) throw DomainError("division by zero");
  return Scalar(a.approx() / b.approx());
}

Scalar operator-(const Scalar& a) {
  if (a.is_exact()) return Scalar(-a.exact());
  return Scalar(-std::get<ComplexReal>(a.v_));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  ComplexReal x = a.approx();
  ComplexReal y = b.approx();
  return x.re == y.re && x.im == y.im;
}

std::string Scalar::str(int digits) const {
  if (is_exact()) {
    const auto& g = exact();
    if (g.is_real()) return g.re.get_str();
    std::string s = g.re == 0 ? "" : g.re.get_str();
    if (g.im >= 0 && !s.empty()) s += "+";
    return s + g.im.get_str() + "*i";
  }
  const auto& z = std::get<ComplexReal>(v_);
  if (z.im == 0) return format_real(z.re, digits);
  std::string im = format_real(z.im, digits);
  if (im[0] != '-') im = "+" + im;
  return format_real(z.re, digits) + im + "*i";
}

Real sqrt_real(const Rational& q) {
  if (q < 0) throw DomainError("square root of a negative number");
  using std::sqrt;
  return Real(sqrt(to_float<Real>(q)));
}

bool exact_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) {
    return false;
  }
  Integer n = sqrt(Integer(q.get_num()));
  Integer d = sqrt(Integer(q.get_den()));
  root = Rational(n, d);
  root.canonicalize();
  return true;
}

// ---------------------------------------------------------------------------

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw PreconditionError("empty number");
  auto bad = [&]() { return PreconditionError("not a rational number: '" + text + "'"); };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0) throw bad();
    if (den.set_str(s.substr(slash + 1), 10) != 0) throw bad();
    if (den == 0) throw bad();
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw bad();
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw bad();
    std::size_t used = 0;
    try {
      exponent = std::stol(s.substr(pos + 1), &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (pos + 1 + used != s.size()) throw bad();
  }
  Integer mantissa(digits, 10);
  long shift = exponent - scale;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string format_real(const Real& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

std::string format_double(double x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::scientific << x;
  return os.str();
}

}  // namespace cuspbasis
