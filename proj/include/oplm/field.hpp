#pragma once

// Exact arithmetic in the cyclotomic field Q(w), w = exp(2*pi*i/3).
//
// Elements are stored in the basis {1, w}: z = u + v*w with rational u, v.
// The minimal polynomial w^2 + w + 1 = 0 gives the reduction w^2 = -1 - w,
// and complex conjugation maps w to w^2, so conj(u + v*w) = (u - v) - v*w.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oplm {

using BigInt = mpz_class;

/// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
class BigRational {
 public:
  BigRational() = default;
  BigRational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  BigRational(const BigInt& n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  BigRational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("BigRational: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit BigRational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "p" or "p/q" in base 10.
  static BigRational parse(std::string_view text) {
    const std::string s(text);
    if (s.empty()) throw std::invalid_argument("BigRational: empty string");
    const auto slash = s.find('/');
    BigInt num;
    BigInt den = 1;
    auto read = [&](const std::string& part, BigInt& out) {
      if (part.empty() || out.set_str(part, 10) != 0)
        throw std::invalid_argument("BigRational: malformed rational '" + s + "'");
    };
    if (slash == std::string::npos) {
      read(s, num);
    } else {
      read(s.substr(0, slash), num);
      read(s.substr(slash + 1), den);
    }
    return BigRational(num, den);
  }

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const { return q_.get_str(10); }

  BigRational operator-() const { return BigRational(mpq_class(-q_)); }
  BigRational& operator+=(const BigRational& o) { q_ += o.q_; return *this; }
  BigRational& operator-=(const BigRational& o) { q_ -= o.q_; return *this; }
  BigRational& operator*=(const BigRational& o) { q_ *= o.q_; return *this; }
  BigRational& operator/=(const BigRational& o) {
    if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

  friend bool operator==(const BigRational& a, const BigRational& b) { return a.q_ == b.q_; }
  friend bool operator<(const BigRational& a, const BigRational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const BigRational& a, const BigRational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const BigRational& a, const BigRational& b) { return a.q_ > b.q_; }

  friend std::ostream& operator<<(std::ostream& os, const BigRational& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

/// Element u + v*w of Q(w).
class CycNum {
 public:
  CycNum() = default;
  CycNum(long re) : u_(re) {}  // NOLINT(google-explicit-constructor)
  CycNum(BigRational u, BigRational v = {}) : u_(std::move(u)), v_(std::move(v)) {}  // NOLINT

  static CycNum omega() { return {0, 1}; }
  /// w^k for any integer k (w^3 = 1).
  static CycNum omega_pow(int k) {
    switch (((k % 3) + 3) % 3) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      default: return {-1, -1};
    }
  }

  const BigRational& u() const { return u_; }
  const BigRational& v() const { return v_; }

  bool is_zero() const { return u_.is_zero() && v_.is_zero(); }
  bool is_real() const { return v_.is_zero(); }
  /// Both coordinates integral, i.e. an Eisenstein integer.
  bool is_eisenstein() const { return u_.is_integer() && v_.is_integer(); }

  CycNum conj() const { return {u_ - v_, -v_}; }

  /// Field norm z*conj(z) = u^2 - u*v + v^2, a nonnegative rational.
  BigRational norm() const { return u_ * u_ - u_ * v_ + v_ * v_; }

  /// Real part u - v/2.
  BigRational real_part() const { return u_ - v_ / BigRational(2); }

  CycNum inverse() const {
    if (is_zero()) throw std::domain_error("CycNum: inverse of zero");
    const BigRational n = norm();
    const CycNum c = conj();
    return {c.u_ / n, c.v_ / n};
  }

  std::complex<double> to_complex() const {
    static const double s3 = 0.8660254037844386467637231707529361834714;
    const double u = u_.to_double();
    const double v = v_.to_double();
    return {u - 0.5 * v, s3 * v};
  }

  CycNum operator-() const { return {-u_, -v_}; }
  CycNum& operator+=(const CycNum& o) { u_ += o.u_; v_ += o.v_; return *this; }
  CycNum& operator-=(const CycNum& o) { u_ -= o.u_; v_ -= o.v_; return *this; }
  CycNum& operator*=(const CycNum& o) {
    // (u1 + v1 w)(u2 + v2 w) = u1u2 + (u1v2 + v1u2) w + v1v2 w^2, w^2 = -1 - w
    const BigRational vv = v_ * o.v_;
    BigRational nu = u_ * o.u_ - vv;
    BigRational nv = u_ * o.v_ + v_ * o.u_ - vv;
    u_ = std::move(nu);
    v_ = std::move(nv);
    return *this;
  }
  CycNum& operator/=(const CycNum& o) { return *this *= o.inverse(); }

  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
  friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }

  friend bool operator==(const CycNum& a, const CycNum& b) { return a.u_ == b.u_ && a.v_ == b.v_; }
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  std::string str() const { return "(" + u_.str() + " + " + v_.str() + "w)"; }
  friend std::ostream& operator<<(std::ostream& os, const CycNum& z) { return os << z.str(); }

 private:
  BigRational u_;
  BigRational v_;
};

inline CycNum cyc_add(const CycNum& a, const CycNum& b) { return a + b; }
inline CycNum cyc_mul(const CycNum& a, const CycNum& b) { return a * b; }
inline CycNum cyc_conj(const CycNum& a) { return a.conj(); }
inline bool cyc_is_real(const CycNum& a) { return a.is_real(); }

/// Exact quotient; used by fraction-free elimination over the field.
inline CycNum exact_div(const CycNum& a, const CycNum& b) { return a / b; }

inline BigInt exact_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline bool is_zero(const BigInt& a) { return sgn(a) == 0; }
inline bool is_zero(const CycNum& a) { return a.is_zero(); }

}  // namespace oplm
