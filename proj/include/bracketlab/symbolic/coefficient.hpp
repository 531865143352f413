#pragma once

#include <complex>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace bracketlab::symbolic {

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex number re + i*im with arbitrary-precision rational parts.
class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
  ComplexRational(long long re) : re_(re), im_(0) {}

  static ComplexRational i() { return {0, 1}; }
  static ComplexRational fraction(long long num, long long den) { return {Rational(num, den), 0}; }

  const Rational& real() const noexcept { return re_; }
  const Rational& imag() const noexcept { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  ComplexRational conj() const { return {re_, -im_}; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o) {
    const Rational den = o.re_ * o.re_ + o.im_ * o.im_;
    if (den == 0) throw std::domain_error("ComplexRational: division by zero");
    Rational re = (re_ * o.re_ + im_ * o.im_) / den;
    Rational im = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const {
    return {re_.convert_to<double>(), im_.convert_to<double>()};
  }

  /// Text accepted back by the expression parser: `3/2`, `-i`, `(1/2+3*i)`.
  std::string to_string() const {
    std::ostringstream os;
    if (im_ == 0) {
      os << re_;
    } else if (re_ == 0) {
      if (im_ == 1) {
        os << "i";
      } else if (im_ == -1) {
        os << "-i";
      } else {
        os << im_ << "*i";
      }
    } else {
      os << "(" << re_ << (im_ < 0 ? "-" : "+");
      const Rational mag = im_ < 0 ? Rational(-im_) : im_;
      if (mag != 1) os << mag << "*";
      os << "i)";
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const ComplexRational& c) {
    return os << c.to_string();
  }

 private:
  Rational re_ = 0;
  Rational im_ = 0;
};

}  // namespace bracketlab::symbolic
