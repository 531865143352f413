#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "bracketlab/errors.hpp"
#include "bracketlab/rng.hpp"

namespace bracketlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Dense square complex matrix with an optional label.
///
/// Every Operator holds finite entries and has dim >= 1; constructors reject
/// anything else. Arithmetic is value-semantic and never aliases.
class Operator {
 public:
  explicit Operator(Matrix m, std::string label = {})
      : m_(std::move(m)), label_(std::move(label)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
      throw DimensionMismatch("Operator requires a non-empty square matrix");
    }
    if (!m_.allFinite()) {
      throw NumericalError("Operator entries must be finite" +
                           (label_.empty() ? std::string{} : " (" + label_ + ")"));
    }
  }

  static Operator identity(int dim, std::string label = "I") {
    check_dim(dim);
    return Operator(Matrix::Identity(dim, dim), std::move(label));
  }

  static Operator zero(int dim) {
    check_dim(dim);
    return Operator(Matrix::Zero(dim, dim));
  }

  static Operator diagonal(const Eigen::VectorXcd& d, std::string label = {}) {
    return Operator(Matrix(d.asDiagonal()), std::move(label));
  }

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  const std::string& label() const noexcept { return label_; }

  Operator with_label(std::string label) const { return Operator(m_, std::move(label)); }

  Complex operator()(int i, int j) const { return m_(i, j); }

  Operator adjoint() const { return Operator(m_.adjoint()); }
  Complex trace() const { return m_.trace(); }

  /// Frobenius norm; the one norm used throughout the library.
  double norm() const { return m_.norm(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

  /// max|A - A^dagger| <= scale * (1 + max|A|)
  bool is_hermitian(double scale = 1e-13) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= scale * (1.0 + max_abs());
  }

  bool is_anti_hermitian(double scale = 1e-13) const {
    return (m_ + m_.adjoint()).cwiseAbs().maxCoeff() <= scale * (1.0 + max_abs());
  }

  /// Leading (dim - margin) x (dim - margin) block, away from a truncation cutoff.
  Operator interior(int margin) const {
    if (margin < 0 || margin >= dim()) {
      throw InvalidArgument("interior margin " + std::to_string(margin) +
                            " must lie in [0, dim) for dim " + std::to_string(dim()));
    }
    const int n = dim() - margin;
    return Operator(m_.topLeftCorner(n, n), label_);
  }

  Operator& operator+=(const Operator& o) {
    require_same_dim(*this, o, "+");
    m_ += o.m_;
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    require_same_dim(*this, o, "-");
    m_ -= o.m_;
    return *this;
  }
  Operator& operator*=(Complex s) {
    m_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator-(const Operator& a) { return Operator(-a.m_); }
  friend Operator operator*(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "*");
    return Operator(a.m_ * b.m_);
  }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(double s, Operator a) { return a *= Complex(s); }
  friend Operator operator*(Operator a, double s) { return a *= Complex(s); }

  static void require_same_dim(const Operator& a, const Operator& b, const char* what) {
    if (a.dim() != b.dim()) {
      throw DimensionMismatch(std::string("dimension mismatch in ") + what + ": " +
                              std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
  }

 private:
  static void check_dim(int dim) {
    if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  }

  Matrix m_;
  std::string label_;
};

/// hbar together with the two bracket constants kappa = i*hbar and kappa_bar = hbar.
struct QuantizationConstants {
  double hbar = 1.0;
  /// +1 for the ordered pair (q, p), -1 for (p, q).
  int perm_sign = +1;

  static QuantizationConstants with_hbar(double hbar, int perm_sign = +1) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
    if (perm_sign != 1 && perm_sign != -1) throw InvalidArgument("perm_sign must be +1 or -1");
    return QuantizationConstants{hbar, perm_sign};
  }

  Complex kappa() const noexcept { return {0.0, hbar}; }
  double kappa_bar() const noexcept { return hbar; }
};

// ---------------------------------------------------------------------------
// Brackets

inline Operator commutator(const Operator& a, const Operator& b) {
  Operator::require_same_dim(a, b, "commutator");
  return Operator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

inline Operator anticommutator(const Operator& a, const Operator& b) {
  Operator::require_same_dim(a, b, "anticommutator");
  return Operator(a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

/// Symmetrised product (AB + BA)/2.
inline Operator sym_product(const Operator& a, const Operator& b) {
  Operator::require_same_dim(a, b, "sym_product");
  return Operator(0.5 * (a.matrix() * b.matrix() + b.matrix() * a.matrix()));
}

/// The quantum Poisson bracket (1/(i hbar)) [A, B].
inline Operator quantum_bracket(const Operator& a, const Operator& b, double hbar) {
  return commutator(a, b) * (1.0 / Complex(0.0, hbar));
}

inline Operator hermitian_part(const Operator& a) {
  return Operator(0.5 * (a.matrix() + a.matrix().adjoint()));
}

inline Operator kron(const Operator& a, const Operator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return Operator(std::move(out));
}

/// Integer power by repeated squaring; pow(A, 0) = I.
inline Operator power(const Operator& a, int n) {
  if (n < 0) throw InvalidArgument("negative operator power");
  Matrix result = Matrix::Identity(a.dim(), a.dim());
  Matrix base = a.matrix();
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return Operator(std::move(result));
}

// ---------------------------------------------------------------------------
// Exponential

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled by 2^-s until its Frobenius norm is below 1/2, the
/// series is summed until the next term is below unit roundoff relative to the
/// partial sum, and the result is squared s times. exp(0) is exactly I.
/// Throws OverflowError when ||exp(A)||_2 <= exp(||(A + A^dagger)/2||_F) could
/// exceed double range.
inline Operator op_exp(const Operator& a) {
  constexpr double kLogMax = 700.0;
  const double growth = hermitian_part(a).norm();
  if (growth > kLogMax) {
    throw OverflowError("op_exp: Hermitian part norm " + std::to_string(growth) +
                        " exceeds the representable exponential range");
  }
  const double norm = a.norm();
  int squarings = 0;
  if (norm >= 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5))) + 1;

  const int n = a.dim();
  const Matrix scaled = a.matrix() * std::ldexp(1.0, -squarings);
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    if (term.norm() <= kEps * sum.norm()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  if (!sum.allFinite()) throw OverflowError("op_exp: result overflowed");
  return Operator(std::move(sum));
}

// ---------------------------------------------------------------------------
// Random operators

/// Hermitian (M + M^dagger)/2 where M has i.i.d. standard complex normal
/// entries (real and imaginary parts N(0, 1/2)) drawn row-major from SplitMix64.
inline Operator random_hermitian(int dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("random_hermitian: dim must be >= 1");
  SplitMix64 rng(seed);
  const double scale = std::sqrt(0.5);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      auto [re, im] = rng.normal_pair();
      m(i, j) = Complex(re * scale, im * scale);
    }
  }
  Matrix h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = Complex(m(i, i).real(), 0.0);
    for (int j = i + 1; j < dim; ++j) {
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return Operator(std::move(h), "H_rand(" + std::to_string(dim) + "," + std::to_string(seed) + ")");
}

// ---------------------------------------------------------------------------
// Tolerances

/// Absolute floor plus a relative part scaled by the product of operand norms.
inline double scaled_tolerance(double absolute, double relative, double norm_product) {
  return absolute + relative * norm_product;
}

}  // namespace bracketlab
