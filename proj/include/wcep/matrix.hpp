#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace wcep {

using Complex = std::complex<double>;

/// Dense complex matrix. Every algebra element (the element, its weight,
/// candidate inverses, decomposition parts) is carried by this type.
using CMatrix = Eigen::MatrixXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-conformable or non-square operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on the operands does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A route whose result is guaranteed to exist failed to produce one.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Thresholds for every floating-point decision in the library.
///
/// Rank decisions count singular values above `rank_rtol * sigma_max`.
/// Two matrices X, Y are equal when
///   ||X - Y||_F <= eq_atol + eq_rtol * max(||X||_F, ||Y||_F).
struct Tolerance {
  double rank_rtol = 1e-10;
  double eq_atol = 1e-10;
  double eq_rtol = 1e-8;

  /// Throws PreconditionError when a field is negative or not finite.
  void validate() const;
};

CMatrix identity(Eigen::Index n);
CMatrix zeros(Eigen::Index n);

CMatrix adjoint(const CMatrix& a);

/// Singular values in decreasing order (Eigen JacobiSVD).
Eigen::VectorXd singular_values(const CMatrix& a);

std::size_t rank(const CMatrix& a, const Tolerance& tol);

/// Moore-Penrose inverse; singular values at or below rank_rtol * sigma_max
/// are treated as zero.
CMatrix pinv(const CMatrix& a, const Tolerance& tol);

/// Moore-Penrose inverse of the best rank-r approximation of `a`.
CMatrix pinv_truncated(const CMatrix& a, Eigen::Index r);

/// a^k by repeated squaring; a^0 = I.
CMatrix power(const CMatrix& a, unsigned k);

struct NilpotencyTest {
  bool nilpotent = false;
  /// Smallest k <= n with a^k ~ 0, or n + 1 if there is none.
  int witness = 0;
  /// ||a^n||_F
  double residual = 0.0;
};

/// a^k ~ 0 means ||a^k||_F <= eq_atol + eq_rtol * max(1, ||a||_F)^k.
NilpotencyTest is_nilpotent(const CMatrix& a, const Tolerance& tol);

double min_singular_value(const CMatrix& a);
double max_singular_value(const CMatrix& a);

/// min_singular_value(a) > rank_rtol * max_singular_value(a), and a != 0.
bool is_invertible(const CMatrix& a, const Tolerance& tol);

/// ||lhs - rhs||_F
double residual(const CMatrix& lhs, const CMatrix& rhs);
double equality_bound(const CMatrix& lhs, const CMatrix& rhs,
                      const Tolerance& tol);
bool approx_equal(const CMatrix& lhs, const CMatrix& rhs, const Tolerance& tol);

bool all_finite(const CMatrix& a);

void require_square(const CMatrix& a, const char* what);
void require_same_square(const CMatrix& a, const CMatrix& b, const char* what);

/// [a | b]
CMatrix hcat(const CMatrix& a, const CMatrix& b);

/// [[a, b], [c, d]]
CMatrix block2x2(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                 const CMatrix& d);

}  // namespace wcep
