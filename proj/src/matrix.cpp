#include "wcep/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace wcep {

void Tolerance::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!ok(rank_rtol) || !ok(eq_atol) || !ok(eq_rtol)) {
    throw PreconditionError("tolerances must be finite and nonnegative");
  }
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix zeros(Eigen::Index n) { return CMatrix::Zero(n, n); }

CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

Eigen::VectorXd singular_values(const CMatrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

std::size_t rank(const CMatrix& a, const Tolerance& tol) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0) return 0;
  const double threshold = tol.rank_rtol * s(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) ++r;
  }
  return r;
}

namespace {

CMatrix pinv_from_svd(const Eigen::JacobiSVD<CMatrix>& svd, Eigen::Index rows,
                      Eigen::Index cols, Eigen::Index r) {
  CMatrix out = CMatrix::Zero(cols, rows);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = 0; i < r; ++i) {
    out.noalias() += (svd.matrixV().col(i) / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

}  // namespace

CMatrix pinv(const CMatrix& a, const Tolerance& tol) {
  if (a.size() == 0) return CMatrix(a.cols(), a.rows());
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double threshold = tol.rank_rtol * s(0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > threshold) ++r;
  return pinv_from_svd(svd, a.rows(), a.cols(), r);
}

CMatrix pinv_truncated(const CMatrix& a, Eigen::Index r) {
  if (a.size() == 0) return CMatrix(a.cols(), a.rows());
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  r = std::clamp<Eigen::Index>(r, 0, s.size());
  while (r > 0 && s(r - 1) == 0.0) --r;
  return pinv_from_svd(svd, a.rows(), a.cols(), r);
}

CMatrix power(const CMatrix& a, unsigned k) {
  require_square(a, "power");
  CMatrix result = identity(a.rows());
  CMatrix base = a;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

NilpotencyTest is_nilpotent(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "is_nilpotent");
  const auto n = static_cast<int>(a.rows());
  const double scale = std::max(1.0, a.norm());
  NilpotencyTest out;
  out.witness = n + 1;
  CMatrix p = identity(n);
  double bound_scale = 1.0;
  for (int k = 1; k <= n; ++k) {
    p = p * a;
    bound_scale *= scale;
    const double r = p.norm();
    if (out.witness == n + 1 && r <= tol.eq_atol + tol.eq_rtol * bound_scale) {
      out.witness = k;
    }
    if (k == n) {
      out.residual = r;
      out.nilpotent = r <= tol.eq_atol + tol.eq_rtol * bound_scale;
    }
  }
  if (n == 0) out.nilpotent = true;
  return out;
}

double min_singular_value(const CMatrix& a) {
  require_square(a, "min_singular_value");
  const Eigen::VectorXd s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

double max_singular_value(const CMatrix& a) {
  const Eigen::VectorXd s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

bool is_invertible(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "is_invertible");
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0) return true;
  return s(0) > 0.0 && s(s.size() - 1) > tol.rank_rtol * s(0);
}

double residual(const CMatrix& lhs, const CMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw ShapeError("residual: operand shapes differ");
  }
  return (lhs - rhs).norm();
}

double equality_bound(const CMatrix& lhs, const CMatrix& rhs,
                      const Tolerance& tol) {
  return tol.eq_atol + tol.eq_rtol * std::max(lhs.norm(), rhs.norm());
}

bool approx_equal(const CMatrix& lhs, const CMatrix& rhs, const Tolerance& tol) {
  return residual(lhs, rhs) <= equality_bound(lhs, rhs, tol);
}

bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": matrix must be square, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_same_square(const CMatrix& a, const CMatrix& b, const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw ShapeError(std::string(what) + ": operands must have the same size");
  }
}

CMatrix hcat(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("hcat: row counts differ");
  CMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

CMatrix block2x2(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                 const CMatrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
      b.cols() != d.cols()) {
    throw ShapeError("block2x2: blocks are not conformable");
  }
  CMatrix out(a.rows() + c.rows(), a.cols() + b.cols());
  out << a, b, c, d;
  return out;
}

}  // namespace wcep
