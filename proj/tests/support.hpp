#pragma once

// Instances with closed-form answers, built from their canonical forms rather
// than through the library's algorithms.

#include "wcep/matrix.hpp"

#include <random>
#include <vector>

namespace wcep::testing {

inline CMatrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

inline CMatrix unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian(n, n, rng));
  return qr.householderQ();
}

// Upper triangular with unit-modulus-ish diagonal in [1, 2].
inline CMatrix invertible_upper(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(1.0, 2.0), phase(0.0, 6.283185307179586);
  CMatrix t = gaussian(n, n, rng).triangularView<Eigen::Upper>();
  t *= 0.3;
  for (Eigen::Index i = 0; i < n; ++i) t(i, i) = std::polar(mag(rng), phase(rng));
  return t;
}

// Single shift block of size k with superdiagonal entries in [0.5, 1.5].
inline CMatrix shift_block(Eigen::Index k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sup(0.5, 1.5);
  CMatrix n = CMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i + 1 < k; ++i) n(i, i + 1) = sup(rng);
  return n;
}

/// A = Q diag(C, N) Q^{-1}; A^D = Q diag(C^{-1}, 0) Q^{-1}.
struct JordanInstance {
  CMatrix a;
  CMatrix drazin;
  std::size_t index = 0;
  std::size_t core_rank = 0;
};

inline JordanInstance jordan_instance(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index r = n - k;
  CMatrix j = CMatrix::Zero(n, n), jd = CMatrix::Zero(n, n);
  if (r > 0) {
    const CMatrix c = invertible_upper(r, rng);
    j.topLeftCorner(r, r) = c;
    jd.topLeftCorner(r, r) = c.inverse();
  }
  if (k > 0) j.bottomRightCorner(k, k) = shift_block(k, rng);
  // Q = U diag(s) V^* with s in [1, 3].
  std::uniform_real_distribution<double> sv(1.0, 3.0);
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = sv(rng);
  const CMatrix q = unitary(n, rng) * s.cast<Complex>().asDiagonal() * unitary(n, rng).adjoint();
  const CMatrix qi = q.inverse();
  return {q * j * qi, q * jd * qi, static_cast<std::size_t>(k), static_cast<std::size_t>(r)};
}

/// A = U [[T, S], [0, N]] U^* with T invertible upper triangular and N a
/// shift of size k; the core-EP inverse is U diag(T^{-1}, 0) U^*.
struct SchurInstance {
  CMatrix a;
  CMatrix core_ep;
  std::size_t index = 0;
};

inline SchurInstance schur_instance(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index r = n - k;
  CMatrix m = CMatrix::Zero(n, n), x = CMatrix::Zero(n, n);
  if (r > 0) {
    const CMatrix t = invertible_upper(r, rng);
    m.topLeftCorner(r, r) = t;
    x.topLeftCorner(r, r) = t.inverse();
    if (k > 0) m.topRightCorner(r, k) = gaussian(r, k, rng);
  }
  if (k > 0) m.bottomRightCorner(k, k) = shift_block(k, rng);
  const CMatrix u = unitary(n, rng);
  return {u * m * u.adjoint(), u * x * u.adjoint(), static_cast<std::size_t>(k)};
}

/// A = U diag(s) V^* with `zeros` trailing zero singular values; A^+ = V diag(1/s) U^*.
struct SvdInstance {
  CMatrix a;
  CMatrix pinv;
  std::size_t rank = 0;
};

inline SvdInstance svd_instance(Eigen::Index n, Eigen::Index zeros, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sv(0.5, 4.0);
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(n), si = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i < n - zeros; ++i) {
    s(i) = sv(rng);
    si(i) = 1.0 / s(i);
  }
  const CMatrix u = unitary(n, rng), v = unitary(n, rng);
  return {u * s.asDiagonal() * v.adjoint(), v * si.asDiagonal() * u.adjoint(),
          static_cast<std::size_t>(n - zeros)};
}

}  // namespace wcep::testing
