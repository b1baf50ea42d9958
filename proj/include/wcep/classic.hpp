#pragma once

#include "wcep/certificate.hpp"
#include "wcep/matrix.hpp"

#include <cstddef>

namespace wcep {

/// Rank profile of the powers of a square matrix.
struct IndexInfo {
  /// Drazin index: smallest k with rank(A^k) = rank(A^{k+1}).
  std::size_t index = 0;
  /// rank(A^index)
  std::size_t core_rank = 0;
  /// Orthonormal basis of R(A^index), core_rank columns.
  CMatrix range_basis;
};

/// Ranks of A^k are obtained by pushing an orthonormal basis of R(A^{k-1})
/// through A and truncating singular values at rank_rtol * sigma_max(A), so
/// no explicit high power of A is formed.
IndexInfo index_info(const CMatrix& a, const Tolerance& tol);
std::size_t index(const CMatrix& a, const Tolerance& tol);

InverseCertificate moore_penrose(const CMatrix& a, const Tolerance& tol);

/// A^D = V (V^* A V)^{-1} (U^* V)^{-1} U^* with V, U orthonormal bases of
/// R(A^k) and R((A^k)^*), k = ind(A). Equals A^k (A^{2k+1})^+ A^k without
/// forming the power.
InverseCertificate drazin(const CMatrix& a, const Tolerance& tol);

/// The same value without a certificate, for building other inverses from it.
CMatrix drazin_value(const CMatrix& a, const Tolerance& tol);

/// Exists iff ind(A) <= 1, in which case it equals the Drazin inverse.
InverseCertificate group(const CMatrix& a, const Tolerance& tol);

/// Canonical (1,3)-inverse: the Moore-Penrose inverse.
InverseCertificate one_three(const CMatrix& a, const Tolerance& tol);

/// Core inverse A^# A A^+, computed as V (V^* A V)^{-1} V^* with V an
/// orthonormal basis of R(A); exists iff ind(A) <= 1.
InverseCertificate core(const CMatrix& a, const Tolerance& tol);

/// Core-EP inverse A^D A^k (A^k)^+, k = ind(A), computed as
/// V (V^* A V)^{-1} V^* with V an orthonormal basis of R(A^k).
InverseCertificate core_ep(const CMatrix& a, const Tolerance& tol);

/// I - A A^D
CMatrix spectral_projection(const CMatrix& a, const Tolerance& tol);

}  // namespace wcep
