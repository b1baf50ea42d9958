#pragma once

#include "wcep/certificate.hpp"
#include "wcep/matrix.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace wcep {

/// An element A together with its weight W; both n x n.
struct WeightedPair {
  CMatrix a;
  CMatrix w;

  WeightedPair(CMatrix a_, CMatrix w_);
  Eigen::Index size() const { return a.rows(); }
};

/// k = max(ind(AW), ind(WA))
std::size_t weighted_index(const WeightedPair& pair, const Tolerance& tol);

/// Weighted Drazin inverse A[(WA)^D]^2. The second form [(AW)^D]^2 A is
/// computed as well and their agreement recorded as a residual.
InverseCertificate w_gdrazin(const WeightedPair& pair, const Tolerance& tol);

/// W-weighted core inverse (AW)^# (AW) (WAW)^+. Exists iff ind(AW) <= 1.
InverseCertificate w_core(const WeightedPair& pair, const Tolerance& tol);

/// Minimum-norm X with AWXWA = A and WAWX Hermitian, from the equation solver.
InverseCertificate w_one_three(const WeightedPair& pair, const Tolerance& tol);

/// (b,c)-inverse of `a` from the candidate b (c a b)^+ c. Reported as existing
/// only if xab = b, cax = c hold and x = b U x, x = x V c are solvable.
InverseCertificate bc_inverse(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                              const Tolerance& tol);

enum class CoreEpRoute {
  /// Solve WAW (AW)^k Y = (WA)^k [(WA)^k]^+ and set X = (AW)^k Y.
  direct,
  /// [A^{D,W} W]^2 (A^{D,W})^{core,W}
  gdrazin,
  /// (A^{D,W} W)^2 (A^{D,W})^{(1,3,W)}
  one_three_w,
};

/// Generalized weighted core-EP inverse; always exists for matrices.
/// Throws InternalError if a route fails to produce a certified value.
InverseCertificate w_core_ep(const WeightedPair& pair, CoreEpRoute route,
                             const Tolerance& tol);

InverseCertificate w_core_ep_direct(const WeightedPair& pair, const Tolerance& tol);
InverseCertificate w_core_ep_gdrazin(const WeightedPair& pair, const Tolerance& tol);
InverseCertificate w_core_ep_13w(const WeightedPair& pair, const Tolerance& tol);

/// (A^{D,W})^2 (A^{D,W})^{(1,3,W)} without the weight factors between the
/// Drazin terms. Not certified; used to compare against the weighted form.
CMatrix w_core_ep_13w_unweighted_product(const WeightedPair& pair,
                                         const Tolerance& tol);

/// Certificate for a candidate weighted core-EP inverse: A(WX)^2 = X,
/// WAWX Hermitian and (AW)^k = XW(AW)^{k+1} with k = weighted_index.
InverseCertificate certify_w_core_ep(const WeightedPair& pair, CMatrix x,
                                     const Tolerance& tol);

/// A = z + y with z weighted-core invertible and y W-nilpotent.
struct CoreEpDecomposition {
  CMatrix z;
  CMatrix y;
  /// Weighted core-EP inverse of A, which is the weighted core inverse of z.
  CMatrix x;
  std::map<std::string, double> residuals;
  int nilpotency_witness = 0;
  bool valid = false;
};

CoreEpDecomposition core_ep_decompose(const WeightedPair& pair, const Tolerance& tol);

struct PolarCertificate {
  CMatrix p;
  /// max(||p^2 - p||, ||p^* - p||)
  double projection_residual = 0.0;
  /// ||p(WA) - p(WA)p||
  double commute_residual = 0.0;
  int nilpotency_witness = 0;
  bool nilpotent = false;
  /// sigma_min((WA)^m + p) for m = 1..m_max
  std::vector<double> invertibility_margins;
  /// ||p - (I - WAW X)|| with X the weighted core-EP inverse.
  double complement_residual = 0.0;
  /// Whether I - p = W U is solvable; informational only.
  bool complement_in_weight_range = false;
  bool valid = false;
};

/// p = I - W z W x from the decomposition A = z + y, x = z^{core,W}.
PolarCertificate polar_projection(const WeightedPair& pair, unsigned m_max,
                                  const Tolerance& tol);

/// Truth values of (I - WAW X) b = 0, (I - W X WA) b = 0 and (WA)^pi b = 0,
/// X the weighted core-EP inverse of A.
std::array<bool, 3> annihilator_equivalence(const WeightedPair& pair, const CMatrix& b,
                                            const Tolerance& tol);

enum class Triangle { upper, lower };

/// Weighted core-EP inverse of M = [[a, b], [0, d]] (upper) or
/// M = [[a, 0], [b, d]] (lower) with block weight diag(w, w), assembled from
/// the inverses of the diagonal blocks. Requires (aw)^pi b = 0 (upper) or
/// (dw)^pi b = 0 (lower) and throws PreconditionError otherwise; (wa)^pi b = 0
/// is not enough unless w = I. The certificate includes agreement with the
/// direct route applied to M.
InverseCertificate block_triangular_core_ep(const CMatrix& a, const CMatrix& b,
                                            const CMatrix& d, const CMatrix& w,
                                            const Tolerance& tol,
                                            Triangle shape = Triangle::upper);

}  // namespace wcep
