#pragma once

#include "wcep/matrix.hpp"

#include <span>
#include <vector>

namespace wcep {

/// One coefficient pair of the linear expression sum_i left_i * X * right_i.
struct Term {
  CMatrix left;
  CMatrix right;
};

/// A linear constraint on the unknown X.
///
/// affine:    sum_i left_i X right_i = target
/// hermitian: E(X) = sum_i left_i X right_i satisfies E(X)^* = E(X)
struct MatrixConstraint {
  enum class Kind { affine, hermitian };

  Kind kind = Kind::affine;
  std::vector<Term> terms;
  CMatrix target;

  static MatrixConstraint affine(std::vector<Term> terms, CMatrix target);
  static MatrixConstraint hermitian(std::vector<Term> terms);
};

struct SolveResult {
  CMatrix solution;
  /// Frobenius norm of the stacked violation of all constraints at `solution`.
  double residual = 0.0;
  bool feasible = false;
};

/// Minimum-norm least-squares solution of a system of linear matrix
/// constraints in one unknown X of the given shape.
///
/// The complex system is vectorized with vec(L X R) = (R^T kron L) vec(X),
/// split into real and imaginary parts, and solved with a complete
/// orthogonal decomposition (rank threshold tol.rank_rtol). Feasibility is
///   residual <= eq_atol + eq_rtol * scale,
/// where scale is the largest of the target norms and of
/// sum_i ||left_i|| ||X|| ||right_i|| over the constraints.
///
/// Pivots are dropped below rank_rtol times the larger of the largest pivot
/// and `coefficient_scale`. Pass the size the coefficients would have
/// without cancellation (e.g. the product of factor norms) when a computed
/// product may be numerically zero as a whole.
SolveResult solve_constraints(Eigen::Index rows, Eigen::Index cols,
                              std::span<const MatrixConstraint> constraints,
                              const Tolerance& tol, double coefficient_scale = 0.0);

}  // namespace wcep
