#include "wcep/solver.hpp"

#include <algorithm>
#include <cmath>

namespace wcep {

MatrixConstraint MatrixConstraint::affine(std::vector<Term> terms, CMatrix target) {
  return {Kind::affine, std::move(terms), std::move(target)};
}

MatrixConstraint MatrixConstraint::hermitian(std::vector<Term> terms) {
  return {Kind::hermitian, std::move(terms), CMatrix()};
}

namespace {

struct ExprShape {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

ExprShape check_terms(const MatrixConstraint& c, Eigen::Index rows,
                      Eigen::Index cols) {
  if (c.terms.empty()) throw ShapeError("solve_constraints: constraint has no terms");
  ExprShape shape{c.terms.front().left.rows(), c.terms.front().right.cols()};
  for (const Term& t : c.terms) {
    if (t.left.cols() != rows || t.right.rows() != cols) {
      throw ShapeError("solve_constraints: coefficient not conformable with X");
    }
    if (t.left.rows() != shape.rows || t.right.cols() != shape.cols) {
      throw ShapeError("solve_constraints: terms disagree on expression shape");
    }
  }
  if (c.kind == MatrixConstraint::Kind::affine) {
    if (c.target.rows() != shape.rows || c.target.cols() != shape.cols) {
      throw ShapeError("solve_constraints: target shape mismatch");
    }
  } else if (shape.rows != shape.cols) {
    throw ShapeError("solve_constraints: hermitian expression must be square");
  }
  return shape;
}

// Complex matrix K with vec(E(X)) = K vec(X), column-major vec.
CMatrix expression_operator(const MatrixConstraint& c, ExprShape shape,
                            Eigen::Index rows, Eigen::Index cols) {
  CMatrix k = CMatrix::Zero(shape.rows * shape.cols, rows * cols);
  for (const Term& t : c.terms) {
    // (R^T kron L)(p + q*m, i + j*rows) = R(j, q) * L(p, i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index q = 0; q < shape.cols; ++q) {
        const Complex r = t.right(j, q);
        if (r == Complex(0.0, 0.0)) continue;
        k.block(q * shape.rows, j * rows, shape.rows, rows) += r * t.left;
      }
    }
  }
  return k;
}

CMatrix evaluate(const MatrixConstraint& c, const CMatrix& x) {
  CMatrix e = CMatrix::Zero(c.terms.front().left.rows(), c.terms.front().right.cols());
  for (const Term& t : c.terms) e.noalias() += t.left * x * t.right;
  return e;
}

double violation(const MatrixConstraint& c, const CMatrix& x) {
  const CMatrix e = evaluate(c, x);
  if (c.kind == MatrixConstraint::Kind::affine) return (e - c.target).norm();
  return (e - e.adjoint()).norm();
}

void judge(std::span<const MatrixConstraint> constraints, const Tolerance& tol,
           SolveResult& out) {
  double sq = 0.0;
  double scale = 0.0;
  const double xnorm = out.solution.norm();
  for (const auto& c : constraints) {
    const double r = violation(c, out.solution);
    sq += r * r;
    double term_scale = 0.0;
    for (const Term& t : c.terms) term_scale += t.left.norm() * xnorm * t.right.norm();
    scale = std::max(scale, term_scale);
    if (c.kind == MatrixConstraint::Kind::affine) scale = std::max(scale, c.target.norm());
  }
  out.residual = std::sqrt(sq);
  out.feasible = std::isfinite(out.residual) &&
                 out.residual <= tol.eq_atol + tol.eq_rtol * scale;
}

template <typename Matrix>
void factor(Eigen::CompleteOrthogonalDecomposition<Matrix>& cod, const Matrix& system,
            const Tolerance& tol, double coefficient_scale) {
  cod.setThreshold(tol.rank_rtol);
  cod.compute(system);
  if (cod.maxPivot() > 0.0 && coefficient_scale > cod.maxPivot()) {
    cod.setThreshold(tol.rank_rtol * coefficient_scale / cod.maxPivot());
    cod.compute(system);
  }
}

// L X = T: the Kronecker system is block diagonal, so L is factored once.
bool is_left_only(std::span<const MatrixConstraint> constraints, Eigen::Index cols) {
  if (constraints.size() != 1) return false;
  const MatrixConstraint& c = constraints.front();
  return c.kind == MatrixConstraint::Kind::affine && c.terms.size() == 1 &&
         c.terms.front().right.rows() == cols &&
         c.terms.front().right.cols() == cols && c.terms.front().right.isIdentity(0.0);
}

}  // namespace

SolveResult solve_constraints(Eigen::Index rows, Eigen::Index cols,
                              std::span<const MatrixConstraint> constraints,
                              const Tolerance& tol, double coefficient_scale) {
  if (constraints.empty()) throw ShapeError("solve_constraints: no constraints");
  if (rows <= 0 || cols <= 0) throw ShapeError("solve_constraints: empty unknown");

  std::vector<ExprShape> shapes;
  Eigen::Index total_rows = 0;
  for (const auto& c : constraints) {
    shapes.push_back(check_terms(c, rows, cols));
    total_rows += 2 * shapes.back().rows * shapes.back().cols;
  }

  if (is_left_only(constraints, cols)) {
    const MatrixConstraint& c = constraints.front();
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
    factor(cod, c.terms.front().left, tol, coefficient_scale);
    SolveResult out;
    out.solution = cod.solve(c.target);
    judge(constraints, tol, out);
    return out;
  }

  const Eigen::Index n = rows * cols;
  // Unknown vector: [Re vec(X); Im vec(X)].
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(total_rows, 2 * n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total_rows);

  Eigen::Index offset = 0;
  for (std::size_t idx = 0; idx < constraints.size(); ++idx) {
    const auto& c = constraints[idx];
    const ExprShape shape = shapes[idx];
    const Eigen::Index m = shape.rows * shape.cols;
    const CMatrix k = expression_operator(c, shape, rows, cols);
    const Eigen::MatrixXd kr = k.real();
    const Eigen::MatrixXd ki = k.imag();

    if (c.kind == MatrixConstraint::Kind::affine) {
      // Re(Kx) = Re K xr - Im K xi,  Im(Kx) = Im K xr + Re K xi
      system.block(offset, 0, m, n) = kr;
      system.block(offset, n, m, n) = -ki;
      system.block(offset + m, 0, m, n) = ki;
      system.block(offset + m, n, m, n) = kr;
      for (Eigen::Index q = 0; q < shape.cols; ++q) {
        for (Eigen::Index p = 0; p < shape.rows; ++p) {
          rhs(offset + p + q * shape.rows) = c.target(p, q).real();
          rhs(offset + m + p + q * shape.rows) = c.target(p, q).imag();
        }
      }
    } else {
      // E - E^* = 0 entrywise: Re(E_pq) - Re(E_qp) = 0, Im(E_pq) + Im(E_qp) = 0.
      const Eigen::Index s = shape.rows;
      for (Eigen::Index q = 0; q < s; ++q) {
        for (Eigen::Index p = 0; p < s; ++p) {
          const Eigen::Index pq = p + q * s;
          const Eigen::Index qp = q + p * s;
          system.block(offset + pq, 0, 1, n) = kr.row(pq) - kr.row(qp);
          system.block(offset + pq, n, 1, n) = -ki.row(pq) + ki.row(qp);
          system.block(offset + m + pq, 0, 1, n) = ki.row(pq) + ki.row(qp);
          system.block(offset + m + pq, n, 1, n) = kr.row(pq) + kr.row(qp);
        }
      }
    }
    offset += 2 * m;
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  factor(cod, system, tol, coefficient_scale);
  const Eigen::VectorXd v = cod.solve(rhs);

  SolveResult out;
  out.solution.resize(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      out.solution(i, j) = Complex(v(i + j * rows), v(n + i + j * rows));
    }
  }

  judge(constraints, tol, out);
  return out;
}

}  // namespace wcep
