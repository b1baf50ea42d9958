#include "wcep/classic.hpp"
#include "wcep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wcep::harness {

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::identity: return "identity";
    case WeightMode::random_invertible: return "random_invertible";
    case WeightMode::random_singular: return "random_singular";
  }
  return "unknown";
}

std::optional<WeightMode> parse_weight_mode(std::string_view text) {
  if (text == "identity") return WeightMode::identity;
  if (text == "random_invertible" || text == "invertible") return WeightMode::random_invertible;
  if (text == "random_singular" || text == "singular") return WeightMode::random_singular;
  return std::nullopt;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  return rng();
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    rng_.seed(seq);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  CMatrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal;
    CMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng_), normal(rng_));
    }
    return g;
  }

  CMatrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<CMatrix> qr(gaussian(n, n));
    CMatrix q = qr.householderQ();
    const CMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double mag = std::abs(r(j, j));
      if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
  }

  // U diag(s) V^* with log-uniform s in [1, spread]; `zeros` trailing
  // singular values are set to 0.
  CMatrix conditioned(Eigen::Index n, double spread, Eigen::Index zeros = 0) {
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = std::exp(uniform(0.0, std::log(spread)));
    std::sort(s.data(), s.data() + n, std::greater<>());
    for (Eigen::Index i = n - zeros; i < n; ++i) s(i) = 0.0;
    return unitary(n) * s.cast<Complex>().asDiagonal() * unitary(n).adjoint();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Factors are drawn with condition number at most cap^(1/4), which keeps a
// product of W^{-1}, Q, J and Q^{-1} within the cap.
double factor_spread(double cap) { return std::max(1.0, std::pow(cap, 0.25)); }

void check_spec(const GeneratorSpec& spec) {
  if (spec.n < 1) throw PreconditionError("generator: n must be positive");
  if (spec.target_index > static_cast<std::size_t>(spec.n)) {
    throw PreconditionError("generator: target index exceeds n");
  }
  if (!(spec.condition_cap >= 1.0)) {
    throw PreconditionError("generator: condition cap must be >= 1");
  }
}

// Invertible part of J: U diag(lambda) U^* with |lambda| in [1, 2].
CMatrix invertible_block(Sampler& s, Eigen::Index size) {
  Eigen::VectorXcd lambda(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    lambda(i) = std::polar(s.uniform(1.0, 2.0), s.uniform(0.0, 2.0 * std::numbers::pi));
  }
  const CMatrix u = s.unitary(size);
  return u * lambda.asDiagonal() * u.adjoint();
}

// Q J Q^{-1} with ind(J) = target_index.
CMatrix core_nilpotent(Sampler& s, Eigen::Index n, std::size_t target_index, double spread) {
  const auto nil = static_cast<Eigen::Index>(target_index);
  const Eigen::Index inv = n - nil;
  CMatrix j = CMatrix::Zero(n, n);
  if (inv > 0) j.topLeftCorner(inv, inv) = invertible_block(s, inv);
  for (Eigen::Index i = 0; i + 1 < nil; ++i) {
    j(inv + i, inv + i + 1) = s.uniform(0.5, 1.5);
  }
  const CMatrix q = s.conditioned(n, spread);
  return q * j * q.partialPivLu().inverse();
}

// A with W A = Q J Q^{-1} for a singular W of rank n - d. J carries one shift
// block of size `shift` and d - 1 further zero eigenvalues, ordered so that
// R(J) is spanned by the first n - d coordinates; Q maps those into R(W).
CMatrix element_for_singular_weight(Sampler& s, const CMatrix& w, std::size_t target_index,
                                    double spread, const Tolerance& tol) {
  const Eigen::Index n = w.rows();
  Eigen::JacobiSVD<CMatrix> svd(w, Eigen::ComputeFullU);
  const auto r = static_cast<Eigen::Index>(rank(w, tol));
  const Eigen::Index d = n - r;
  const Eigen::Index shift =
      std::min<Eigen::Index>(std::max<Eigen::Index>(static_cast<Eigen::Index>(target_index), 1),
                             n - d + 1);
  const Eigen::Index inv = n - shift - (d - 1);

  // Coordinates: [invertible | shift block without its last row/col | zeros].
  CMatrix j = CMatrix::Zero(n, n);
  if (inv > 0) j.topLeftCorner(inv, inv) = invertible_block(s, inv);
  // Shift block on coordinates inv, ..., inv + shift - 2 followed by the
  // block's kernel vector at coordinate r, which lies outside R(J).
  std::vector<Eigen::Index> block;
  for (Eigen::Index i = 0; i + 1 < shift; ++i) block.push_back(inv + i);
  block.push_back(r);
  for (std::size_t i = 0; i + 1 < block.size(); ++i) {
    j(block[i], block[i + 1]) = s.uniform(0.5, 1.5);
  }

  CMatrix t = CMatrix::Zero(n, n);
  if (r > 0) t.topLeftCorner(r, r) = s.conditioned(r, spread);
  t.bottomRightCorner(d, d) = s.conditioned(d, spread);
  t.topRightCorner(r, d) = 0.5 * s.gaussian(r, d) / std::sqrt(static_cast<double>(n));
  const CMatrix q = svd.matrixU() * t;
  const CMatrix m = q * j * q.partialPivLu().inverse();

  const CMatrix w_pinv = pinv_truncated(w, r);
  const CMatrix kernel_part = identity(n) - w_pinv * w;
  return w_pinv * m + kernel_part * s.gaussian(n, n) / std::sqrt(static_cast<double>(n));
}

}  // namespace

WeightedPair generate_pair(const GeneratorSpec& spec) {
  check_spec(spec);
  Sampler s(spec.seed);
  const double spread = factor_spread(spec.condition_cap);
  const Eigen::Index n = spec.n;

  switch (spec.weight_mode) {
    case WeightMode::identity:
      return WeightedPair(core_nilpotent(s, n, spec.target_index, spread), identity(n));
    case WeightMode::random_invertible: {
      const CMatrix m = core_nilpotent(s, n, spec.target_index, spread);
      CMatrix w = s.conditioned(n, spread);
      CMatrix a = w.partialPivLu().solve(m);
      return WeightedPair(std::move(a), std::move(w));
    }
    case WeightMode::random_singular: {
      const auto shift = static_cast<Eigen::Index>(std::max<std::size_t>(spec.target_index, 1));
      const Eigen::Index most = std::min<Eigen::Index>(std::max<Eigen::Index>(1, n / 3), n - shift + 1);
      const Eigen::Index deficiency = s.integer(1, static_cast<int>(std::max<Eigen::Index>(1, most)));
      CMatrix w = s.conditioned(n, spread, deficiency);
      CMatrix a = element_for_singular_weight(s, w, spec.target_index, spread, Tolerance{});
      return WeightedPair(std::move(a), std::move(w));
    }
  }
  throw PreconditionError("generator: unknown weight mode");
}

CMatrix generate_element(const GeneratorSpec& spec, const CMatrix& w) {
  check_spec(spec);
  require_square(w, "generate_element");
  if (w.rows() != spec.n) throw ShapeError("generate_element: weight size mismatch");
  Sampler s(spec.seed);
  const double spread = factor_spread(spec.condition_cap);
  const Tolerance tol;
  if (!is_invertible(w, tol)) {
    return element_for_singular_weight(s, w, spec.target_index, spread, tol);
  }
  return w.partialPivLu().solve(core_nilpotent(s, spec.n, spec.target_index, spread));
}

std::optional<CMatrix> weighted_group(const WeightedPair& pair, const Tolerance& tol) {
  if (weighted_index(pair, tol) > 1) return std::nullopt;
  return w_gdrazin(pair, tol).value;
}

namespace {

// `scale` bounds the coefficient norms by products of factor norms, so a
// coefficient that is numerically zero as a whole is not fitted.
SolveResult substituted(const CMatrix& factor, std::vector<MatrixConstraint> system,
                        const Tolerance& tol, double scale) {
  const Eigen::Index n = factor.rows();
  SolveResult r = solve_constraints(n, n, system, tol, scale);
  r.solution = factor * r.solution;
  return r;
}

}  // namespace

SolveResult oracle_drazin(const CMatrix& a, const Tolerance& tol) {
  const Eigen::Index n = a.rows();
  const auto k = static_cast<unsigned>(index(a, tol));
  const CMatrix ak = power(a, k);
  const CMatrix ak1 = ak * a;
  // X = A^k Y:  A^{k+1} X = A^k,  A X = X A.
  return substituted(ak, {MatrixConstraint::affine({{ak1 * ak, identity(n)}}, ak),
                          MatrixConstraint::affine({{ak1, identity(n)}, {-ak, a}}, zeros(n))},
                     tol, std::pow(a.norm(), 2 * k + 1));
}

SolveResult oracle_core(const CMatrix& a, const Tolerance& tol) {
  const Eigen::Index n = a.rows();
  // X = A Y:  (AX)^* = AX,  X A^2 = A.
  return substituted(a, {MatrixConstraint::hermitian({{a * a, identity(n)}}),
                         MatrixConstraint::affine({{a, a * a}}, a)},
                     tol, std::pow(a.norm(), 3));
}

SolveResult oracle_core_ep(const CMatrix& a, const Tolerance& tol) {
  const Eigen::Index n = a.rows();
  const auto k = static_cast<unsigned>(index(a, tol));
  const CMatrix ak = power(a, k);
  const CMatrix ak1 = ak * a;
  // X = A^k Y:  (AX)^* = AX,  A X A^k = A^k.
  return substituted(ak, {MatrixConstraint::hermitian({{ak1, identity(n)}}),
                          MatrixConstraint::affine({{ak1, ak}}, ak)},
                     tol, std::pow(a.norm(), 2 * k + 1));
}

SolveResult oracle_w_core(const WeightedPair& pair, const Tolerance& tol) {
  const Eigen::Index n = pair.size();
  const CMatrix aw = pair.a * pair.w;
  const CMatrix waw = pair.w * aw;
  // X = AW Y:  XW(AW)^2 = AW,  (WAWX)^* = WAWX,  (WAW) X (WAW) = WAW.
  return substituted(aw, {MatrixConstraint::affine({{aw, pair.w * aw * aw}}, aw),
                          MatrixConstraint::hermitian({{waw * aw, identity(n)}}),
                          MatrixConstraint::affine({{waw * aw, waw}}, waw)},
                     tol, std::pow(pair.a.norm(), 3) * std::pow(pair.w.norm(), 4));
}

SolveResult oracle_w_core_ep(const WeightedPair& pair, const Tolerance& tol) {
  const Eigen::Index n = pair.size();
  const auto k = static_cast<unsigned>(weighted_index(pair, tol));
  const CMatrix aw = pair.a * pair.w;
  const CMatrix waw = pair.w * aw;
  const CMatrix aw_k = power(aw, k);
  const CMatrix wa_k = power(pair.w * pair.a, k);
  const CMatrix off_range = identity(n) - wa_k * pinv(wa_k, tol);
  // X = (AW)^k Y:  (WAWX)^* = WAWX,  XW(AW)^{k+1} = (AW)^k,  X = 0 on N(((WA)^k)^*).
  return substituted(aw_k, {MatrixConstraint::hermitian({{waw * aw_k, identity(n)}}),
                            MatrixConstraint::affine({{aw_k, pair.w * aw_k * aw}}, aw_k),
                            MatrixConstraint::affine({{aw_k, off_range}}, zeros(n))},
                     tol, std::pow(pair.a.norm(), 2 * k + 1) * std::pow(pair.w.norm(), 2 * k + 2));
}

}  // namespace wcep::harness
