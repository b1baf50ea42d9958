#include "wcep/weighted.hpp"

#include "wcep/classic.hpp"
#include "wcep/solver.hpp"

#include <algorithm>

namespace wcep {

WeightedPair::WeightedPair(CMatrix a_, CMatrix w_) : a(std::move(a_)), w(std::move(w_)) {
  require_same_square(a, w, "WeightedPair");
}

namespace {

// A[(WA)^D]^2, uncertified; the routes below certify their own result.
CMatrix w_gdrazin_value(const WeightedPair& pair, const Tolerance& tol) {
  const CMatrix wa_d = drazin_value(pair.w * pair.a, tol);
  return pair.a * wa_d * wa_d;
}

}  // namespace

std::size_t weighted_index(const WeightedPair& pair, const Tolerance& tol) {
  return std::max(index(pair.a * pair.w, tol), index(pair.w * pair.a, tol));
}

InverseCertificate w_gdrazin(const WeightedPair& pair, const Tolerance& tol) {
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  const CMatrix wa_d = drazin(w * a, tol).value;
  const CMatrix aw_d = drazin(a * w, tol).value;
  CMatrix x = a * wa_d * wa_d;
  const CMatrix x_alt = aw_d * aw_d * a;

  CertificateBuilder b(InverseKind::weighted_gdrazin, x, tol);
  b.equal("AWX=XWA", a * w * x, x * w * a)
      .equal("XWAWX=X", x * w * a * w * x, x)
      .nilpotent("(A-AWXWA)W", (a - a * w * x * w * a) * w)
      .equal("A[(WA)^D]^2=[(AW)^D]^2A", x, x_alt);
  return std::move(b).build();
}

InverseCertificate w_core(const WeightedPair& pair, const Tolerance& tol) {
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  const CMatrix aw = a * w;
  const CMatrix waw = w * aw;
  const InverseCertificate aw_group = group(aw, tol);
  CMatrix x = aw_group.value * aw * pinv(waw, tol);

  const CMatrix wx = w * x;
  const CMatrix wawx = waw * x;
  CertificateBuilder b(InverseKind::weighted_core, x, tol);
  b.require(index(aw, tol) <= 1)
      .equal("A(WX)^2=X", a * wx * wx, x)
      .hermitian("(WAWX)*=WAWX", wawx)
      .equal("XW(AW)^2=AW", x * w * aw * aw, aw)
      .equal("(WAW)X(WAW)=WAW", wawx * waw, waw)
      .equal("X(WAW)X=X", x * wawx, x);
  return std::move(b).build();
}

InverseCertificate w_one_three(const WeightedPair& pair, const Tolerance& tol) {
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  const Eigen::Index n = pair.size();
  const CMatrix aw = a * w;
  const CMatrix wa = w * a;
  const CMatrix waw = wa * w;
  const MatrixConstraint system[] = {
      MatrixConstraint::affine({{aw, wa}}, a),
      MatrixConstraint::hermitian({{waw, identity(n)}}),
  };
  const SolveResult solved = solve_constraints(n, n, system, tol);
  const CMatrix& x = solved.solution;

  CertificateBuilder b(InverseKind::one_three_w, x, tol);
  b.require(solved.feasible)
      .equal("AWXWA=A", aw * x * wa, a)
      .hermitian("(WAWX)*=WAWX", waw * x);
  return std::move(b).build();
}

InverseCertificate bc_inverse(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                              const Tolerance& tol) {
  require_same_square(a, b, "bc_inverse");
  require_same_square(a, c, "bc_inverse");
  const Eigen::Index n = a.rows();
  CMatrix x = b * pinv(c * a * b, tol) * c;

  const MatrixConstraint left_factor[] = {MatrixConstraint::affine({{b, x}}, x)};
  const MatrixConstraint right_factor[] = {MatrixConstraint::affine({{x, c}}, x)};
  const SolveResult u = solve_constraints(n, n, left_factor, tol);
  const SolveResult v = solve_constraints(n, n, right_factor, tol);

  CertificateBuilder cert(InverseKind::bc, x, tol);
  cert.equal("XAB=B", x * a * b, b)
      .equal("CAX=C", c * a * x, c)
      .require(u.feasible)
      .require(v.feasible);
  InverseCertificate out = std::move(cert).build();
  out.residuals["X=BUX"] = u.residual;
  out.residuals["X=XVC"] = v.residual;
  return out;
}

InverseCertificate certify_w_core_ep(const WeightedPair& pair, CMatrix x,
                                     const Tolerance& tol) {
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  const auto k = static_cast<unsigned>(weighted_index(pair, tol));
  const CMatrix aw = a * w;
  const CMatrix aw_k = power(aw, k);
  const CMatrix wx = w * x;
  const CMatrix wawx = w * aw * x;

  CertificateBuilder b(InverseKind::weighted_core_ep, x, tol);
  b.equal("A(WX)^2=X", a * wx * wx, x)
      .hermitian("(WAWX)*=WAWX", wawx)
      .equal("(AW)^k=XW(AW)^(k+1)", aw_k, x * w * aw_k * aw);
  return std::move(b).build();
}

InverseCertificate w_core_ep_direct(const WeightedPair& pair, const Tolerance& tol) {
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  const Eigen::Index n = pair.size();
  const CMatrix aw = a * w;
  const CMatrix wa = w * a;
  const IndexInfo wa_info = index_info(wa, tol);
  const auto k = static_cast<unsigned>(std::max(index(aw, tol), wa_info.index));

  const CMatrix aw_k = power(aw, k);
  const CMatrix wa_k = power(wa, k);
  const CMatrix target =
      wa_k * pinv_truncated(wa_k, static_cast<Eigen::Index>(wa_info.core_rank));
  const MatrixConstraint system[] = {
      MatrixConstraint::affine({{w * aw * aw_k, identity(n)}}, target),
  };
  const SolveResult solved = solve_constraints(n, n, system, tol);
  if (!solved.feasible) {
    throw InternalError("weighted core-EP direct system is infeasible (residual " +
                        std::to_string(solved.residual) + ")");
  }
  return certify_w_core_ep(pair, aw_k * solved.solution, tol);
}

InverseCertificate w_core_ep_gdrazin(const WeightedPair& pair, const Tolerance& tol) {
  const CMatrix g = w_gdrazin_value(pair, tol);
  const InverseCertificate inner = w_core(WeightedPair(g, pair.w), tol);
  if (!inner.exists) {
    throw InternalError("weighted Drazin inverse has no weighted core inverse");
  }
  const CMatrix gw = g * pair.w;
  return certify_w_core_ep(pair, gw * gw * inner.value, tol);
}

namespace {

struct OneThreeParts {
  CMatrix g;
  CMatrix t;
};

OneThreeParts one_three_parts(const WeightedPair& pair, const Tolerance& tol) {
  CMatrix g = w_gdrazin_value(pair, tol);
  const InverseCertificate t = w_one_three(WeightedPair(g, pair.w), tol);
  if (!t.exists) {
    throw InternalError("weighted Drazin inverse has no (1,3,W)-inverse");
  }
  return {std::move(g), t.value};
}

}  // namespace

InverseCertificate w_core_ep_13w(const WeightedPair& pair, const Tolerance& tol) {
  const OneThreeParts parts = one_three_parts(pair, tol);
  const CMatrix gw = parts.g * pair.w;
  return certify_w_core_ep(pair, gw * gw * parts.t, tol);
}

CMatrix w_core_ep_13w_unweighted_product(const WeightedPair& pair,
                                         const Tolerance& tol) {
  const OneThreeParts parts = one_three_parts(pair, tol);
  return parts.g * parts.g * parts.t;
}

InverseCertificate w_core_ep(const WeightedPair& pair, CoreEpRoute route,
                             const Tolerance& tol) {
  InverseCertificate cert;
  switch (route) {
    case CoreEpRoute::direct: cert = w_core_ep_direct(pair, tol); break;
    case CoreEpRoute::gdrazin: cert = w_core_ep_gdrazin(pair, tol); break;
    case CoreEpRoute::one_three_w: cert = w_core_ep_13w(pair, tol); break;
  }
  if (!cert.exists) {
    throw InternalError("weighted core-EP certificate failed (worst residual " +
                        std::to_string(cert.worst_residual()) + ")");
  }
  return cert;
}

CoreEpDecomposition core_ep_decompose(const WeightedPair& pair, const Tolerance& tol) {
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  CoreEpDecomposition out;
  out.x = w_core_ep_direct(pair, tol).value;
  out.z = a * w * out.x * w * a;
  out.y = a - out.z;

  const InverseCertificate z_core = w_core(WeightedPair(out.z, w), tol);
  const CMatrix wz = w * out.z;
  const CMatrix wy = w * out.y;
  CertificateBuilder b(InverseKind::weighted_core_ep, out.x, tol);
  b.vanishes("yWz=0", out.y * wz, out.y.norm() * wz.norm())
      .vanishes("(Wz)*(Wy)=0", wz.adjoint() * wy, wz.norm() * wy.norm())
      .nilpotent("yW", out.y * w)
      .require(z_core.exists)
      .equal("x=z^{core,W}", z_core.value, out.x);
  const bool ok = b.passed();
  InverseCertificate cert = std::move(b).build();
  out.residuals = std::move(cert.residuals);
  out.nilpotency_witness = cert.witnesses["yW"];
  for (const auto& [label, r] : z_core.residuals) out.residuals["z:" + label] = r;
  out.valid = ok;
  return out;
}

PolarCertificate polar_projection(const WeightedPair& pair, unsigned m_max,
                                  const Tolerance& tol) {
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  const Eigen::Index n = pair.size();
  const CoreEpDecomposition dec = core_ep_decompose(pair, tol);

  PolarCertificate out;
  out.p = identity(n) - w * dec.z * w * dec.x;
  const CMatrix& p = out.p;
  const CMatrix wa = w * a;
  const CMatrix pwa = p * wa;

  out.projection_residual = std::max(residual(p * p, p), residual(p.adjoint(), p));
  out.commute_residual = residual(pwa, pwa * p);
  const NilpotencyTest nil = is_nilpotent(pwa, tol);
  out.nilpotent = nil.nilpotent;
  out.nilpotency_witness = nil.witness;
  out.complement_residual = residual(p, identity(n) - wa * w * dec.x);

  bool margins_ok = true;
  CMatrix wa_m = identity(n);
  for (unsigned m = 1; m <= m_max; ++m) {
    wa_m = wa_m * wa;
    const CMatrix shifted = wa_m + p;
    const Eigen::VectorXd s = singular_values(shifted);
    const double margin = s(s.size() - 1);
    out.invertibility_margins.push_back(margin);
    if (!(margin > tol.rank_rtol * s(0))) margins_ok = false;
  }

  const MatrixConstraint in_range[] = {
      MatrixConstraint::affine({{w, identity(n)}}, identity(n) - p)};
  out.complement_in_weight_range = solve_constraints(n, n, in_range, tol).feasible;

  out.valid = approx_equal(p * p, p, tol) && approx_equal(p.adjoint(), p, tol) &&
              approx_equal(pwa, pwa * p, tol) && out.nilpotent && margins_ok;
  return out;
}

std::array<bool, 3> annihilator_equivalence(const WeightedPair& pair, const CMatrix& b,
                                            const Tolerance& tol) {
  require_same_square(pair.a, b, "annihilator_equivalence");
  const CMatrix& a = pair.a;
  const CMatrix& w = pair.w;
  const CMatrix x = w_core_ep_direct(pair, tol).value;
  const CMatrix wa = w * a;
  const CMatrix wa_d = drazin(wa, tol).value;
  return {
      approx_equal(wa * w * x * b, b, tol),
      approx_equal(w * x * wa * b, b, tol),
      approx_equal(wa * wa_d * b, b, tol),
  };
}

namespace {

CMatrix upper_block_formula(const CMatrix& a, const CMatrix& b, const CMatrix& d,
                            const CMatrix& w, const Tolerance& tol) {
  // Only wb enters the formula, but the block inverse also sees b itself, so the
  // whole of b has to lie in the core part of aw.
  const CMatrix pi = spectral_projection(a * w, tol);
  const CMatrix leak = pi * b;
  if (!(leak.norm() <= tol.eq_atol + tol.eq_rtol * pi.norm() * b.norm())) {
    throw PreconditionError("block_triangular_core_ep: (aw)^pi b != 0 (norm " +
                            std::to_string(leak.norm()) + ")");
  }
  const CMatrix xa = w_core_ep(WeightedPair(a, w), CoreEpRoute::gdrazin, tol).value;
  const CMatrix xd = w_core_ep(WeightedPair(d, w), CoreEpRoute::gdrazin, tol).value;
  return block2x2(xa, -(xa * w * b * w * xd), zeros(a.rows()), xd);
}

}  // namespace

InverseCertificate block_triangular_core_ep(const CMatrix& a, const CMatrix& b,
                                            const CMatrix& d, const CMatrix& w,
                                            const Tolerance& tol, Triangle shape) {
  require_same_square(a, b, "block_triangular_core_ep");
  require_same_square(a, d, "block_triangular_core_ep");
  require_same_square(a, w, "block_triangular_core_ep");
  const Eigen::Index n = a.rows();
  const CMatrix zero = zeros(n);

  CMatrix m;
  CMatrix x;
  if (shape == Triangle::upper) {
    m = block2x2(a, b, zero, d);
    x = upper_block_formula(a, b, d, w, tol);
  } else {
    // S [[a,0],[b,d]] S = [[d,b],[0,a]] with S the block swap.
    m = block2x2(a, zero, b, d);
    const CMatrix swap = block2x2(zero, identity(n), identity(n), zero);
    x = swap * upper_block_formula(d, b, a, w, tol) * swap;
  }

  const WeightedPair big(m, block2x2(w, zero, zero, w));
  InverseCertificate cert = certify_w_core_ep(big, x, tol);
  const CMatrix direct = w_core_ep_direct(big, tol).value;
  const double r = residual(x, direct);
  cert.residuals["X=direct(M)"] = r;
  if (!(r <= equality_bound(x, direct, tol))) cert.exists = false;
  return cert;
}

}  // namespace wcep
