#include "wcep/classic.hpp"

namespace wcep {

IndexInfo index_info(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "index");
  const Eigen::Index n = a.rows();
  IndexInfo info;
  info.range_basis = identity(n);
  info.core_rank = static_cast<std::size_t>(n);
  if (n == 0) return info;

  const double threshold = tol.rank_rtol * max_singular_value(a);
  for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
    const CMatrix image = a * info.range_basis;
    Eigen::Index r = 0;
    CMatrix next;
    if (image.cols() > 0) {
      Eigen::JacobiSVD<CMatrix> svd(image, Eigen::ComputeThinU);
      const auto& s = svd.singularValues();
      while (r < s.size() && s(r) > threshold) ++r;
      next = svd.matrixU().leftCols(r);
    } else {
      next = CMatrix(n, 0);
    }
    if (static_cast<std::size_t>(r) == info.core_rank) {
      info.index = k;
      return info;
    }
    info.core_rank = static_cast<std::size_t>(r);
    info.range_basis = std::move(next);
  }
  info.index = static_cast<std::size_t>(n);
  return info;
}

std::size_t index(const CMatrix& a, const Tolerance& tol) {
  return index_info(a, tol).index;
}

InverseCertificate moore_penrose(const CMatrix& a, const Tolerance& tol) {
  CMatrix x = pinv(a, tol);
  const CMatrix ax = a * x;
  const CMatrix xa = x * a;
  CertificateBuilder b(InverseKind::moore_penrose, x, tol);
  b.equal("AXA=A", ax * a, a)
      .equal("XAX=X", x * ax, x)
      .hermitian("(AX)*=AX", ax)
      .hermitian("(XA)*=XA", xa);
  return std::move(b).build();
}

namespace {

// With V, U orthonormal bases of R(A^k) and R((A^k)^*), A acts on R(A^k) as
// M = V^* A V and A^D = V M^{-1} (U^* V)^{-1} U^*.
CMatrix drazin_value(const CMatrix& a, const IndexInfo& info, const Tolerance& tol) {
  const Eigen::Index n = a.rows();
  if (info.core_rank == 0) return zeros(n);
  const CMatrix& v = info.range_basis;
  const IndexInfo left = index_info(a.adjoint(), tol);
  if (left.core_rank != info.core_rank) {
    const auto k = static_cast<unsigned>(info.index);
    const CMatrix ak = power(a, k);
    return ak * pinv_truncated(power(a, 2 * k + 1), static_cast<Eigen::Index>(info.core_rank)) *
           ak;
  }
  const CMatrix& u = left.range_basis;
  const CMatrix m = v.adjoint() * a * v;
  const CMatrix oblique = (u.adjoint() * v).partialPivLu().solve(u.adjoint());
  return v * m.partialPivLu().solve(oblique);
}

// V (V^* A V)^{-1} V^*, V an orthonormal basis of R(A^k).
CMatrix core_ep_value(const CMatrix& a, const IndexInfo& info) {
  if (info.core_rank == 0) return zeros(a.rows());
  const CMatrix& v = info.range_basis;
  return v * (v.adjoint() * a * v).partialPivLu().solve(v.adjoint());
}

}  // namespace

CMatrix drazin_value(const CMatrix& a, const Tolerance& tol) {
  return drazin_value(a, index_info(a, tol), tol);
}

InverseCertificate drazin(const CMatrix& a, const Tolerance& tol) {
  const IndexInfo info = index_info(a, tol);
  CMatrix x = drazin_value(a, info, tol);
  CertificateBuilder b(InverseKind::drazin, x, tol);
  b.equal("AX=XA", a * x, x * a)
      .equal("XAX=X", x * a * x, x)
      .nilpotent("A-AXA", a - a * x * a);
  return std::move(b).build();
}

InverseCertificate group(const CMatrix& a, const Tolerance& tol) {
  const IndexInfo info = index_info(a, tol);
  CMatrix x = drazin_value(a, info, tol);
  CertificateBuilder b(InverseKind::group, x, tol);
  b.require(info.index <= 1)
      .equal("AXA=A", a * x * a, a)
      .equal("XAX=X", x * a * x, x)
      .equal("AX=XA", a * x, x * a);
  return std::move(b).build();
}

InverseCertificate one_three(const CMatrix& a, const Tolerance& tol) {
  CMatrix x = pinv(a, tol);
  const CMatrix ax = a * x;
  CertificateBuilder b(InverseKind::one_three, x, tol);
  b.equal("AXA=A", ax * a, a).hermitian("(AX)*=AX", ax);
  return std::move(b).build();
}

InverseCertificate core(const CMatrix& a, const Tolerance& tol) {
  const IndexInfo info = index_info(a, tol);
  CMatrix x = core_ep_value(a, info);
  const CMatrix ax = a * x;
  CertificateBuilder b(InverseKind::core, x, tol);
  b.require(info.index <= 1)
      .equal("AX^2=X", ax * x, x)
      .hermitian("(AX)*=AX", ax)
      .equal("XA^2=A", x * a * a, a);
  return std::move(b).build();
}

InverseCertificate core_ep(const CMatrix& a, const Tolerance& tol) {
  const IndexInfo info = index_info(a, tol);
  const auto k = static_cast<unsigned>(info.index);
  const CMatrix ak = power(a, k);
  CMatrix x = core_ep_value(a, info);
  const CMatrix ax = a * x;
  CertificateBuilder b(InverseKind::core_ep, x, tol);
  b.equal("XAX=X", x * ax, x)
      .equal("AX^2=X", ax * x, x)
      .hermitian("(AX)*=AX", ax)
      .equal("A^k=XA^(k+1)", ak, x * ak * a)
      // Range tests use the orthonormal basis of R(A^k); A^k itself can be pure rounding noise.
      .rank_equal("rank[X|A^k]=rank(A^k)", rank(hcat(x, info.range_basis), tol), info.core_rank)
      .rank_equal("rank(X)=rank(A^k)", rank(x, tol), info.core_rank)
      .rank_equal("rank[X*|A^k]=rank(A^k)", rank(hcat(x.adjoint(), info.range_basis), tol),
                  info.core_rank);
  return std::move(b).build();
}

CMatrix spectral_projection(const CMatrix& a, const Tolerance& tol) {
  const IndexInfo info = index_info(a, tol);
  return identity(a.rows()) - a * drazin_value(a, info, tol);
}

}  // namespace wcep
