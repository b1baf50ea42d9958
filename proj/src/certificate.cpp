#include "wcep/certificate.hpp"

#include <algorithm>
#include <cstdlib>

namespace wcep {

std::string_view to_string(InverseKind kind) {
  switch (kind) {
    case InverseKind::moore_penrose: return "moore_penrose";
    case InverseKind::group: return "group";
    case InverseKind::drazin: return "drazin";
    case InverseKind::core: return "core";
    case InverseKind::core_ep: return "core_ep";
    case InverseKind::one_three: return "one_three";
    case InverseKind::one_three_w: return "one_three_w";
    case InverseKind::weighted_core: return "weighted_core";
    case InverseKind::weighted_gdrazin: return "weighted_gdrazin";
    case InverseKind::weighted_core_ep: return "weighted_core_ep";
    case InverseKind::bc: return "bc";
  }
  return "unknown";
}

double InverseCertificate::worst_residual() const {
  double worst = 0.0;
  for (const auto& [_, r] : residuals) worst = std::max(worst, r);
  return worst;
}

CertificateBuilder::CertificateBuilder(InverseKind kind, CMatrix value,
                                       const Tolerance& tol)
    : tol_(tol) {
  cert_.kind = kind;
  cert_.value = std::move(value);
}

CertificateBuilder& CertificateBuilder::equal(const std::string& label,
                                              const CMatrix& lhs,
                                              const CMatrix& rhs) {
  const double r = residual(lhs, rhs);
  cert_.residuals[label] = r;
  if (!(r <= equality_bound(lhs, rhs, tol_))) passed_ = false;
  return *this;
}

CertificateBuilder& CertificateBuilder::hermitian(const std::string& label,
                                                  const CMatrix& m) {
  return equal(label, m.adjoint(), m);
}

CertificateBuilder& CertificateBuilder::vanishes(const std::string& label,
                                                 const CMatrix& m, double scale) {
  const double r = m.norm();
  cert_.residuals[label] = r;
  if (!(r <= tol_.eq_atol + tol_.eq_rtol * scale)) passed_ = false;
  return *this;
}

CertificateBuilder& CertificateBuilder::nilpotent(const std::string& label,
                                                  const CMatrix& m) {
  const NilpotencyTest t = is_nilpotent(m, tol_);
  cert_.residuals[label] = t.residual;
  cert_.witnesses[label] = t.witness;
  if (!t.nilpotent) passed_ = false;
  return *this;
}

CertificateBuilder& CertificateBuilder::rank_equal(const std::string& label,
                                                   std::size_t lhs,
                                                   std::size_t rhs) {
  const auto diff = lhs > rhs ? lhs - rhs : rhs - lhs;
  cert_.residuals[label] = static_cast<double>(diff);
  if (diff != 0) passed_ = false;
  return *this;
}

CertificateBuilder& CertificateBuilder::require(bool condition) {
  if (!condition) passed_ = false;
  return *this;
}

InverseCertificate CertificateBuilder::build() && {
  cert_.exists = passed_;
  return std::move(cert_);
}

}  // namespace wcep
