#pragma once

#include "wcep/matrix.hpp"

#include <map>
#include <string>
#include <string_view>

namespace wcep {

enum class InverseKind {
  moore_penrose,
  group,
  drazin,
  core,
  core_ep,
  one_three,
  one_three_w,
  weighted_core,
  weighted_gdrazin,
  weighted_core_ep,
  bc,
};

std::string_view to_string(InverseKind kind);

/// A computed inverse together with the residuals of its defining equations.
///
/// Residuals are raw Frobenius norms ||lhs - rhs||_F (for rank conditions the
/// absolute rank difference; for nilpotency conditions ||M^n||_F). `exists`
/// is true only if the existence condition holds and every residual passed
/// its tolerance test.
struct InverseCertificate {
  CMatrix value;
  InverseKind kind = InverseKind::moore_penrose;
  std::map<std::string, double> residuals;
  /// Nilpotency witnesses (smallest k with M^k ~ 0) keyed like `residuals`.
  std::map<std::string, int> witnesses;
  bool exists = false;

  double worst_residual() const;
};

/// Accumulates defining-equation checks into a certificate.
class CertificateBuilder {
 public:
  CertificateBuilder(InverseKind kind, CMatrix value, const Tolerance& tol);

  /// lhs = rhs under the library's matrix-equality rule.
  CertificateBuilder& equal(const std::string& label, const CMatrix& lhs,
                            const CMatrix& rhs);
  /// m^* = m
  CertificateBuilder& hermitian(const std::string& label, const CMatrix& m);
  /// m = 0, judged against eq_atol + eq_rtol * scale.
  CertificateBuilder& vanishes(const std::string& label, const CMatrix& m,
                               double scale);
  CertificateBuilder& nilpotent(const std::string& label, const CMatrix& m);
  CertificateBuilder& rank_equal(const std::string& label, std::size_t lhs,
                                 std::size_t rhs);
  /// Marks existence as failed without a residual (e.g. an index condition).
  CertificateBuilder& require(bool condition);

  bool passed() const { return passed_; }
  InverseCertificate build() &&;

 private:
  InverseCertificate cert_;
  const Tolerance& tol_;
  bool passed_ = true;
};

}  // namespace wcep
