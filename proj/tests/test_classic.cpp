#include "support.hpp"

#include "wcep/classic.hpp"

#include <doctest.h>

using namespace wcep;

namespace {
constexpr double kAgree = 1e-9;

struct Cell {
  Eigen::Index n;
  Eigen::Index k;
};

std::vector<Cell> cells() {
  std::vector<Cell> out;
  for (Eigen::Index n = 1; n <= 8; ++n) {
    for (Eigen::Index k = 0; k <= std::min<Eigen::Index>(n, 4); ++k) out.push_back({n, k});
  }
  return out;
}
}  // namespace

TEST_CASE("index and core rank of Jordan-form instances") {
  std::uint64_t seed = 100;
  for (const Cell c : cells()) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto inst = testing::jordan_instance(c.n, c.k, seed++);
      CAPTURE(c.n);
      CAPTURE(c.k);
      const IndexInfo info = index_info(inst.a, Tolerance{});
      CHECK(info.index == inst.index);
      CHECK(info.core_rank == inst.core_rank);
      CHECK(info.range_basis.cols() == static_cast<Eigen::Index>(inst.core_rank));
    }
  }
}

TEST_CASE("Drazin inverse matches the Jordan-form value") {
  std::uint64_t seed = 200;
  for (const Cell c : cells()) {
    const auto inst = testing::jordan_instance(c.n, c.k, seed++);
    CAPTURE(c.n);
    CAPTURE(c.k);
    const InverseCertificate x = drazin(inst.a, Tolerance{});
    CHECK(x.exists);
    CHECK(residual(x.value, inst.drazin) <= kAgree * std::max(1.0, inst.drazin.norm()));
  }
}

TEST_CASE("core-EP inverse matches the Schur-form value") {
  std::uint64_t seed = 300;
  for (const Cell c : cells()) {
    const auto inst = testing::schur_instance(c.n, c.k, seed++);
    CAPTURE(c.n);
    CAPTURE(c.k);
    const InverseCertificate x = core_ep(inst.a, Tolerance{});
    CHECK(x.exists);
    CHECK(residual(x.value, inst.core_ep) <= kAgree);
  }
}

TEST_CASE("core inverse exists exactly for index at most one") {
  std::uint64_t seed = 400;
  for (const Cell c : cells()) {
    const auto inst = testing::schur_instance(c.n, c.k, seed++);
    CAPTURE(c.n);
    CAPTURE(c.k);
    const InverseCertificate x = core(inst.a, Tolerance{});
    CHECK(x.exists == (c.k <= 1));
    if (c.k <= 1) CHECK(residual(x.value, inst.core_ep) <= kAgree);
  }
}

TEST_CASE("group inverse exists exactly for index at most one") {
  std::uint64_t seed = 500;
  for (const Cell c : cells()) {
    const auto inst = testing::jordan_instance(c.n, c.k, seed++);
    const InverseCertificate g = group(inst.a, Tolerance{});
    CHECK(g.exists == (c.k <= 1));
    if (c.k <= 1) CHECK(residual(g.value, inst.drazin) <= kAgree * std::max(1.0, inst.drazin.norm()));
  }
}

TEST_CASE("Moore-Penrose and (1,3) inverses against SVD constructions") {
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 7);
    const auto inst = testing::svd_instance(n, static_cast<Eigen::Index>(seed % 3) % n, seed);
    const InverseCertificate mp = moore_penrose(inst.a, Tolerance{});
    CHECK(mp.exists);
    CHECK(residual(mp.value, inst.pinv) <= 1e-10);
    const InverseCertificate ot = one_three(inst.a, Tolerance{});
    CHECK(ot.exists);
  }
}

TEST_CASE("small closed-form values") {
  // Idempotent E: E^D = E and the core inverse is the orthogonal projector onto R(E).
  CMatrix e(2, 2);
  e << 1.0, 1.0, 0.0, 0.0;
  CHECK(residual(drazin(e, Tolerance{}).value, e) <= 1e-14);
  CMatrix proj(2, 2);
  proj << 1.0, 0.0, 0.0, 0.0;
  CHECK(residual(core(e, Tolerance{}).value, proj) <= 1e-14);

  // Nilpotent: every Drazin-type inverse is zero.
  CMatrix n(2, 2);
  n << 0.0, 1.0, 0.0, 0.0;
  CHECK(index(n, Tolerance{}) == 2);
  CHECK(drazin(n, Tolerance{}).value.norm() == 0.0);
  CHECK(core_ep(n, Tolerance{}).value.norm() == 0.0);
  CHECK_FALSE(core(n, Tolerance{}).exists);

  // Invertible: all coincide with the inverse.
  CMatrix a(2, 2);
  a << 2.0, 1.0, 0.0, 3.0;
  const CMatrix inv = a.inverse();
  CHECK(residual(drazin(a, Tolerance{}).value, inv) <= 1e-14);
  CHECK(residual(core_ep(a, Tolerance{}).value, inv) <= 1e-14);
  CHECK(residual(moore_penrose(a, Tolerance{}).value, inv) <= 1e-14);
  CHECK(index(a, Tolerance{}) == 0);
}

TEST_CASE("spectral projection is the idempotent I - A A^D") {
  const auto inst = testing::jordan_instance(6, 2, 77);
  const CMatrix p = spectral_projection(inst.a, Tolerance{});
  CHECK(residual(p * p, p) <= 1e-9);
  CHECK(residual(p, identity(6) - inst.a * inst.drazin) <= 1e-9);
  CHECK((p * inst.a * inst.drazin).norm() <= 1e-9);
}

TEST_CASE("certificates report their defining residuals") {
  const auto inst = testing::schur_instance(5, 2, 8);
  const InverseCertificate x = core_ep(inst.a, Tolerance{});
  CHECK(x.kind == InverseKind::core_ep);
  CHECK(x.residuals.count("(AX)*=AX") == 1);
  CHECK(x.residuals.count("A^k=XA^(k+1)") == 1);
  CHECK(x.worst_residual() <= 1e-10);
  CHECK(to_string(InverseKind::weighted_core_ep) != to_string(InverseKind::core_ep));
}

TEST_CASE("non-square input is rejected") {
  const CMatrix r = CMatrix::Zero(2, 3);
  CHECK_THROWS_AS(drazin(r, Tolerance{}), ShapeError);
  CHECK_THROWS_AS(core_ep(r, Tolerance{}), ShapeError);
  CHECK_THROWS_AS(index(r, Tolerance{}), ShapeError);
}
