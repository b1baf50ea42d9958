#include "support.hpp"

#include "wcep/classic.hpp"
#include "wcep/harness.hpp"
#include "wcep/weighted.hpp"

#include <doctest.h>

#include <cmath>

using namespace wcep;
using harness::GeneratorSpec;
using harness::WeightMode;

namespace {

constexpr double kAgree = 1e-8;

std::vector<GeneratorSpec> grid(std::uint64_t seed, Eigen::Index n_max = 8) {
  std::vector<GeneratorSpec> out;
  for (Eigen::Index n = 2; n <= n_max; ++n) {
    for (std::size_t k = 0; k <= std::min<std::size_t>(3, static_cast<std::size_t>(n)); ++k) {
      for (WeightMode m : {WeightMode::identity, WeightMode::random_invertible,
                           WeightMode::random_singular}) {
        out.push_back({n, k, m, seed++, 100.0});
      }
    }
  }
  return out;
}

// A[(WA)^core-EP]^2, which uses only the unweighted core-EP inverse.
CMatrix core_ep_oracle(const WeightedPair& p) {
  const CMatrix c = core_ep(p.w * p.a, Tolerance{}).value;
  return p.a * c * c;
}

CMatrix example_a() {
  CMatrix a(2, 2);
  a << 1.0, 1.0, 0.0, std::sqrt(2.0);
  return a;
}

CMatrix example_w() {
  CMatrix w(2, 2);
  w << 1.0, 0.0, 0.0, 1.0 / std::sqrt(2.0);
  return w;
}

}  // namespace

TEST_CASE("weighted core inverse of the two-by-two fixture") {
  const InverseCertificate x = w_core(WeightedPair(example_a(), example_w()), Tolerance{});
  CMatrix expected(2, 2);
  expected << 1.0, -1.0, 0.0, std::sqrt(2.0);
  REQUIRE(x.exists);
  CHECK(residual(x.value, expected) <= 1e-10);
  CHECK(x.worst_residual() <= 1e-10);
  const CMatrix waw = example_w() * example_a() * example_w();
  CHECK(residual(waw * x.value, identity(2)) <= 1e-12);
  // WAW is invertible here, so the weighted core inverse is (WAW)^{-1}.
  CHECK(residual(x.value, waw.inverse()) <= 1e-12);
}

TEST_CASE("weighted Drazin inverse against a Jordan-form construction") {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 6);
    const Eigen::Index k = static_cast<Eigen::Index>(seed % 4) % (n + 1);
    const auto wa = testing::jordan_instance(n, k, seed + 1000);
    const CMatrix w = testing::gaussian(n, n, rng) + 3.0 * identity(n);
    const CMatrix a = w.inverse() * wa.a;
    const CMatrix expected = a * wa.drazin * wa.drazin;
    const InverseCertificate g = w_gdrazin(WeightedPair(a, w), Tolerance{});
    CAPTURE(seed);
    CHECK(g.exists);
    CHECK(residual(g.value, expected) <= kAgree * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("weighted Drazin inverse reduces to the Drazin inverse for W = I") {
  const auto inst = testing::jordan_instance(5, 2, 12);
  const InverseCertificate g = w_gdrazin(WeightedPair(inst.a, identity(5)), Tolerance{});
  CHECK(residual(g.value, inst.drazin) <= 1e-9);
}

TEST_CASE("weighted core-EP routes agree with an independent oracle") {
  for (const GeneratorSpec& spec : grid(4000)) {
    const WeightedPair p = harness::generate_pair(spec);
    const CMatrix expected = core_ep_oracle(p);
    CAPTURE(spec.n);
    CAPTURE(spec.target_index);
    CAPTURE(harness::to_string(spec.weight_mode));
    for (CoreEpRoute route : {CoreEpRoute::direct, CoreEpRoute::gdrazin, CoreEpRoute::one_three_w}) {
      const InverseCertificate x = w_core_ep(p, route, Tolerance{});
      CHECK(x.exists);
      CHECK(residual(x.value, expected) <= kAgree);
    }
  }
}

TEST_CASE("weighted core-EP with W = I is the core-EP inverse") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testing::schur_instance(6, static_cast<Eigen::Index>(seed % 4), seed);
    const InverseCertificate x = w_core_ep_direct(WeightedPair(inst.a, identity(6)), Tolerance{});
    CHECK(residual(x.value, inst.core_ep) <= 1e-9);
  }
}

TEST_CASE("weighted core inverse exists exactly when ind(AW) <= 1") {
  for (const GeneratorSpec& spec : grid(5000)) {
    const WeightedPair p = harness::generate_pair(spec);
    const bool expected = index(p.a * p.w, Tolerance{}) <= 1;
    const InverseCertificate x = w_core(p, Tolerance{});
    CAPTURE(spec.n);
    CAPTURE(spec.target_index);
    CHECK(x.exists == expected);
    if (expected) CHECK(residual(x.value, core_ep_oracle(p)) <= kAgree);
  }
}

TEST_CASE("certificate rejects a wrong candidate") {
  const WeightedPair p = harness::generate_pair({5, 2, WeightMode::random_invertible, 9, 100.0});
  const CMatrix x = w_core_ep_direct(p, Tolerance{}).value;
  CHECK(certify_w_core_ep(p, x, Tolerance{}).exists);
  CHECK_FALSE(certify_w_core_ep(p, x + 1e-3 * identity(5), Tolerance{}).exists);
  CHECK_FALSE(certify_w_core_ep(p, zeros(5), Tolerance{}).exists);
}

TEST_CASE("weighted (1,3) inverse satisfies its equations") {
  for (const GeneratorSpec& spec : grid(6000, 5)) {
    const WeightedPair p = harness::generate_pair(spec);
    // AWXWA = A is solvable only when AW and WA keep the rank of A.
    const std::size_t r = rank(p.a, Tolerance{});
    const bool solvable = rank(p.a * p.w, Tolerance{}) == r && rank(p.w * p.a, Tolerance{}) == r;
    const InverseCertificate t = w_one_three(p, Tolerance{});
    CAPTURE(harness::to_string(spec.weight_mode));
    CHECK(t.exists == solvable);
    if (!solvable) continue;
    const CMatrix& x = t.value;
    CHECK(approx_equal(p.a * p.w * x * p.w * p.a, p.a, Tolerance{}));
    const CMatrix h = p.w * p.a * p.w * x;
    CHECK(approx_equal(h, h.adjoint(), Tolerance{}));
  }
}

TEST_CASE("(b,c)-inverses recover classical inverses") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Eigen::Index k = static_cast<Eigen::Index>(seed % 3);
    const auto inst = testing::schur_instance(5, k, seed + 50);
    const CMatrix ak = power(inst.a, static_cast<unsigned>(k));
    const InverseCertificate ep = bc_inverse(inst.a, ak, ak.adjoint(), Tolerance{});
    CHECK(ep.exists);
    CHECK(residual(ep.value, inst.core_ep) <= 1e-9);
    const auto sv = testing::svd_instance(5, static_cast<Eigen::Index>(seed % 3), seed);
    const InverseCertificate mp = bc_inverse(sv.a, sv.a.adjoint(), sv.a.adjoint(), Tolerance{});
    CHECK(mp.exists);
    CHECK(residual(mp.value, sv.pinv) <= 1e-9);
  }
}

TEST_CASE("(b,c)-inverse does not exist when the ranges are incompatible") {
  CMatrix n(2, 2);
  n << 0.0, 1.0, 0.0, 0.0;
  // (n, n^*)-inverse of n would need n x n = n with x in n C and C n^*.
  CHECK_FALSE(bc_inverse(n, n, n.adjoint(), Tolerance{}).exists);
}

TEST_CASE("core-EP decomposition invariants") {
  for (const GeneratorSpec& spec : grid(7000)) {
    const WeightedPair p = harness::generate_pair(spec);
    const CoreEpDecomposition d = core_ep_decompose(p, Tolerance{});
    CAPTURE(spec.n);
    CAPTURE(spec.target_index);
    CHECK(d.valid);
    CHECK(residual(d.z + d.y, p.a) <= 1e-10);
    const double scale = std::max(1.0, d.z.norm() * d.y.norm());
    CHECK((d.y * p.w * d.z).norm() <= kAgree * scale);
    CHECK(((p.w * d.z).adjoint() * (p.w * d.y)).norm() <= kAgree * scale);
    CHECK(is_nilpotent(d.y * p.w, Tolerance{}).nilpotent);
    const InverseCertificate zc = w_core(WeightedPair(d.z, p.w), Tolerance{});
    CHECK(zc.exists);
    CHECK(residual(zc.value, core_ep_oracle(p)) <= kAgree);
  }
}

TEST_CASE("polar projection") {
  for (const GeneratorSpec& spec : grid(8000)) {
    const WeightedPair p = harness::generate_pair(spec);
    const auto n = static_cast<unsigned>(spec.n);
    const PolarCertificate pc = polar_projection(p, n, Tolerance{});
    CHECK(pc.valid);
    CHECK(residual(pc.p * pc.p, pc.p) <= 1e-9);
    CHECK(residual(pc.p.adjoint(), pc.p) <= 1e-9);
    const CMatrix x = core_ep_oracle(p);
    CHECK(residual(pc.p, identity(spec.n) - p.w * p.a * p.w * x) <= kAgree);
    CHECK(pc.invertibility_margins.size() == n);
    for (double m : pc.invertibility_margins) CHECK(m > 1e-8);
  }
}

TEST_CASE("annihilator conditions agree") {
  std::mt19937_64 rng(3);
  for (const GeneratorSpec& spec : grid(9000)) {
    const WeightedPair p = harness::generate_pair(spec);
    const CMatrix wa = p.w * p.a;
    const CMatrix r = testing::gaussian(spec.n, spec.n, rng);
    const auto inside = annihilator_equivalence(p, wa * drazin(wa, Tolerance{}).value * r, Tolerance{});
    CHECK(inside[0]);
    CHECK(inside[1]);
    CHECK(inside[2]);
    const auto generic = annihilator_equivalence(p, r, Tolerance{});
    CHECK(generic[0] == generic[2]);
    CHECK(generic[1] == generic[2]);
    CHECK(generic[2] == (index(wa, Tolerance{}) == 0));
  }
}

TEST_CASE("upper and lower block formulas match the direct route") {
  std::mt19937_64 rng(21);
  for (const GeneratorSpec& spec : grid(10000, 6)) {
    const WeightedPair p = harness::generate_pair(spec);
    GeneratorSpec other = spec;
    other.seed += 500;
    other.target_index = (spec.target_index + 1) % 3;
    const CMatrix d = harness::generate_element(other, p.w);
    const CMatrix r = testing::gaussian(spec.n, spec.n, rng);
    const CMatrix aw = p.a * p.w, dw = d * p.w;
    CAPTURE(spec.n);
    CAPTURE(harness::to_string(spec.weight_mode));
    const InverseCertificate up = block_triangular_core_ep(
        p.a, aw * drazin(aw, Tolerance{}).value * r, d, p.w, Tolerance{}, Triangle::upper);
    CHECK(up.exists);
    CHECK(up.residuals.at("X=direct(M)") <= kAgree);
    const InverseCertificate low = block_triangular_core_ep(
        p.a, dw * drazin(dw, Tolerance{}).value * r, d, p.w, Tolerance{}, Triangle::lower);
    CHECK(low.exists);
    CHECK(low.residuals.at("X=direct(M)") <= kAgree);
  }
}

TEST_CASE("block formula needs (aw)^pi b = 0, not only (wa)^pi b = 0") {
  std::mt19937_64 rng(22);
  const WeightedPair p = harness::generate_pair({4, 1, WeightMode::random_invertible, 13, 100.0});
  const CMatrix d = harness::generate_element({4, 0, WeightMode::random_invertible, 14, 100.0}, p.w);
  const CMatrix wa = p.w * p.a;
  const CMatrix b = wa * drazin(wa, Tolerance{}).value * testing::gaussian(4, 4, rng);
  CHECK((spectral_projection(wa, Tolerance{}) * b).norm() <= 1e-10);
  CHECK_THROWS_AS(block_triangular_core_ep(p.a, b, d, p.w, Tolerance{}), PreconditionError);

  // The formula itself disagrees with the direct route for this b.
  const CMatrix xa = w_core_ep_direct(p, Tolerance{}).value;
  const CMatrix xd = w_core_ep_direct(WeightedPair(d, p.w), Tolerance{}).value;
  const CMatrix z = zeros(4);
  const CMatrix formula = block2x2(xa, -(xa * p.w * b * p.w * xd), z, xd);
  const CMatrix direct =
      w_core_ep_direct(WeightedPair(block2x2(p.a, b, z, d), block2x2(p.w, z, z, p.w)), Tolerance{})
          .value;
  CHECK(residual(formula, direct) > 1e-3);
}

TEST_CASE("with singular W even (wa)^pi wb = 0 is not enough") {
  std::mt19937_64 rng(23);
  const WeightedPair p = harness::generate_pair({4, 1, WeightMode::random_singular, 5, 100.0});
  const CMatrix d = harness::generate_element({4, 1, WeightMode::random_singular, 6, 100.0}, p.w);
  const CMatrix b = testing::gaussian(4, 4, rng);
  REQUIRE((spectral_projection(p.w * p.a, Tolerance{}) * p.w * b).norm() <= 1e-10);
  CHECK_THROWS_AS(block_triangular_core_ep(p.a, b, d, p.w, Tolerance{}), PreconditionError);

  const CMatrix xa = w_core_ep_direct(p, Tolerance{}).value;
  const CMatrix xd = w_core_ep_direct(WeightedPair(d, p.w), Tolerance{}).value;
  const CMatrix z = zeros(4);
  const CMatrix formula = block2x2(xa, -(xa * p.w * b * p.w * xd), z, xd);
  const CMatrix direct =
      w_core_ep_direct(WeightedPair(block2x2(p.a, b, z, d), block2x2(p.w, z, z, p.w)), Tolerance{})
          .value;
  CHECK(residual(formula, direct) > 1e-3);
}

TEST_CASE("weighted and unweighted (1,3,W) products coincide for W = I") {
  const WeightedPair p = harness::generate_pair({6, 2, WeightMode::identity, 1, 100.0});
  CHECK(residual(w_core_ep_13w_unweighted_product(p, Tolerance{}), w_core_ep_13w(p, Tolerance{}).value) <=
        1e-9);
}

TEST_CASE("weighted pair validation") {
  CHECK_THROWS_AS(WeightedPair(identity(2), identity(3)), ShapeError);
  CHECK_THROWS_AS(WeightedPair(CMatrix::Zero(2, 3), identity(2)), ShapeError);
  CHECK_THROWS_AS(block_triangular_core_ep(identity(2), identity(3), identity(2), identity(2),
                                           Tolerance{}),
                  ShapeError);
}
