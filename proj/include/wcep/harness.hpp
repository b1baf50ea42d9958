#pragma once

#include "wcep/matrix.hpp"
#include "wcep/solver.hpp"
#include "wcep/weighted.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace wcep::harness {

enum class WeightMode { identity, random_invertible, random_singular };

std::string_view to_string(WeightMode mode);
/// Accepts "identity", "random_invertible"/"invertible", "random_singular"/"singular".
std::optional<WeightMode> parse_weight_mode(std::string_view text);

struct GeneratorSpec {
  Eigen::Index n = 4;
  /// Drazin index of WA; measured rather than prescribed for singular weights.
  std::size_t target_index = 0;
  WeightMode weight_mode = WeightMode::identity;
  std::uint64_t seed = 0;
  double condition_cap = 100.0;
};

/// Builds J = diag(C, N) with C invertible and N a single nilpotent shift
/// block of size target_index, conjugates by a random invertible Q, and
/// sets WA = Q J Q^{-1}. For invertible weights A = W^{-1} Q J Q^{-1}. For
/// singular weights of nullity d, J gets d zero eigenvalues (the shift block
/// has size max(target_index, 1)), Q maps R(J) into R(W), and
/// A = W^+ Q J Q^{-1} plus a random component in N(W). Deterministic in the
/// spec.
/// Throws PreconditionError if target_index > n or n < 1.
WeightedPair generate_pair(const GeneratorSpec& spec);

/// A second element sharing `w`, built like generate_pair's A; the singular
/// construction is used whenever `w` is singular.
CMatrix generate_element(const GeneratorSpec& spec, const CMatrix& w);

/// Weighted group inverse: the weighted Drazin inverse when
/// max(ind(AW), ind(WA)) <= 1, otherwise nullopt.
std::optional<CMatrix> weighted_group(const WeightedPair& pair, const Tolerance& tol);

// Independent equation-solver routes for the closed-form inverses. Range
// conditions are imposed by substitution X = F Y for the appropriate F;
// each returns X together with the solver residual and feasibility.
SolveResult oracle_drazin(const CMatrix& a, const Tolerance& tol);
SolveResult oracle_core(const CMatrix& a, const Tolerance& tol);
SolveResult oracle_core_ep(const CMatrix& a, const Tolerance& tol);
SolveResult oracle_w_core(const WeightedPair& pair, const Tolerance& tol);
SolveResult oracle_w_core_ep(const WeightedPair& pair, const Tolerance& tol);

struct VerificationReport {
  std::string suite;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double worst_residual = 0.0;
  std::uint64_t seed = 0;
  std::string notes;

  bool passed() const { return failures == 0; }
};

nlohmann::json to_json(const VerificationReport& report);
/// Throws ParseError on anything but the exact report shape.
VerificationReport report_from_json(const nlohmann::json& j);

/// Every runnable suite label, in a fixed order (aliases excluded).
const std::vector<std::string>& suite_labels();
bool is_suite_label(std::string_view label);

/// Runs `trials` independent trials of one suite. Trial i draws its
/// instance from a generator seeded by (seed, i), cycling over the suite's
/// grid of (n, index, weight mode). The fixed-instance suite always runs a
/// single trial. Throws PreconditionError for an unknown label.
VerificationReport run_suite(std::string_view suite, std::uint64_t trials,
                             std::uint64_t seed, const Tolerance& tol);

/// Per-trial seed derived from (seed, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0);

/// Runs fn(i) for i in [0, count) on up to hardware_concurrency threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace wcep::harness
