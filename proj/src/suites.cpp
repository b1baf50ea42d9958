#include "wcep/classic.hpp"
#include "wcep/harness.hpp"
#include "wcep/matrix_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace wcep::harness {

using nlohmann::json;

nlohmann::json to_json(const VerificationReport& r) {
  return json{{"suite", r.suite},     {"trials", r.trials},
              {"failures", r.failures}, {"worst_residual", r.worst_residual},
              {"seed", r.seed},       {"notes", r.notes}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 6) throw ParseError("report must be an object with 6 keys");
  try {
    VerificationReport r;
    if (!j.at("suite").is_string() || !j.at("notes").is_string() ||
        !j.at("trials").is_number_unsigned() || !j.at("failures").is_number_unsigned() ||
        !j.at("seed").is_number_unsigned() || !j.at("worst_residual").is_number()) {
      throw ParseError("report field has the wrong type");
    }
    r.suite = j.at("suite").get<std::string>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.failures = j.at("failures").get<std::uint64_t>();
    r.worst_residual = j.at("worst_residual").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.notes = j.at("notes").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

struct Combo {
  Eigen::Index n;
  std::size_t index;
  WeightMode mode;
};

enum class Grid { full, low_index, unweighted, unweighted_low_index, small, block };

std::vector<Combo> make_grid(Grid grid) {
  std::vector<Combo> out;
  const WeightMode all_modes[] = {WeightMode::identity, WeightMode::random_invertible,
                                  WeightMode::random_singular};
  const Eigen::Index n_max = (grid == Grid::small) ? 5 : 8;
  for (Eigen::Index n = 2; n <= n_max; ++n) {
    std::size_t idx_max = std::min<std::size_t>(3, static_cast<std::size_t>(n));
    if (grid == Grid::low_index || grid == Grid::unweighted_low_index) idx_max = 1;
    if (grid == Grid::block) idx_max = std::min<std::size_t>(idx_max, 2);
    for (std::size_t k = 0; k <= idx_max; ++k) {
      for (WeightMode mode : all_modes) {
        const bool unweighted = grid == Grid::unweighted || grid == Grid::unweighted_low_index;
        if (unweighted && mode != WeightMode::identity) continue;
        out.push_back({n, k, mode});
      }
    }
  }
  return out;
}

/// Everything a trial may draw on. `rng` is independent of the generator.
struct TrialContext {
  std::uint64_t trial = 0;
  GeneratorSpec spec;
  WeightedPair pair;
  Tolerance tol;
  std::mt19937_64 rng;

  CMatrix random_matrix() {
    std::normal_distribution<double> normal;
    CMatrix g(pair.size(), pair.size());
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(normal(rng), normal(rng));
    }
    return g;
  }
};

struct TrialOutcome {
  bool passed = true;
  double worst = 0.0;
  std::map<std::string, std::uint64_t> tallies;

  void check(bool ok) {
    if (!ok) passed = false;
  }
  // Records r as a residual and fails the trial when r > limit.
  void residual(double r, double limit) {
    worst = std::max(worst, r);
    if (!(r <= limit)) passed = false;
  }
  void certificate(const InverseCertificate& c) {
    worst = std::max(worst, c.worst_residual());
    if (!c.exists) passed = false;
  }
  void count(const std::string& key, bool cond = true) {
    if (cond) ++tallies[key];
  }
};

using Tallies = std::map<std::string, std::uint64_t>;

struct Suite {
  std::string label;
  Grid grid;
  std::function<void(TrialContext&, TrialOutcome&)> run;
  // Optional post-pass over aggregated tallies; may add failures and notes.
  std::function<void(const Tallies&, VerificationReport&)> finalize;
  // Fixture suites run this many trials regardless of the request.
  std::uint64_t fixed_trials = 0;
};

// Agreement of two independently computed matrices.
constexpr double kAgreement = 1e-8;

double agree(TrialOutcome& out, const CMatrix& lhs, const CMatrix& rhs) {
  const double r = residual(lhs, rhs);
  out.residual(r, kAgreement);
  return r;
}

void weighted_core_cases(TrialContext& c, TrialOutcome& out,
                         const std::function<void(const InverseCertificate&)>& when_exists) {
  const CMatrix aw = c.pair.a * c.pair.w;
  const bool expected = index(aw, c.tol) <= 1;
  const InverseCertificate x = w_core(c.pair, c.tol);
  out.count("core_invertible", expected);
  out.check(x.exists == expected);
  if (expected) {
    out.certificate(x);
    when_exists(x);
  }
}

// Nonzero B with B W A = 0, B nilpotent and B W nilpotent, when WA is singular.
CMatrix annihilating_nilpotent(TrialContext& c) {
  const Eigen::Index n = c.pair.size();
  const CMatrix wa = c.pair.w * c.pair.a;
  Eigen::JacobiSVD<CMatrix> svd(wa, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  if (n < 3 || s(n - 1) > c.tol.rank_rtol * s(0)) return zeros(n);
  const CMatrix v = svd.matrixU().col(n - 1);
  CMatrix basis = hcat(v, c.pair.w.adjoint() * v);
  const Eigen::HouseholderQR<CMatrix> qr(basis);
  const CMatrix q = CMatrix(qr.householderQ()).leftCols(2);
  CMatrix u = c.random_matrix().col(0);
  u -= q * (q.adjoint() * u);
  return u * v.adjoint();
}

std::vector<Suite> build_suites() {
  std::vector<Suite> s;

  s.push_back({"Thm2.1", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    weighted_core_cases(c, out, [&](const InverseCertificate& cert) {
      const CMatrix& x = cert.value;
      const CMatrix aw = c.pair.a * c.pair.w;
      const CMatrix waw = c.pair.w * aw;
      const auto rx = rank(x, c.tol);
      // xA = (aw)A and x*A = (waw)A as column-space equalities.
      out.check(rank(hcat(x, aw), c.tol) == rx && rx == rank(aw, c.tol));
      const auto rxs = rank(x.adjoint(), c.tol);
      out.check(rank(hcat(x.adjoint(), waw), c.tol) == rxs && rxs == rank(waw, c.tol));
    });
  }, {}});

  s.push_back({"Cor2.2", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    weighted_core_cases(c, out, [&](const InverseCertificate& cert) {
      out.certificate(certify_w_core_ep(c.pair, cert.value, c.tol));
      agree(out, cert.value, w_core_ep_direct(c.pair, c.tol).value);
    });
  }, {}});

  s.push_back({"Cor2.3", Grid::low_index, [](TrialContext& c, TrialOutcome& out) {
    weighted_core_cases(c, out, [&](const InverseCertificate& cert) {
      const SolveResult oracle = oracle_w_core(c.pair, c.tol);
      out.check(oracle.feasible);
      agree(out, cert.value, oracle.solution);
      // The oracle's solution must satisfy the full five-equation system too.
      const InverseCertificate recheck = w_core(c.pair, c.tol);
      const CMatrix& x = oracle.solution;
      const CMatrix& a = c.pair.a;
      const CMatrix& w = c.pair.w;
      const CMatrix waw = w * a * w;
      CertificateBuilder b(InverseKind::weighted_core, x, c.tol);
      b.equal("A(WX)^2=X", a * w * x * w * x, x)
          .equal("XW(AW)^2=AW", x * w * a * w * a * w, a * w)
          .hermitian("(WAWX)*=WAWX", waw * x)
          .equal("(WAW)X(WAW)=WAW", waw * x * waw, waw)
          .equal("X(WAW)X=X", x * waw * x, x);
      out.certificate(std::move(b).build());
      out.check(recheck.exists);
    });
  }, {}});

  s.push_back({"Thm2.4", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix& a = c.pair.a;
    const CMatrix& w = c.pair.w;
    const Eigen::Index n = c.pair.size();
    const CMatrix aw = a * w;
    const CMatrix waw = w * aw;
    // Linear consequences of the defining system; solvable iff AW is group invertible.
    const MatrixConstraint system[] = {
        MatrixConstraint::affine({{identity(n), w * aw * aw}}, aw),
        MatrixConstraint::hermitian({{waw, identity(n)}}),
    };
    const double factor_scale = w.norm() * aw.norm() * aw.norm() + waw.norm();
    const bool solvable = solve_constraints(n, n, system, c.tol, factor_scale).feasible;
    const InverseCertificate x = w_core(c.pair, c.tol);
    out.check(x.exists == solvable);
    out.count("core_invertible", x.exists);
    if (!x.exists) return;
    out.certificate(x);
    // Any (1,3)-inverse of WAW gives the same value.
    const MatrixConstraint one_three[] = {
        MatrixConstraint::affine({{waw, waw}}, waw),
        MatrixConstraint::hermitian({{waw, identity(n)}}),
    };
    const SolveResult t = solve_constraints(n, n, one_three, c.tol);
    out.check(t.feasible);
    agree(out, x.value, group(aw, c.tol).value * aw * t.solution);
  }, {}});

  s.push_back({"Cor2.5", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    weighted_core_cases(c, out, [&](const InverseCertificate& cert) {
      const CMatrix aw = c.pair.a * c.pair.w;
      const CMatrix& x = cert.value;
      CertificateBuilder b(InverseKind::weighted_core, x, c.tol);
      b.equal("XW(AW)=AW(AW)^#", x * c.pair.w * aw, aw * group(aw, c.tol).value)
          .hermitian("(WAWX)*=WAWX", c.pair.w * aw * x);
      out.certificate(std::move(b).build());
    });
  }, {}});

  s.push_back({"Thm2.7", Grid::low_index, [](TrialContext& c, TrialOutcome& out) {
    weighted_core_cases(c, out, [&](const InverseCertificate& cert) {
      const CMatrix& a = c.pair.a;
      const CMatrix& w = c.pair.w;
      const InverseCertificate bc = bc_inverse(w * a * w, drazin(a * w, c.tol).value,
                                               drazin(w * a, c.tol).value.adjoint(), c.tol);
      out.certificate(bc);
      agree(out, bc.value, cert.value);
    });
  }, {}});

  s.push_back({"Cor2.8", Grid::unweighted_low_index, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix& a = c.pair.a;
    const InverseCertificate x = core(a, c.tol);
    out.certificate(x);
    const CMatrix g = group(a, c.tol).value;
    const InverseCertificate bc = bc_inverse(a, g, g.adjoint(), c.tol);
    out.certificate(bc);
    agree(out, bc.value, x.value);
  }, {}});

  s.push_back({"Thm3.1", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CoreEpDecomposition d = core_ep_decompose(c.pair, c.tol);
    out.check(d.valid);
    for (const auto& [label, r] : d.residuals) {
      if (label.starts_with("z:")) continue;
      out.residual(r, label == "yW" ? std::numeric_limits<double>::infinity() : kAgreement);
    }
    out.residual(residual(d.z + d.y, c.pair.a), kAgreement);
  }, {}});

  s.push_back({"Cor3.2", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix b = annihilating_nilpotent(c);
    out.count("nontrivial_perturbation", b.norm() > 0.0);
    out.residual((b * c.pair.w * c.pair.a).norm(), kAgreement);
    const CMatrix before = w_core_ep_direct(c.pair, c.tol).value;
    const InverseCertificate after =
        w_core_ep_direct(WeightedPair(c.pair.a + b, c.pair.w), c.tol);
    out.certificate(after);
    agree(out, after.value, before);
  }, {}});

  auto unweighted_decomposition = [](TrialContext& c, TrialOutcome& out) {
    const CMatrix& a = c.pair.a;
    const CoreEpDecomposition d = core_ep_decompose(c.pair, c.tol);
    out.check(d.valid);
    const double scale = d.z.norm() * d.y.norm();
    out.residual((d.z.adjoint() * d.y).norm(), c.tol.eq_atol + c.tol.eq_rtol * scale);
    out.residual((d.y * d.z).norm(), c.tol.eq_atol + c.tol.eq_rtol * scale);
    const InverseCertificate zc = core(d.z, c.tol);
    out.certificate(zc);
    agree(out, zc.value, core_ep(a, c.tol).value);
    out.check(is_nilpotent(d.y, c.tol).nilpotent);
  };
  s.push_back({"Cor3.3", Grid::unweighted, unweighted_decomposition, {}});
  s.push_back({"Cor3.4", Grid::unweighted, [unweighted_decomposition](TrialContext& c,
                                                                      TrialOutcome& out) {
    unweighted_decomposition(c, out);
    const CoreEpDecomposition d = core_ep_decompose(c.pair, c.tol);
    out.check(is_nilpotent(d.y, c.tol).nilpotent);
    out.check(index(d.z, c.tol) <= 1);
  }, {}});

  s.push_back({"Example3.5", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const double r2 = std::sqrt(2.0);
    CMatrix a(2, 2), w(2, 2), expected(2, 2);
    a << 1.0, 1.0, 0.0, r2;
    w << 1.0, 0.0, 0.0, 1.0 / r2;
    expected << 1.0, -1.0, 0.0, r2;
    const InverseCertificate x = w_core(WeightedPair(a, w), c.tol);
    out.certificate(x);
    out.residual(x.worst_residual(), 1e-10);
    out.residual(residual(x.value, expected), 1e-10);
    out.residual(residual(w * a * w * x.value, identity(2)), 1e-12);

    // Eight-dimensional truncation: T = sigma (+) gamma, W = u (+) v.
    const Eigen::Index m = 6;
    CMatrix t = zeros(2 + m), wt = zeros(2 + m), s_expected = zeros(2 + m);
    t.topLeftCorner(2, 2) = a;
    wt.topLeftCorner(2, 2) = w;
    s_expected.topLeftCorner(2, 2) = expected;
    for (Eigen::Index i = 0; i + 1 < m; ++i) t(2 + i, 3 + i) = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) wt(2 + i, 2 + i) = 1.0 / static_cast<double>(i + 3);
    const WeightedPair big(t, wt);
    CMatrix delta = zeros(8);
    for (Eigen::Index i = 0; i + 1 < 8; ++i) delta(i, i + 1) = 1.0 / static_cast<double>(i + 3);
    out.check(is_nilpotent(delta, c.tol).nilpotent);
    const InverseCertificate tx = w_core_ep_direct(big, c.tol);
    out.certificate(tx);
    agree(out, tx.value, s_expected);
  }, {}, 1});

  s.push_back({"Thm3.6", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const auto n = static_cast<unsigned>(c.pair.size());
    const PolarCertificate p = polar_projection(c.pair, n, c.tol);
    out.check(p.valid);
    out.residual(p.projection_residual, 1e-9);
    out.residual(p.commute_residual, kAgreement);
    out.residual(p.complement_residual, kAgreement);
    for (double margin : p.invertibility_margins) out.check(margin > 1e-8);
    out.count("complement_in_weight_range", p.complement_in_weight_range);
  }, [](const Tallies& t, VerificationReport& r) {
    const auto it = t.find("complement_in_weight_range");
    r.notes += "; I-p in W*A on " + std::to_string(it == t.end() ? 0 : it->second) + "/" +
               std::to_string(r.trials) + " trials (informational)";
  }});

  s.push_back({"Cor3.7", Grid::unweighted, [](TrialContext& c, TrialOutcome& out) {
    const auto n = static_cast<unsigned>(c.pair.size());
    const PolarCertificate p = polar_projection(c.pair, n, c.tol);
    out.check(p.valid);
    out.residual(p.projection_residual, 1e-9);
    out.residual(p.commute_residual, kAgreement);
    for (double margin : p.invertibility_margins) out.check(margin > 1e-8);
  }, {}});

  s.push_back({"Cor3.8", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix& a = c.pair.a;
    const CMatrix& w = c.pair.w;
    const Eigen::Index n = c.pair.size();
    const CMatrix x = w_core_ep_direct(c.pair, c.tol).value;
    const CMatrix wa = w * a;
    const CMatrix shift = identity(n) - wa * w * x;
    CMatrix wa_m = identity(n);
    for (Eigen::Index m = 1; m <= n; ++m) {
      wa_m = wa_m * wa;
      const CMatrix sum = wa_m + shift;
      out.check(min_singular_value(sum) > c.tol.rank_rtol * max_singular_value(sum));
      out.check(min_singular_value(sum) > 1e-8);
    }
  }, {}});

  s.push_back({"Lemma4.1", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix& a = c.pair.a;
    const CMatrix& w = c.pair.w;
    out.certificate(w_gdrazin(c.pair, c.tol));
    const InverseCertificate xc = w_core_ep_direct(c.pair, c.tol);
    out.certificate(xc);
    const CMatrix& x = xc.value;
    const auto k = static_cast<unsigned>(weighted_index(c.pair, c.tol));
    const CMatrix aw = a * w;
    const CMatrix aw_k = power(aw, k);
    const CMatrix read_as_aw = aw * x * w * aw_k;
    const double r = residual(aw_k, read_as_aw);
    out.residual(r, equality_bound(aw_k, read_as_aw, c.tol));
    const CMatrix read_as_ax = a * x * x * w * aw_k;
    out.count("literal_ax_form_holds", approx_equal(aw_k, read_as_ax, c.tol));
  }, [](const Tallies& t, VerificationReport& r) {
    const auto it = t.find("literal_ax_form_holds");
    r.notes += "; checked (AW)^k = (AW)(XW)(AW)^k; the (AX)(XW)(AW)^k reading held on " +
               std::to_string(it == t.end() ? 0 : it->second) + "/" +
               std::to_string(r.trials) + " trials";
  }});

  s.push_back({"Thm4.2", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix& a = c.pair.a;
    const CMatrix& w = c.pair.w;
    const InverseCertificate g = w_gdrazin(c.pair, c.tol);
    out.certificate(g);
    const InverseCertificate z = w_core(WeightedPair(g.value, w), c.tol);
    out.certificate(z);
    const CMatrix direct = w_core_ep_direct(c.pair, c.tol).value;
    const CMatrix gw = g.value * w;
    agree(out, gw * gw * z.value, direct);
    agree(out, z.value, a * w * a * w * direct);
  }, {}});

  s.push_back({"Cor4.3", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const InverseCertificate x = w_core_ep_gdrazin(c.pair, c.tol);
    out.certificate(x);
    agree(out, x.value, w_core_ep_direct(c.pair, c.tol).value);
  }, {}});

  s.push_back({"Thm4.4", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix direct = w_core_ep_direct(c.pair, c.tol).value;
    const InverseCertificate g = w_gdrazin(c.pair, c.tol);
    out.certificate(g);
    out.certificate(w_one_three(WeightedPair(g.value, c.pair.w), c.tol));
    const CMatrix weighted_form = w_core_ep_13w(c.pair, c.tol).value;
    const CMatrix unweighted_form = w_core_ep_13w_unweighted_product(c.pair, c.tol);
    const double rp = residual(weighted_form, direct);
    const double rs = residual(unweighted_form, direct);
    out.count("proof_variant_matches", rp <= kAgreement);
    out.count("statement_variant_matches", rs <= kAgreement);
    out.worst = std::max(out.worst, std::min(rp, rs));
  }, [](const Tallies& t, VerificationReport& r) {
    auto get = [&](const char* k) {
      const auto it = t.find(k);
      return it == t.end() ? std::uint64_t{0} : it->second;
    };
    const auto weighted_form = get("proof_variant_matches");
    const auto unweighted_form = get("statement_variant_matches");
    const bool weighted_all = weighted_form == r.trials;
    const bool unweighted_all = unweighted_form == r.trials;
    const char* verdict = weighted_all && unweighted_all ? "both"
                          : weighted_all                 ? "proof variant only"
                          : unweighted_all               ? "statement variant only"
                                                         : "neither";
    r.failures += r.trials - std::max(weighted_form, unweighted_form);
    r.notes += "; weighted form (G W)^2 T matched direct on " + std::to_string(weighted_form) + "/" +
               std::to_string(r.trials) + ", unweighted form G^2 T matched on " +
               std::to_string(unweighted_form) + "/" + std::to_string(r.trials) +
               "; matching on all trials: " + verdict;
  }});

  s.push_back({"Cor4.5", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const InverseCertificate x = w_core_ep_13w(c.pair, c.tol);
    out.certificate(x);
    agree(out, x.value, w_core_ep_direct(c.pair, c.tol).value);
  }, {}});

  s.push_back({"Lemma4.6", Grid::full, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix wa = c.pair.w * c.pair.a;
    CMatrix b = c.random_matrix();
    const bool in_range = c.trial % 2 == 0;
    if (in_range) b = wa * drazin(wa, c.tol).value * b;
    const auto conds = annihilator_equivalence(c.pair, b, c.tol);
    out.check(conds[0] == conds[1] && conds[1] == conds[2]);
    if (in_range) out.check(conds[2]);
    out.count("all_true", conds[0] && conds[1] && conds[2]);
    out.count("all_false", !conds[0] && !conds[1] && !conds[2]);
  }, {}});

  auto block_suite = [](Triangle shape) {
    return [shape](TrialContext& c, TrialOutcome& out) {
      const CMatrix& a = c.pair.a;
      const CMatrix& w = c.pair.w;
      const Eigen::Index n = c.pair.size();
      GeneratorSpec other = c.spec;
      other.seed = trial_seed(c.spec.seed, c.trial, 7);
      other.target_index = std::min<std::size_t>(c.rng() % 3, static_cast<std::size_t>(n));
      const CMatrix d = generate_element(other, w);
      // Hypotheses refer to the diagonal block on the same side as b's row.
      const CMatrix& lead = shape == Triangle::upper ? a : d;
      const CMatrix r = c.random_matrix();
      const CMatrix lw = lead * w;
      const CMatrix b = lw * drazin(lw, c.tol).value * r;
      const InverseCertificate x = block_triangular_core_ep(a, b, d, w, c.tol, shape);
      out.certificate(x);
      out.residual(x.residuals.at("X=direct(M)"), kAgreement);

      // The same formula with b only in the range of (w lead)(w lead)^D.
      const CMatrix wl = w * lead;
      const CMatrix b_left = wl * drazin(wl, c.tol).value * r;
      const CMatrix xa = w_core_ep_gdrazin(WeightedPair(a, w), c.tol).value;
      const CMatrix xd = w_core_ep_gdrazin(WeightedPair(d, w), c.tol).value;
      const CMatrix zero = zeros(n);
      const CMatrix m = shape == Triangle::upper ? block2x2(a, b_left, zero, d)
                                                 : block2x2(a, zero, b_left, d);
      const CMatrix formula = shape == Triangle::upper
                                  ? block2x2(xa, -(xa * w * b_left * w * xd), zero, xd)
                                  : block2x2(xa, zero, -(xd * w * b_left * w * xa), xd);
      const CMatrix direct = w_core_ep_direct(WeightedPair(m, block2x2(w, zero, zero, w)), c.tol).value;
      out.count("left_range_hypothesis_holds", residual(formula, direct) <= kAgreement);

      // A generic r leaves the core part of lead w unless lead w is invertible.
      const bool violated = index(lw, c.tol) > 0;
      bool rejected = false;
      try {
        block_triangular_core_ep(a, r, d, w, c.tol, shape);
      } catch (const PreconditionError&) {
        rejected = true;
      }
      out.check(rejected == violated);
      out.count("precondition_rejections", rejected);
    };
  };
  auto block_note = [](const Tallies& t, VerificationReport& r) {
    const auto it = t.find("left_range_hypothesis_holds");
    r.notes += "; b in range of (lead w)(lead w)^D certified; with b only in range of "
               "(w lead)(w lead)^D the formula matched direct on " +
               std::to_string(it == t.end() ? 0 : it->second) + "/" + std::to_string(r.trials) +
               " trials";
  };
  s.push_back({"Thm4.7", Grid::block, block_suite(Triangle::upper), block_note});
  s.push_back({"Cor4.8", Grid::block, block_suite(Triangle::lower), block_note});
  s.push_back({"Cor4.9", Grid::unweighted, block_suite(Triangle::upper), {}});

  s.push_back({"Oracle", Grid::small, [](TrialContext& c, TrialOutcome& out) {
    const CMatrix& a = c.pair.a;
    const SolveResult d = oracle_drazin(a, c.tol);
    out.check(d.feasible);
    agree(out, drazin(a, c.tol).value, d.solution);
    const SolveResult ep = oracle_core_ep(a, c.tol);
    out.check(ep.feasible);
    agree(out, core_ep(a, c.tol).value, ep.solution);
    if (index(a, c.tol) <= 1) {
      const SolveResult co = oracle_core(a, c.tol);
      out.check(co.feasible);
      agree(out, core(a, c.tol).value, co.solution);
    }
    const InverseCertificate wc = w_core(c.pair, c.tol);
    if (wc.exists) {
      const SolveResult o = oracle_w_core(c.pair, c.tol);
      out.check(o.feasible);
      agree(out, wc.value, o.solution);
    }
    const SolveResult wep = oracle_w_core_ep(c.pair, c.tol);
    out.check(wep.feasible);
    agree(out, w_core_ep_direct(c.pair, c.tol).value, wep.solution);
  }, {}});

  return s;
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = build_suites();
  return all;
}

const Suite* find_suite(std::string_view label) {
  if (label == "Thm4.4-statement-variant") label = "Thm4.4";
  for (const Suite& s : suites()) {
    if (s.label == label) return &s;
  }
  return nullptr;
}

std::string describe_tallies(const Tallies& t, std::uint64_t trials) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, value] : t) {
    if (key == "literal_ax_form_holds" || key == "proof_variant_matches" ||
        key == "statement_variant_matches" || key == "complement_in_weight_range" ||
        key == "left_range_hypothesis_holds") {
      continue;
    }
    os << (first ? "" : ", ") << key << "=" << value << "/" << trials;
    first = false;
  }
  return os.str();
}

}  // namespace

const std::vector<std::string>& suite_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const Suite& s : suites()) out.push_back(s.label);
    return out;
  }();
  return labels;
}

bool is_suite_label(std::string_view label) { return find_suite(label) != nullptr; }

VerificationReport run_suite(std::string_view label, std::uint64_t trials, std::uint64_t seed,
                             const Tolerance& tol) {
  const Suite* suite = find_suite(label);
  if (suite == nullptr) throw PreconditionError("unknown suite \"" + std::string(label) + "\"");
  tol.validate();
  if (suite->fixed_trials > 0) trials = suite->fixed_trials;
  const std::vector<Combo> grid = make_grid(suite->grid);

  std::vector<TrialOutcome> outcomes(trials);
  std::vector<std::string> errors(trials);
  parallel_for(trials, [&](std::size_t i) {
    const Combo& combo = grid[i % grid.size()];
    GeneratorSpec spec{combo.n, combo.index, combo.mode, trial_seed(seed, i), 100.0};
    try {
      TrialContext ctx{i, spec, generate_pair(spec), tol,
                       std::mt19937_64(trial_seed(seed, i, 1))};
      suite->run(ctx, outcomes[i]);
    } catch (const Error& e) {
      outcomes[i].passed = false;
      errors[i] = e.what();
    }
  });

  VerificationReport report;
  report.suite = std::string(label);
  report.trials = trials;
  report.seed = seed;
  Tallies tallies;
  std::string first_error;
  std::uint64_t error_count = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    if (!outcomes[i].passed) ++report.failures;
    report.worst_residual = std::max(report.worst_residual, outcomes[i].worst);
    for (const auto& [k, v] : outcomes[i].tallies) tallies[k] += v;
    if (!errors[i].empty()) {
      if (error_count++ == 0) first_error = "trial " + std::to_string(i) + ": " + errors[i];
    }
  }
  const auto [n_lo, n_hi] = std::minmax_element(grid.begin(), grid.end(), [](auto& x, auto& y) {
    return x.n < y.n;
  });
  std::ostringstream notes;
  notes << "n=" << n_lo->n << ".." << n_hi->n << ", " << grid.size() << " grid cells";
  const std::string tally_text = describe_tallies(tallies, trials);
  if (!tally_text.empty()) notes << "; " << tally_text;
  if (error_count > 0) notes << "; " << error_count << " trials raised errors, first: " << first_error;
  report.notes = notes.str();
  if (suite->finalize) suite->finalize(tallies, report);
  report.failures = std::min(report.failures, report.trials);
  return report;
}

}  // namespace wcep::harness
