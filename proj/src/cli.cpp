#include "wcep/cli.hpp"

#include "wcep/classic.hpp"
#include "wcep/harness.hpp"
#include "wcep/matrix_io.hpp"
#include "wcep/weighted.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace wcep::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kKinds = {
    "moore-penrose", "group",   "drazin", "core",        "core-ep",   "one-three",
    "w-gdrazin",     "w-core",  "w-one-three", "w-core-ep", "bc",
};

bool is_weighted(const std::string& kind) { return kind.starts_with("w-"); }

struct ToleranceFlags {
  Tolerance tol;

  void attach(CLI::App& app) {
    app.add_option("--rank-rtol", tol.rank_rtol, "relative singular-value cutoff for ranks")
        ->capture_default_str();
    app.add_option("--eq-atol", tol.eq_atol, "absolute tolerance of matrix equalities")
        ->capture_default_str();
    app.add_option("--eq-rtol", tol.eq_rtol, "relative tolerance of matrix equalities")
        ->capture_default_str();
  }
};

struct ComputeArgs {
  std::string kind;
  std::string matrix;
  std::optional<std::string> weight;
  std::optional<std::string> out;
  std::optional<std::string> route;
  std::optional<std::string> b;
  std::optional<std::string> c;
  ToleranceFlags tol;
};

struct VerifyArgs {
  std::string suite;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  ToleranceFlags tol;
};

struct RandgenArgs {
  Eigen::Index n = 0;
  std::size_t index = 0;
  std::string weight_mode = "identity";
  std::uint64_t seed = 0;
  double condition_cap = 100.0;
  std::string out_prefix;
};

struct ReportArgs {
  std::string input;
};

CoreEpRoute parse_route(const std::string& name) {
  if (name == "direct") return CoreEpRoute::direct;
  if (name == "gdrazin") return CoreEpRoute::gdrazin;
  return CoreEpRoute::one_three_w;
}

InverseCertificate compute_inverse(const ComputeArgs& args, const CMatrix& a,
                                   const std::optional<CMatrix>& w) {
  const Tolerance& tol = args.tol.tol;
  const std::string& k = args.kind;
  if (k == "moore-penrose") return moore_penrose(a, tol);
  if (k == "group") return group(a, tol);
  if (k == "drazin") return drazin(a, tol);
  if (k == "core") return core(a, tol);
  if (k == "core-ep") return core_ep(a, tol);
  if (k == "one-three") return one_three(a, tol);
  if (k == "bc") return bc_inverse(a, read_matrix_file(*args.b), read_matrix_file(*args.c), tol);
  const WeightedPair pair(a, *w);
  if (k == "w-gdrazin") return w_gdrazin(pair, tol);
  if (k == "w-core") return w_core(pair, tol);
  if (k == "w-one-three") return w_one_three(pair, tol);
  return w_core_ep(pair, parse_route(args.route.value_or("direct")), tol);
}

int run_compute(const ComputeArgs& args, std::ostream& out, std::ostream& err) {
  args.tol.tol.validate();
  const bool weighted = is_weighted(args.kind);
  if (weighted && !args.weight) throw PreconditionError("--weight is required for " + args.kind);
  if (!weighted && args.weight) throw PreconditionError("--weight is not used by " + args.kind);
  if (args.route && args.kind != "w-core-ep") {
    throw PreconditionError("--route applies only to w-core-ep");
  }
  const bool bc = args.kind == "bc";
  if (bc && (!args.b || !args.c)) throw PreconditionError("bc requires --b and --c");
  if (!bc && (args.b || args.c)) throw PreconditionError("--b and --c apply only to bc");

  const CMatrix a = read_matrix_file(args.matrix);
  std::optional<CMatrix> w;
  if (args.weight) w = read_matrix_file(*args.weight);
  const InverseCertificate cert = compute_inverse(args, a, w);

  json payload{{"kind", args.kind},
               {"exists", cert.exists},
               {"residuals", cert.residuals},
               {"worst_residual", cert.worst_residual()}};
  if (!cert.witnesses.empty()) payload["witnesses"] = cert.witnesses;
  if (args.route) payload["route"] = *args.route;
  if (cert.exists) {
    if (args.out) {
      write_matrix_file(*args.out, cert.value);
      payload["out"] = *args.out;
    } else {
      payload["value"] = matrix_to_json(cert.value);
    }
  }
  out << payload.dump() << '\n';
  if (!cert.exists) {
    err << args.kind << " inverse does not exist for this input\n";
    return ExitCode::negative;
  }
  return ExitCode::ok;
}

int run_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  args.tol.tol.validate();
  std::vector<std::string> labels;
  if (args.suite == "all") {
    labels = harness::suite_labels();
  } else if (harness::is_suite_label(args.suite)) {
    labels.push_back(args.suite);
  } else {
    throw PreconditionError("unknown suite \"" + args.suite + "\"");
  }
  bool all_passed = true;
  for (const std::string& label : labels) {
    const harness::VerificationReport r =
        harness::run_suite(label, args.trials, args.seed, args.tol.tol);
    out << harness::to_json(r).dump() << '\n' << std::flush;
    err << (r.passed() ? "pass " : "FAIL ") << std::left << std::setw(12) << label << ' '
        << r.failures << '/' << r.trials << " failed, worst residual " << r.worst_residual
        << '\n';
    all_passed = all_passed && r.passed();
  }
  return all_passed ? ExitCode::ok : ExitCode::negative;
}

int run_randgen(const RandgenArgs& args, std::ostream& out, std::ostream&) {
  const auto mode = harness::parse_weight_mode(args.weight_mode);
  if (!mode) throw PreconditionError("unknown weight mode \"" + args.weight_mode + "\"");
  const harness::GeneratorSpec spec{args.n, args.index, *mode, args.seed, args.condition_cap};
  const WeightedPair pair = harness::generate_pair(spec);
  const std::string a_path = args.out_prefix + "A.json";
  const std::string w_path = args.out_prefix + "W.json";
  write_matrix_file(a_path, pair.a);
  write_matrix_file(w_path, pair.w);
  const Tolerance tol;
  out << json{{"a", a_path},
              {"w", w_path},
              {"n", args.n},
              {"weight_mode", harness::to_string(*mode)},
              {"index_wa", index(pair.w * pair.a, tol)},
              {"index_aw", index(pair.a * pair.w, tol)}}
             .dump()
      << '\n';
  return ExitCode::ok;
}

int run_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (args.input != "-") {
    file.open(args.input);
    if (!file) throw Error("cannot open " + args.input);
    in = &file;
  }
  std::uint64_t suites = 0, trials = 0, failures = 0;
  double worst = 0.0;
  json failing = json::array();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    const harness::VerificationReport r = harness::report_from_json(j);
    ++suites;
    trials += r.trials;
    failures += r.failures;
    worst = std::max(worst, r.worst_residual);
    if (!r.passed()) failing.push_back(r.suite);
    err << (r.passed() ? "pass " : "FAIL ") << std::left << std::setw(12) << r.suite << ' '
        << r.failures << '/' << r.trials << "  " << r.notes << '\n';
  }
  if (suites == 0) throw ParseError("no reports in input");
  out << json{{"suites", suites},
              {"trials", trials},
              {"failures", failures},
              {"worst_residual", worst},
              {"failing_suites", failing}}
             .dump()
      << '\n';
  return failing.empty() ? ExitCode::ok : ExitCode::negative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted generalized core-EP inverses of square complex matrices", "wcep"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "compute one generalized inverse with its certificate");
  c->add_option("--kind", compute.kind, "inverse to compute")
      ->required()
      ->check(CLI::IsMember(kKinds));
  c->add_option("--matrix", compute.matrix, "matrix JSON file")->required();
  c->add_option("--weight", compute.weight, "weight JSON file (weighted kinds)");
  c->add_option("--out", compute.out, "write the inverse here instead of to stdout");
  c->add_option("--route", compute.route, "w-core-ep route")
      ->check(CLI::IsMember({"direct", "gdrazin", "13w"}));
  c->add_option("--b", compute.b, "bc: the matrix b");
  c->add_option("--c", compute.c, "bc: the matrix c");
  compute.tol.attach(*c);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "run verification suites and print JSON reports");
  v->add_option("--suite", verify.suite, "suite label or \"all\"")->required();
  v->add_option("--trials", verify.trials, "trials per suite")->capture_default_str();
  v->add_option("--seed", verify.seed, "base seed")->capture_default_str();
  verify.tol.attach(*v);

  RandgenArgs randgen;
  auto* g = app.add_subcommand("randgen", "generate a random (A, W) pair");
  g->add_option("--n", randgen.n, "matrix size")->required()->check(CLI::PositiveNumber);
  g->add_option("--index", randgen.index, "Drazin index of WA")->capture_default_str();
  g->add_option("--weight-mode", randgen.weight_mode,
                "identity, random_invertible or random_singular")
      ->capture_default_str();
  g->add_option("--seed", randgen.seed, "generator seed")->capture_default_str();
  g->add_option("--condition-cap", randgen.condition_cap, "conditioning cap")
      ->capture_default_str();
  g->add_option("--out-prefix", randgen.out_prefix, "files are <prefix>A.json, <prefix>W.json");

  ReportArgs report;
  auto* r = app.add_subcommand("report", "summarize report JSON lines from verify");
  r->add_option("--input", report.input, "report file, or - for stdin")->required();

  std::vector<const char*> argv{"wcep"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, err, err);
    return code == 0 ? ExitCode::ok : ExitCode::error;
  }

  try {
    if (c->parsed()) return run_compute(compute, out, err);
    if (v->parsed()) return run_verify(verify, out, err);
    if (g->parsed()) return run_randgen(randgen, out, err);
    return run_report(report, out, err);
  } catch (const std::exception& e) {
    err << "wcep: " << e.what() << '\n';
    return ExitCode::error;
  }
}

}  // namespace wcep::cli
