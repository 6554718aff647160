#include "qmoney/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmoney/certificates.hpp"
#include "qmoney/cloners.hpp"
#include "qmoney/composition.hpp"
#include "qmoney/io.hpp"
#include "qmoney/simulator.hpp"

namespace qmoney::cli {

namespace {

using nlohmann::json;
using linalg::HermitianOperator;

// Raised for user-facing argument problems that CLI11 cannot detect.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kMaxSymmetricDim = 8;
constexpr std::size_t kMaxTicketDim = 16;
constexpr std::size_t kSymmetricSampleStates = 64;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Scheme {
  std::string name;
  std::size_t dim = 0;
  std::optional<schemes::Ensemble> ensemble;
  std::optional<HermitianOperator> q;  // set for symmetric:d, which has no finite ensemble
  std::optional<schemes::TicketScheme> ticket;
  bool symmetric = false;
};

std::size_t parse_suffix(const std::string& name, const std::string& prefix) {
  const std::string digits = name.substr(prefix.size());
  std::size_t d = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw UsageError("bad dimension suffix in scheme '" + name + "'");
  }
  return d;
}

Scheme resolve_scheme(const std::string& name) {
  Scheme s;
  s.name = name;
  if (name == "wiesner") {
    s.ensemble = schemes::wiesner_ensemble();
  } else if (name == "six-state") {
    s.ensemble = schemes::six_state_ensemble();
  } else if (name == "sic") {
    s.ensemble = schemes::sic_qubit_ensemble();
  } else if (name.starts_with("symmetric:")) {
    const std::size_t d = parse_suffix(name, "symmetric:");
    if (d < 2 || d > kMaxSymmetricDim) {
      throw UsageError("symmetric:d needs 2 <= d <= " + std::to_string(kMaxSymmetricDim));
    }
    s.dim = d;
    s.q = schemes::build_q_symmetric(d);
    s.symmetric = true;
    return s;
  } else if (name.starts_with("ticket:")) {
    const std::size_t d = parse_suffix(name, "ticket:");
    if (d < 2 || d > kMaxTicketDim) throw UsageError("ticket:d needs 2 <= d <= " + std::to_string(kMaxTicketDim));
    s.ticket = schemes::fourier_ticket_scheme(d);
    s.dim = d;
    return s;
  } else if (std::filesystem::exists(name)) {
    auto desc = io::load_scheme(name);
    if (auto* e = std::get_if<schemes::Ensemble>(&desc)) {
      s.ensemble = std::move(*e);
    } else {
      s.ticket = std::get<schemes::TicketScheme>(std::move(desc));
      s.dim = s.ticket->dim();
      return s;
    }
  } else {
    throw UsageError("unknown scheme '" + name + "' (built-ins: wiesner, six-state, sic, symmetric:d, ticket:d)");
  }
  s.dim = s.ensemble->dim();
  s.q = schemes::build_q_quantum(*s.ensemble);
  return s;
}

struct SingleSolve {
  sdp::CloningSdp problem;
  sdp::SdpSolution solution;
};

SingleSolve solve_single(const Scheme& s, double tol) {
  if (s.ticket) {
    const auto objective = schemes::build_q_classical(*s.ticket);
    std::vector<sdp::CloningSdp> blocks;
    for (const auto& b : objective.blocks) blocks.emplace_back(b, objective.block_dims());
    auto problem = sdp::assemble_block_problem(blocks, objective.weights);
    auto solution = sdp::solve_block_diagonal(blocks, objective.weights, tol).assembled;
    return {std::move(problem), std::move(solution)};
  }
  sdp::CloningSdp problem(*s.q, {s.dim, s.dim, s.dim});
  auto solution = sdp::solve(problem, tol);
  return {std::move(problem), std::move(solution)};
}

void write_json(const std::string& path, const json& doc) { io::write_file(path, doc.dump(1) + "\n"); }

json report_json(const simulator::TrialReport& r) {
  json doc{{"successes", r.successes}, {"trials", r.trials}, {"empirical", r.empirical}};
  if (r.analytic) {
    doc["analytic"] = *r.analytic;
    doc["standard_error"] = r.standard_error;
    doc["z"] = std::isfinite(*r.z) ? json(*r.z) : json("inf");
  }
  return doc;
}

void print_report(std::ostream& out, const simulator::TrialReport& r) {
  out << "successes=" << r.successes << "\n";
  out << "trials=" << r.trials << "\n";
  out << "empirical=" << fmt(r.empirical) << "\n";
  if (r.analytic) {
    out << "analytic=" << fmt(*r.analytic) << "\n";
    out << "standard_error=" << fmt(r.standard_error) << "\n";
    out << "z=" << fmt(*r.z) << "\n";
  }
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string scheme;
  std::size_t n = 1;
  double tol = 1e-8;
  std::string output;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.n == 0) throw UsageError("--n must be >= 1");
  const Scheme s = resolve_scheme(a.scheme);
  const SingleSolve single = solve_single(s, a.tol);
  const double cert_tol = std::max(10.0 * a.tol, 1e-9);
  const auto report = certificates::certify(single.solution.primal_x, single.solution.dual_y, single.problem, cert_tol);
  const double value = composition::repeated_value(std::clamp(single.solution.primal_value, 0.0, 1.0), a.n);

  out << "scheme=" << s.name << "\n";
  out << "n=" << a.n << "\n";
  out << "single_value=" << fmt(single.solution.primal_value) << "\n";
  out << "value=" << fmt(value) << "\n";
  out << "dual_value=" << fmt(single.solution.dual_value) << "\n";
  out << "gap=" << fmt(single.solution.gap) << "\n";
  out << "iterations=" << single.solution.iterations << "\n";
  out << "certified=" << (report.certified ? "yes" : "no") << "\n";

  if (!a.output.empty()) {
    io::CertificateFile file{single.problem.q(), single.solution.primal_x, single.solution.dual_y, cert_tol,
                             single.solution.primal_value};
    json doc = json::parse(io::dump_certificate(file));
    doc["scheme"] = s.name;
    doc["repetitions"] = a.n;
    doc["repeated_value"] = value;
    doc["gap"] = single.solution.gap;
    doc["iterations"] = single.solution.iterations;
    write_json(a.output, doc);
  }
  return report.certified ? kSuccess : kNotCertified;
}

// ---------------------------------------------------------------- certify

int cmd_certify(const std::string& path, std::optional<double> tol, std::ostream& out) {
  const io::CertificateFile file = io::load_certificate(path);
  const double t = tol.value_or(file.tolerance);
  const auto problem = file.problem();
  const auto r = certificates::certify(file.primal_x, file.dual_y, problem, t);
  bool claim_ok = true;
  out << "primal_value=" << fmt(r.primal.value) << "\n";
  out << "dual_value=" << fmt(r.dual.value) << "\n";
  out << "gap=" << fmt(r.gap) << "\n";
  out << "primal_feasible=" << (r.primal.feasible ? "yes" : "no") << "\n";
  out << "primal_min_eigenvalue=" << fmt(r.primal.min_eigenvalue) << "\n";
  out << "primal_trace_defect=" << fmt(r.primal.trace_defect) << "\n";
  out << "dual_feasible=" << (r.dual.feasible ? "yes" : "no") << "\n";
  out << "dual_residual=" << fmt(std::min(r.dual.min_eigenvalue, 0.0)) << "\n";
  if (file.value) {
    claim_ok = std::abs(*file.value - r.primal.value) <= t;
    out << "claimed_value=" << fmt(*file.value) << (claim_ok ? "" : " (mismatch)") << "\n";
  }
  out << "tolerance=" << fmt(t) << "\n";
  const bool ok = r.certified && claim_ok;
  out << "certified=" << (ok ? "yes" : "no") << "\n";
  return ok ? kSuccess : kNotCertified;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scheme;
  std::string strategy = "optimal";
  std::string attack;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::size_t n = 1;
  unsigned threads = 0;
  std::string output;
};

channels::ChoiOperator quantum_strategy(const Scheme& s, const std::string& name) {
  if (name == "optimal") {
    if (s.name == "wiesner") return cloners::wiesner_optimal_cloner();
    if (s.name == "six-state" || s.name == "sic") return cloners::buzek_hillery_cloner();
    if (s.symmetric) return cloners::werner_cloner(s.dim);
    throw UsageError("no closed-form optimal cloner for scheme '" + s.name + "'; pick werner or keep-blank");
  }
  if (name == "werner") return cloners::werner_cloner(s.dim);
  if (name == "buzek-hillery") {
    if (s.dim != 2) throw UsageError("buzek-hillery needs a qubit scheme");
    return cloners::buzek_hillery_cloner();
  }
  if (name == "wiesner-optimal") {
    if (s.dim != 2) throw UsageError("wiesner-optimal needs a qubit scheme");
    return cloners::wiesner_optimal_cloner();
  }
  if (name == "keep-blank") return cloners::keep_and_blank_cloner(s.dim);
  throw UsageError("unknown strategy '" + name + "' for a quantum-verification scheme");
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.trials == 0) throw UsageError("--trials must be >= 1");
  if (a.n == 0) throw UsageError("--n must be >= 1");
  json record;
  if (!a.attack.empty()) {
    if (a.attack != "bell") throw UsageError("unknown attack '" + a.attack + "'");
    if (a.n > 20) throw UsageError("--attack bell supports n <= 20");
    const auto r = simulator::simulate_bell_attack(a.n, a.trials, a.seed, a.threads);
    out << "attack=bell\nn=" << a.n << "\n";
    print_report(out, r.first_note);
    out << "second_note_accepted=" << r.second_note_accepted << "\n";
    out << "conditional_second_note_rate=" << fmt(r.conditional_second_note_rate) << "\n";
    record = report_json(r.first_note);
    record["attack"] = "bell";
    record["second_note_accepted"] = r.second_note_accepted;
    record["conditional_second_note_rate"] = r.conditional_second_note_rate;
  } else {
    if (a.scheme.empty()) throw UsageError("simulate needs --scheme or --attack");
    const Scheme s = resolve_scheme(a.scheme);
    simulator::TrialConfig cfg{a.trials, a.seed, a.n, a.threads};
    simulator::TrialReport r;
    if (s.ticket) {
      if (a.strategy == "honest") {
        r = simulator::simulate_honest_ticket(*s.ticket, cfg);
      } else if (a.strategy == "ticket-cloner" || a.strategy == "optimal") {
        r = simulator::simulate_ticket_attack(*s.ticket, cloners::ticket_cloner(s.dim), cfg);
      } else if (a.strategy == "fixed-basis0" || a.strategy == "fixed-basis1") {
        r = simulator::simulate_ticket_attack(
            *s.ticket, cloners::fixed_basis_strategy(*s.ticket, a.strategy == "fixed-basis0" ? 0 : 1), cfg);
      } else {
        throw UsageError("unknown strategy '" + a.strategy + "' for a ticket scheme");
      }
    } else {
      // The symmetric objective is the Haar average; sample a finite ensemble
      // from the run's seed to play the bank.
      const schemes::Ensemble e =
          s.ensemble ? *s.ensemble : schemes::random_pure_ensemble(s.dim, kSymmetricSampleStates, a.seed);
      r = simulator::simulate_quantum_attack(e, quantum_strategy(s, a.strategy), cfg);
    }
    out << "scheme=" << s.name << "\nstrategy=" << a.strategy << "\nn=" << a.n << "\n";
    print_report(out, r);
    record = report_json(r);
    record["scheme"] = s.name;
    record["strategy"] = a.strategy;
  }
  record["seed"] = a.seed;
  record["repetitions"] = a.n;
  if (!a.output.empty()) write_json(a.output, record);
  return kSuccess;
}

// ---------------------------------------------------------------- threshold

struct ThresholdArgs {
  std::string scheme;
  std::size_t n = 1;
  std::size_t t = 1;
  bool direct = false;
  double tol = 1e-8;
  std::string output;
};

int cmd_threshold(const ThresholdArgs& a, std::ostream& out) {
  const Scheme s = resolve_scheme(a.scheme);
  if (s.ticket) {
    throw UsageError("threshold bounds for classical-verification schemes are not supported");
  }
  if (a.t == 0 || a.t > a.n) throw UsageError("need 1 <= t <= n");
  const double d = static_cast<double>(s.dim);
  const double alpha = d * s.q->norm();
  // Y = (alpha/d) 1 must be an optimal dual solution: compare with a solve.
  const SingleSolve single = solve_single(s, a.tol);
  const bool dual_optimal = std::abs(single.solution.primal_value - alpha) <= std::max(10.0 * a.tol, 1e-7);
  const bool average_ok = s.ensemble ? composition::threshold_conditions_hold(*s.ensemble, alpha)
                                     : composition::threshold_conditions_hold(*s.q, s.dim, alpha);
  const bool conditions = dual_optimal && average_ok;
  const double value = composition::threshold_value(std::min(alpha, 1.0), a.n, a.t);

  out << "scheme=" << s.name << "\nn=" << a.n << "\nt=" << a.t << "\n";
  out << "alpha=" << fmt(alpha) << "\n";
  out << "value=" << fmt(value) << (conditions ? "" : " not-certified") << "\n";
  out << "conditions=" << (conditions ? "hold" : "fail") << "\n";
  json record{{"scheme", s.name}, {"n", a.n}, {"t", a.t}, {"alpha", alpha}, {"value", value},
              {"conditions_hold", conditions}};

  if (s.ensemble) {
    const auto norm = composition::verify_r_norm(*s.ensemble, a.n, a.t);
    out << "r_norm_formula=" << fmt(norm.rhs) << "\n";
    if (norm.lhs) {
      out << "r_norm=" << fmt(*norm.lhs) << "\n";
      record["r_norm"] = *norm.lhs;
    } else {
      out << "r_norm=formula-only\n";
    }
    record["r_norm_formula"] = norm.rhs;
  }
  int code = conditions ? kSuccess : kNotCertified;
  if (a.direct) {
    if (!s.ensemble) throw UsageError("--direct needs a scheme with a finite ensemble");
    const auto dense = std::pow(d, 3.0 * static_cast<double>(a.n));
    if (dense > static_cast<double>(composition::kDenseThresholdLimit)) {
      throw UsageError("--direct limited to d^(3n) <= " + std::to_string(composition::kDenseThresholdLimit));
    }
    const auto ops = composition::build_threshold_operators(*s.ensemble);
    const auto problem = composition::threshold_problem(ops, a.n, a.t);
    const auto sol = sdp::solve(problem, a.tol);
    const bool agrees = std::abs(sol.primal_value - value) <= 1e-5;
    out << "direct_value=" << fmt(sol.primal_value) << "\n";
    out << "direct_gap=" << fmt(sol.gap) << "\n";
    out << "direct_agrees=" << (agrees ? "yes" : "no") << "\n";
    record["direct_value"] = sol.primal_value;
    record["direct_gap"] = sol.gap;
    if (!agrees) code = kNotCertified;
  }
  if (!a.output.empty()) write_json(a.output, record);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal counterfeiting analysis for quantum money schemes", "qmoney"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Solve the counterfeiting SDP and report the n-fold value");
  an->add_option("--scheme", analyze.scheme, "Built-in name or scheme file")->required();
  an->add_option("--n", analyze.n, "Repetitions")->capture_default_str();
  an->add_option("--tol", analyze.tol, "Solver tolerance")->check(CLI::Range(1e-12, 1e-2))->capture_default_str();
  an->add_option("--output", analyze.output, "Write a certificate record here");

  std::string cert_path;
  std::optional<double> cert_tol;
  auto* ce = app.add_subcommand("certify", "Check a primal/dual certificate file");
  ce->add_option("file", cert_path, "Certificate file")->required();
  ce->add_option("--tol", cert_tol, "Tolerance (default: the file's)")->check(CLI::PositiveNumber);

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Monte Carlo simulation of an attack");
  si->add_option("--scheme", sim.scheme, "Built-in name or scheme file");
  si->add_option("--strategy", sim.strategy, "optimal, werner, buzek-hillery, wiesner-optimal, keep-blank, "
                                             "ticket-cloner, fixed-basis0, fixed-basis1, honest")
      ->capture_default_str();
  si->add_option("--attack", sim.attack, "bell");
  si->add_option("--trials", sim.trials, "Trial count")->capture_default_str();
  si->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  si->add_option("--n", sim.n, "Repetitions")->capture_default_str();
  si->add_option("--threads", sim.threads, "Worker threads (0: QMONEY_THREADS or hardware)");
  si->add_option("--output", sim.output, "Write the report here");

  ThresholdArgs thr;
  auto* th = app.add_subcommand("threshold", "t-out-of-n threshold value and its conditions");
  th->add_option("--scheme", thr.scheme, "Built-in name or scheme file")->required();
  th->add_option("--n", thr.n, "Repetitions")->required();
  th->add_option("--t", thr.t, "Required successes")->required();
  th->add_flag("--direct", thr.direct, "Also solve the dense threshold SDP");
  th->add_option("--tol", thr.tol, "Solver tolerance")->check(CLI::Range(1e-12, 1e-2))->capture_default_str();
  th->add_option("--output", thr.output, "Write the record here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (an->parsed()) return cmd_analyze(analyze, out);
    if (ce->parsed()) return cmd_certify(cert_path, cert_tol, out);
    if (si->parsed()) return cmd_simulate(sim, out);
    if (th->parsed()) return cmd_threshold(thr, out);
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kDimensionError;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsageError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNotCertified;
  }
  return kUsageError;
}

}  // namespace qmoney::cli
