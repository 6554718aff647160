// Acceptance run: one PASS/FAIL line per criterion (sub-checks labelled a, b, ...).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "qmoney/certificates.hpp"
#include "qmoney/channels.hpp"
#include "qmoney/cloners.hpp"
#include "qmoney/composition.hpp"
#include "qmoney/schemes.hpp"
#include "qmoney/sdp.hpp"
#include "qmoney/simulator.hpp"

using namespace qmoney;
using linalg::HermitianOperator;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s %-4s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

sdp::CloningSdp quantum_problem(const schemes::Ensemble& e) {
  return sdp::CloningSdp(schemes::build_q_quantum(e), {e.dim(), e.dim(), e.dim()});
}

sdp::CloningSdp distinct_challenge_block(std::size_t d) {
  const auto obj = schemes::build_q_classical(schemes::fourier_ticket_scheme(d));
  return sdp::CloningSdp(obj.blocks[1], obj.block_dims());
}

void criterion1() {
  const auto start = Clock::now();
  const auto s = sdp::solve(quantum_problem(schemes::wiesner_ensemble()), 1e-8);
  const double t = seconds_since(start);
  const bool ok = std::abs(s.primal_value - 0.75) <= 1e-6 && std::abs(s.gap) <= 1e-7 && t < 1.0;
  report("1", ok, "Wiesner single-qubit SDP", fmt("value=%.12f gap=%.3g time=%.4fs", s.primal_value, s.gap, t));
}

void criterion2() {
  const double w = schemes::build_q_quantum(schemes::wiesner_ensemble()).norm();
  const double s = schemes::build_q_quantum(schemes::six_state_ensemble()).norm();
  report("2a", std::abs(w - 0.375) <= 1e-10, "||Q|| Wiesner = 3/8", fmt("%.15f", w));
  report("2b", std::abs(s - 1.0 / 3.0) <= 1e-10, "||Q|| six-state = 1/3", fmt("%.15f", s));
  double worst = 0.0;
  for (std::size_t d = 2; d <= 5; ++d) {
    const double dd = static_cast<double>(d);
    worst = std::max(worst, std::abs(schemes::build_q_symmetric(d).norm() - 2 / (dd * (dd + 1))));
  }
  report("2c", worst <= 1e-10, "||Q|| symmetric d=2..5 = 2/(d(d+1))", fmt("max deviation %.3g", worst));
}

void criterion3() {
  const auto w = certificates::certify(cloners::wiesner_optimal_cloner().matrix(), 0.375 * HermitianOperator::identity(2),
                                       quantum_problem(schemes::wiesner_ensemble()));
  report("3a", w.certified && std::abs(w.primal.value - 0.75) <= 1e-12, "Wiesner cloner with (3/8)1 certified at 3/4",
         fmt("primal=%.15f dual=%.15f", w.primal.value, w.dual.value));
  const auto bh = cloners::buzek_hillery_cloner().matrix();
  const auto third = (1.0 / 3.0) * HermitianOperator::identity(2);
  const auto six = certificates::certify(bh, third, quantum_problem(schemes::six_state_ensemble()));
  const auto sic = certificates::certify(bh, third, quantum_problem(schemes::sic_qubit_ensemble()));
  report("3b", six.certified && std::abs(six.primal.value - 2.0 / 3.0) <= 1e-12,
         "Buzek-Hillery with (1/3)1 certified at 2/3 (six-state)", fmt("primal=%.15f", six.primal.value));
  report("3c", sic.certified && std::abs(sic.primal.value - 2.0 / 3.0) <= 1e-12,
         "Buzek-Hillery with (1/3)1 certified at 2/3 (SIC)", fmt("primal=%.15f", sic.primal.value));
  const ComplexMatrix diff = schemes::build_q_quantum(schemes::sic_qubit_ensemble()).matrix() -
                             schemes::build_q_quantum(schemes::six_state_ensemble()).matrix();
  const double dev = oracle::max_abs(diff);
  report("3d", dev <= 1e-12, "SIC Q equals six-state Q",
         fmt("max entry deviation %.6g (norms and marginals agree; the third moments differ)", dev));
}

void criterion4() {
  const auto j = cloners::buzek_hillery_cloner();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    worst = std::max(worst, std::abs(channels::clone_fidelity(j, schemes::random_pure_state(2, rng)) - 2.0 / 3.0));
  }
  report("4", worst <= 1e-10, "Buzek-Hillery fidelity 2/3 on 100 random states", fmt("max deviation %.3g", worst));
}

void criterion5() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto w = cloners::werner_cloner(d);
    for (int i = 0; i < 50; ++i) {
      const double f = channels::clone_fidelity(w, schemes::random_pure_state(d, rng));
      worst = std::max(worst, std::abs(f - 2.0 / static_cast<double>(d + 1)));
    }
  }
  report("5a", worst <= 1e-9, "Werner fidelity 2/(d+1), d=2..6, 50 states each", fmt("max deviation %.3g", worst));
  double sdp_worst = 0.0;
  for (std::size_t d : {2u, 3u}) {
    const double v = sdp::solve(sdp::CloningSdp(schemes::build_q_symmetric(d), {d, d, d})).primal_value;
    sdp_worst = std::max(sdp_worst, std::abs(v - 2.0 / static_cast<double>(d + 1)));
  }
  report("5b", sdp_worst <= 1e-6, "symmetric-scheme SDP equals 2/(d+1), d=2,3", fmt("max deviation %.3g", sdp_worst));
}

void criterion6() {
  const auto base = quantum_problem(schemes::wiesner_ensemble());
  const auto s = sdp::solve(composition::repeated_problem(base, 2));
  report("6a", std::abs(s.primal_value - 9.0 / 16.0) <= 1e-5, "direct n=2 Wiesner SDP (64x64) = 9/16",
         fmt("value=%.10f", s.primal_value));
  const auto x = cloners::wiesner_optimal_cloner().matrix();
  const auto y = 0.375 * HermitianOperator::identity(2);
  const std::vector<sdp::CloningSdp> ps{base, base};
  const std::vector<HermitianOperator> xs{x, x};
  const std::vector<HermitianOperator> ys{y, y};
  const auto t = composition::tensor_certificates(ps, xs, ys);
  const auto r = certificates::certify(t.x, t.y, t.problem);
  report("6b", r.certified && std::abs(r.primal.value - 9.0 / 16.0) <= 1e-12, "tensored certificate certifies 9/16",
         fmt("primal=%.15f dual=%.15f", r.primal.value, r.dual.value));
}

void criterion7() {
  const auto v = composition::threshold_value(composition::Rational(3, 4), 3, 2);
  report("7a", v == composition::Rational(27, 32), "threshold_value(3/4, 3, 2) = 27/32 exactly",
         "value=" + v.str());
  const auto w = schemes::wiesner_ensemble();
  const auto a = composition::verify_r_norm(w, 2, 1);
  const auto b = composition::verify_r_norm(w, 2, 2);
  const double ca = 0.25 * 15.0 / 16.0;
  const double cb = 0.375 * 0.375;
  const bool ok = a.lhs && b.lhs && std::abs(*a.lhs - ca) <= 1e-9 && std::abs(a.rhs - ca) <= 1e-9 &&
                  std::abs(*b.lhs - cb) <= 1e-9 && std::abs(b.rhs - cb) <= 1e-9;
  report("7b", ok, "||R|| at (2,1) and (2,2) matches the closed form",
         fmt("(2,1): %.12f vs %.12f; (2,2): %.12f", a.lhs.value_or(NAN), ca, b.lhs.value_or(NAN)));
  const auto ops = composition::build_threshold_operators(w);
  const double direct = sdp::solve(composition::threshold_problem(ops, 2, 1)).primal_value;
  report("7c", std::abs(direct - 15.0 / 16.0) <= 1e-5, "direct n=2, t=1 threshold SDP = 15/16",
         fmt("value=%.10f", direct));
}

void criterion8() {
  const auto obj = schemes::build_q_classical(schemes::fourier_ticket_scheme(2));
  std::vector<sdp::CloningSdp> blocks;
  for (const auto& q : obj.blocks) blocks.emplace_back(q, obj.block_dims());
  const auto s = sdp::solve_block_diagonal(blocks, obj.weights);
  const double target = 0.75 + std::numbers::sqrt2 / 8;
  report("8a", std::abs(s.assembled.primal_value - target) <= 1e-6, "ticket block SDP d=2 = 3/4 + sqrt2/8",
         fmt("value=%.10f target=%.10f", s.assembled.primal_value, target));

  bool all = true;
  for (std::size_t d = 2; d <= 5; ++d) {
    const double c = schemes::effective_overlap(schemes::fourier_ticket_scheme(d).bases());
    const auto y = (1 + std::sqrt(c)) / (2 * static_cast<double>(d)) * HermitianOperator::identity(d);
    all = all && certificates::check_dual(y, distinct_challenge_block(d)).feasible;
  }
  report("8b", all, "dual (1+sqrt c)/(2d) 1 feasible, d=2..5", all ? "all feasible" : "infeasible for some d");

  ComplexMatrix v00(2, 2);
  v00 << 1.5, 0.5, 0.5, 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(v00);
  const ComplexVector lo = eig.eigenvectors().col(0);
  const ComplexVector hi = eig.eigenvectors().col(1);
  ComplexMatrix x = ComplexMatrix::Zero(8, 8);
  x.block(0, 0, 2, 2) = hi * hi.adjoint();
  x.block(6, 6, 2, 2) = lo * lo.adjoint();
  const double r = std::numbers::sqrt2 / 2;
  const auto cert = certificates::certify(HermitianOperator(x), (1 + r) / 4 * HermitianOperator::identity(2),
                                          distinct_challenge_block(2), 1e-12);
  report("8c", cert.certified && std::abs(cert.primal.value - (1 + r) / 2) <= 1e-12,
         "d=2 primal witness certified at (1+sqrt2/2)/2", fmt("primal=%.15f dual=%.15f", cert.primal.value, cert.dual.value));
}

void criterion9() {
  double worst = 0.0;
  double residual = 0.0;
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto s = cloners::ticket_cloner(d);
    const double v = cloners::evaluate_ticket_strategy(s, schemes::fourier_ticket_scheme(d));
    worst = std::max(worst, std::abs(v - (0.75 + 1 / (4 * std::sqrt(static_cast<double>(d))))));
    residual = std::max(residual, s.completeness_residual());
  }
  report("9", worst <= 1e-10 && residual <= 1e-10, "ticket cloner 3/4 + 1/(4 sqrt d), d=2..6",
         fmt("max deviation %.3g, max POVM residual %.3g", worst, residual));
}

bool within(const simulator::TrialReport& r, double sigmas) { return r.z && std::abs(*r.z) <= sigmas; }

void criterion10() {
  const auto start = Clock::now();
  simulator::TrialConfig cfg;
  cfg.trials = 1000000;
  cfg.seed = 12345;
  const auto run_all = [&](unsigned threads) {
    cfg.threads = threads;
    return std::vector<simulator::TrialReport>{
        simulator::simulate_quantum_attack(schemes::wiesner_ensemble(), cloners::wiesner_optimal_cloner(), cfg),
        simulator::simulate_quantum_attack(schemes::random_pure_ensemble(3, 64, 7), cloners::werner_cloner(3), cfg),
        simulator::simulate_ticket_attack(schemes::fourier_ticket_scheme(2), cloners::ticket_cloner(2), cfg)};
  };
  const auto first = run_all(0);
  const auto second = run_all(1);
  const char* names[] = {"Wiesner-optimal cloner", "Werner d=3", "ticket cloner d=2"};
  const char* ids[] = {"10a", "10b", "10c"};
  for (int i = 0; i < 3; ++i) {
    report(ids[i], within(first[static_cast<std::size_t>(i)], 5.0), std::string("10^6 trials, ") + names[i],
           fmt("empirical=%.6f analytic=%.6f z=%.3f", first[static_cast<std::size_t>(i)].empirical,
               *first[static_cast<std::size_t>(i)].analytic, *first[static_cast<std::size_t>(i)].z));
  }
  bool same = true;
  for (std::size_t i = 0; i < 3; ++i) same = same && simulator::format_report(first[i]) == simulator::format_report(second[i]);
  report("10d", same, "fixed seed reproduces byte-identical reports", "reruns with a different worker count");
  const double t = seconds_since(start);
  report("10e", t < 60.0, "Monte Carlo runtime", fmt("%.2fs for 6x10^6 trials", t));
}

void criterion11() {
  bool ok = true;
  std::string detail;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto r = simulator::simulate_bell_attack(n, 1000000, 500 + n);
    ok = ok && within(r.first_note, 5.0) && r.conditional_second_note_rate == 1.0 &&
         r.second_note_accepted == r.first_note.successes;
    detail += fmt("n=%.0f: %.5f (z=%.2f) ", static_cast<double>(n), r.first_note.empirical, *r.first_note.z);
    detail += fmt("cond=%.0f; ", r.conditional_second_note_rate);
  }
  report("11", ok, "Bell-pair attack rate 2^-n, second note always valid", detail);
}

void criterion12() {
  std::mt19937_64 rng(99);
  bool cptp = true;
  for (int i = 0; i < 20; ++i) {
    const auto ops = oracle::random_kraus(2 + i % 2, 2 + i % 3, 1 + i % 4, rng);
    const auto j = channels::choi_from_kraus(channels::KrausSet(ops));
    cptp = cptp && channels::validate_choi(j.matrix(), static_cast<std::size_t>(ops[0].cols()),
                                           static_cast<std::size_t>(ops[0].rows()))
                       .valid();
    cptp = cptp && !channels::validate_choi(HermitianOperator(1.1 * j.matrix().matrix()),
                                            static_cast<std::size_t>(ops[0].cols()),
                                            static_cast<std::size_t>(ops[0].rows()))
                        .trace_preserving;
  }
  report("12a", cptp, "CP/TP validation on random channels", "20 channels valid, scaled copies rejected");

  bool weak = true;
  std::size_t iterates = 0;
  for (int i = 0; i < 10; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 2);
    const auto s = sdp::solve(quantum_problem(schemes::random_pure_ensemble(d, 5, 300 + static_cast<std::uint64_t>(i))));
    for (const auto& it : s.history) weak = weak && it.primal_value <= it.dual_value + 1e-9;
    iterates += s.history.size();
  }
  report("12b", weak, "weak duality on every solver iterate", fmt("%.0f iterates over 10 random problems",
                                                                    static_cast<double>(iterates)));

  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const auto ops = oracle::random_kraus(2, 4, 1 + i % 5, rng);
    const auto j = channels::choi_from_kraus(channels::KrausSet(ops));
    const ComplexVector psi = oracle::random_state(2, rng);
    const ComplexVector phi = oracle::random_state(4, rng);
    const double direct = phi.dot(oracle::apply_kraus(ops, psi * psi.adjoint()) * phi).real();
    worst = std::max(worst, std::abs(channels::choi_quadratic_form(j, phi, psi) - direct));
  }
  report("12c", worst <= 1e-12, "<phi|Phi(psi)|phi> = <phi conj(psi)|J|phi conj(psi)> on random inputs",
         fmt("max deviation %.3g", worst));

  double honest = 1.0;
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto t = schemes::fourier_ticket_scheme(d);
    for (const auto& key : t.keys())
      for (std::size_t c = 0; c < 2; ++c) {
        double p = 0.0;
        for (std::size_t a = 0; a < d; ++a)
          if (t.accepts(a, c, key)) p += std::norm(t.bases().vector(c, a).dot(t.state(key)));
        honest = std::min(honest, p);
      }
    simulator::TrialConfig cfg;
    cfg.trials = 10000;
    cfg.seed = d;
    honest = std::min(honest, simulator::simulate_honest_ticket(t, cfg).empirical);
  }
  report("12d", std::abs(honest - 1.0) <= 1e-12, "honest-user acceptance probability 1",
         fmt("minimum over keys, challenges and simulations %.15f", honest));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  std::printf("%s: %d failing check(s), %.2fs\n", failures == 0 ? "ALL PASS" : "FAILURES", failures,
              seconds_since(start));
  return failures == 0 ? 0 : 1;
}
