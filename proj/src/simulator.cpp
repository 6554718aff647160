#include "qmoney/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace qmoney::simulator {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Cumulative table for categorical sampling via the Born rule.
class Categorical {
 public:
  explicit Categorical(const std::vector<double>& probs) {
    double acc = 0.0;
    for (double p : probs) {
      acc += std::max(p, 0.0);
      cumulative_.push_back(acc);
    }
  }

  std::size_t sample(std::mt19937_64& rng) const {
    const double u = uniform01(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

// Runs `trial(rng, counts)` for every trial across chunked substreams and
// reduces the per-chunk counters in chunk order.
template <std::size_t K, typename Trial>
std::array<std::uint64_t, K> run_trials(std::uint64_t trials, std::uint64_t seed, unsigned threads,
                                        const Trial& trial) {
  const std::uint64_t chunks = (trials + kChunkSize - 1) / kChunkSize;
  std::vector<std::array<std::uint64_t, K>> per_chunk(chunks, std::array<std::uint64_t, K>{});
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      std::mt19937_64 rng = chunk_engine(seed, c);
      const std::uint64_t begin = c * kChunkSize;
      const std::uint64_t end = std::min(trials, begin + kChunkSize);
      for (std::uint64_t i = begin; i < end; ++i) trial(rng, per_chunk[c]);
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1U, threads == 0 ? default_thread_count() : threads), std::max<std::uint64_t>(chunks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  std::array<std::uint64_t, K> total{};
  for (const auto& counts : per_chunk) {
    for (std::size_t k = 0; k < K; ++k) total[k] += counts[k];
  }
  return total;
}

TrialReport make_report(std::uint64_t successes, std::uint64_t trials, std::optional<double> analytic) {
  TrialReport r;
  r.successes = successes;
  r.trials = trials;
  r.empirical = static_cast<double>(successes) / static_cast<double>(trials);
  r.analytic = analytic;
  if (analytic) {
    const double p = *analytic;
    r.standard_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
    const double diff = r.empirical - p;
    if (r.standard_error > 0.0) {
      r.z = diff / r.standard_error;
    } else {
      r.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
  }
  return r;
}

void require_trials(const TrialConfig& cfg) {
  if (cfg.trials == 0) throw ValidationError("trial count must be >= 1");
  if (cfg.repetitions == 0) throw ValidationError("repetition count must be >= 1");
}

double power(double base, std::size_t n) {
  double v = 1.0;
  for (std::size_t i = 0; i < n; ++i) v *= base;
  return v;
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("QMONEY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

TrialReport simulate_quantum_attack(const schemes::Ensemble& e, const channels::ChoiOperator& cloner,
                                    const TrialConfig& cfg) {
  require_trials(cfg);
  const std::size_t d = e.dim();
  if (cloner.in_dim() != d || cloner.out_dim() != d * d) {
    throw DimensionError("cloner dimensions do not match the ensemble");
  }
  std::vector<double> key_weights;
  std::vector<Categorical> outcomes;  // per key: (valid, valid), (valid, invalid), (invalid, valid), (invalid, invalid)
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  for (const auto& item : e.items()) {
    key_weights.push_back(item.weight);
    const auto out = channels::apply_channel(cloner, linalg::HermitianOperator::projector(item.state));
    const ComplexMatrix pi = item.state * item.state.adjoint();
    const double both = out.expectation(linalg::kron(item.state, item.state));
    const double first = (linalg::kron(pi, eye) * out.matrix()).trace().real();
    const double second = (linalg::kron(eye, pi) * out.matrix()).trace().real();
    outcomes.emplace_back(std::vector<double>{both, first - both, second - both, 1.0 - first - second + both});
  }
  const Categorical keys(key_weights);
  const std::size_t reps = cfg.repetitions;
  const auto counts = run_trials<1>(cfg.trials, cfg.seed, cfg.threads, [&](std::mt19937_64& rng, auto& c) {
    bool ok = true;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t k = keys.sample(rng);
      ok = (outcomes[k].sample(rng) == 0) && ok;
    }
    c[0] += ok ? 1 : 0;
  });
  return make_report(counts[0], cfg.trials, power(channels::success_probability(cloner, e), reps));
}

BellReport simulate_bell_attack(std::size_t n, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (n == 0 || n > 20) throw ValidationError("Bell attack supports 1 <= n <= 20");
  if (trials == 0) throw ValidationError("trial count must be >= 1");
  const schemes::Ensemble wiesner = schemes::wiesner_ensemble();
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);

  // Per key: probability the bank accepts the sent half, and the probability
  // the retained half passes given acceptance (projective update, renormalized).
  std::vector<double> first_prob;
  std::vector<double> second_prob;
  std::vector<double> key_weights;
  for (const auto& item : wiesner.items()) {
    key_weights.push_back(item.weight);
    const ComplexMatrix pi = item.state * item.state.adjoint();
    const ComplexVector projected = linalg::kron(pi, eye) * bell;
    const double p1 = projected.squaredNorm();
    const ComplexVector post = projected / std::sqrt(p1);
    first_prob.push_back(p1);
    second_prob.push_back(post.dot(linalg::kron(eye, pi) * post).real());
  }
  const Categorical keys(key_weights);
  const auto counts = run_trials<2>(trials, seed, threads, [&](std::mt19937_64& rng, auto& c) {
    bool first = true;
    bool second = true;
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t k = keys.sample(rng);
      const bool valid = uniform01(rng) < first_prob[k];
      const bool kept = uniform01(rng) < second_prob[k];
      first = first && valid;
      second = second && kept;
    }
    if (first) {
      c[0] += 1;
      c[1] += second ? 1 : 0;
    }
  });
  BellReport report;
  report.first_note = make_report(counts[0], trials, power(0.5, n));
  report.second_note_accepted = counts[1];
  report.conditional_second_note_rate =
      counts[0] == 0 ? 0.0 : static_cast<double>(counts[1]) / static_cast<double>(counts[0]);
  return report;
}

TrialReport simulate_ticket_attack(const schemes::TicketScheme& t, const cloners::TicketStrategy& s,
                                   const TrialConfig& cfg) {
  require_trials(cfg);
  if (s.dim() != t.dim()) throw DimensionError("strategy and scheme dimensions differ");
  const auto keys = t.keys();
  // tables[key][2*c1 + c2]: outcome distribution of the strategy's POVM.
  std::vector<std::vector<Categorical>> tables;
  for (const auto& key : keys) {
    const ComplexVector psi = t.state(key);
    std::vector<Categorical> row;
    for (std::size_t c = 0; c < 4; ++c) {
      std::vector<double> probs;
      for (const auto& o : s.povm(c / 2, c % 2)) probs.push_back(psi.dot(o.element * psi).real());
      row.emplace_back(probs);
    }
    tables.push_back(std::move(row));
  }
  const std::size_t reps = cfg.repetitions;
  const auto counts = run_trials<1>(cfg.trials, cfg.seed, cfg.threads, [&](std::mt19937_64& rng, auto& c) {
    bool ok = true;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(keys.size()));
      const std::size_t c1 = rng() & 1U;
      const std::size_t c2 = rng() & 1U;
      const auto& outcome = s.povm(c1, c2)[tables[k][2 * c1 + c2].sample(rng)];
      ok = t.accepts(outcome.answer1, c1, keys[k]) && t.accepts(outcome.answer2, c2, keys[k]) && ok;
    }
    c[0] += ok ? 1 : 0;
  });
  return make_report(counts[0], cfg.trials, power(cloners::evaluate_ticket_strategy(s, t), reps));
}

TrialReport simulate_honest_ticket(const schemes::TicketScheme& t, const TrialConfig& cfg) {
  require_trials(cfg);
  const auto keys = t.keys();
  std::vector<std::array<Categorical, 2>> tables;
  for (const auto& key : keys) {
    const ComplexVector psi = t.state(key);
    std::array<std::vector<double>, 2> probs;
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t a = 0; a < t.dim(); ++a) probs[c].push_back(std::norm(t.bases().vector(c, a).dot(psi)));
    }
    tables.push_back({Categorical(probs[0]), Categorical(probs[1])});
  }
  const std::size_t reps = cfg.repetitions;
  const auto counts = run_trials<1>(cfg.trials, cfg.seed, cfg.threads, [&](std::mt19937_64& rng, auto& c) {
    bool ok = true;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(keys.size()));
      const std::size_t challenge = rng() & 1U;
      const std::size_t answer = tables[k][challenge].sample(rng);
      ok = t.accepts(answer, challenge, keys[k]) && ok;
    }
    c[0] += ok ? 1 : 0;
  });
  return make_report(counts[0], cfg.trials, 1.0);
}

std::string format_report(const TrialReport& r) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "successes=%llu trials=%llu empirical=%.10g",
                static_cast<unsigned long long>(r.successes), static_cast<unsigned long long>(r.trials),
                r.empirical);
  out += buf;
  if (r.analytic) {
    std::snprintf(buf, sizeof buf, " analytic=%.10g stderr=%.10g z=%.10g", *r.analytic, r.standard_error,
                  r.z.value_or(0.0));
    out += buf;
  }
  return out;
}

}  // namespace qmoney::simulator
