#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "qmoney/channels.hpp"
#include "qmoney/cloners.hpp"
#include "qmoney/schemes.hpp"

namespace qmoney::simulator {

struct TrialConfig {
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;  // a note/ticket is n independent registers
  unsigned threads = 0;         // 0: default_thread_count()
};

struct TrialReport {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double empirical = 0.0;
  std::optional<double> analytic;
  double standard_error = 0.0;  // sqrt(p (1 - p) / trials) at the analytic p
  std::optional<double> z;
};

struct BellReport {
  TrialReport first_note;              // bank accepts the substituted halves
  std::uint64_t second_note_accepted = 0;  // retained halves pass, among accepted trials
  double conditional_second_note_rate = 0.0;
};

/// Worker count: QMONEY_THREADS when set (>= 1), else the hardware concurrency.
unsigned default_thread_count();

/// Trials are split into fixed-size chunks; chunk c draws from its own
/// mt19937_64 seeded by (seed, c), so reports do not depend on the worker count.
inline constexpr std::uint64_t kChunkSize = 1 << 14;
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk);

/// Bank picks a key, the cloner acts, both outputs are measured with
/// {Pi_k, 1 - Pi_k}; success iff both are valid in every repetition.
TrialReport simulate_quantum_attack(const schemes::Ensemble& e, const channels::ChoiOperator& cloner,
                                    const TrialConfig& cfg);

/// Substitute half of a Bell pair for each of n Wiesner qubits.
BellReport simulate_bell_attack(std::size_t n, std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Two independent uniform challenges answered by sampling the strategy's POVM.
TrialReport simulate_ticket_attack(const schemes::TicketScheme& t, const cloners::TicketStrategy& s,
                                   const TrialConfig& cfg);

/// One challenge answered by an honest measurement in the challenged basis.
TrialReport simulate_honest_ticket(const schemes::TicketScheme& t, const TrialConfig& cfg);

/// Fixed-format rendering used for reproducibility checks and CLI output.
std::string format_report(const TrialReport& r);

}  // namespace qmoney::simulator
