#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qmoney/channels.hpp"
#include "qmoney/cloners.hpp"

using namespace qmoney;
using namespace qmoney::cloners;

namespace {

ComplexMatrix fourier_oracle(Eigen::Index d) {
  ComplexMatrix f(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      f(j, i) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2 * std::numbers::pi * static_cast<double>(i * j) / static_cast<double>(d));
  return f;
}

// Success probability of a measure-first strategy by direct enumeration:
// keys (t, b) uniform, challenges uniform, acceptance iff b != c or a == t.
// `only_basis` restricts (and renormalises) to keys encoded in one basis.
double enumerate_strategy(const TicketStrategy& s, Eigen::Index d, int only_basis = -1) {
  const ComplexMatrix f = fourier_oracle(d);
  double total = 0.0;
  double mass = 0.0;
  for (Eigen::Index t = 0; t < d; ++t)
    for (std::size_t b = 0; b < 2; ++b) {
      if (only_basis >= 0 && static_cast<std::size_t>(only_basis) != b) continue;
      const ComplexVector psi = b == 0 ? ComplexVector(ComplexMatrix::Identity(d, d).col(t)) : ComplexVector(f.col(t));
      mass += 1.0;
      for (std::size_t c1 = 0; c1 < 2; ++c1)
        for (std::size_t c2 = 0; c2 < 2; ++c2)
          for (const auto& o : s.povm(c1, c2)) {
            const bool ok1 = b != c1 || static_cast<Eigen::Index>(o.answer1) == t;
            const bool ok2 = b != c2 || static_cast<Eigen::Index>(o.answer2) == t;
            if (ok1 && ok2) total += psi.dot(o.element * psi).real() / 4.0;
          }
    }
  return total / mass;
}

}  // namespace

TEST_CASE("Wiesner-optimal cloner") {
  const auto k = wiesner_optimal_kraus();
  CHECK(k.completeness_residual() <= 1e-12);
  const auto j = wiesner_optimal_cloner();
  CHECK(channels::success_probability(j, schemes::wiesner_ensemble()) == doctest::Approx(0.75).epsilon(1e-12));
  // A0|0> = (3, 0, 0, 1)/sqrt12 and A1|0> = (0, 1, 1, 0)/sqrt12, so <00|Phi(|0><0|)|00> = 9/12.
  CHECK(channels::clone_fidelity(j, oracle::basis(2, 0)) == doctest::Approx(0.75).epsilon(1e-14));
  const auto wiesner = schemes::wiesner_ensemble();
  for (const auto& item : wiesner.items()) {
    CHECK(channels::clone_fidelity(j, item.state) == doctest::Approx(0.75).epsilon(1e-12));
  }
}

TEST_CASE("Buzek-Hillery cloner is state independent") {
  const auto j = buzek_hillery_cloner();
  CHECK(j.validation().valid());
  CHECK(buzek_hillery_kraus().completeness_residual() <= 1e-12);
  const auto six = schemes::six_state_ensemble();
  for (const auto& item : six.items()) {
    CHECK(channels::clone_fidelity(j, item.state) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  std::mt19937_64 rng(100);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    worst = std::max(worst, std::abs(channels::clone_fidelity(j, oracle::random_state(2, rng)) - 2.0 / 3.0));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("Werner cloners") {
  std::mt19937_64 rng(7);
  const auto w2 = werner_cloner(2);
  const auto bh = buzek_hillery_cloner();
  for (int i = 0; i < 20; ++i) {
    const ComplexVector psi = oracle::random_state(2, rng);
    CHECK(channels::clone_fidelity(w2, psi) == doctest::Approx(channels::clone_fidelity(bh, psi)).epsilon(1e-12));
  }
  for (std::size_t d : {3u, 5u}) {
    const auto w = werner_cloner(d);
    CHECK(w.validation().valid());
    for (int i = 0; i < 50; ++i) {
      CHECK(channels::clone_fidelity(w, oracle::random_state(static_cast<Eigen::Index>(d), rng)) ==
            doctest::Approx(2.0 / static_cast<double>(d + 1)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(werner_cloner(1), DimensionError);
}

TEST_CASE("keep-and-blank strategy") {
  // Success on |psi> is |<psi|0>|^2: Wiesner average (1 + 0 + 1/2 + 1/2)/4.
  const auto j = keep_and_blank_cloner(2);
  CHECK(channels::success_probability(j, schemes::wiesner_ensemble()) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("generalized Pauli operators") {
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto p = generalized_paulis(d);
    const auto n = static_cast<Eigen::Index>(d);
    const Complex w = std::polar(1.0, 2 * std::numbers::pi / static_cast<double>(d));
    CHECK(oracle::max_abs(p.z * p.x - w * p.x * p.z) < 1e-14);
    ComplexMatrix xd = ComplexMatrix::Identity(n, n);
    for (std::size_t i = 0; i < d; ++i) xd = xd * p.x;
    CHECK(oracle::max_abs(xd - ComplexMatrix::Identity(n, n)) < 1e-12);
    CHECK(oracle::max_abs(p.f.adjoint() * p.f - ComplexMatrix::Identity(n, n)) < 1e-14);
    CHECK(oracle::max_abs(p.f - fourier_oracle(n)) < 1e-14);
  }
}

TEST_CASE("ticket cloner") {
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto s = ticket_cloner(d);
    const auto t = schemes::fourier_ticket_scheme(d);
    const double expected = 0.75 + 1.0 / (4.0 * std::sqrt(static_cast<double>(d)));
    CHECK(evaluate_ticket_strategy(s, t) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(enumerate_strategy(s, static_cast<Eigen::Index>(d)) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(s.completeness_residual() <= 1e-10);
    const ComplexVector psi = ticket_cloner_vector(d, 0, 0);
    CHECK(std::norm(psi(0)) == doctest::Approx(0.5 * (1 + 1 / std::sqrt(static_cast<double>(d)))).epsilon(1e-13));
    for (const auto& o : s.povm(0, 1)) {
      CHECK(linalg::numeric_rank(linalg::HermitianOperator(o.element)) == 1);
    }
  }
  CHECK(evaluate_ticket_strategy(ticket_cloner(4), schemes::fourier_ticket_scheme(4)) ==
        doctest::Approx(0.875).epsilon(1e-12));
  CHECK(evaluate_ticket_strategy(ticket_cloner(2), schemes::fourier_ticket_scheme(2)) ==
        doctest::Approx(0.75 + std::numbers::sqrt2 / 8).epsilon(1e-12));
  CHECK_THROWS_AS(evaluate_ticket_strategy(ticket_cloner(2), schemes::fourier_ticket_scheme(3)), DimensionError);
}

TEST_CASE("fixed-basis strategy") {
  // Basis-0 keys always pass; basis-1 keys give a uniform outcome, right with
  // probability 1/d, needed for 3 of the 4 challenge pairs.
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto t = schemes::fourier_ticket_scheme(d);
    const auto s = fixed_basis_strategy(t, 0);
    const double dd = static_cast<double>(d);
    CHECK(evaluate_ticket_strategy(s, t) == doctest::Approx(0.5 + (1 + 3 / dd) / 8).epsilon(1e-12));
    CHECK(enumerate_strategy(s, static_cast<Eigen::Index>(d)) == doctest::Approx(0.5 + (1 + 3 / dd) / 8).epsilon(1e-12));
  }
  const auto t2 = schemes::fourier_ticket_scheme(2);
  const auto s2 = fixed_basis_strategy(t2, 0);
  CHECK(evaluate_ticket_strategy(s2, t2) == doctest::Approx(13.0 / 16.0).epsilon(1e-12));
  CHECK(enumerate_strategy(s2, 2, 1) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK_THROWS_AS(fixed_basis_strategy(t2, 2), DimensionError);
}

TEST_CASE("ticket strategy validation") {
  const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
  const std::vector<PovmOutcome> trivial{{eye, 0, 0}};
  CHECK_NOTHROW(TicketStrategy(2, {trivial, trivial, trivial, trivial}));
  const std::vector<PovmOutcome> half{{0.5 * eye, 0, 0}};
  CHECK_THROWS_AS(TicketStrategy(2, {trivial, trivial, trivial, half}), ValidationError);
  ComplexMatrix neg = eye;
  neg(1, 1) = -1.0;
  const std::vector<PovmOutcome> bad{{neg, 0, 0}, {eye - neg, 0, 0}};
  CHECK_THROWS_AS(TicketStrategy(2, {bad, trivial, trivial, trivial}), ValidationError);
  const std::vector<PovmOutcome> range{{eye, 2, 0}};
  CHECK_THROWS_AS(TicketStrategy(2, {range, trivial, trivial, trivial}), DimensionError);
  CHECK_THROWS_AS(TicketStrategy(2, {std::vector<PovmOutcome>{}, trivial, trivial, trivial}), ValidationError);
}
