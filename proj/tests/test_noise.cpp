#include <doctest.h>

#include <numeric>
#include <random>

#include "incoh/noise.hpp"
#include "brute_force.hpp"

using namespace incoh;

namespace {

NoiseOptions no_relaxation() {
  NoiseOptions o;
  o.relaxation = false;
  return o;
}

StateVecL ghz_start() {
  const Operator p = oracle::prep();
  return vectorize(p * oracle::ket_bra(8, 0) * p.adjoint());
}

RfDistribution random_distribution(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> z(0.85, 1.15);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  RfDistribution d;
  for (std::size_t i = 0; i < n; ++i) {
    d.points.push_back(z(rng));
    d.weights.push_back(w(rng));
  }
  const double sum = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
  for (double& x : d.weights) x /= sum;
  d.weights.back() = 1.0 - std::accumulate(d.weights.begin(), d.weights.end() - 1, 0.0);
  return d;
}

}  // namespace

TEST_CASE("default distribution") {
  const RfDistribution d = default_rf_distribution();
  CHECK_NOTHROW(d.validate());
  CHECK(d.size() == 9);
  CHECK(std::accumulate(d.weights.begin(), d.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // Regression fixture for the shipped values.
  CHECK(d.mean() == doctest::Approx(0.989515).epsilon(1e-12));
  CHECK(d.mean() >= 0.95);
  CHECK(d.mean() <= 1.01);
}

TEST_CASE("distribution validation") {
  RfDistribution d{{1.0, 1.1}, {0.5, 0.4}};
  CHECK_THROWS_WITH_AS(d.validate(), doctest::Contains("rf_distribution.weights"), std::invalid_argument);
  d = {{1.0, -1.1}, {0.5, 0.5}};
  CHECK_THROWS_WITH_AS(d.validate(), doctest::Contains("rf_distribution.points"), std::invalid_argument);
  d = {{1.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = {{1.0, 1.0}, {1.5, -0.5}};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("z = 1 without relaxation is the ideal entangler") {
  const SpinSystem s = default_spin_system();
  const Superoperator got = perturbed_iteration_superop(standard_plan(), s, 1.0, no_relaxation());
  CHECK((got - unitary_to_superop(entangling_map(s))).norm() < 1e-12);
  CHECK_THROWS_AS(perturbed_iteration_superop(standard_plan(), s, 0.0, no_relaxation()), std::invalid_argument);
}

TEST_CASE("perturbation is continuous at z = 1") {
  const SpinSystem s = default_spin_system();
  const Superoperator ideal = perturbed_iteration_superop(standard_plan(), s, 1.0, no_relaxation());
  double last = 1e9;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const double d = (perturbed_iteration_superop(standard_plan(), s, 1.0 + eps, no_relaxation()) - ideal).norm();
    CHECK(d < last);
    last = d;
  }
  CHECK(last < 1e-4);
}

TEST_CASE("relaxation is composed after the gate") {
  const SpinSystem s = default_spin_system();
  NoiseOptions o;
  const Superoperator got = perturbed_iteration_superop(standard_plan(), s, 0.95, o);
  const Superoperator expect = relaxation_superop(RelaxationRates::from_spin_system(s), o.iteration_duration_s) *
                               unitary_to_superop(oracle::scaled_entangler(0.95));
  CHECK((got - expect).norm() < 1e-12);
}

TEST_CASE("static noise: two iterations equal the squared map") {
  const SpinSystem s = default_spin_system();
  const RfDistribution d = single_point(0.96);
  const Ensemble one = build_ensemble(standard_plan(), s, d, NoiseOptions{}, 1);
  const Ensemble two = build_ensemble(standard_plan(), s, d, NoiseOptions{}, 2);
  CHECK((two.members[0] - one.members[0] * one.members[0]).norm() < 1e-12);
}

TEST_CASE("zero iterations return the input") {
  const StateVecL v = ghz_start();
  const auto plan = standard_plan();
  const auto s = default_spin_system();
  const auto d = default_rf_distribution();
  CHECK((incoherent_evolve(v, plan, s, d, NoiseOptions{}, 0) - v).norm() < 1e-14);
  CHECK((decoherent_evolve(v, plan, s, d, NoiseOptions{}, 0) - v).norm() == 0.0);
}

TEST_CASE("one step is the same in both regimes") {
  std::mt19937 rng(11);
  const auto s = default_spin_system();
  const StateVecL v = ghz_start();
  for (int trial = 0; trial < 5; ++trial) {
    const RfDistribution d = random_distribution(rng, 2 + static_cast<std::size_t>(trial) * 2);
    const Ensemble e = build_ensemble(standard_plan(), s, d, NoiseOptions{}, 4);
    CHECK((incoherent_evolve(v, e, 1) - decoherent_evolve(v, e, 1)).norm() < 1e-14);
  }
}

TEST_CASE("single-point distribution makes the regimes coincide") {
  const auto s = default_spin_system();
  const Ensemble e = build_ensemble(standard_plan(), s, single_point(0.93), NoiseOptions{}, 1);
  const StateVecL v = ghz_start();
  for (int n = 0; n <= 12; ++n) CHECK((incoherent_evolve(v, e, n) - decoherent_evolve(v, e, n)).norm() == 0.0);
}

TEST_CASE("per-iteration evolution matches the density-matrix oracle") {
  const auto s = default_spin_system();
  const auto d = default_rf_distribution();
  oracle::Setup o{d.points, d.weights, s.t1_s, s.t2_s, true, 0.0085, 1};
  const auto inc = oracle::incoherent_outputs(o, 6);
  const auto dec = oracle::decoherent_outputs(o, 6);
  const Operator p = oracle::prep();
  for (int n = 0; n <= 6; ++n) {
    const Operator a = p.adjoint() * devectorize(incoherent_evolve(ghz_start(), standard_plan(), s, d, NoiseOptions{}, n)) * p;
    const Operator b = p.adjoint() * devectorize(decoherent_evolve(ghz_start(), standard_plan(), s, d, NoiseOptions{}, n)) * p;
    CHECK((a - inc[n]).norm() < 1e-10);
    CHECK((b - dec[n]).norm() < 1e-10);
  }
}

TEST_CASE("trace preservation up to 30 samples") {
  const auto s = default_spin_system();
  const Ensemble e = build_ensemble(standard_plan(), s, default_rf_distribution(), NoiseOptions{}, 4);
  for (int n : {1, 7, 30}) {
    CHECK(std::abs(trace_of(incoherent_evolve(ghz_start(), e, n)) - Complex(1.0)) < 1e-10);
    CHECK(std::abs(trace_of(decoherent_evolve(ghz_start(), e, n)) - Complex(1.0)) < 1e-10);
  }
}

TEST_CASE("purity laws without relaxation") {
  const auto s = default_spin_system();
  const Ensemble e = build_ensemble(standard_plan(), s, default_rf_distribution(), no_relaxation(), 4);
  const StateVecL v = ghz_start();
  double prev = purity(v);
  for (int n = 0; n <= 30; ++n) {
    for (const auto& m : member_states(v, e, n)) CHECK(purity(m) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(incoherent_evolve(v, e, n)) <= 1.0 + 1e-12);
    const double p = purity(decoherent_evolve(v, e, n));
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
}

TEST_CASE("ensemble construction is deterministic") {
  const auto s = default_spin_system();
  const auto d = default_rf_distribution();
  const Ensemble a = build_ensemble(standard_plan(), s, d, NoiseOptions{}, 4);
  const Ensemble b = build_ensemble(standard_plan(), s, d, NoiseOptions{}, 4);
  CHECK((a.average() - b.average()).norm() == 0.0);
}

TEST_CASE("pulse-level mode runs with an 8.5 ms iteration") {
  const auto s = default_spin_system();
  NoiseOptions o = no_relaxation();
  o.mode = SimulationMode::PulseLevel;
  const Operator u = perturbed_iteration_unitary(standard_plan(), s, 1.0, o);
  CHECK(is_unitary(u));
  o.iteration_duration_s = 1e-4;
  CHECK_THROWS_AS(perturbed_iteration_unitary(standard_plan(), s, 1.0, o), std::invalid_argument);
}
