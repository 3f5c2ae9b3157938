#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phaserand/circuit.hpp"
#include "phaserand/ensembles.hpp"
#include "support.hpp"

#include <cmath>
#include <map>
#include <vector>

using namespace phaserand;
using namespace phaserand::circuit;
using ensembles::BasisSpec;
using ensembles::equal_amplitudes;
using ensembles::make_profile;
using ensembles::make_spec;

namespace {

ensembles::AmplitudeProfile two_term_profile() {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(4);
  r(0) = r(3) = 1.0 / std::sqrt(2.0);
  return make_profile(std::move(r));
}

}  // namespace

TEST_CASE("sample_gate: pair and angle distributions") {
  CounterRng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const GateRecord g = sample_gate(2, rep + 1, rng);
    CHECK(g.qubit_i == 1);
    CHECK(g.qubit_j == 2);
    CHECK(g.alpha >= 0.0);
    CHECK(g.alpha < kTwoPi);
  }
  CHECK_THROWS_AS(sample_gate(1, 1, rng), std::invalid_argument);

  // N=5: 10 unordered pairs, each frequency 0.1 +- 0.005 at 1e5 draws.
  std::map<std::pair<int, int>, int> pair_counts;
  std::vector<int> angle_bins(16, 0);
  const int draws = 100000;
  for (int rep = 0; rep < draws; ++rep) {
    const GateRecord g = sample_gate(5, rep + 1, rng);
    CHECK(g.qubit_i < g.qubit_j);
    ++pair_counts[{g.qubit_i, g.qubit_j}];
    ++angle_bins[static_cast<int>(g.alpha / kTwoPi * 16)];
    ++angle_bins[static_cast<int>(g.beta / kTwoPi * 16)];
  }
  CHECK(pair_counts.size() == 10);
  for (const auto& [pair, count] : pair_counts) {
    CHECK(std::abs(count / static_cast<double>(draws) - 0.1) < 0.005);
  }
  // 16 bins over both angles: 4 sigma of the binomial se around 1/16.
  const double bin_p = 1.0 / 16.0;
  const double bin_se = std::sqrt(bin_p * (1 - bin_p) / (2.0 * draws));
  for (int bin = 0; bin < 16; ++bin) {
    const double freq = angle_bins[bin] / (2.0 * draws);
    CHECK(std::abs(freq - bin_p) < 4.0 * bin_se);
  }
}

TEST_CASE("apply_gate: diagonal action") {
  // All-zero bits: nothing happens.
  PureState zero = basis_state(3, 0);
  apply_gate(zero, GateRecord{1, 1, 3, 1.23, 4.56});
  CHECK(std::abs(zero.amplitudes(0) - Complex(1.0, 0.0)) < 1e-15);

  // alpha = beta = 0 is a plain CZ: only the a_i = a_j = 1 block flips sign.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Constant(4, 0.5);
  PureState plus = make_state(2, amps);
  apply_gate(plus, GateRecord{1, 1, 2, 0.0, 0.0});
  CHECK(std::abs(plus.amplitudes(0) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(plus.amplitudes(1) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(plus.amplitudes(2) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(plus.amplitudes(3) - Complex(-0.5, 0.0)) < 1e-15);

  // Diagonal gates on the same pair commute.
  CounterRng rng(2);
  PureState a = ensembles::sample_haar_state(3, rng);
  PureState b = a;
  const GateRecord g1{1, 1, 2, 0.7, 1.9};
  const GateRecord g2{2, 1, 2, 2.6, 0.3};
  apply_gate(a, g1);
  apply_gate(a, g2);
  apply_gate(b, g2);
  apply_gate(b, g1);
  CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(apply_gate(a, GateRecord{1, 0, 2, 0.0, 0.0}),
                  std::out_of_range);
  CHECK_THROWS_AS(apply_gate(a, GateRecord{1, 2, 2, 0.0, 0.0}),
                  std::out_of_range);
}

TEST_CASE("run_circuit: frozen trajectories") {
  // Computational basis input stays unentangled under a diagonal circuit.
  const auto basis_run = run_circuit(basis_state(4, 9), 60,
                                     SubsystemMask(4, {1, 2}), 4, 17);
  for (double value : basis_run.trajectory.values) {
    CHECK(std::abs(value) < 1e-12);
  }

  // Two-term superposition keeps E_L = 1/2 at every step.
  CounterRng rng(3);
  const auto spec = make_spec(two_term_profile(), BasisSpec::computational());
  auto [state, phases] = ensembles::sample_phase_state(spec, rng);
  const auto run = run_circuit(state, 40, SubsystemMask(2, {1}), 5, 19);
  for (double value : run.trajectory.values) {
    CHECK(value == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(run.trajectory.steps.front() == 0);
  CHECK(run.trajectory.steps.back() == 40);
  CHECK(run.instance.gates.size() == 40);
}

TEST_CASE("norm preservation over 1e4 gates") {
  CounterRng rng(5);
  PureState state = ensembles::sample_haar_state(6, rng);
  CounterRng gate_rng(6);
  for (int t = 1; t <= 10000; ++t) {
    apply_gate(state, sample_gate(6, t, gate_rng));
  }
  CHECK(std::abs(state.amplitudes.norm() - 1.0) <= 1e-9);
}

TEST_CASE("diagonality: moduli are untouched") {
  CounterRng rng(7);
  const auto spec = make_spec(phaserand::testing::random_profile(5, rng),
                              BasisSpec::computational());
  auto [state, phases] = ensembles::sample_phase_state(spec, rng);
  const Eigen::VectorXd moduli_before = state.amplitudes.cwiseAbs();
  CounterRng gate_rng(8);
  for (int t = 1; t <= 200; ++t) {
    apply_gate(state, sample_gate(5, t, gate_rng));
  }
  CHECK((state.amplitudes.cwiseAbs() - moduli_before).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("expected_entropy_limit: frozen examples") {
  // Equal amplitudes reduce to the eq-sep maximum (cross-formula identity).
  for (int n = 2; n <= 8; ++n) {
    for (int na = 1; na < n; ++na) {
      std::vector<int> qubits;
      for (int q = 1; q <= na; ++q) qubits.push_back(q);
      CHECK(expected_entropy_limit(equal_amplitudes(n),
                                   SubsystemMask(n, qubits)) ==
            doctest::Approx(ensembles::analytic_eqsep_max(n, na))
                .epsilon(1e-12));
    }
  }

  Eigen::VectorXd support2 = Eigen::VectorXd::Zero(4);
  support2(0) = support2(1) = 1.0 / std::sqrt(2.0);
  CHECK(expected_entropy_limit(make_profile(support2), SubsystemMask(2, {1})) ==
        doctest::Approx(0.0).epsilon(1e-12));

  CHECK(expected_entropy_limit(two_term_profile(), SubsystemMask(2, {1})) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entropy limit matches the phase average for computational bases") {
  CounterRng rng(9);
  for (int n = 2; n <= 8; ++n) {
    const auto amps = phaserand::testing::random_profile(n, rng);
    const auto spec = make_spec(amps, BasisSpec::computational());
    for (int rep = 0; rep < 2; ++rep) {
      const SubsystemMask mask = phaserand::testing::random_mask(n, rng);
      CHECK(std::abs(expected_entropy_limit(amps, mask) -
                     ensembles::analytic_phase_average(spec, mask)) < 1e-9);
    }
  }
}

TEST_CASE("expected_entropy_limit is invariant under joint qubit relabeling") {
  CounterRng rng(10);
  const int n = 5;
  const auto amps = phaserand::testing::random_profile(n, rng);

  std::vector<int> perm(n);  // perm[old-1] = new
  for (int q = 0; q < n; ++q) perm[q] = q + 1;
  for (int q = n - 1; q > 0; --q) {
    std::swap(perm[q], perm[rng.next_below(q + 1)]);
  }

  Eigen::VectorXd permuted_r(amps.dim());
  for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
    std::uint64_t relabeled = 0;
    for (int q = 1; q <= n; ++q) {
      if (qubit_bit(a, q, n)) relabeled |= 1ULL << (n - perm[q - 1]);
    }
    permuted_r(static_cast<Eigen::Index>(relabeled)) =
        amps.r(static_cast<Eigen::Index>(a));
  }
  const auto permuted = make_profile(std::move(permuted_r));

  const SubsystemMask mask(n, {1, 3});
  std::vector<int> mapped;
  for (int q : mask.qubits()) mapped.push_back(perm[q - 1]);
  const SubsystemMask mapped_mask(n, mapped);

  CHECK(std::abs(expected_entropy_limit(amps, mask) -
                 expected_entropy_limit(permuted, mapped_mask)) < 1e-12);
}

TEST_CASE("kappa: sector weights") {
  CHECK(kappa(equal_amplitudes(4), {}) == 0.0);
  CHECK(kappa(ensembles::point_amplitudes(5, 3), {2, 4}) == 0.0);
  for (int n : {3, 5}) {
    std::vector<int> gamma;
    for (int q = 1; q <= n; q += 2) gamma.push_back(q);
    CHECK(kappa(equal_amplitudes(n), gamma) ==
          doctest::Approx(std::exp2(-n)).epsilon(1e-14));
  }

  // Total probability: frozen weight sum_a r^4 plus all sector weights is 1.
  CounterRng rng(11);
  for (int n : {3, 4, 6}) {
    const auto amps = phaserand::testing::random_profile(n, rng);
    double total = amps.r.array().square().square().sum();
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
      total += kappa_masked(amps, mask);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mixing_time_bound") {
  // Basis states have no walking sectors at all.
  CHECK(mixing_time_bound(ensembles::point_amplitudes(4, 7), 0.01, 4) == 0.0);

  // Equal amplitudes: kappa = 2^-N, so 2^{N-gamma} kappa = 2^{-gamma} and the
  // gamma = 1 sector dominates. Frozen hand evaluation at N = 4, eps = 0.01:
  // factor = [12/(2*3) * 2^3/16]^2 = 1, bracket = 3 - ln(0.01/256).
  const double expected_n4 = 3.0 - std::log(0.01 / 16.0 / 16.0);
  CHECK(mixing_time_bound(equal_amplitudes(4), 0.01, 4) ==
        doctest::Approx(expected_n4).epsilon(1e-12));

  const double bound6 = mixing_time_bound(equal_amplitudes(6), 0.01, 6);
  CHECK(bound6 > 0.0);
  CHECK(std::isfinite(bound6));

  CHECK_THROWS_AS(mixing_time_bound(equal_amplitudes(4), 0.0, 4),
                  std::invalid_argument);
}

TEST_CASE("run-averaged E_L approaches the limit by T = 10 N^2") {
  for (int n : {4, 6, 8}) {
    std::vector<int> half;
    for (int q = 1; q <= n / 2; ++q) half.push_back(q);
    const SubsystemMask mask(n, half);
    const auto amps = equal_amplitudes(n);
    const McEstimate est =
        estimate_expected_entropy(amps, mask, 10 * n * n, 100, 500 + n);
    CHECK(std::abs(est.mean - expected_entropy_limit(amps, mask)) < 0.02);
  }
}

TEST_CASE("estimate_expected_entropy: T=0 and determinism") {
  const auto amps = equal_amplitudes(4);
  const SubsystemMask mask(4, {2, 3});
  const auto spec = make_spec(amps, BasisSpec::computational());

  const McEstimate at_zero = estimate_expected_entropy(amps, mask, 0, 3000, 71);
  const double input_mean = ensembles::analytic_phase_average(spec, mask);
  CHECK(std::abs(at_zero.mean - input_mean) < 4.0 * at_zero.std_error);

  const McEstimate one_a = estimate_expected_entropy(amps, mask, 25, 1, 72);
  const McEstimate one_b = estimate_expected_entropy(amps, mask, 25, 1, 72);
  CHECK(one_a.mean == one_b.mean);
}

TEST_CASE("input phases do not shift the circuit-average (checked at N=4)") {
  const auto amps = equal_amplitudes(4);
  const SubsystemMask mask(4, {1, 2});
  const auto spec = make_spec(amps, BasisSpec::computational());

  // Two fixed, different input phase vectors; only gates are averaged.
  auto run_mean = [&](std::uint64_t phase_seed, std::uint64_t gate_seed,
                      RunningStat& stat) {
    CounterRng phase_rng(phase_seed, 0);
    auto [initial, phases] = ensembles::sample_phase_state(spec, phase_rng);
    for (int run = 0; run < 400; ++run) {
      PureState state = initial;
      CounterRng gate_rng(gate_seed, static_cast<std::uint64_t>(run));
      for (int t = 1; t <= 100; ++t) {
        apply_gate(state, sample_gate(4, t, gate_rng));
      }
      stat.add(linear_entropy(state, mask));
    }
  };
  RunningStat first, second;
  run_mean(1001, 51, first);
  run_mean(1002, 52, second);
  const double combined_se =
      std::sqrt(first.std_error() * first.std_error() +
                second.std_error() * second.std_error());
  CHECK(std::abs(first.mean() - second.mean()) < 4.0 * combined_se);
}

TEST_CASE("instance serialization round-trips and replays bit-for-bit") {
  CounterRng rng(13);
  const auto spec = make_spec(phaserand::testing::random_profile(4, rng),
                              BasisSpec::computational());
  auto [initial, phases] = ensembles::sample_phase_state(spec, rng);
  const auto run = run_circuit(initial, 35, SubsystemMask(4, {1, 4}), 0, 77);

  const std::string text = serialize_instance(run.instance);
  const CircuitInstance parsed = parse_instance(text);
  CHECK(parsed.num_qubits == run.instance.num_qubits);
  CHECK(parsed.seed == run.instance.seed);
  REQUIRE(parsed.gates.size() == run.instance.gates.size());
  for (std::size_t k = 0; k < parsed.gates.size(); ++k) {
    CHECK(parsed.gates[k].step == run.instance.gates[k].step);
    CHECK(parsed.gates[k].qubit_i == run.instance.gates[k].qubit_i);
    CHECK(parsed.gates[k].qubit_j == run.instance.gates[k].qubit_j);
    // %.17g round-trips doubles exactly.
    CHECK(parsed.gates[k].alpha == run.instance.gates[k].alpha);
    CHECK(parsed.gates[k].beta == run.instance.gates[k].beta);
  }

  const PureState replayed = replay_instance(initial, parsed);
  REQUIRE(replayed.dim() == run.final_state.dim());
  for (Eigen::Index i = 0; i < replayed.dim(); ++i) {
    CHECK(replayed.amplitudes(i) == run.final_state.amplitudes(i));
  }

  CHECK_THROWS_AS(parse_instance("garbage"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance("4 2 7\n1 1 2 0.0 0.0\n"),
                  std::invalid_argument);
}
