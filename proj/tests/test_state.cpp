#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phaserand/ensembles.hpp"
#include "phaserand/state.hpp"
#include "support.hpp"

#include <cmath>

using namespace phaserand;
using testing::bell_state;
using testing::ghz_state;
using testing::w_state;

TEST_CASE("bit convention: qubit 1 is the most significant bit") {
  // |10> is basis index 2 at N=2.
  const PureState s = basis_state(2, 2);
  const DensityMatrix q1 = reduced_density(s, SubsystemMask(2, {1}));
  CHECK(std::abs(q1.mat(1, 1).real() - 1.0) < 1e-12);
  CHECK(std::abs(q1.mat(0, 0)) < 1e-12);
  const DensityMatrix q2 = reduced_density(s, SubsystemMask(2, {2}));
  CHECK(std::abs(q2.mat(0, 0).real() - 1.0) < 1e-12);
}

TEST_CASE("reduced density: Bell, product, GHZ") {
  const DensityMatrix bell = reduced_density(bell_state(), SubsystemMask(2, {1}));
  CHECK(std::abs(bell.mat(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(bell.mat(1, 1).real() - 0.5) < 1e-12);
  CHECK(std::abs(bell.mat(0, 1)) < 1e-12);
  validate_density(bell);

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(0) = amps(1) = 1.0 / std::sqrt(2.0);  // |0> (x) |+>
  const PureState product = make_state(2, std::move(amps));
  const DensityMatrix left = reduced_density(product, SubsystemMask(2, {1}));
  CHECK(std::abs(left.mat(0, 0).real() - 1.0) < 1e-12);
  CHECK(std::abs(purity(left) - 1.0) < 1e-12);

  const DensityMatrix ghz = reduced_density(ghz_state(3), SubsystemMask(3, {1, 2}));
  CHECK(std::abs(ghz.mat(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(ghz.mat(3, 3).real() - 0.5) < 1e-12);
  CHECK(std::abs(ghz.mat(0, 3)) < 1e-12);
  CHECK(std::abs(ghz.mat(1, 1)) < 1e-12);
}

TEST_CASE("purity of small diagonal matrices") {
  DensityMatrix pure{Eigen::MatrixXcd::Zero(2, 2)};
  pure.mat(0, 0) = 1.0;
  CHECK(purity(pure) == doctest::Approx(1.0).epsilon(1e-12));

  DensityMatrix mixed{0.5 * Eigen::MatrixXcd::Identity(2, 2)};
  CHECK(purity(mixed) == doctest::Approx(0.5).epsilon(1e-12));

  DensityMatrix skew{Eigen::MatrixXcd::Zero(2, 2)};
  skew.mat(0, 0) = 0.75;
  skew.mat(1, 1) = 0.25;
  CHECK(purity(skew) == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("subsystem purity matches the explicit reduced-density route") {
  CHECK(subsystem_purity(bell_state(), SubsystemMask(2, {1})) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Any product state has unit purity on both sides.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  amps(0) = 0.6;
  amps(4) = 0.8;  // (0.6|0> + 0.8|1>) (x) |00>
  const PureState product = make_state(3, std::move(amps));
  CHECK(subsystem_purity(product, SubsystemMask(3, {1})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(subsystem_purity(product, SubsystemMask(3, {2, 3})) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CounterRng rng(42);
  const PureState haar = ensembles::sample_haar_state(4, rng);
  const SubsystemMask mask(4, {1, 2});
  CHECK(std::abs(subsystem_purity(haar, mask) -
                 purity(reduced_density(haar, mask))) < 1e-10);
}

TEST_CASE("subsystem purity agrees with reduced_density on N <= 10") {
  for (int n = 2; n <= 10; ++n) {
    CounterRng rng(1000 + n);
    const PureState state = ensembles::sample_haar_state(n, rng);
    for (int rep = 0; rep < 2; ++rep) {
      const SubsystemMask mask = testing::random_mask(n, rng);
      CHECK(std::abs(subsystem_purity(state, mask) -
                     purity(reduced_density(state, mask))) < 1e-10);
    }
  }
}

TEST_CASE("linear entropy examples") {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(0) = 1.0;
  CHECK(linear_entropy(make_state(2, amps), SubsystemMask(2, {1})) ==
        doctest::Approx(0.0).epsilon(1e-12));

  CHECK(linear_entropy(bell_state(), SubsystemMask(2, {1})) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Maximally entangled equal-amplitude state (|00>+|01>+|10>-|11>)/2.
  Eigen::VectorXcd lme(4);
  lme << 0.5, 0.5, 0.5, -0.5;
  CHECK(linear_entropy(make_state(2, lme), SubsystemMask(2, {1})) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Schmidt symmetry: E_L(A) == E_L(complement)") {
  CounterRng rng(7);
  for (int n = 2; n <= 8; ++n) {
    const PureState state = ensembles::sample_haar_state(n, rng);
    for (int rep = 0; rep < 3; ++rep) {
      const SubsystemMask mask = testing::random_mask(n, rng);
      CHECK(std::abs(linear_entropy(state, mask) -
                     linear_entropy(state, mask.complement())) < 1e-10);
    }
  }
}

TEST_CASE("von Neumann entropy in bits") {
  DensityMatrix pure{Eigen::MatrixXcd::Zero(4, 4)};
  pure.mat(2, 2) = 1.0;
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));

  DensityMatrix half{0.5 * Eigen::MatrixXcd::Identity(2, 2)};
  CHECK(von_neumann_entropy(half) == doctest::Approx(1.0).epsilon(1e-12));

  DensityMatrix quarter{0.25 * Eigen::MatrixXcd::Identity(4, 4)};
  CHECK(von_neumann_entropy(quarter) == doctest::Approx(2.0).epsilon(1e-12));

  // Tiny negative eigenvalues clamp to zero; larger ones are an error.
  Eigen::MatrixXcd slight = Eigen::MatrixXcd::Zero(2, 2);
  slight(0, 0) = 1.0 + 1e-9;
  slight(1, 1) = -1e-9;
  CHECK(von_neumann_entropy(DensityMatrix{slight}) ==
        doctest::Approx(0.0).epsilon(1e-8));
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = 1.001;
  bad(1, 1) = -1e-3;
  CHECK_THROWS_AS(von_neumann_entropy(DensityMatrix{bad}),
                  std::invalid_argument);
}

TEST_CASE("von Neumann entropy dominates -log2(1 - E_L)") {
  CounterRng rng(99);
  for (int n = 2; n <= 6; ++n) {
    const PureState state = ensembles::sample_haar_state(n, rng);
    for (int rep = 0; rep < 3; ++rep) {
      const SubsystemMask mask = testing::random_mask(n, rng);
      const double el = linear_entropy(state, mask);
      const double s = von_neumann_entropy(reduced_density(state, mask));
      CHECK(-std::log2(1.0 - el) <= s + 1e-8);
    }
  }
}

TEST_CASE("Meyer-Wallach examples") {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  amps(5) = 1.0;  // |101>, product
  CHECK(meyer_wallach(make_state(3, amps)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (int n : {2, 3, 5}) {
    CHECK(meyer_wallach(ghz_state(n)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK(meyer_wallach(w_state(3)) ==
        doctest::Approx(8.0 / 9.0).epsilon(1e-12));

  CHECK_THROWS_AS(meyer_wallach(basis_state(1, 0)), std::invalid_argument);
}

TEST_CASE("trace distance examples and metric properties") {
  const DensityMatrix rho = reduced_density(bell_state(), SubsystemMask(2, {1}));
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));

  DensityMatrix zero{Eigen::MatrixXcd::Zero(2, 2)}, one{Eigen::MatrixXcd::Zero(2, 2)};
  zero.mat(0, 0) = 1.0;
  one.mat(1, 1) = 1.0;
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));

  DensityMatrix half{0.5 * Eigen::MatrixXcd::Identity(2, 2)};
  CHECK(trace_distance(zero, half) == doctest::Approx(0.5).epsilon(1e-12));

  DensityMatrix big{Eigen::MatrixXcd::Identity(4, 4)};
  CHECK_THROWS_AS(trace_distance(zero, big), std::invalid_argument);

  // Symmetry and triangle inequality on random mixed states.
  CounterRng rng(5);
  auto random_density = [&rng](Eigen::Index d) {
    Eigen::MatrixXcd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.next_complex_normal();
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix{rho};
  };
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_density(4);
    const auto b = random_density(4);
    const auto c = random_density(4);
    const double ab = trace_distance(a, b);
    const double ba = trace_distance(b, a);
    const double ac = trace_distance(a, c);
    const double cb = trace_distance(c, b);
    CHECK(std::abs(ab - ba) < 1e-12);
    CHECK(ab <= ac + cb + 1e-9);
  }
}

TEST_CASE("mask and state validation") {
  CHECK_THROWS_AS(SubsystemMask(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemMask(3, {0}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemMask(3, {4}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemMask(3, {2, 2}), std::invalid_argument);
  CHECK(SubsystemMask(4, {3, 1}).qubits() == std::vector<int>{1, 3});
  CHECK(SubsystemMask(4, {1, 3}).complement().qubits() ==
        std::vector<int>{2, 4});

  Eigen::VectorXcd unnormalized = Eigen::VectorXcd::Ones(4);
  CHECK_THROWS_AS(make_state(2, unnormalized), std::invalid_argument);
  CHECK_THROWS_AS(make_state(2, Eigen::VectorXcd::Ones(3)),
                  std::invalid_argument);

  // Full-set masks are rejected by entanglement operations.
  CHECK_THROWS_AS(linear_entropy(bell_state(), SubsystemMask(2, {1, 2})),
                  std::invalid_argument);
}

TEST_CASE("reduced density dimension cap") {
  const PureState big = basis_state(15, 0);
  std::vector<int> wide;
  for (int q = 1; q <= 14; ++q) wide.push_back(q);
  CHECK_THROWS_AS(reduced_density(big, SubsystemMask(15, wide)),
                  std::invalid_argument);
  // The matricized purity route has no such cap.
  CHECK(subsystem_purity(big, SubsystemMask(15, wide)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd not_hermitian = Eigen::MatrixXcd::Zero(2, 2);
  not_hermitian(0, 1) = 1.0;
  CHECK_THROWS_AS(validate_density(DensityMatrix{not_hermitian}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      validate_density(DensityMatrix{Eigen::MatrixXcd::Identity(2, 2)}),
      std::invalid_argument);
  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(validate_density(DensityMatrix{indefinite}),
                  std::invalid_argument);
  validate_density(reduced_density(ghz_state(4), SubsystemMask(4, {2, 3})));
}

TEST_CASE("partial trace of a density matrix matches the pure-state route") {
  CounterRng rng(17);
  const PureState state = ensembles::sample_haar_state(5, rng);
  const DensityMatrix full{state.amplitudes * state.amplitudes.adjoint()};
  for (int rep = 0; rep < 4; ++rep) {
    const SubsystemMask mask = testing::random_mask(5, rng);
    if (mask.size() > kMaxExplicitQubits) continue;
    const DensityMatrix a = partial_trace(full, mask);
    const DensityMatrix b = reduced_density(state, mask);
    CHECK((a.mat - b.mat).cwiseAbs().maxCoeff() < 1e-10);
  }
}
