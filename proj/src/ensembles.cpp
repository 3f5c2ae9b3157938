#include "phaserand/ensembles.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace phaserand::ensembles {

namespace {

int qubits_from_dim(Eigen::Index dim, const char* what) {
  if (dim < 2) throw std::invalid_argument(std::string(what) + " too short");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw std::invalid_argument(std::string(what) + " length must be 2^N");
  }
  return n;
}

void check_unitary(const Eigen::MatrixXcd& u, const char* what) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  const double err =
      (gram - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw std::invalid_argument(std::string(what) +
                                " not unitary within 1e-10 (defect " +
                                std::to_string(err) + ")");
  }
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Full basis unitary with qubit 1 as the most significant factor.
Eigen::MatrixXcd materialize_unitary(const BasisSpec& basis, int num_qubits) {
  if (num_qubits > kMaxExplicitBasisQubits) {
    throw std::invalid_argument("basis materialization cap exceeded (N > 12)");
  }
  switch (basis.kind()) {
    case BasisSpec::Kind::Computational:
      return Eigen::MatrixXcd::Identity(1LL << num_qubits, 1LL << num_qubits);
    case BasisSpec::Kind::Product: {
      Eigen::MatrixXcd u = basis.factors()[0];
      for (std::size_t k = 1; k < basis.factors().size(); ++k) {
        u = kron(u, basis.factors()[k]);
      }
      return u;
    }
    case BasisSpec::Kind::Explicit:
      return basis.unitary();
  }
  throw std::logic_error("unreachable");
}

// Weights of the amplitude profile grouped by the bit pattern on `part`:
// s[x] = sum of r_n^2 over labels n whose bits on `part` equal x.
Eigen::VectorXd grouped_weights(const AmplitudeProfile& amps,
                                const SubsystemMask& part) {
  const int n = amps.num_qubits();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(1LL << part.size());
  const std::uint64_t dim = 1ULL << n;
  for (std::uint64_t a = 0; a < dim; ++a) {
    std::uint64_t x = 0;
    for (int q : part.qubits()) {
      x = (x << 1) | static_cast<std::uint64_t>(qubit_bit(a, q, n));
    }
    const double r = amps.r(static_cast<Eigen::Index>(a));
    s(static_cast<Eigen::Index>(x)) += r * r;
  }
  return s;
}

// Reduced ensemble density on `part` for a separable (per-qubit) basis:
// sum_x s[x] (tensor over k in part of U_k |x_k><x_k| U_k^dag).
DensityMatrix separable_reduced_density(const EnsembleSpec& spec,
                                        const SubsystemMask& part) {
  if (part.size() > kMaxExplicitQubits) {
    throw std::invalid_argument("reduced ensemble density cap exceeded");
  }
  const Eigen::VectorXd s = grouped_weights(spec.amplitudes, part);
  std::vector<std::array<Eigen::Matrix2cd, 2>> projectors(part.size());
  for (int k = 0; k < part.size(); ++k) {
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    if (spec.basis.kind() == BasisSpec::Kind::Product) {
      u = spec.basis.factors()[part.qubits()[k] - 1];
    }
    for (int b = 0; b < 2; ++b) {
      projectors[k][b] = u.col(b) * u.col(b).adjoint();
    }
  }
  const Eigen::Index dim = 1LL << part.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    if (s(x) == 0.0) continue;
    Eigen::MatrixXcd term = projectors[0][(x >> (part.size() - 1)) & 1];
    for (int k = 1; k < part.size(); ++k) {
      term = kron(term, projectors[k][(x >> (part.size() - 1 - k)) & 1]);
    }
    rho += s(x) * term;
  }
  return DensityMatrix{std::move(rho)};
}

}  // namespace

int AmplitudeProfile::num_qubits() const {
  return qubits_from_dim(r.size(), "amplitude profile");
}

AmplitudeProfile make_profile(Eigen::VectorXd r) {
  qubits_from_dim(r.size(), "amplitude profile");
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r(i) < 0.0 || r(i) > 1.0) {
      throw std::invalid_argument("amplitudes must lie in [0, 1]");
    }
  }
  if (std::abs(r.squaredNorm() - 1.0) > 1e-10) {
    throw std::invalid_argument("amplitude squares must sum to 1");
  }
  return AmplitudeProfile{std::move(r)};
}

AmplitudeProfile equal_amplitudes(int num_qubits) {
  const Eigen::Index dim = 1LL << num_qubits;
  return AmplitudeProfile{
      Eigen::VectorXd::Constant(dim, std::sqrt(1.0 / static_cast<double>(dim)))};
}

AmplitudeProfile point_amplitudes(int num_qubits, std::uint64_t index) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(1LL << num_qubits);
  if (index >= static_cast<std::uint64_t>(r.size())) {
    throw std::out_of_range("basis label out of range");
  }
  r(static_cast<Eigen::Index>(index)) = 1.0;
  return AmplitudeProfile{std::move(r)};
}

BasisSpec BasisSpec::computational() {
  return BasisSpec(Kind::Computational, {}, {});
}

BasisSpec BasisSpec::product(std::vector<Eigen::Matrix2cd> factors) {
  if (factors.empty()) {
    throw std::invalid_argument("product basis needs at least one factor");
  }
  for (const auto& f : factors) check_unitary(f, "product basis factor");
  return BasisSpec(Kind::Product, std::move(factors), {});
}

BasisSpec BasisSpec::explicit_basis(Eigen::MatrixXcd unitary) {
  if (unitary.rows() != unitary.cols()) {
    throw std::invalid_argument("explicit basis must be square");
  }
  const int n = qubits_from_dim(unitary.rows(), "explicit basis");
  if (n > kMaxExplicitBasisQubits) {
    throw std::invalid_argument("explicit basis cap exceeded (N > 12)");
  }
  check_unitary(unitary, "explicit basis");
  return BasisSpec(Kind::Explicit, {}, std::move(unitary));
}

int BasisSpec::locked_qubits() const {
  switch (kind_) {
    case Kind::Computational:
      return 0;
    case Kind::Product:
      return static_cast<int>(factors_.size());
    case Kind::Explicit:
      return qubits_from_dim(unitary_.rows(), "explicit basis");
  }
  return 0;
}

EnsembleSpec make_spec(AmplitudeProfile amplitudes, BasisSpec basis) {
  const int n = amplitudes.num_qubits();
  const int locked = basis.locked_qubits();
  if (locked != 0 && locked != n) {
    throw std::invalid_argument("basis and amplitude qubit counts disagree");
  }
  return EnsembleSpec{std::move(amplitudes), std::move(basis)};
}

PureState state_from_phases(const EnsembleSpec& spec,
                            const PhaseVector& phases) {
  const int n = spec.num_qubits();
  if (phases.phases.size() != spec.amplitudes.dim()) {
    throw std::invalid_argument("phase vector length mismatch");
  }
  Eigen::VectorXcd coeffs(spec.amplitudes.dim());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) = std::polar(spec.amplitudes.r(i), phases.phases(i));
  }
  switch (spec.basis.kind()) {
    case BasisSpec::Kind::Computational:
      break;
    case BasisSpec::Kind::Product:
      for (int q = 1; q <= n; ++q) {
        apply_single_qubit(coeffs, spec.basis.factors()[q - 1], q, n);
      }
      break;
    case BasisSpec::Kind::Explicit:
      coeffs = spec.basis.unitary() * coeffs;
      break;
  }
  return PureState{n, std::move(coeffs)};
}

std::pair<PureState, PhaseVector> sample_phase_state(const EnsembleSpec& spec,
                                                     CounterRng& rng) {
  PhaseVector phi;
  phi.phases.resize(spec.amplitudes.dim());
  for (Eigen::Index i = 0; i < phi.phases.size(); ++i) {
    phi.phases(i) = rng.next_angle();
  }
  PureState state = state_from_phases(spec, phi);
  return {std::move(state), std::move(phi)};
}

PureState sample_haar_state(int num_qubits, CounterRng& rng) {
  Eigen::VectorXcd amps(1LL << num_qubits);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    amps(i) = rng.next_complex_normal();
  }
  amps /= amps.norm();
  return PureState{num_qubits, std::move(amps)};
}

double analytic_random_average(int num_qubits, int subsystem_qubits) {
  if (subsystem_qubits < 1 || subsystem_qubits >= num_qubits) {
    throw std::invalid_argument("need 1 <= N_A < N");
  }
  const double da = std::exp2(subsystem_qubits);
  const double db = std::exp2(num_qubits - subsystem_qubits);
  return 1.0 - (da + db) / (std::exp2(num_qubits) + 1.0);
}

DensityMatrix ensemble_density(const EnsembleSpec& spec) {
  const Eigen::MatrixXcd u = materialize_unitary(spec.basis, spec.num_qubits());
  const Eigen::MatrixXcd b = u * spec.amplitudes.r.asDiagonal();
  return DensityMatrix{b * b.adjoint()};
}

double analytic_phase_average(const EnsembleSpec& spec,
                              const SubsystemMask& a) {
  const int n = spec.num_qubits();
  if (a.num_qubits() != n) {
    throw std::invalid_argument("mask does not match the spec");
  }
  if (!a.is_proper()) {
    throw std::invalid_argument("subsystem must be a proper subset");
  }
  const Eigen::VectorXd& r = spec.amplitudes.r;
  const double sum_r4 = r.array().square().square().sum();
  const double ensemble_entropy = 1.0 - sum_r4;  // S_L(Phi), any basis

  double reduced_a, reduced_b;
  double basis_term = 0.0;
  if (spec.basis.is_separable()) {
    reduced_a = 1.0 - purity(separable_reduced_density(spec, a));
    reduced_b = 1.0 - purity(separable_reduced_density(spec, a.complement()));
  } else {
    const DensityMatrix phi = ensemble_density(spec);
    reduced_a = 1.0 - purity(partial_trace(phi, a));
    reduced_b = 1.0 - purity(partial_trace(phi, a.complement()));
    for (Eigen::Index col = 0; col < r.size(); ++col) {
      const double r4 = std::pow(r(col), 4);
      if (r4 == 0.0) continue;
      const PureState u_n{n, spec.basis.unitary().col(col)};
      basis_term += r4 * linear_entropy(u_n, a);
    }
  }
  const double mutual_information = reduced_a + reduced_b - ensemble_entropy;
  return mutual_information - basis_term;
}

double analytic_eqsep_max(int num_qubits, int subsystem_qubits) {
  if (subsystem_qubits < 1 || subsystem_qubits >= num_qubits) {
    throw std::invalid_argument("need 1 <= N_A < N");
  }
  const double da = std::exp2(subsystem_qubits);
  const double db = std::exp2(num_qubits - subsystem_qubits);
  return 1.0 - (da + db - 1.0) / std::exp2(num_qubits);
}

SeparableBound separable_bound(const EnsembleSpec& spec) {
  if (!spec.basis.is_separable()) {
    throw std::invalid_argument("separable bound needs a product-form basis");
  }
  const Eigen::VectorXd& r = spec.amplitudes.r;
  Eigen::Index support = 0;
  double sum_r4 = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r(i) > 0.0) ++support;
    sum_r4 += std::pow(r(i), 4);
  }
  const double cap =
      support == 0 ? 0.0 : 1.0 - 1.0 / static_cast<double>(support);
  return SeparableBound{1.0 - sum_r4, cap};
}

int phase_fourth_moment(int n, int m, int k, int l) {
  const int pairwise = (n == m && k == l ? 1 : 0) + (n == l && m == k ? 1 : 0);
  const int all_equal = (n == m && n == k && n == l) ? 1 : 0;
  return pairwise - all_equal;
}

double volume_law_bound(int num_qubits, int subsystem_qubits) {
  if (subsystem_qubits < 1 || subsystem_qubits >= num_qubits) {
    throw std::invalid_argument("need 1 <= N_A < N");
  }
  const double x = std::exp2(2 * subsystem_qubits - num_qubits) -
                   std::exp2(subsystem_qubits - num_qubits);
  return subsystem_qubits - std::log1p(x) / std::log(2.0);
}

McEstimate time_average_entanglement(const Eigen::VectorXd& energies,
                                     const EnsembleSpec& spec,
                                     const SubsystemMask& a, double t_max,
                                     int n_times, std::uint64_t seed) {
  if (energies.size() != spec.amplitudes.dim()) {
    throw std::invalid_argument("energy vector length must be 2^N");
  }
  if (!a.is_proper() || a.num_qubits() != spec.num_qubits()) {
    throw std::invalid_argument("invalid subsystem for the spec");
  }
  if (n_times < 1 || t_max < 0.0) {
    throw std::invalid_argument("need n_times >= 1 and t_max >= 0");
  }
  CounterRng init_rng(seed, 0);
  PhaseVector phi0;
  phi0.phases.resize(energies.size());
  for (Eigen::Index i = 0; i < phi0.phases.size(); ++i) {
    phi0.phases(i) = init_rng.next_angle();
  }
  RunningStat stat;
  for (int sample = 0; sample < n_times; ++sample) {
    CounterRng rng(seed, static_cast<std::uint64_t>(sample) + 1);
    const double t = t_max * rng.next_double();
    PhaseVector phi;
    phi.phases.resize(energies.size());
    for (Eigen::Index i = 0; i < phi.phases.size(); ++i) {
      double p = std::fmod(phi0.phases(i) - energies(i) * t, kTwoPi);
      if (p < 0.0) p += kTwoPi;
      phi.phases(i) = p;
    }
    stat.add(linear_entropy(state_from_phases(spec, phi), a));
  }
  return stat.estimate(seed);
}

double phase_distance(const PhaseVector& p1, const PhaseVector& p2) {
  if (p1.phases.size() != p2.phases.size()) {
    throw std::invalid_argument("phase vectors differ in length");
  }
  const double dim = static_cast<double>(p1.phases.size());
  return (p1.phases - p2.phases).cwiseAbs().sum() / (kTwoPi * dim);
}

namespace {

void require_eqsep(const EnsembleSpec& spec) {
  if (!spec.basis.is_separable()) {
    throw std::invalid_argument("spec must have a separable basis");
  }
  const Eigen::VectorXd& r = spec.amplitudes.r;
  if ((r.maxCoeff() - r.minCoeff()) > 1e-12) {
    throw std::invalid_argument("spec must have equal amplitudes");
  }
}

}  // namespace

double lipschitz_check(const EnsembleSpec& spec, const SubsystemMask& a,
                       int n_pairs, std::uint64_t seed) {
  require_eqsep(spec);
  const double mean = analytic_eqsep_max(spec.num_qubits(), a.size());
  const double lipschitz = 4.0 * std::sqrt(std::acos(-1.0));
  double worst = -std::numeric_limits<double>::infinity();
  const Eigen::Index dim = spec.amplitudes.dim();
  for (int pair = 0; pair < n_pairs; ++pair) {
    CounterRng rng(seed, static_cast<std::uint64_t>(pair));
    PhaseVector phi, psi;
    phi.phases.resize(dim);
    psi.phases.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) phi.phases(i) = rng.next_angle();
    for (Eigen::Index i = 0; i < dim; ++i) psi.phases(i) = rng.next_angle();
    const double d1 =
        std::abs(linear_entropy(state_from_phases(spec, phi), a) - mean);
    const double d2 =
        std::abs(linear_entropy(state_from_phases(spec, psi), a) - mean);
    const double rhs = lipschitz * std::sqrt(phase_distance(phi, psi));
    worst = std::max(worst, std::abs(d1 - d2) - rhs);
  }
  return worst;
}

double concentration_bound(int num_qubits, double epsilon) {
  const double pi = std::acos(-1.0);
  const double c = 1.0 / (2048.0 * pi * pi);
  return std::exp(-c * std::pow(epsilon, 4) * std::exp2(num_qubits));
}

ConcentrationTable concentration_experiment(int num_qubits,
                                            const SubsystemMask& a,
                                            int n_samples,
                                            const std::vector<double>& eps_grid,
                                            std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  const EnsembleSpec spec =
      make_spec(equal_amplitudes(num_qubits), BasisSpec::computational());
  const double mean = analytic_eqsep_max(num_qubits, a.size());
  const double offset = 2.0 * std::exp2(-num_qubits);

  std::vector<std::uint64_t> exceed(eps_grid.size(), 0);
  RunningStat stat;
  for (int sample = 0; sample < n_samples; ++sample) {
    CounterRng rng(seed, static_cast<std::uint64_t>(sample));
    const auto [state, phases] = sample_phase_state(spec, rng);
    const double value = linear_entropy(state, a);
    stat.add(value);
    const double deviation = std::abs(value - mean);
    for (std::size_t g = 0; g < eps_grid.size(); ++g) {
      if (deviation > offset + eps_grid[g]) ++exceed[g];
    }
  }

  ConcentrationTable table;
  table.n_samples = static_cast<std::uint64_t>(n_samples);
  table.seed = seed;
  table.sigma_empirical = stat.std_dev();
  table.sigma_std_error =
      stat.std_dev() / std::sqrt(2.0 * (static_cast<double>(n_samples) - 1.0));
  table.sigma_cap = std::exp2(-num_qubits);
  for (std::size_t g = 0; g < eps_grid.size(); ++g) {
    const double p =
        static_cast<double>(exceed[g]) / static_cast<double>(n_samples);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    table.rows.push_back(
        {eps_grid[g], p, se, concentration_bound(num_qubits, eps_grid[g])});
  }
  return table;
}

McEstimate mc_phase_average(const EnsembleSpec& spec, const SubsystemMask& a,
                            int n_samples, std::uint64_t seed) {
  RunningStat stat;
  for (int sample = 0; sample < n_samples; ++sample) {
    CounterRng rng(seed, static_cast<std::uint64_t>(sample));
    const auto [state, phases] = sample_phase_state(spec, rng);
    stat.add(linear_entropy(state, a));
  }
  return stat.estimate(seed);
}

McEstimate mc_haar_average(int num_qubits, const SubsystemMask& a,
                           int n_samples, std::uint64_t seed) {
  RunningStat stat;
  for (int sample = 0; sample < n_samples; ++sample) {
    CounterRng rng(seed, static_cast<std::uint64_t>(sample));
    stat.add(linear_entropy(sample_haar_state(num_qubits, rng), a));
  }
  return stat.estimate(seed);
}

}  // namespace phaserand::ensembles
