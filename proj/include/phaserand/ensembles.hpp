#pragma once

#include "phaserand/rng.hpp"
#include "phaserand/state.hpp"
#include "phaserand/statistics.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace phaserand::ensembles {

// Largest N for which a full 2^N x 2^N basis unitary is materialized.
inline constexpr int kMaxExplicitBasisQubits = 12;

// Fixed amplitude profile {r_n}: nonnegative, sum of squares 1.
struct AmplitudeProfile {
  Eigen::VectorXd r;

  int num_qubits() const;
  Eigen::Index dim() const { return r.size(); }
};

AmplitudeProfile make_profile(Eigen::VectorXd r);
AmplitudeProfile equal_amplitudes(int num_qubits);
// All weight on one basis element.
AmplitudeProfile point_amplitudes(int num_qubits, std::uint64_t index);

// Expansion basis {|u_n>}: computational, a tensor product of per-qubit 2x2
// unitaries, or an explicit 2^N x 2^N unitary.
class BasisSpec {
 public:
  enum class Kind { Computational, Product, Explicit };

  static BasisSpec computational();
  static BasisSpec product(std::vector<Eigen::Matrix2cd> factors);
  static BasisSpec explicit_basis(Eigen::MatrixXcd unitary);

  Kind kind() const { return kind_; }
  bool is_separable() const { return kind_ != Kind::Explicit; }
  const std::vector<Eigen::Matrix2cd>& factors() const { return factors_; }
  const Eigen::MatrixXcd& unitary() const { return unitary_; }

  // Number of qubits the basis fixes; 0 for computational (any N).
  int locked_qubits() const;

 private:
  BasisSpec(Kind kind, std::vector<Eigen::Matrix2cd> factors,
            Eigen::MatrixXcd unitary)
      : kind_(kind), factors_(std::move(factors)), unitary_(std::move(unitary)) {}

  Kind kind_;
  std::vector<Eigen::Matrix2cd> factors_;
  Eigen::MatrixXcd unitary_;
};

struct EnsembleSpec {
  AmplitudeProfile amplitudes;
  BasisSpec basis;

  int num_qubits() const { return amplitudes.num_qubits(); }
};

EnsembleSpec make_spec(AmplitudeProfile amplitudes, BasisSpec basis);

// Phase vector on the 2^N basis labels, entries in [0, 2*pi).
struct PhaseVector {
  Eigen::VectorXd phases;
};

// |phi> = sum_n r_n e^{i phi_n} |u_n>.
PureState state_from_phases(const EnsembleSpec& spec, const PhaseVector& phases);

std::pair<PureState, PhaseVector> sample_phase_state(const EnsembleSpec& spec,
                                                     CounterRng& rng);

// Normalized vector of i.i.d. standard complex Gaussians.
PureState sample_haar_state(int num_qubits, CounterRng& rng);

// <E_L^{(A)}> over Haar states: 1 - (2^{N_A} + 2^{N-N_A}) / (2^N + 1).
double analytic_random_average(int num_qubits, int subsystem_qubits);

// Ensemble density matrix Phi = sum_n r_n^2 |u_n><u_n|.
DensityMatrix ensemble_density(const EnsembleSpec& spec);

// <E_L^{(A)}> over the phase ensemble:
// I_L^{(A)}(Phi) - sum_n r_n^4 E_L^{(A)}(|u_n>), with I_L the linear-entropy
// mutual information.
double analytic_phase_average(const EnsembleSpec& spec, const SubsystemMask& a);

// Equal-amplitude separable-basis maximum: 1 - (2^{N_A}+2^{N-N_A}-1)/2^N.
double analytic_eqsep_max(int num_qubits, int subsystem_qubits);

struct SeparableBound {
  double ensemble_entropy;  // S_L(Phi^sep) = 1 - sum r^4
  double support_cap;       // 1 - 1/R with R the support size
};

// Upper bound on the separable-basis average; basis must be product-form.
SeparableBound separable_bound(const EnsembleSpec& spec);

// Integral of e^{i(phi_n - phi_m + phi_k - phi_l)} over uniform phases:
// delta_nm delta_kl + delta_nl delta_mk - delta_nm delta_nk delta_nl.
int phase_fourth_moment(int n, int m, int k, int l);

// Long-time-average von Neumann entropy lower bound for equal-amplitude
// separable-eigenbasis dynamics: N_A - log2(1 + 2^{2N_A-N} - 2^{N_A-N}).
double volume_law_bound(int num_qubits, int subsystem_qubits);

// Mean E_L^{(A)} of |phi(t)> with phases phi0_n - e_n t over n_times uniform
// t in [0, t_max]; phi0 is drawn once from the seed.
McEstimate time_average_entanglement(const Eigen::VectorXd& energies,
                                     const EnsembleSpec& spec,
                                     const SubsystemMask& a, double t_max,
                                     int n_times, std::uint64_t seed);

// d(phi, phi') = (1/2pi) sum_a |phi_a - phi'_a| / 2^N.
double phase_distance(const PhaseVector& p1, const PhaseVector& p2);

// Max over random pairs of |dE_L(phi) - dE_L(phi')| - 4 sqrt(pi) sqrt(d);
// nonpositive when the Lipschitz estimate holds. Spec must be equal-amplitude
// with a separable basis.
double lipschitz_check(const EnsembleSpec& spec, const SubsystemMask& a,
                       int n_pairs, std::uint64_t seed);

double concentration_bound(int num_qubits, double epsilon);

struct ConcentrationRow {
  double epsilon;
  double empirical_tail;
  double tail_std_error;
  double bound;
};

struct ConcentrationTable {
  std::vector<ConcentrationRow> rows;
  double sigma_empirical = 0.0;
  double sigma_std_error = 0.0;  // ~ sigma / sqrt(2 (n-1))
  double sigma_cap = 0.0;        // 2^{-N}
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline const std::vector<double> kDefaultEpsilonGrid = {0.02, 0.05, 0.1, 0.2,
                                                        0.3};

// Tail frequencies of dE_L = |E_L - <E_L>| over equal-amplitude
// computational-basis samples against the e^{-c eps^4 2^N} bound,
// c = 1/(2^11 pi^2); dE_L is measured against analytic_eqsep_max.
ConcentrationTable concentration_experiment(int num_qubits,
                                            const SubsystemMask& a,
                                            int n_samples,
                                            const std::vector<double>& eps_grid,
                                            std::uint64_t seed);

// Sample-mean E_L^{(A)} over the phase ensemble / Haar states; sample i draws
// from stream i of the seed.
McEstimate mc_phase_average(const EnsembleSpec& spec, const SubsystemMask& a,
                            int n_samples, std::uint64_t seed);
McEstimate mc_haar_average(int num_qubits, const SubsystemMask& a,
                           int n_samples, std::uint64_t seed);

}  // namespace phaserand::ensembles
