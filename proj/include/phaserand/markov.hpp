#pragma once

#include "phaserand/ensembles.hpp"
#include "phaserand/rng.hpp"
#include "phaserand/state.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace phaserand::markov {

inline constexpr int kMaxExactChainQubits = 6;    // exact 4^N evolution
inline constexpr int kMaxPauliExpansionQubits = 7;  // 4^N weight table

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Pauli string q_1 ... q_N; site i lives at index i-1.
using PauliString = std::vector<Pauli>;

// Packed code with site i at bits 2(i-1), two bits per site.
std::uint64_t pack(const PauliString& q);
PauliString unpack(std::uint64_t code, int num_qubits);
std::string to_string(const PauliString& q);  // letters from "0xyz"

// X(q): 1-based positions carrying x or y (the sector label Gamma).
std::vector<int> xy_positions(const PauliString& q);
// chi(q): 1-based positions of all non-identity letters.
std::vector<int> support(const PauliString& q);

// Probability weights xi^2(q) = 2^{-N} <phi|sigma_q|phi>^2.
struct PauliDistribution {
  int num_qubits = 0;
  std::map<std::uint64_t, double> weights;

  double total() const;
};

// Full 4^N expansion of a pure state; requires N <= 7.
PauliDistribution pauli_distribution(const PureState& state);

// One Markov step of the full chain M: a uniform unordered pair (i, j) and
// the (q_i, q_j) transition row.
PauliString step_full_chain(const PauliString& q, CounterRng& rng);

// Exact application of the averaged transition operator; requires N <= 6.
PauliDistribution evolve_full_chain(const PauliDistribution& dist, int steps);

// Time-invariant weight of q in the frozen sector S({}):
// 2^{-N} (sum_a r_a^2 prod_{i: q_i = z} (1 - 2 a_i))^2.
double frozen_sector_weight(const ensembles::AmplitudeProfile& amps,
                            const PauliString& q);

double tv_distance(const PauliDistribution& p, const PauliDistribution& q);

// Drunkard's walk of sector Gamma on the support sizes {gamma, ..., N}.
// Transition entries are exact rationals over N(N-1); `stationary` is the
// binomial law normalized to total mass 1 (sector weight kappa = 1).
struct ReducedChain {
  int num_qubits = 0;
  int gamma = 0;
  Eigen::MatrixXd transition;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> numerators;
  std::int64_t denominator = 1;
  Eigen::VectorXd stationary;
  std::vector<std::uint64_t> stationary_binomials;  // C(N-gamma, i-gamma)

  int n_states() const { return num_qubits - gamma + 1; }
  int state_value(int index) const { return gamma + index; }
};

// Transition law of the reduced walk; requires 1 <= gamma <= N.
ReducedChain reduced_transition(int num_qubits, int gamma);

// Stationary vector scaled by the sector weight kappa^{(Gamma)}:
// Pi(i) = 2^{-(N-gamma)} C(N-gamma, i-gamma) kappa.
Eigen::VectorXd reduced_stationary(const ReducedChain& chain,
                                   double sector_weight);

// Max over edges of |Pi(i) P(i,j) - Pi(j) P(j,i)|.
double detailed_balance_check(const ReducedChain& chain);
double detailed_balance_check(const ReducedChain& chain,
                              const Eigen::VectorXd& stationary);

// eta = 1 - lambda_2 with eigenvalues sorted in decreasing order;
// a one-state chain has eta = 1 by convention.
double spectral_gap(const ReducedChain& chain);

struct PathBound {
  double rho;              // worst edge congestion
  double gap_lower_bound;  // 1 / (8 rho^2); 1 for a one-state chain
};

// Canonical-path congestion on the line graph (unique monotone paths).
PathBound canonical_path_bound(const ReducedChain& chain);

// lim_T E[tr (phi_A^{(T)})^2], assembled from the frozen-sector weights and
// the per-sector stationary masses; equals 1 - expected_entropy_limit.
double limit_purity(const ensembles::AmplitudeProfile& amps,
                    const SubsystemMask& a);

// Smallest t with TV distance to the stationary law <= epsilon from the
// given start (state value, gamma..N), by exact vector iteration.
int empirical_mixing_time_from(const ReducedChain& chain, int start_state,
                               double epsilon, int max_steps = 1000000);
// Worst case over all start states.
int empirical_mixing_time(const ReducedChain& chain, double epsilon,
                          int max_steps = 1000000);

// {"N":..,"gamma":..,"transitions":[[i,j,num,den],...],"stationary":[...]}
// with i, j the state values and `stationary` the kappa = 1 law.
std::string chain_to_json(const ReducedChain& chain);

}  // namespace phaserand::markov
