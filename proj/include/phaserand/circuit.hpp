#pragma once

#include "phaserand/ensembles.hpp"
#include "phaserand/rng.hpp"
#include "phaserand/state.hpp"
#include "phaserand/statistics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phaserand::circuit {

// One iteration W_t = CZ_{ij} P_i(alpha) P_j(beta); diagonal in the
// computational basis. Pairs are stored with i < j (CZ is symmetric and the
// two angles are i.i.d., so the ordered and unordered schemes coincide).
struct GateRecord {
  int step;
  int qubit_i;
  int qubit_j;
  double alpha;
  double beta;
};

struct CircuitInstance {
  int num_qubits = 0;
  std::vector<GateRecord> gates;
  std::uint64_t seed = 0;
};

struct Trajectory {
  std::vector<int> steps;
  std::vector<double> values;  // E_L^{(A)} at the listed steps
};

// Uniform unordered pair, angles i.i.d. uniform on [0, 2*pi).
GateRecord sample_gate(int num_qubits, int step, CounterRng& rng);

// Multiplies each amplitude by e^{i(alpha a_i + beta a_j)} (-1)^{a_i a_j}.
void apply_gate(PureState& state, const GateRecord& gate);

struct RunResult {
  Trajectory trajectory;
  CircuitInstance instance;
  PureState final_state;
};

// Runs T iterations from `initial` (computational-basis amplitudes), drawing
// gates from the seed's gate stream; E_L is recorded at step 0, every
// `record_every` steps (default N when 0), and at T.
RunResult run_circuit(const PureState& initial, int t_steps,
                      const SubsystemMask& a, int record_every,
                      std::uint64_t seed);

// Long-iteration limit of E[E_L^{(A)}] under the diagonal circuit:
// 1 - sum_{a,b} r_a^2 r_b^2 (prod_{i in A} delta + prod_{i in A-bar} delta)
//   + sum_a r_a^4, evaluated by grouping labels on each side of the cut.
double expected_entropy_limit(const ensembles::AmplitudeProfile& amps,
                              const SubsystemMask& a);

// kappa^{(Gamma)} = sum_{a != b} r_a^2 r_b^2 over label pairs differing
// exactly on Gamma. `gamma` holds 1-based qubit positions.
double kappa(const ensembles::AmplitudeProfile& amps,
             const std::vector<int>& gamma);
// Same with Gamma encoded by the amplitude-label XOR mask.
double kappa_masked(const ensembles::AmplitudeProfile& amps,
                    std::uint64_t xor_mask);

// Upper bound on the iterations needed for E[E_L] to reach the limit
// value within epsilon: max over sectors of
// [N(N-1)/(2 gamma (N-gamma)) 2^{N-gamma} kappa]^2
//   * [N - gamma - log(eps kappa / 2^N)]  (natural log).
// Sectors with kappa = 0 and the gamma = N sector contribute 0.
double mixing_time_bound(const ensembles::AmplitudeProfile& amps,
                         double epsilon, int num_qubits);

// Mean E_L after T iterations over n_runs circuit instances; input phases are
// resampled each run, amplitudes fixed.
McEstimate estimate_expected_entropy(const ensembles::AmplitudeProfile& amps,
                                     const SubsystemMask& a, int t_steps,
                                     int n_runs, std::uint64_t seed);

// Line-oriented text format: header "N T seed", then one gate per line as
// "t i j alpha beta" with angles at 17 significant digits. Replaying a parsed
// instance reproduces the final state bit for bit.
std::string serialize_instance(const CircuitInstance& instance);
CircuitInstance parse_instance(const std::string& text);
PureState replay_instance(const PureState& initial,
                          const CircuitInstance& instance);

}  // namespace phaserand::circuit
