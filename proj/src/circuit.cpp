#include "phaserand/circuit.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

namespace phaserand::circuit {

namespace {

constexpr std::uint64_t kGateStream = 0x676174657300ULL;

// Decode a flat index in [0, N(N-1)/2) into the pair (i, j), i < j.
std::pair<int, int> unrank_pair(std::uint64_t k, int num_qubits) {
  for (int i = 1; i < num_qubits; ++i) {
    const std::uint64_t row = static_cast<std::uint64_t>(num_qubits - i);
    if (k < row) return {i, i + 1 + static_cast<int>(k)};
    k -= row;
  }
  throw std::logic_error("pair index out of range");
}

// sum over label groups with equal bits on `part` of (sum of r^2)^2.
double grouped_square_sum(const ensembles::AmplitudeProfile& amps,
                          const SubsystemMask& part) {
  const int n = part.num_qubits();
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
  return s.squaredNorm();
}

}  // namespace

GateRecord sample_gate(int num_qubits, int step, CounterRng& rng) {
  if (num_qubits < 2) {
    throw std::invalid_argument("circuit needs at least two qubits");
  }
  const std::uint64_t n_pairs =
      static_cast<std::uint64_t>(num_qubits) * (num_qubits - 1) / 2;
  const auto [i, j] = unrank_pair(rng.next_below(n_pairs), num_qubits);
  const double alpha = rng.next_angle();
  const double beta = rng.next_angle();
  return GateRecord{step, i, j, alpha, beta};
}

void apply_gate(PureState& state, const GateRecord& gate) {
  const int n = state.num_qubits;
  if (gate.qubit_i < 1 || gate.qubit_i > n || gate.qubit_j < 1 ||
      gate.qubit_j > n || gate.qubit_i == gate.qubit_j) {
    throw std::out_of_range("gate qubits out of range");
  }
  // Diagonal factor by the (a_i, a_j) bit pattern.
  const Complex f01 = std::polar(1.0, gate.beta);
  const Complex f10 = std::polar(1.0, gate.alpha);
  const Complex f11 = -std::polar(1.0, gate.alpha + gate.beta);
  const std::uint64_t bit_i = 1ULL << (n - gate.qubit_i);
  const std::uint64_t bit_j = 1ULL << (n - gate.qubit_j);
  const std::uint64_t dim = 1ULL << n;
  for (std::uint64_t a = 0; a < dim; ++a) {
    const bool ai = (a & bit_i) != 0;
    const bool aj = (a & bit_j) != 0;
    if (!ai && !aj) continue;
    const Complex f = ai ? (aj ? f11 : f10) : f01;
    state.amplitudes(static_cast<Eigen::Index>(a)) *= f;
  }
}

RunResult run_circuit(const PureState& initial, int t_steps,
                      const SubsystemMask& a, int record_every,
                      std::uint64_t seed) {
  if (t_steps < 0) throw std::invalid_argument("negative iteration count");
  if (a.num_qubits() != initial.num_qubits || !a.is_proper()) {
    throw std::invalid_argument("invalid subsystem for the state");
  }
  if (record_every <= 0) record_every = initial.num_qubits;

  RunResult result;
  result.instance.num_qubits = initial.num_qubits;
  result.instance.seed = seed;
  result.final_state = initial;

  CounterRng rng(seed, kGateStream);
  result.trajectory.steps.push_back(0);
  result.trajectory.values.push_back(linear_entropy(result.final_state, a));
  for (int t = 1; t <= t_steps; ++t) {
    GateRecord gate = sample_gate(initial.num_qubits, t, rng);
    apply_gate(result.final_state, gate);
    result.instance.gates.push_back(gate);
    if (t % record_every == 0 || t == t_steps) {
      result.trajectory.steps.push_back(t);
      result.trajectory.values.push_back(linear_entropy(result.final_state, a));
    }
  }
  return result;
}

double expected_entropy_limit(const ensembles::AmplitudeProfile& amps,
                              const SubsystemMask& a) {
  if (a.num_qubits() != amps.num_qubits() || !a.is_proper()) {
    throw std::invalid_argument("invalid subsystem for the profile");
  }
  const double sum_r4 = amps.r.array().square().square().sum();
  return 1.0 - grouped_square_sum(amps, a) -
         grouped_square_sum(amps, a.complement()) + sum_r4;
}

double kappa_masked(const ensembles::AmplitudeProfile& amps,
                    std::uint64_t xor_mask) {
  if (xor_mask == 0) return 0.0;  // a != b has no solutions on Gamma = {}
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.dim());
  if (xor_mask >= dim) throw std::invalid_argument("sector mask out of range");
  double acc = 0.0;
  for (std::uint64_t label = 0; label < dim; ++label) {
    const double ra = amps.r(static_cast<Eigen::Index>(label));
    const double rb = amps.r(static_cast<Eigen::Index>(label ^ xor_mask));
    acc += ra * ra * rb * rb;
  }
  return acc;
}

double kappa(const ensembles::AmplitudeProfile& amps,
             const std::vector<int>& gamma) {
  const int n = amps.num_qubits();
  std::uint64_t mask = 0;
  for (int q : gamma) {
    if (q < 1 || q > n) throw std::invalid_argument("sector qubit out of range");
    mask |= 1ULL << (n - q);
  }
  return kappa_masked(amps, mask);
}

double mixing_time_bound(const ensembles::AmplitudeProfile& amps,
                         double epsilon, int num_qubits) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (amps.num_qubits() != num_qubits) {
    throw std::invalid_argument("profile does not match qubit count");
  }
  if (num_qubits > 16) {
    // The sector maximum enumerates all 2^N - 1 XOR masks at O(2^N) each.
    throw std::invalid_argument("mixing bound enumeration capped at N <= 16");
  }
  const double n = static_cast<double>(num_qubits);
  const double dim = std::exp2(num_qubits);
  double bound = 0.0;
  const std::uint64_t n_masks = 1ULL << num_qubits;
  for (std::uint64_t mask = 1; mask < n_masks; ++mask) {
    const int gamma = std::popcount(mask);
    if (gamma == num_qubits) continue;  // one-state chain, already stationary
    const double sector_weight = kappa_masked(amps, mask);
    if (sector_weight <= 0.0) continue;
    const double g = static_cast<double>(gamma);
    const double factor = n * (n - 1.0) / (2.0 * g * (n - g)) *
                          std::exp2(num_qubits - gamma) * sector_weight;
    const double sector_bound =
        factor * factor *
        (n - g - std::log(epsilon * sector_weight / dim));
    bound = std::max(bound, sector_bound);
  }
  return bound;
}

McEstimate estimate_expected_entropy(const ensembles::AmplitudeProfile& amps,
                                     const SubsystemMask& a, int t_steps,
                                     int n_runs, std::uint64_t seed) {
  if (n_runs < 1) throw std::invalid_argument("need at least one run");
  const int n = amps.num_qubits();
  const ensembles::EnsembleSpec spec =
      ensembles::make_spec(amps, ensembles::BasisSpec::computational());
  RunningStat stat;
  for (int run = 0; run < n_runs; ++run) {
    CounterRng input_rng(seed, 2ULL * static_cast<std::uint64_t>(run));
    auto [state, phases] = ensembles::sample_phase_state(spec, input_rng);
    CounterRng gate_rng(seed, 2ULL * static_cast<std::uint64_t>(run) + 1ULL);
    for (int t = 1; t <= t_steps; ++t) {
      apply_gate(state, sample_gate(n, t, gate_rng));
    }
    stat.add(linear_entropy(state, a));
  }
  return stat.estimate(seed);
}

std::string serialize_instance(const CircuitInstance& instance) {
  std::ostringstream out;
  out << instance.num_qubits << ' ' << instance.gates.size() << ' '
      << instance.seed << '\n';
  char buffer[128];
  for (const GateRecord& g : instance.gates) {
    std::snprintf(buffer, sizeof(buffer), "%d %d %d %.17g %.17g\n", g.step,
                  g.qubit_i, g.qubit_j, g.alpha, g.beta);
    out << buffer;
  }
  return out.str();
}

CircuitInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  CircuitInstance instance;
  std::size_t n_gates = 0;
  if (!(in >> instance.num_qubits >> n_gates >> instance.seed)) {
    throw std::invalid_argument("malformed circuit header");
  }
  if (instance.num_qubits < 2) {
    throw std::invalid_argument("circuit needs at least two qubits");
  }
  instance.gates.reserve(n_gates);
  for (std::size_t k = 0; k < n_gates; ++k) {
    GateRecord g{};
    if (!(in >> g.step >> g.qubit_i >> g.qubit_j >> g.alpha >> g.beta)) {
      throw std::invalid_argument("truncated circuit instance");
    }
    if (g.step != static_cast<int>(k) + 1) {
      throw std::invalid_argument("gate steps must be contiguous from 1");
    }
    instance.gates.push_back(g);
  }
  return instance;
}

PureState replay_instance(const PureState& initial,
                          const CircuitInstance& instance) {
  if (initial.num_qubits != instance.num_qubits) {
    throw std::invalid_argument("initial state does not match the instance");
  }
  PureState state = initial;
  for (const GateRecord& g : instance.gates) {
    apply_gate(state, g);
  }
  return state;
}

}  // namespace phaserand::circuit
