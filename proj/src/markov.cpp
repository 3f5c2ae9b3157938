#include "phaserand/markov.hpp"

#include "phaserand/circuit.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

namespace phaserand::markov {

namespace {

bool is_0z(Pauli p) { return p == Pauli::I || p == Pauli::Z; }

Pauli negate(Pauli p) {
  switch (p) {
    case Pauli::I: return Pauli::Z;
    case Pauli::Z: return Pauli::I;
    case Pauli::X: return Pauli::Y;
    case Pauli::Y: return Pauli::X;
  }
  throw std::logic_error("unreachable");
}

Pauli letter_at(std::uint64_t code, int site) {  // site is 0-based here
  return static_cast<Pauli>((code >> (2 * site)) & 3ULL);
}

std::uint64_t with_letter(std::uint64_t code, int site, Pauli p) {
  code &= ~(3ULL << (2 * site));
  return code | (static_cast<std::uint64_t>(p) << (2 * site));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace

std::uint64_t pack(const PauliString& q) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    code |= static_cast<std::uint64_t>(q[i]) << (2 * i);
  }
  return code;
}

PauliString unpack(std::uint64_t code, int num_qubits) {
  PauliString q(num_qubits);
  for (int i = 0; i < num_qubits; ++i) {
    q[i] = letter_at(code, i);
  }
  return q;
}

std::string to_string(const PauliString& q) {
  static const char letters[] = "0xyz";
  std::string s;
  s.reserve(q.size());
  for (Pauli p : q) s.push_back(letters[static_cast<int>(p)]);
  return s;
}

std::vector<int> xy_positions(const PauliString& q) {
  std::vector<int> out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == Pauli::X || q[i] == Pauli::Y) {
      out.push_back(static_cast<int>(i) + 1);
    }
  }
  return out;
}

std::vector<int> support(const PauliString& q) {
  std::vector<int> out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] != Pauli::I) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

double PauliDistribution::total() const {
  double sum = 0.0;
  for (const auto& [code, w] : weights) sum += w;
  return sum;
}

PauliDistribution pauli_distribution(const PureState& state) {
  const int n = state.num_qubits;
  if (n > kMaxPauliExpansionQubits) {
    throw std::invalid_argument("Pauli expansion cap exceeded (N > 7)");
  }
  const std::uint64_t dim = 1ULL << n;
  const std::uint64_t n_strings = 1ULL << (2 * n);
  const double norm = std::exp2(-n);

  PauliDistribution dist;
  dist.num_qubits = n;
  for (std::uint64_t code = 0; code < n_strings; ++code) {
    // sigma_q |a> = c_q(a) |a ^ flip>, built letter by letter.
    std::uint64_t flip = 0;
    for (int site = 0; site < n; ++site) {
      const Pauli p = letter_at(code, site);
      if (p == Pauli::X || p == Pauli::Y) {
        flip |= 1ULL << (n - 1 - site);  // site s is qubit s+1
      }
    }
    Complex expectation = 0.0;
    for (std::uint64_t a = 0; a < dim; ++a) {
      Complex factor = 1.0;
      for (int site = 0; site < n; ++site) {
        const int bit = qubit_bit(a, site + 1, n);
        switch (letter_at(code, site)) {
          case Pauli::I:
            break;
          case Pauli::X:
            break;
          case Pauli::Y:
            factor *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
            break;
          case Pauli::Z:
            if (bit) factor = -factor;
            break;
        }
      }
      expectation += std::conj(state.amplitudes(
                         static_cast<Eigen::Index>(a ^ flip))) *
                     factor * state.amplitudes(static_cast<Eigen::Index>(a));
    }
    const double value = expectation.real();
    const double weight = norm * value * value;
    if (weight > 0.0) dist.weights[code] = weight;
  }
  return dist;
}

PauliString step_full_chain(const PauliString& q, CounterRng& rng) {
  const int n = static_cast<int>(q.size());
  if (n < 2) throw std::invalid_argument("chain needs at least two sites");
  const std::uint64_t n_pairs =
      static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::uint64_t k = rng.next_below(n_pairs);
  int site_i = 0, site_j = 0;
  for (int i = 0; i < n - 1; ++i) {
    const std::uint64_t row = static_cast<std::uint64_t>(n - 1 - i);
    if (k < row) {
      site_i = i;
      site_j = i + 1 + static_cast<int>(k);
      break;
    }
    k -= row;
  }
  PauliString out = q;
  const Pauli qi = q[site_i];
  const Pauli qj = q[site_j];
  const bool i_0z = is_0z(qi);
  const bool j_0z = is_0z(qj);
  if (i_0z && j_0z) {
    return out;
  }
  if (i_0z && !j_0z) {
    out[site_i] = negate(qi);
    out[site_j] = rng.next_below(2) ? Pauli::Y : Pauli::X;
    return out;
  }
  if (!i_0z && j_0z) {
    out[site_i] = rng.next_below(2) ? Pauli::Y : Pauli::X;
    out[site_j] = negate(qj);
    return out;
  }
  out[site_i] = rng.next_below(2) ? Pauli::Y : Pauli::X;
  out[site_j] = rng.next_below(2) ? Pauli::Y : Pauli::X;
  return out;
}

PauliDistribution evolve_full_chain(const PauliDistribution& dist, int steps) {
  const int n = dist.num_qubits;
  if (n < 2) throw std::invalid_argument("chain needs at least two sites");
  if (n > kMaxExactChainQubits) {
    throw std::invalid_argument(
        "exact chain evolution cap exceeded (N > 6); sample trajectories");
  }
  if (steps < 0) throw std::invalid_argument("negative step count");

  const std::uint64_t n_strings = 1ULL << (2 * n);
  std::vector<double> current(n_strings, 0.0);
  for (const auto& [code, w] : dist.weights) {
    if (code >= n_strings) throw std::invalid_argument("string out of range");
    current[code] = w;
  }
  const double n_pairs = static_cast<double>(n) * (n - 1) / 2.0;

  std::vector<double> next(n_strings, 0.0);
  for (int step = 0; step < steps; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint64_t code = 0; code < n_strings; ++code) {
      const double w = current[code];
      if (w == 0.0) continue;
      // Pairs with both letters in {0, z} hold the string fixed; group them
      // so the frozen sector is preserved exactly.
      int fixed_pairs = 0;
      for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Pauli qi = letter_at(code, i);
          const Pauli qj = letter_at(code, j);
          if (is_0z(qi) && is_0z(qj)) {
            ++fixed_pairs;
            continue;
          }
          const double share = w / n_pairs;
          if (is_0z(qi)) {  // (0z, xy)
            const std::uint64_t base = with_letter(code, i, negate(qi));
            next[with_letter(base, j, Pauli::X)] += 0.5 * share;
            next[with_letter(base, j, Pauli::Y)] += 0.5 * share;
          } else if (is_0z(qj)) {  // (xy, 0z)
            const std::uint64_t base = with_letter(code, j, negate(qj));
            next[with_letter(base, i, Pauli::X)] += 0.5 * share;
            next[with_letter(base, i, Pauli::Y)] += 0.5 * share;
          } else {  // (xy, xy)
            for (Pauli pi : {Pauli::X, Pauli::Y}) {
              for (Pauli pj : {Pauli::X, Pauli::Y}) {
                next[with_letter(with_letter(code, i, pi), j, pj)] +=
                    0.25 * share;
              }
            }
          }
        }
      }
      next[code] += w * (static_cast<double>(fixed_pairs) / n_pairs);
    }
    current.swap(next);
  }

  PauliDistribution out;
  out.num_qubits = n;
  for (std::uint64_t code = 0; code < n_strings; ++code) {
    if (current[code] != 0.0) out.weights[code] = current[code];
  }
  return out;
}

double frozen_sector_weight(const ensembles::AmplitudeProfile& amps,
                            const PauliString& q) {
  const int n = amps.num_qubits();
  if (static_cast<int>(q.size()) != n) {
    throw std::invalid_argument("string length does not match the profile");
  }
  std::uint64_t z_mask = 0;
  for (int site = 0; site < n; ++site) {
    if (q[site] == Pauli::X || q[site] == Pauli::Y) {
      throw std::invalid_argument("string is not in the frozen sector");
    }
    if (q[site] == Pauli::Z) z_mask |= 1ULL << (n - 1 - site);
  }
  const std::uint64_t dim = 1ULL << n;
  double signed_sum = 0.0;
  for (std::uint64_t a = 0; a < dim; ++a) {
    const double r2 = amps.r(static_cast<Eigen::Index>(a)) *
                      amps.r(static_cast<Eigen::Index>(a));
    signed_sum += (std::popcount(a & z_mask) % 2 == 0) ? r2 : -r2;
  }
  return std::exp2(-n) * signed_sum * signed_sum;
}

double tv_distance(const PauliDistribution& p, const PauliDistribution& q) {
  if (p.num_qubits != q.num_qubits) {
    throw std::invalid_argument("distributions differ in length");
  }
  double l1 = 0.0;
  auto it_p = p.weights.begin();
  auto it_q = q.weights.begin();
  while (it_p != p.weights.end() || it_q != q.weights.end()) {
    if (it_q == q.weights.end() ||
        (it_p != p.weights.end() && it_p->first < it_q->first)) {
      l1 += std::abs(it_p->second);
      ++it_p;
    } else if (it_p == p.weights.end() || it_q->first < it_p->first) {
      l1 += std::abs(it_q->second);
      ++it_q;
    } else {
      l1 += std::abs(it_p->second - it_q->second);
      ++it_p;
      ++it_q;
    }
  }
  return 0.5 * l1;
}

ReducedChain reduced_transition(int num_qubits, int gamma) {
  if (gamma < 1 || gamma > num_qubits) {
    throw std::invalid_argument("need 1 <= gamma <= N (gamma = 0 is frozen)");
  }
  ReducedChain chain;
  chain.num_qubits = num_qubits;
  chain.gamma = gamma;
  const int n_states = chain.n_states();
  chain.denominator =
      static_cast<std::int64_t>(num_qubits) * (num_qubits - 1);
  chain.numerators =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          n_states, n_states);

  if (n_states == 1) {
    chain.denominator = 1;
    chain.numerators(0, 0) = 1;
  } else {
    for (int idx = 0; idx < n_states; ++idx) {
      const std::int64_t i = chain.state_value(idx);
      const std::int64_t n = num_qubits;
      const std::int64_t g = gamma;
      if (idx + 1 < n_states) {
        chain.numerators(idx, idx + 1) = 2 * g * (n - i);
      }
      if (idx > 0) {
        chain.numerators(idx, idx - 1) = 2 * g * (i - g);
      }
      chain.numerators(idx, idx) =
          g * (g - 1) + (n - g) * (n - g - 1);
    }
  }

  chain.transition.resize(n_states, n_states);
  for (int i = 0; i < n_states; ++i) {
    for (int j = 0; j < n_states; ++j) {
      chain.transition(i, j) = static_cast<double>(chain.numerators(i, j)) /
                               static_cast<double>(chain.denominator);
    }
  }

  chain.stationary.resize(n_states);
  chain.stationary_binomials.resize(n_states);
  const double scale = std::exp2(-(num_qubits - gamma));
  for (int idx = 0; idx < n_states; ++idx) {
    chain.stationary_binomials[idx] = binomial(num_qubits - gamma, idx);
    chain.stationary(idx) =
        scale * static_cast<double>(chain.stationary_binomials[idx]);
  }
  return chain;
}

Eigen::VectorXd reduced_stationary(const ReducedChain& chain,
                                   double sector_weight) {
  if (sector_weight < 0.0) {
    throw std::invalid_argument("sector weight must be nonnegative");
  }
  return sector_weight * chain.stationary;
}

double detailed_balance_check(const ReducedChain& chain,
                              const Eigen::VectorXd& stationary) {
  const int n = chain.n_states();
  if (stationary.size() != n) {
    throw std::invalid_argument("stationary vector length mismatch");
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double forward = stationary(i) * chain.transition(i, j);
      const double backward = stationary(j) * chain.transition(j, i);
      worst = std::max(worst, std::abs(forward - backward));
    }
  }
  return worst;
}

double detailed_balance_check(const ReducedChain& chain) {
  return detailed_balance_check(chain, chain.stationary);
}

double spectral_gap(const ReducedChain& chain) {
  const int n = chain.n_states();
  if (n == 1) return 1.0;
  // Reversibility makes D^{1/2} P D^{-1/2} symmetric with the same spectrum.
  Eigen::VectorXd sqrt_pi = chain.stationary.cwiseSqrt();
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sym(i, j) = sqrt_pi(i) * chain.transition(i, j) / sqrt_pi(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("transition matrix eigensolver failed");
  }
  const Eigen::VectorXd evals = solver.eigenvalues();  // ascending
  return 1.0 - evals(n - 2);
}

PathBound canonical_path_bound(const ReducedChain& chain) {
  const int n = chain.n_states();
  if (n == 1) return PathBound{0.0, 1.0};
  if (chain.stationary.minCoeff() <= 0.0) {
    throw std::invalid_argument("stationary vector has a zero entry");
  }
  // On the line graph the canonical path between two states is the unique
  // monotone one, so edge (i, i+1) carries every pair straddling it.
  Eigen::VectorXd prefix(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += chain.stationary(i);
    prefix(i) = acc;
  }
  const double total = prefix(n - 1);
  double rho = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double q_edge = chain.stationary(i) * chain.transition(i, i + 1);
    if (q_edge <= 0.0) {
      throw std::invalid_argument("chain is not irreducible");
    }
    const double crossing = prefix(i) * (total - prefix(i));
    rho = std::max(rho, crossing / q_edge);
  }
  return PathBound{rho, 1.0 / (8.0 * rho * rho)};
}

double limit_purity(const ensembles::AmplitudeProfile& amps,
                    const SubsystemMask& a) {
  const int n = amps.num_qubits();
  if (a.num_qubits() != n || !a.is_proper()) {
    throw std::invalid_argument("invalid subsystem for the profile");
  }
  const int n_a = a.size();
  // Frozen part: strings of 0/z supported inside A, each carrying its
  // time-invariant weight; the 2^{N_Abar} prefactor against the 2^{-N}
  // inside the weight leaves 2^{-N_A} (sum_a r^2 sign)^2 per z-pattern.
  double frozen_part = 0.0;
  const std::uint64_t n_patterns = 1ULL << n_a;
  for (std::uint64_t pattern = 0; pattern < n_patterns; ++pattern) {
    PauliString q(n, Pauli::I);
    for (int k = 0; k < n_a; ++k) {
      if ((pattern >> k) & 1ULL) {
        q[a.qubits()[k] - 1] = Pauli::Z;
      }
    }
    frozen_part += frozen_sector_weight(amps, q);
  }
  frozen_part *= std::exp2(n - n_a);

  // Walking part: sector Gamma inside A contributes
  // 2^{N_Abar} * 2^{N_A - N} kappa = kappa per nonempty Gamma subset of A.
  double walking_part = 0.0;
  for (std::uint64_t pattern = 1; pattern < n_patterns; ++pattern) {
    std::uint64_t xor_mask = 0;
    for (int k = 0; k < n_a; ++k) {
      if ((pattern >> k) & 1ULL) {
        xor_mask |= 1ULL << (n - a.qubits()[k]);
      }
    }
    walking_part += circuit::kappa_masked(amps, xor_mask);
  }
  return frozen_part + walking_part;
}

namespace {

double tv_to_stationary(const Eigen::VectorXd& dist,
                        const Eigen::VectorXd& stationary) {
  return 0.5 * (dist - stationary).cwiseAbs().sum();
}

}  // namespace

int empirical_mixing_time_from(const ReducedChain& chain, int start_state,
                               double epsilon, int max_steps) {
  const int n = chain.n_states();
  const int index = start_state - chain.gamma;
  if (index < 0 || index >= n) {
    throw std::out_of_range("start state outside {gamma, ..., N}");
  }
  Eigen::VectorXd dist = Eigen::VectorXd::Zero(n);
  dist(index) = 1.0;
  for (int t = 0; t <= max_steps; ++t) {
    if (tv_to_stationary(dist, chain.stationary) <= epsilon) return t;
    dist = chain.transition.transpose() * dist;
  }
  throw std::runtime_error("chain did not mix within the step limit");
}

int empirical_mixing_time(const ReducedChain& chain, double epsilon,
                          int max_steps) {
  int worst = 0;
  for (int idx = 0; idx < chain.n_states(); ++idx) {
    worst = std::max(worst, empirical_mixing_time_from(
                                chain, chain.state_value(idx), epsilon,
                                max_steps));
  }
  return worst;
}

std::string chain_to_json(const ReducedChain& chain) {
  std::ostringstream out;
  out << "{\"N\":" << chain.num_qubits << ",\"gamma\":" << chain.gamma
      << ",\"transitions\":[";
  bool first = true;
  for (int i = 0; i < chain.n_states(); ++i) {
    for (int j = 0; j < chain.n_states(); ++j) {
      if (chain.numerators(i, j) == 0) continue;
      if (!first) out << ',';
      first = false;
      out << '[' << chain.state_value(i) << ',' << chain.state_value(j) << ','
          << chain.numerators(i, j) << ',' << chain.denominator << ']';
    }
  }
  out << "],\"stationary\":[";
  char buffer[64];
  for (int i = 0; i < chain.n_states(); ++i) {
    if (i > 0) out << ',';
    std::snprintf(buffer, sizeof(buffer), "%.17g", chain.stationary(i));
    out << buffer;
  }
  out << "]}";
  return out.str();
}

}  // namespace phaserand::markov
