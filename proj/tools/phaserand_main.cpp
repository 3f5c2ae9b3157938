// Experiment runner for the phase-random state library. Subcommands:
//   analytic | sample | circuit | markov | thermal | concentration
// Tabular output is CSV (default) with a header row and a trailing
// "# config_hash=... seed=..." metadata comment; --format json emits a
// single record instead. Exit codes: 0 ok, 2 config error, 1 numerical
// failure.

#include "phaserand/circuit.hpp"
#include "phaserand/ensembles.hpp"
#include "phaserand/markov.hpp"
#include "phaserand/state.hpp"
#include "phaserand/thermal.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace phaserand;

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t hash = 0xcbf29ce484222325ULL) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return buffer;
}

std::string state_hash(const PureState& state) {
  return hex64(fnv1a(state.amplitudes.data(),
                     sizeof(Complex) * static_cast<std::size_t>(state.dim())));
}

// Run record: resolved config, named outputs, wall-clock duration.
class ResultRecord {
 public:
  ResultRecord(std::string experiment, json config)
      : start_(std::chrono::steady_clock::now()),
        experiment_(std::move(experiment)),
        config_(std::move(config)) {}

  const json& config() const { return config_; }
  std::string config_hash() const { return hex64(fnv1a_of_config()); }

  void set_result(const std::string& key, json value) {
    results_[key] = std::move(value);
  }

  json to_json() const {
    json record;
    record["experiment"] = experiment_;
    record["config"] = config_;
    record["config_hash"] = config_hash();
    record["results"] = results_;
    record["duration_s"] = elapsed();
    return record;
  }

  std::string metadata_comment() const {
    return "# config_hash=" + config_hash() +
           " seed=" + std::to_string(config_.value("seed", 0ULL));
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  std::uint64_t fnv1a_of_config() const {
    const std::string dump = config_.dump();
    return fnv1a(dump.data(), dump.size());
  }

  std::chrono::steady_clock::time_point start_;
  std::string experiment_;
  json config_;
  json results_;
};

struct OutputOptions {
  std::string path;    // empty = stdout
  std::string format = "csv";
};

void write_text(const OutputOptions& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out.path);
  if (!file) {
    throw std::invalid_argument("cannot open output file " + out.path);
  }
  file << text;
}

void emit(const OutputOptions& out, const ResultRecord& record,
          const std::string& csv_body) {
  if (out.format == "json") {
    write_text(out, record.to_json().dump(2) + "\n");
  } else {
    write_text(out, csv_body + record.metadata_comment() + "\n");
  }
}

std::vector<int> parse_subsystem(const std::string& text) {
  std::vector<int> qubits;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    qubits.push_back(std::stoi(item));
  }
  if (qubits.empty()) {
    throw std::invalid_argument("subsystem list is empty");
  }
  return qubits;
}

ensembles::AmplitudeProfile load_amplitudes(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw std::invalid_argument("cannot read amplitude file " + path);
  }
  std::vector<double> values;
  double x;
  while (file >> x) values.push_back(x);
  Eigen::VectorXd r =
      Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
  const double norm2 = r.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-6) {
    throw std::invalid_argument("amplitude squares sum to " +
                                std::to_string(norm2) + ", expected 1");
  }
  r /= std::sqrt(norm2);
  return ensembles::make_profile(std::move(r));
}

ensembles::AmplitudeProfile resolve_amplitudes(const std::string& path,
                                               int num_qubits) {
  auto amps = path.empty() ? ensembles::equal_amplitudes(num_qubits)
                           : load_amplitudes(path);
  if (amps.num_qubits() != num_qubits) {
    throw std::invalid_argument("amplitude file does not match --n");
  }
  return amps;
}

// ---------------------------------------------------------------------------
// analytic

int cmd_analytic(const std::string& formula, int n, int na,
                 const std::string& amps_path, const std::string& subsystem,
                 double epsilon, const OutputOptions& out,
                 std::uint64_t seed) {
  json config{{"command", "analytic"}, {"formula", formula}, {"n", n},
              {"na", na},              {"amps", amps_path},  {"subsystem", subsystem},
              {"epsilon", epsilon},    {"seed", seed}};
  ResultRecord record("analytic", config);

  double value = 0.0;
  if (formula == "random") {
    value = ensembles::analytic_random_average(n, na);
  } else if (formula == "eqsep") {
    value = ensembles::analytic_eqsep_max(n, na);
  } else if (formula == "volume") {
    value = ensembles::volume_law_bound(n, na);
  } else if (formula == "theorem1" || formula == "average") {
    const auto amps = resolve_amplitudes(amps_path, n);
    const SubsystemMask mask(n, parse_subsystem(subsystem));
    if (formula == "theorem1") {
      value = circuit::expected_entropy_limit(amps, mask);
    } else {
      value = ensembles::analytic_phase_average(
          ensembles::make_spec(amps, ensembles::BasisSpec::computational()),
          mask);
    }
  } else if (formula == "mixing") {
    const auto amps = resolve_amplitudes(amps_path, n);
    value = circuit::mixing_time_bound(amps, epsilon, n);
  } else {
    throw std::invalid_argument("unknown formula " + formula);
  }

  record.set_result("value", value);
  std::ostringstream csv;
  csv << "formula,value\n" << formula << ',' << format_double(value) << '\n';
  emit(out, record, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// sample

int cmd_sample(const std::string& ensemble, int n, int n_samples,
               const std::string& measure, const std::string& subsystem,
               const std::string& amps_path, std::uint64_t seed,
               const OutputOptions& out) {
  json config{{"command", "sample"},   {"ensemble", ensemble},
              {"n", n},                {"samples", n_samples},
              {"measure", measure},    {"subsystem", subsystem},
              {"amps", amps_path},     {"seed", seed}};
  ResultRecord record("sample", config);

  if (ensemble != "haar" && ensemble != "phase") {
    throw std::invalid_argument("unknown ensemble kind " + ensemble);
  }
  if (measure != "mw" && measure != "el") {
    throw std::invalid_argument("measure must be mw or el");
  }
  std::optional<SubsystemMask> mask;
  if (measure == "el") {
    if (subsystem.empty()) {
      throw std::invalid_argument("--measure el needs --subsystem");
    }
    mask.emplace(n, parse_subsystem(subsystem));
  }
  std::optional<ensembles::EnsembleSpec> spec;
  if (ensemble == "phase") {
    spec = ensembles::make_spec(resolve_amplitudes(amps_path, n),
                                ensembles::BasisSpec::computational());
  }

  // Histogram of the measure: 0.002 bins on [0, 1], left-closed at 0.
  constexpr double kBinWidth = 0.002;
  constexpr int kBins = 500;
  std::vector<std::uint64_t> counts(kBins, 0);
  RunningStat stat;
  for (int sample = 0; sample < n_samples; ++sample) {
    CounterRng rng(seed, static_cast<std::uint64_t>(sample));
    PureState state = (ensemble == "haar")
                          ? ensembles::sample_haar_state(n, rng)
                          : ensembles::sample_phase_state(*spec, rng).first;
    const double value =
        (measure == "mw") ? meyer_wallach(state) : linear_entropy(state, *mask);
    stat.add(value);
    int bin = static_cast<int>(value / kBinWidth);
    if (bin >= kBins) bin = kBins - 1;
    if (bin < 0) bin = 0;
    ++counts[bin];
  }

  record.set_result("mean", stat.mean());
  record.set_result("std", stat.std_dev());
  record.set_result("std_error", stat.std_error());
  record.set_result("n_samples", stat.count());
  json bins = json::array();
  for (int b = 0; b < kBins; ++b) {
    if (counts[b] != 0) {
      bins.push_back({b * kBinWidth, counts[b]});
    }
  }
  record.set_result("histogram_nonzero_bins", bins);

  std::ostringstream csv;
  csv << "kind,a,b,c\n";
  for (int b = 0; b < kBins; ++b) {
    csv << "bin," << format_double(b * kBinWidth) << ','
        << format_double((b + 1) * kBinWidth) << ',' << counts[b] << '\n';
  }
  csv << "summary," << format_double(stat.mean()) << ','
      << format_double(stat.std_dev()) << ',' << format_double(stat.std_error())
      << '\n';
  emit(out, record, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// circuit

int cmd_circuit(int n, const std::string& subsystem, int t_steps, int n_runs,
                int record_every, const std::string& amps_path,
                const std::string& serialize_path,
                const std::string& replay_path, std::uint64_t seed,
                const OutputOptions& out) {
  json config{{"command", "circuit"},      {"n", n},
              {"subsystem", subsystem},    {"t", t_steps},
              {"runs", n_runs},            {"record_every", record_every},
              {"amps", amps_path},         {"serialize", serialize_path},
              {"replay", replay_path},     {"seed", seed}};
  ResultRecord record("circuit", config);

  const SubsystemMask mask(n, parse_subsystem(subsystem));
  const auto amps = resolve_amplitudes(amps_path, n);
  const auto spec =
      ensembles::make_spec(amps, ensembles::BasisSpec::computational());

  if (!replay_path.empty()) {
    std::ifstream file(replay_path);
    if (!file) {
      throw std::invalid_argument("cannot read instance file " + replay_path);
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    const auto instance = circuit::parse_instance(buffer.str());
    if (instance.num_qubits != n) {
      throw std::invalid_argument("instance does not match --n");
    }
    CounterRng input_rng(instance.seed, 0);
    auto [initial, phases] = ensembles::sample_phase_state(spec, input_rng);
    const PureState final_state = circuit::replay_instance(initial, instance);
    record.set_result("final_state_hash", state_hash(final_state));
    record.set_result("final_linear_entropy",
                      linear_entropy(final_state, mask));
    std::ostringstream csv;
    csv << "quantity,value\n"
        << "final_state_hash," << state_hash(final_state) << '\n'
        << "final_linear_entropy,"
        << format_double(linear_entropy(final_state, mask)) << '\n';
    emit(out, record, csv.str());
    return 0;
  }

  if (record_every <= 0) record_every = n;
  const double limit = circuit::expected_entropy_limit(amps, mask);

  std::vector<int> steps;
  std::vector<RunningStat> stats;
  std::string run0_hash;
  for (int run = 0; run < n_runs; ++run) {
    CounterRng input_rng(seed, 2ULL * static_cast<std::uint64_t>(run));
    auto [initial, phases] = ensembles::sample_phase_state(spec, input_rng);
    // Gate stream id: the library keys circuit streams off the run seed.
    const std::uint64_t run_seed = seed + 0x10000ULL * run;
    const auto result =
        circuit::run_circuit(initial, t_steps, mask, record_every, run_seed);
    if (run == 0) {
      steps = result.trajectory.steps;
      stats.assign(steps.size(), RunningStat());
      run0_hash = state_hash(result.final_state);
      if (!serialize_path.empty()) {
        std::ofstream file(serialize_path);
        if (!file) {
          throw std::invalid_argument("cannot write instance file " +
                                      serialize_path);
        }
        file << circuit::serialize_instance(result.instance);
      }
    }
    for (std::size_t k = 0; k < steps.size(); ++k) {
      stats[k].add(result.trajectory.values[k]);
    }
  }

  record.set_result("analytic_limit", limit);
  record.set_result("final_mean", stats.back().mean());
  record.set_result("final_std_error", stats.back().std_error());
  record.set_result("run0_final_state_hash", run0_hash);

  std::ostringstream csv;
  csv << "step,mean_el,std_error,analytic_limit\n";
  for (std::size_t k = 0; k < steps.size(); ++k) {
    csv << steps[k] << ',' << format_double(stats[k].mean()) << ','
        << format_double(stats[k].std_error()) << ',' << format_double(limit)
        << '\n';
  }
  csv << "# run0_final_state_hash=" << run0_hash << '\n';
  emit(out, record, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// markov

int cmd_markov(int n, int gamma, const std::string& amps_path, double epsilon,
               bool chain_check, int chain_check_t, int chain_check_samples,
               std::uint64_t seed, const OutputOptions& out) {
  json config{{"command", "markov"},   {"n", n},
              {"gamma", gamma},        {"amps", amps_path},
              {"epsilon", epsilon},    {"chain_check", chain_check},
              {"chain_check_t", chain_check_t},
              {"chain_check_samples", chain_check_samples},
              {"seed", seed}};
  ResultRecord record("markov", config);
  std::ostringstream csv;
  csv << "quantity,value\n";

  const auto amps = resolve_amplitudes(amps_path, n);
  const auto chain = markov::reduced_transition(n, gamma);
  std::vector<int> gamma_set;
  for (int q = 1; q <= gamma; ++q) gamma_set.push_back(q);
  const double sector_weight = circuit::kappa(amps, gamma_set);
  const Eigen::VectorXd stationary =
      markov::reduced_stationary(chain, sector_weight);

  json stationary_json = json::array();
  for (int i = 0; i < chain.n_states(); ++i) {
    stationary_json.push_back(stationary(i));
    csv << "stationary_" << chain.state_value(i) << ','
        << format_double(stationary(i)) << '\n';
  }
  const double balance = markov::detailed_balance_check(chain);
  const double gap = markov::spectral_gap(chain);
  const auto path = markov::canonical_path_bound(chain);
  const int mixing =
      chain.n_states() == 1 ? 0 : markov::empirical_mixing_time(chain, epsilon);
  const double bound = circuit::mixing_time_bound(amps, epsilon, n);

  record.set_result("kappa", sector_weight);
  record.set_result("stationary", stationary_json);
  record.set_result("detailed_balance_violation", balance);
  record.set_result("spectral_gap", gap);
  record.set_result("rho", path.rho);
  record.set_result("gap_lower_bound", path.gap_lower_bound);
  record.set_result("empirical_mixing_time", mixing);
  record.set_result("mixing_time_bound", bound);
  record.set_result("chain_json", json::parse(markov::chain_to_json(chain)));

  csv << "kappa," << format_double(sector_weight) << '\n'
      << "detailed_balance_violation," << format_double(balance) << '\n'
      << "spectral_gap," << format_double(gap) << '\n'
      << "rho," << format_double(path.rho) << '\n'
      << "gap_lower_bound," << format_double(path.gap_lower_bound) << '\n'
      << "empirical_mixing_time," << mixing << '\n'
      << "mixing_time_bound," << format_double(bound) << '\n';

  if (chain_check) {
    if (n > markov::kMaxExactChainQubits) {
      throw std::invalid_argument("chain cross-check needs N <= 6");
    }
    const auto spec =
        ensembles::make_spec(amps, ensembles::BasisSpec::computational());
    CounterRng input_rng(seed, 0);
    auto [phi0, phases] = ensembles::sample_phase_state(spec, input_rng);
    const auto exact = markov::evolve_full_chain(
        markov::pauli_distribution(phi0), chain_check_t);
    markov::PauliDistribution averaged;
    averaged.num_qubits = n;
    for (int sample = 0; sample < chain_check_samples; ++sample) {
      CounterRng rng(seed, static_cast<std::uint64_t>(sample) + 1);
      PureState state = phi0;
      for (int t = 1; t <= chain_check_t; ++t) {
        circuit::apply_gate(state, circuit::sample_gate(n, t, rng));
      }
      for (const auto& [code, w] : markov::pauli_distribution(state).weights) {
        averaged.weights[code] += w / chain_check_samples;
      }
    }
    const double tv = markov::tv_distance(exact, averaged);
    record.set_result("chain_mc_tv", tv);
    csv << "chain_mc_tv," << format_double(tv) << '\n';
  }

  emit(out, record, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// thermal

int cmd_thermal(int d_s, int d_e, int d_r, int n_instances,
                const std::string& family, double flatness, bool shared,
                std::uint64_t seed, const OutputOptions& out) {
  json config{{"command", "thermal"}, {"ds", d_s},
              {"de", d_e},            {"dr", d_r},
              {"instances", n_instances}, {"family", family},
              {"flatness", flatness}, {"shared", shared},
              {"seed", seed}};
  ResultRecord record("thermal", config);

  thermal::SweepConfig sweep;
  sweep.split = thermal::make_split(d_s, d_e);
  sweep.d_restricted = d_r;
  sweep.n_instances = n_instances;
  sweep.flatness = flatness;
  sweep.shared_system_factor = shared;
  sweep.seed = seed;
  if (family == "equal") {
    sweep.family = thermal::AmplitudeFamily::Equal;
  } else if (family == "random") {
    sweep.family = thermal::AmplitudeFamily::Random;
  } else if (family == "interp") {
    sweep.family = thermal::AmplitudeFamily::Interpolated;
  } else {
    throw std::invalid_argument("unknown amplitude family " + family);
  }

  const auto rows = thermal::thermal_sweep(sweep);
  const std::string extreme =
      family == "equal" ? "equal_amplitudes" : (shared ? "shared_factor" : "");

  json rows_json = json::array();
  std::ostringstream csv;
  csv << "instance,lhs,trace_distance,extreme_case\n";
  double max_lhs = 0.0;
  for (const auto& row : rows) {
    rows_json.push_back({row.instance, row.lhs, row.trace_dist});
    csv << row.instance << ',' << format_double(row.lhs) << ','
        << format_double(row.trace_dist) << ',' << extreme << '\n';
    max_lhs = std::max(max_lhs, row.lhs);
  }
  record.set_result("rows", rows_json);
  record.set_result("max_lhs", max_lhs);
  emit(out, record, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// concentration

int cmd_concentration(int n, const std::string& subsystem, int n_samples,
                      const std::string& eps_list, int n_pairs,
                      std::uint64_t seed, const OutputOptions& out) {
  json config{{"command", "concentration"}, {"n", n},
              {"subsystem", subsystem},     {"samples", n_samples},
              {"eps", eps_list},            {"pairs", n_pairs},
              {"seed", seed}};
  ResultRecord record("concentration", config);

  const SubsystemMask mask(n, parse_subsystem(subsystem));
  std::vector<double> grid = ensembles::kDefaultEpsilonGrid;
  if (!eps_list.empty()) {
    grid.clear();
    std::stringstream in(eps_list);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw std::invalid_argument("empty epsilon grid");
  }

  const auto table =
      ensembles::concentration_experiment(n, mask, n_samples, grid, seed);
  const auto spec = ensembles::make_spec(ensembles::equal_amplitudes(n),
                                         ensembles::BasisSpec::computational());
  const double lipschitz_violation =
      ensembles::lipschitz_check(spec, mask, n_pairs, seed + 1);

  json rows_json = json::array();
  std::ostringstream csv;
  csv << "kind,epsilon,empirical,bound,pass\n";
  bool all_pass = true;
  for (const auto& row : table.rows) {
    const bool pass =
        row.empirical_tail <= row.bound + 3.0 * row.tail_std_error;
    all_pass = all_pass && pass;
    rows_json.push_back(
        {row.epsilon, row.empirical_tail, row.tail_std_error, row.bound, pass});
    csv << "tail," << format_double(row.epsilon) << ','
        << format_double(row.empirical_tail) << ',' << format_double(row.bound)
        << ',' << (pass ? 1 : 0) << '\n';
  }
  const bool sigma_pass =
      table.sigma_empirical <= table.sigma_cap + 3.0 * table.sigma_std_error;
  csv << "sigma,," << format_double(table.sigma_empirical) << ','
      << format_double(table.sigma_cap) << ',' << (sigma_pass ? 1 : 0) << '\n';
  const bool lipschitz_pass = lipschitz_violation <= 1e-9;
  csv << "lipschitz_max_violation,," << format_double(lipschitz_violation)
      << ",0," << (lipschitz_pass ? 1 : 0) << '\n';

  record.set_result("rows", rows_json);
  record.set_result("sigma_empirical", table.sigma_empirical);
  record.set_result("sigma_std_error", table.sigma_std_error);
  record.set_result("sigma_cap", table.sigma_cap);
  record.set_result("lipschitz_max_violation", lipschitz_violation);
  record.set_result("all_pass", all_pass && sigma_pass && lipschitz_pass);
  emit(out, record, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-random state ensembles: sampling, analytic averages, "
               "diagonal circuits, and induced Markov chains"};
  app.require_subcommand(1);
  app.fallthrough();  // let --seed/--out/--format follow the subcommand

  OutputOptions out;
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "base seed for all sampling")
      ->capture_default_str();
  app.add_option("--out", out.path, "output file (default stdout)");
  app.add_option("--format", out.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // analytic
  auto* analytic = app.add_subcommand("analytic", "closed-form values");
  std::string formula = "random";
  int n = 8, na = 4;
  std::string amps_path, subsystem;
  double epsilon = 0.01;
  analytic->add_option("--formula", formula,
                       "random|eqsep|average|theorem1|volume|mixing")
      ->required();
  analytic->add_option("--n", n, "total qubits")->required();
  analytic->add_option("--na", na, "subsystem qubits");
  analytic->add_option("--amps", amps_path, "amplitude file (r_n per line)");
  analytic->add_option("--subsystem", subsystem, "comma-separated 1-based qubits");
  analytic->add_option("--epsilon", epsilon, "target error for mixing bound");

  // sample
  auto* sample = app.add_subcommand("sample", "ensemble sampling + histogram");
  std::string ensemble = "haar", measure = "mw";
  int n_samples = 10000;
  sample->add_option("--ensemble", ensemble, "haar|phase")->required();
  sample->add_option("--n", n, "total qubits")->required();
  sample->add_option("--samples", n_samples, "sample count")
      ->capture_default_str();
  sample->add_option("--measure", measure, "mw|el")->capture_default_str();
  sample->add_option("--subsystem", subsystem, "subsystem for el");
  sample->add_option("--amps", amps_path, "amplitude file (phase ensemble)");

  // circuit
  auto* circ = app.add_subcommand("circuit", "phase-random circuit runs");
  int t_steps = 500, n_runs = 200, record_every = 0;
  std::string serialize_path, replay_path;
  circ->add_option("--n", n, "total qubits")->required();
  circ->add_option("--subsystem", subsystem, "subsystem qubits")->required();
  circ->add_option("--t", t_steps, "iterations")->capture_default_str();
  circ->add_option("--runs", n_runs, "independent runs")->capture_default_str();
  circ->add_option("--record-every", record_every,
                   "trajectory stride (default N)");
  circ->add_option("--amps", amps_path, "amplitude file");
  circ->add_option("--serialize", serialize_path, "write run-0 instance here");
  circ->add_option("--replay", replay_path, "replay a serialized instance");

  // markov
  auto* markov_cmd = app.add_subcommand("markov", "reduced chain analysis");
  int gamma = 1, chain_check_t = 3, chain_check_samples = 10000;
  bool chain_check = false;
  markov_cmd->add_option("--n", n, "total qubits")->required();
  markov_cmd->add_option("--gamma", gamma, "sector size |Gamma|")->required();
  markov_cmd->add_option("--amps", amps_path, "amplitude file for kappa");
  markov_cmd->add_option("--epsilon", epsilon, "mixing epsilon")
      ->capture_default_str();
  markov_cmd->add_flag("--chain-check", chain_check,
                       "compare exact chain vs circuit Monte Carlo (N <= 6)");
  markov_cmd->add_option("--chain-t", chain_check_t,
                         "steps for the chain cross-check");
  markov_cmd->add_option("--chain-samples", chain_check_samples,
                         "circuit samples for the chain cross-check");

  // thermal
  auto* thermal_cmd = app.add_subcommand("thermal",
                                         "thermalization-condition sweeps");
  int d_s = 2, d_e = 16, d_r = 8, n_instances = 100;
  std::string family = "random";
  double flatness = 1.0;
  bool shared = false;
  thermal_cmd->add_option("--ds", d_s, "system dimension")->capture_default_str();
  thermal_cmd->add_option("--de", d_e, "environment dimension")
      ->capture_default_str();
  thermal_cmd->add_option("--dr", d_r, "restricted dimension")
      ->capture_default_str();
  thermal_cmd->add_option("--instances", n_instances, "sweep rows")
      ->capture_default_str();
  thermal_cmd->add_option("--family", family, "equal|random|interp")
      ->capture_default_str();
  thermal_cmd->add_option("--flatness", flatness, "interp family knob in [0,1]");
  thermal_cmd->add_flag("--shared", shared, "shared-system-factor subspaces");

  // concentration
  auto* conc = app.add_subcommand("concentration", "tail bounds + Lipschitz");
  std::string eps_list;
  int n_pairs = 1000;
  conc->add_option("--n", n, "total qubits")->required();
  conc->add_option("--subsystem", subsystem, "subsystem qubits")->required();
  conc->add_option("--samples", n_samples, "sample count")
      ->capture_default_str();
  conc->add_option("--eps", eps_list, "comma list (default 0.02,...,0.3)");
  conc->add_option("--pairs", n_pairs, "Lipschitz pair count")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analytic->parsed()) {
      return cmd_analytic(formula, n, na, amps_path, subsystem, epsilon, out,
                          seed);
    }
    if (sample->parsed()) {
      return cmd_sample(ensemble, n, n_samples, measure, subsystem, amps_path,
                        seed, out);
    }
    if (circ->parsed()) {
      return cmd_circuit(n, subsystem, t_steps, n_runs, record_every,
                         amps_path, serialize_path, replay_path, seed, out);
    }
    if (markov_cmd->parsed()) {
      return cmd_markov(n, gamma, amps_path, epsilon, chain_check,
                        chain_check_t, chain_check_samples, seed, out);
    }
    if (thermal_cmd->parsed()) {
      return cmd_thermal(d_s, d_e, d_r, n_instances, family, flatness, shared,
                         seed, out);
    }
    if (conc->parsed()) {
      return cmd_concentration(n, subsystem, n_samples, eps_list, n_pairs,
                               seed, out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
