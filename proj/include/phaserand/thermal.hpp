#pragma once

#include "phaserand/rng.hpp"
#include "phaserand/state.hpp"

#include <cstdint>
#include <vector>

namespace phaserand::thermal {

inline constexpr Eigen::Index kMaxTotalDimension = 1 << 14;

// System (x) environment factorization; full index is s * d_environment + e.
struct BipartiteSplit {
  Eigen::Index d_system;
  Eigen::Index d_environment;

  Eigen::Index total() const { return d_system * d_environment; }
};

BipartiteSplit make_split(Eigen::Index d_system, Eigen::Index d_environment);

// Orthonormal columns spanning the energy-restricted subspace H_R.
struct RestrictedSubspace {
  Eigen::MatrixXcd vectors;

  Eigen::Index dim() const { return vectors.cols(); }
  Eigen::Index ambient_dim() const { return vectors.rows(); }
};

RestrictedSubspace make_subspace(Eigen::MatrixXcd vectors);

// Amplitudes of the initial state on the restricted subspace.
struct RestrictedAmplitudes {
  Eigen::VectorXd r;
};

RestrictedAmplitudes make_restricted(Eigen::VectorXd r);
RestrictedAmplitudes equal_restricted(Eigen::Index d_restricted);
// |<e_alpha|phi0>| per column, renormalized (phi0 must lie in the subspace
// up to 1e-8 leakage).
RestrictedAmplitudes amplitudes_from_state(const Eigen::VectorXcd& phi0,
                                           const RestrictedSubspace& subspace);

struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // columns, orthonormal
};

// Eigenvectors whose eigenvalue lies strictly inside (e - delta_e, e + delta_e).
RestrictedSubspace build_subspace(const EigenPairs& pairs, double e_center,
                                  double delta_e);

// e^alpha_S = tr_E |e_alpha><e_alpha| (alpha is 0-based).
DensityMatrix reduced_eigenstate(const RestrictedSubspace& subspace,
                                 Eigen::Index alpha,
                                 const BipartiteSplit& split);

// rho_S = sum_alpha r_alpha^2 e^alpha_S.
DensityMatrix rho_hat_system(const RestrictedAmplitudes& amps,
                             const RestrictedSubspace& subspace,
                             const BipartiteSplit& split);

// tr_E of the normalized subspace projector.
DensityMatrix canonical_state(const RestrictedSubspace& subspace,
                              const BipartiteSplit& split);

// sum_{alpha,beta} (r_a^2 - 1/d_R)(r_b^2 - 1/d_R) tr[e^a_S e^b_S];
// equals ||rho_S - canonical||_HS^2.
double thermalization_lhs(const RestrictedAmplitudes& amps,
                          const RestrictedSubspace& subspace,
                          const BipartiteSplit& split);

// Haar-like d_R-dimensional subspace via Gram-Schmidt on complex Gaussians.
RestrictedSubspace random_subspace(const BipartiteSplit& split,
                                   Eigen::Index d_restricted, CounterRng& rng);

// Subspace of product vectors |s> (x) |eps_k> sharing one system factor;
// every reduced eigenstate is |s><s| (the second extreme case).
RestrictedSubspace shared_factor_subspace(const BipartiteSplit& split,
                                          Eigen::Index d_restricted,
                                          CounterRng& rng);

enum class AmplitudeFamily { Equal, Random, Interpolated };

struct SweepConfig {
  BipartiteSplit split{2, 2};
  Eigen::Index d_restricted = 2;
  int n_instances = 1;
  AmplitudeFamily family = AmplitudeFamily::Random;
  // Interpolated family: r^2 = (1-flatness) delta_0 + flatness/d_R.
  double flatness = 1.0;
  bool shared_system_factor = false;
  std::uint64_t seed = 0;
};

struct SweepRow {
  int instance;
  double lhs;
  double trace_dist;
};

std::vector<SweepRow> thermal_sweep(const SweepConfig& config);

}  // namespace phaserand::thermal
