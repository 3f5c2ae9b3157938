#include "phaserand/thermal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phaserand::thermal {

namespace {

// View of a full-space vector as a d_S x d_E matrix (system index = row).
Eigen::MatrixXcd as_system_by_environment(const Eigen::VectorXcd& v,
                                          const BipartiteSplit& split) {
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      v.data(), split.d_system, split.d_environment);
}

// Modified Gram-Schmidt with one re-orthogonalization pass.
Eigen::MatrixXcd orthonormalize(Eigen::MatrixXcd m) {
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index prev = 0; prev < col; ++prev) {
        m.col(col) -= m.col(prev).dot(m.col(col)) * m.col(prev);
      }
    }
    const double norm = m.col(col).norm();
    if (norm < 1e-12) {
      throw std::runtime_error("Gram-Schmidt hit a degenerate vector");
    }
    m.col(col) /= norm;
  }
  return m;
}

Eigen::VectorXcd gaussian_vector(Eigen::Index dim, CounterRng& rng) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.next_complex_normal();
  return v;
}

}  // namespace

BipartiteSplit make_split(Eigen::Index d_system, Eigen::Index d_environment) {
  if (d_system < 2 || d_environment < 2) {
    throw std::invalid_argument("both factors need dimension >= 2");
  }
  if (d_system * d_environment > kMaxTotalDimension) {
    throw std::invalid_argument("total dimension exceeds 2^14 cap");
  }
  return BipartiteSplit{d_system, d_environment};
}

RestrictedSubspace make_subspace(Eigen::MatrixXcd vectors) {
  if (vectors.cols() < 1 || vectors.cols() > vectors.rows()) {
    throw std::invalid_argument("need 1 <= d_R <= ambient dimension");
  }
  const Eigen::MatrixXcd gram = vectors.adjoint() * vectors;
  const double err =
      (gram - Eigen::MatrixXcd::Identity(vectors.cols(), vectors.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (err > 1e-10) {
    throw std::invalid_argument("subspace vectors not orthonormal (defect " +
                                std::to_string(err) + ")");
  }
  return RestrictedSubspace{std::move(vectors)};
}

RestrictedAmplitudes make_restricted(Eigen::VectorXd r) {
  if (r.size() < 1) throw std::invalid_argument("empty amplitude vector");
  if (r.minCoeff() < 0.0) {
    throw std::invalid_argument("restricted amplitudes must be nonnegative");
  }
  if (std::abs(r.squaredNorm() - 1.0) > 1e-10) {
    throw std::invalid_argument("restricted amplitude squares must sum to 1");
  }
  return RestrictedAmplitudes{std::move(r)};
}

RestrictedAmplitudes equal_restricted(Eigen::Index d_restricted) {
  return RestrictedAmplitudes{Eigen::VectorXd::Constant(
      d_restricted, std::sqrt(1.0 / static_cast<double>(d_restricted)))};
}

RestrictedAmplitudes amplitudes_from_state(const Eigen::VectorXcd& phi0,
                                           const RestrictedSubspace& subspace) {
  if (phi0.size() != subspace.ambient_dim()) {
    throw std::invalid_argument("state dimension does not match subspace");
  }
  const Eigen::VectorXcd overlaps = subspace.vectors.adjoint() * phi0;
  const double inside = overlaps.squaredNorm();
  if (inside < 1e-12) {
    throw std::invalid_argument("state has no weight inside the subspace");
  }
  if (std::abs(phi0.squaredNorm() - inside) > 1e-8) {
    throw std::invalid_argument("state leaks outside the restricted subspace");
  }
  Eigen::VectorXd r = overlaps.cwiseAbs() / std::sqrt(inside);
  return RestrictedAmplitudes{std::move(r)};
}

RestrictedSubspace build_subspace(const EigenPairs& pairs, double e_center,
                                  double delta_e) {
  if (pairs.values.size() != pairs.vectors.cols()) {
    throw std::invalid_argument("eigenvalue/eigenvector count mismatch");
  }
  std::vector<Eigen::Index> selected;
  for (Eigen::Index i = 0; i < pairs.values.size(); ++i) {
    if (pairs.values(i) > e_center - delta_e &&
        pairs.values(i) < e_center + delta_e) {
      selected.push_back(i);
    }
  }
  if (selected.empty()) {
    throw std::invalid_argument("energy window contains no eigenvalue");
  }
  Eigen::MatrixXcd vectors(pairs.vectors.rows(),
                           static_cast<Eigen::Index>(selected.size()));
  for (std::size_t k = 0; k < selected.size(); ++k) {
    vectors.col(static_cast<Eigen::Index>(k)) = pairs.vectors.col(selected[k]);
  }
  return make_subspace(std::move(vectors));
}

DensityMatrix reduced_eigenstate(const RestrictedSubspace& subspace,
                                 Eigen::Index alpha,
                                 const BipartiteSplit& split) {
  if (alpha < 0 || alpha >= subspace.dim()) {
    throw std::out_of_range("subspace vector index out of range");
  }
  if (subspace.ambient_dim() != split.total()) {
    throw std::invalid_argument("split does not match the subspace");
  }
  const Eigen::VectorXcd v = subspace.vectors.col(alpha);
  const Eigen::MatrixXcd m = as_system_by_environment(v, split);
  return DensityMatrix{m * m.adjoint()};
}

DensityMatrix rho_hat_system(const RestrictedAmplitudes& amps,
                             const RestrictedSubspace& subspace,
                             const BipartiteSplit& split) {
  if (amps.r.size() != subspace.dim()) {
    throw std::invalid_argument("amplitude count does not match d_R");
  }
  Eigen::MatrixXcd rho =
      Eigen::MatrixXcd::Zero(split.d_system, split.d_system);
  for (Eigen::Index alpha = 0; alpha < subspace.dim(); ++alpha) {
    rho += amps.r(alpha) * amps.r(alpha) *
           reduced_eigenstate(subspace, alpha, split).mat;
  }
  return DensityMatrix{std::move(rho)};
}

DensityMatrix canonical_state(const RestrictedSubspace& subspace,
                              const BipartiteSplit& split) {
  Eigen::MatrixXcd rho =
      Eigen::MatrixXcd::Zero(split.d_system, split.d_system);
  for (Eigen::Index alpha = 0; alpha < subspace.dim(); ++alpha) {
    rho += reduced_eigenstate(subspace, alpha, split).mat;
  }
  rho /= static_cast<double>(subspace.dim());
  return DensityMatrix{std::move(rho)};
}

double thermalization_lhs(const RestrictedAmplitudes& amps,
                          const RestrictedSubspace& subspace,
                          const BipartiteSplit& split) {
  if (amps.r.size() != subspace.dim()) {
    throw std::invalid_argument("amplitude count does not match d_R");
  }
  const Eigen::Index d_r = subspace.dim();
  std::vector<Eigen::MatrixXcd> reduced(d_r);
  for (Eigen::Index alpha = 0; alpha < d_r; ++alpha) {
    reduced[alpha] = reduced_eigenstate(subspace, alpha, split).mat;
  }
  Eigen::VectorXd weight(d_r);
  for (Eigen::Index alpha = 0; alpha < d_r; ++alpha) {
    weight(alpha) =
        amps.r(alpha) * amps.r(alpha) - 1.0 / static_cast<double>(d_r);
  }
  double lhs = 0.0;
  for (Eigen::Index alpha = 0; alpha < d_r; ++alpha) {
    for (Eigen::Index beta = 0; beta < d_r; ++beta) {
      const double overlap =
          (reduced[alpha].array() * reduced[beta].array().conjugate())
              .sum()
              .real();
      lhs += weight(alpha) * weight(beta) * overlap;
    }
  }
  return lhs;
}

RestrictedSubspace random_subspace(const BipartiteSplit& split,
                                   Eigen::Index d_restricted, CounterRng& rng) {
  if (d_restricted < 1 || d_restricted > split.total()) {
    throw std::invalid_argument("need 1 <= d_R <= d_S * d_E");
  }
  Eigen::MatrixXcd m(split.total(), d_restricted);
  for (Eigen::Index col = 0; col < d_restricted; ++col) {
    m.col(col) = gaussian_vector(split.total(), rng);
  }
  return RestrictedSubspace{orthonormalize(std::move(m))};
}

RestrictedSubspace shared_factor_subspace(const BipartiteSplit& split,
                                          Eigen::Index d_restricted,
                                          CounterRng& rng) {
  if (d_restricted < 1 || d_restricted > split.d_environment) {
    throw std::invalid_argument("need 1 <= d_R <= d_E for a shared factor");
  }
  Eigen::VectorXcd system = gaussian_vector(split.d_system, rng);
  system /= system.norm();
  Eigen::MatrixXcd environment(split.d_environment, d_restricted);
  for (Eigen::Index col = 0; col < d_restricted; ++col) {
    environment.col(col) = gaussian_vector(split.d_environment, rng);
  }
  environment = orthonormalize(std::move(environment));
  Eigen::MatrixXcd vectors(split.total(), d_restricted);
  for (Eigen::Index col = 0; col < d_restricted; ++col) {
    for (Eigen::Index s = 0; s < split.d_system; ++s) {
      vectors.block(s * split.d_environment, col, split.d_environment, 1) =
          system(s) * environment.col(col);
    }
  }
  return RestrictedSubspace{std::move(vectors)};
}

std::vector<SweepRow> thermal_sweep(const SweepConfig& config) {
  if (config.n_instances < 1) {
    throw std::invalid_argument("need at least one instance");
  }
  if (config.family == AmplitudeFamily::Interpolated &&
      (config.flatness < 0.0 || config.flatness > 1.0)) {
    throw std::invalid_argument("flatness must lie in [0, 1]");
  }
  std::vector<SweepRow> rows;
  rows.reserve(config.n_instances);
  for (int instance = 0; instance < config.n_instances; ++instance) {
    CounterRng rng(config.seed, static_cast<std::uint64_t>(instance));
    const RestrictedSubspace subspace =
        config.shared_system_factor
            ? shared_factor_subspace(config.split, config.d_restricted, rng)
            : random_subspace(config.split, config.d_restricted, rng);

    RestrictedAmplitudes amps = equal_restricted(config.d_restricted);
    if (config.family == AmplitudeFamily::Random) {
      Eigen::VectorXd r(config.d_restricted);
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        r(i) = std::abs(rng.next_complex_normal());
      }
      amps = RestrictedAmplitudes{r / r.norm()};
    } else if (config.family == AmplitudeFamily::Interpolated) {
      Eigen::VectorXd r2 = Eigen::VectorXd::Constant(
          config.d_restricted,
          config.flatness / static_cast<double>(config.d_restricted));
      r2(0) += 1.0 - config.flatness;
      amps = RestrictedAmplitudes{r2.cwiseSqrt()};
    }

    const double lhs = thermalization_lhs(amps, subspace, config.split);
    const double dist =
        trace_distance(rho_hat_system(amps, subspace, config.split),
                       canonical_state(subspace, config.split));
    rows.push_back(SweepRow{instance, lhs, dist});
  }
  return rows;
}

}  // namespace phaserand::thermal
