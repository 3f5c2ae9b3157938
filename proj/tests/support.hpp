#pragma once

#include "phaserand/ensembles.hpp"
#include "phaserand/rng.hpp"
#include "phaserand/state.hpp"

#include <Eigen/QR>

#include <vector>

namespace phaserand::testing {

// a (x) b with a's indices most significant, matching the qubit-1-MSB
// convention when factors are accumulated in site order.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Haar-ish random unitary: QR of a complex Gaussian matrix with the R
// diagonal phases absorbed.
inline Eigen::MatrixXcd random_unitary(Eigen::Index dim, CounterRng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = rng.next_complex_normal();
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline ensembles::AmplitudeProfile random_profile(int num_qubits,
                                                  CounterRng& rng) {
  Eigen::VectorXd r(1LL << num_qubits);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r(i) = std::abs(rng.next_complex_normal());
  }
  r /= r.norm();
  return ensembles::make_profile(std::move(r));
}

// Random nonempty proper subset of {1..N}.
inline SubsystemMask random_mask(int num_qubits, CounterRng& rng) {
  for (;;) {
    std::vector<int> qubits;
    for (int q = 1; q <= num_qubits; ++q) {
      if (rng.next_below(2) == 1) qubits.push_back(q);
    }
    if (!qubits.empty() && static_cast<int>(qubits.size()) < num_qubits) {
      return SubsystemMask(num_qubits, qubits);
    }
  }
}

inline PureState bell_state() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(0) = amps(3) = 1.0 / std::sqrt(2.0);
  return make_state(2, std::move(amps));
}

inline PureState ghz_state(int num_qubits) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(1LL << num_qubits);
  amps(0) = amps(amps.size() - 1) = 1.0 / std::sqrt(2.0);
  return make_state(num_qubits, std::move(amps));
}

inline PureState w_state(int num_qubits) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(1LL << num_qubits);
  const double w = 1.0 / std::sqrt(static_cast<double>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) {
    amps(1LL << q) = w;
  }
  return make_state(num_qubits, std::move(amps));
}

inline Eigen::MatrixXcd materialize_basis(const ensembles::EnsembleSpec& spec) {
  const Eigen::Index dim = spec.amplitudes.dim();
  switch (spec.basis.kind()) {
    case ensembles::BasisSpec::Kind::Computational:
      return Eigen::MatrixXcd::Identity(dim, dim);
    case ensembles::BasisSpec::Kind::Explicit:
      return spec.basis.unitary();
    case ensembles::BasisSpec::Kind::Product: {
      Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
      for (const auto& f : spec.basis.factors()) {
        u = kron(u, f);
      }
      return u;
    }
  }
  return {};
}

// Brute-force oracle for <E_L^{(A)}>: expands <tr rho_A^2> over the basis
// label quadruples the fourth-moment phase integral keeps ((n=m, k=l) and
// (k=n, l=m), minus the doubly counted all-equal diagonal). Independent of
// the mutual-information route used by analytic_phase_average.
inline double phase_moment_oracle(const ensembles::EnsembleSpec& spec,
                           const SubsystemMask& mask) {
  const Eigen::MatrixXcd u = materialize_basis(spec);
  std::vector<Eigen::MatrixXcd> blocks(u.cols());
  for (Eigen::Index n = 0; n < u.cols(); ++n) {
    blocks[n] = matricize(PureState{spec.num_qubits(), u.col(n)}, mask);
  }
  const Eigen::VectorXd& r = spec.amplitudes.r;
  const Eigen::Index dim = r.size();
  std::vector<Eigen::MatrixXcd> diag(dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    diag[n] = blocks[n] * blocks[n].adjoint();
  }
  double purity_avg = 0.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const int w = ensembles::phase_fourth_moment(
          static_cast<int>(n), static_cast<int>(n), static_cast<int>(k),
          static_cast<int>(k));
      purity_avg += w * r(n) * r(n) * r(k) * r(k) *
                    (diag[n].array() * diag[k].array().conjugate()).sum().real();
    }
  }
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      purity_avg += r(n) * r(n) * r(m) * r(m) *
                    (blocks[n] * blocks[m].adjoint()).squaredNorm();
    }
  }
  for (Eigen::Index n = 0; n < dim; ++n) {
    purity_avg -= std::pow(r(n), 4) * diag[n].squaredNorm();
  }
  return 1.0 - purity_avg;
}

}  // namespace phaserand::testing
