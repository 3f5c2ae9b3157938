#include "phaserand/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phaserand {

namespace {

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

// Row (or column) index of amplitude a restricted to the listed qubits.
std::uint64_t gather_bits(std::uint64_t a, const std::vector<int>& qubits,
                          int num_qubits) {
  std::uint64_t out = 0;
  for (int q : qubits) {
    out = (out << 1) | static_cast<std::uint64_t>(qubit_bit(a, q, num_qubits));
  }
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

}  // namespace

PureState make_state(int num_qubits, Eigen::VectorXcd amplitudes) {
  if (num_qubits < 1) {
    throw std::invalid_argument("PureState needs at least one qubit");
  }
  const auto dim = static_cast<std::uint64_t>(amplitudes.size());
  if (!is_power_of_two(dim) || dim != (1ULL << num_qubits)) {
    throw std::invalid_argument("amplitude vector length must be 2^N");
  }
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument("state norm deviates from 1 by " +
                                std::to_string(std::abs(norm2 - 1.0)));
  }
  return PureState{num_qubits, std::move(amplitudes)};
}

PureState basis_state(int num_qubits, std::uint64_t index) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(1LL << num_qubits);
  if (index >= static_cast<std::uint64_t>(amps.size())) {
    throw std::out_of_range("basis index out of range");
  }
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState{num_qubits, std::move(amps)};
}

SubsystemMask::SubsystemMask(int num_qubits, std::vector<int> qubits)
    : num_qubits_(num_qubits), qubits_(std::move(qubits)) {
  if (num_qubits_ < 1) {
    throw std::invalid_argument("mask needs a positive qubit count");
  }
  std::sort(qubits_.begin(), qubits_.end());
  if (qubits_.empty()) {
    throw std::invalid_argument("subsystem mask must be non-empty");
  }
  if (std::adjacent_find(qubits_.begin(), qubits_.end()) != qubits_.end()) {
    throw std::invalid_argument("subsystem mask has duplicate qubits");
  }
  if (qubits_.front() < 1 || qubits_.back() > num_qubits_) {
    throw std::invalid_argument("subsystem mask qubit out of range");
  }
}

SubsystemMask SubsystemMask::complement() const {
  std::vector<int> rest;
  rest.reserve(num_qubits_ - size());
  auto it = qubits_.begin();
  for (int q = 1; q <= num_qubits_; ++q) {
    if (it != qubits_.end() && *it == q) {
      ++it;
    } else {
      rest.push_back(q);
    }
  }
  return SubsystemMask(num_qubits_, std::move(rest));
}

void validate_density(const DensityMatrix& rho) {
  if (rho.mat.rows() != rho.mat.cols() || rho.mat.rows() == 0) {
    throw std::invalid_argument("density matrix must be square");
  }
  const double herm = (rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) {
    throw std::invalid_argument("density matrix not Hermitian: " +
                                std::to_string(herm));
  }
  const double trace_err = std::abs(rho.mat.trace().real() - 1.0) +
                           std::abs(rho.mat.trace().imag());
  if (trace_err > 1e-10) {
    throw std::invalid_argument("density matrix trace deviates from 1");
  }
  const Eigen::VectorXd evals = hermitian_eigenvalues(rho.mat);
  if (evals.minCoeff() < -1e-8) {
    throw std::invalid_argument("density matrix has eigenvalue " +
                                std::to_string(evals.minCoeff()));
  }
}

Eigen::MatrixXcd matricize(const PureState& state, const SubsystemMask& a) {
  if (a.num_qubits() != state.num_qubits) {
    throw std::invalid_argument("mask does not match state qubit count");
  }
  if (!a.is_proper()) {
    throw std::invalid_argument("subsystem must be a proper subset");
  }
  const SubsystemMask rest = a.complement();
  const int n = state.num_qubits;
  Eigen::MatrixXcd m(1LL << a.size(), 1LL << rest.size());
  const std::uint64_t dim = 1ULL << n;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    const auto row = static_cast<Eigen::Index>(gather_bits(idx, a.qubits(), n));
    const auto col =
        static_cast<Eigen::Index>(gather_bits(idx, rest.qubits(), n));
    m(row, col) = state.amplitudes(static_cast<Eigen::Index>(idx));
  }
  return m;
}

DensityMatrix reduced_density(const PureState& state, const SubsystemMask& a) {
  if (a.size() > kMaxExplicitQubits) {
    throw std::invalid_argument(
        "reduced density matrix dimension cap exceeded (|A| > 13)");
  }
  const Eigen::MatrixXcd m = matricize(state, a);
  return DensityMatrix{m * m.adjoint()};
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const SubsystemMask& keep) {
  const int n = keep.num_qubits();
  if (rho.dim() != (1LL << n)) {
    throw std::invalid_argument("density matrix dimension does not match mask");
  }
  if (keep.size() > kMaxExplicitQubits) {
    throw std::invalid_argument("partial trace dimension cap exceeded");
  }
  if (!keep.is_proper()) {
    return rho;
  }
  const SubsystemMask rest = keep.complement();
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(1LL << keep.size(), 1LL << keep.size());
  const std::uint64_t dim = 1ULL << n;
  // Index pair (i, j) contributes when the traced-out bits coincide.
  std::vector<std::uint64_t> keep_index(dim), rest_index(dim);
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    keep_index[idx] = gather_bits(idx, keep.qubits(), n);
    rest_index[idx] = gather_bits(idx, rest.qubits(), n);
  }
  for (std::uint64_t i = 0; i < dim; ++i) {
    for (std::uint64_t j = 0; j < dim; ++j) {
      if (rest_index[i] == rest_index[j]) {
        out(static_cast<Eigen::Index>(keep_index[i]),
            static_cast<Eigen::Index>(keep_index[j])) +=
            rho.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return DensityMatrix{std::move(out)};
}

double purity(const DensityMatrix& rho) {
  // tr rho^2 = ||rho||_F^2 for Hermitian rho.
  return rho.mat.squaredNorm();
}

double subsystem_purity(const PureState& state, const SubsystemMask& a) {
  const Eigen::MatrixXcd m = matricize(state, a);
  if (m.rows() <= m.cols()) {
    return (m * m.adjoint()).squaredNorm();
  }
  return (m.adjoint() * m).squaredNorm();
}

double linear_entropy(const PureState& state, const SubsystemMask& a) {
  return 1.0 - subsystem_purity(state, a);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd evals = hermitian_eigenvalues(rho.mat);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double lambda = evals(i);
    if (lambda < -1e-8) {
      throw std::invalid_argument("density matrix eigenvalue " +
                                  std::to_string(lambda) + " below -1e-8");
    }
    if (lambda < 1e-12) continue;
    entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

double meyer_wallach(const PureState& state) {
  if (state.num_qubits < 2) {
    throw std::invalid_argument("Meyer-Wallach needs at least two qubits");
  }
  double acc = 0.0;
  for (int k = 1; k <= state.num_qubits; ++k) {
    acc += linear_entropy(state, SubsystemMask(state.num_qubits, {k}));
  }
  return 2.0 * acc / state.num_qubits;
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw std::invalid_argument("trace distance needs equal dimensions");
  }
  const Eigen::VectorXd evals = hermitian_eigenvalues(rho1.mat - rho2.mat);
  return 0.5 * evals.cwiseAbs().sum();
}

void apply_single_qubit(Eigen::VectorXcd& amplitudes, const Eigen::Matrix2cd& u,
                        int qubit, int num_qubits) {
  if (qubit < 1 || qubit > num_qubits) {
    throw std::out_of_range("qubit index out of range");
  }
  const std::uint64_t stride = 1ULL << (num_qubits - qubit);
  const std::uint64_t dim = 1ULL << num_qubits;
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & stride) continue;
    const auto i0 = static_cast<Eigen::Index>(base);
    const auto i1 = static_cast<Eigen::Index>(base | stride);
    const Complex a0 = amplitudes(i0);
    const Complex a1 = amplitudes(i1);
    amplitudes(i0) = u(0, 0) * a0 + u(0, 1) * a1;
    amplitudes(i1) = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

}  // namespace phaserand
