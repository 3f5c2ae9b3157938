#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace phaserand {

using Complex = std::complex<double>;

// Largest subsystem for which reduced density matrices are materialized
// explicitly; purity of bigger subsystems goes through the matricized route.
inline constexpr int kMaxExplicitQubits = 13;

// Bit convention used everywhere: basis index a in [0, 2^N) carries the
// binary string a_1 a_2 ... a_N with a_1 the most significant bit, and
// qubit i (1-based) owns bit a_i.
inline int qubit_bit(std::uint64_t a, int qubit, int num_qubits) {
  return static_cast<int>((a >> (num_qubits - qubit)) & 1ULL);
}

// Pure state of N qubits: 2^N complex amplitudes, unit norm.
struct PureState {
  int num_qubits = 0;
  Eigen::VectorXcd amplitudes;

  Eigen::Index dim() const { return amplitudes.size(); }
};

// Validates dimension 2^N and unit norm (1e-10) and returns the state.
PureState make_state(int num_qubits, Eigen::VectorXcd amplitudes);

// Computational basis state |index>.
PureState basis_state(int num_qubits, std::uint64_t index);

// Subsystem A as a sorted set of distinct 1-based qubit indices.
class SubsystemMask {
 public:
  SubsystemMask(int num_qubits, std::vector<int> qubits);

  int num_qubits() const { return num_qubits_; }
  int size() const { return static_cast<int>(qubits_.size()); }
  const std::vector<int>& qubits() const { return qubits_; }
  bool is_proper() const { return size() < num_qubits_; }
  SubsystemMask complement() const;

 private:
  int num_qubits_;
  std::vector<int> qubits_;
};

struct DensityMatrix {
  Eigen::MatrixXcd mat;

  Eigen::Index dim() const { return mat.rows(); }
};

// Checks Hermiticity and unit trace (1e-10) and eigenvalues >= -1e-8.
void validate_density(const DensityMatrix& rho);

// Amplitudes reshaped into a 2^{|A|} x 2^{|A-bar|} matrix; row bits follow
// A in ascending qubit order (first qubit listed = most significant bit),
// same for the columns over the complement.
Eigen::MatrixXcd matricize(const PureState& state, const SubsystemMask& a);

// tr over the complement of A; dimension 2^{|A|}. Requires |A| proper and
// |A| <= kMaxExplicitQubits.
DensityMatrix reduced_density(const PureState& state, const SubsystemMask& a);

// tr over the qubits outside `keep` of a general density matrix.
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemMask& keep);

// tr rho^2; for Hermitian rho this is the squared Frobenius norm.
double purity(const DensityMatrix& rho);

// tr (tr_{A-bar}|phi><phi|)^2 without materializing the reduced matrix:
// the Gram matrix of the matricized amplitudes is formed on the smaller side.
double subsystem_purity(const PureState& state, const SubsystemMask& a);

// E_L^{(A)} = 1 - subsystem_purity; in [0, 1 - 2^{-min(|A|,|A-bar|)}].
double linear_entropy(const PureState& state, const SubsystemMask& a);

// -tr rho log2 rho in bits. Eigenvalues below 1e-12 contribute zero;
// eigenvalues below -1e-8 are an error.
double von_neumann_entropy(const DensityMatrix& rho);

// Meyer-Wallach measure (2/N) sum_k E_L^{({k})}; requires N >= 2.
double meyer_wallach(const PureState& state);

// (1/2) ||rho1 - rho2||_1 via the Hermitian eigenvalues of the difference.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Applies a 2x2 gate to one qubit of an amplitude vector in place.
void apply_single_qubit(Eigen::VectorXcd& amplitudes, const Eigen::Matrix2cd& u,
                        int qubit, int num_qubits);

}  // namespace phaserand
