// Spin-1/2 operator algebra, spin-system description and unitary propagators.
#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace incoh {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Operator on the 2^n dimensional Hilbert space of n qubits.
using Operator = CMatrix;

enum class Pauli { I, X, Y, Z };

/// Control channel addressing a spin. Qubit 1 is the hydrogen, the rest carbons.
enum class Channel { Hydrogen, Carbon };

/// Tensor-product Pauli label, qubit 1 first (most significant bit).
class PauliLabel {
public:
  PauliLabel() = default;
  explicit PauliLabel(std::vector<Pauli> symbols);

  /// Parses a string such as "IZZ". Throws std::invalid_argument on any
  /// character outside {I, X, Y, Z}.
  static PauliLabel parse(std::string_view text);

  /// Single Z on `qubit` (1-based), identity elsewhere.
  static PauliLabel z_on(std::size_t n_qubits, std::initializer_list<int> qubits);

  std::size_t size() const { return symbols_.size(); }
  Pauli operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<Pauli>& symbols() const { return symbols_; }
  bool is_identity() const;
  std::string str() const;

  friend bool operator==(const PauliLabel&, const PauliLabel&) = default;

private:
  std::vector<Pauli> symbols_;
};

/// All 4^n labels in lexicographic I < X < Y < Z order.
std::vector<PauliLabel> all_pauli_labels(std::size_t n_qubits);

Operator pauli_matrix(Pauli p);

/// Tensor product of single-qubit Paulis. If `n_qubits` is nonzero the label
/// length must match it.
Operator pauli_product(const PauliLabel& label, std::size_t n_qubits = 0);

/// Embeds a single-qubit operator on `qubit` (1-based) into n qubits.
Operator embed(const Operator& single, int qubit, std::size_t n_qubits);

struct SpinSystem {
  std::size_t n_qubits = 0;
  std::vector<double> frequencies_hz;  // rotating-frame offsets nu_j
  Eigen::MatrixXd couplings_hz;        // symmetric J_jk, zero diagonal
  std::vector<double> t1_s;
  std::vector<double> t2_s;
  std::vector<Channel> channels;       // empty: qubit 1 hydrogen, rest carbon

  Channel channel(int qubit) const;
  std::size_t dim() const { return std::size_t{1} << n_qubits; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Three-spin hydrogen/carbon/carbon system with the measured couplings.
SpinSystem default_spin_system();

/// H = sum_j pi nu_j Z_j + sum_{j<k} (pi J_jk / 2) sigma_j . sigma_k, in rad/s.
Operator internal_hamiltonian(const SpinSystem& sys);

/// Same Zeeman terms, but couplings between spins on different channels keep
/// only their secular Z_j Z_k part.
Operator rotating_frame_hamiltonian(const SpinSystem& sys);

bool is_hermitian(const CMatrix& m, double tol = 1e-9);
bool is_unitary(const CMatrix& m, double tol = 1e-10);

/// exp(-i h t) for Hermitian h, through its eigendecomposition.
Operator propagator(const Operator& h, double t);

/// Single-qubit rotation exp(-i angle/2 sigma_axis); axis must not be I.
Operator rotation(Pauli axis, double angle);

}  // namespace incoh
