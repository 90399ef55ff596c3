// Liouville-space representation: column-stacked density matrices and
// superoperators acting on them.
#pragma once

#include <map>
#include <span>
#include <vector>

#include "incoh/spincore.hpp"

namespace incoh {

/// Column-stacked density matrix |rho>> of length N^2.
using StateVecL = CVector;

/// N^2 x N^2 matrix acting on column-stacked density matrices.
using Superoperator = CMatrix;

StateVecL vectorize(const Operator& rho);
Operator devectorize(const StateVecL& v);

/// conj(U) (x) U, so that superop * vec(rho) == vec(U rho U^dagger).
Superoperator unitary_to_superop(const Operator& u);

/// Convex combination sum_k p_k S_k. Weights must be non-negative and sum to 1.
Superoperator mix_channels(std::span<const Superoperator> channels, std::span<const double> weights);

/// Decay rate (1/s) per generalized Pauli label. Labels not listed decay at rate 0.
class RelaxationRates {
public:
  explicit RelaxationRates(std::size_t n_qubits);

  /// Additive single-spin model: X or Y on spin j contributes 1/T2_j, Z
  /// contributes 1/T1_j, identity factors contribute nothing.
  static RelaxationRates from_spin_system(const SpinSystem& sys);

  std::size_t n_qubits() const { return n_qubits_; }
  double rate(const PauliLabel& label) const;
  void set_rate(const PauliLabel& label, double rate);

private:
  std::size_t n_qubits_;
  std::map<std::string, double> rates_;
};

/// Channel that is diagonal in the normalized Pauli basis, scaling the
/// coefficient of P_a by exp(-r_a t).
Superoperator relaxation_superop(const RelaxationRates& rates, double t);

/// Hilbert-Schmidt inner product trace(a^dagger b).
double fidelity(const StateVecL& a, const StateVecL& b);

/// trace(rho^2).
double purity(const StateVecL& a);

/// trace of the devectorized state.
Complex trace_of(const StateVecL& v);

/// Column-stacked basis projector |i><i|.
StateVecL basis_state(std::size_t dim, std::size_t index);

}  // namespace incoh
