#include "incoh/liouville.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace incoh {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

StateVecL vectorize(const Operator& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("vectorize: matrix must be square");
  if (!is_power_of_two(rho.rows()))
    throw std::invalid_argument("vectorize: dimension must be a power of two");
  // Eigen storage is column-major, so the raw buffer is already column-stacked.
  return Eigen::Map<const StateVecL>(rho.data(), rho.size());
}

Operator devectorize(const StateVecL& v) {
  const auto len = v.size();
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
  if (dim * dim != len) throw std::invalid_argument("devectorize: length is not a perfect square");
  if (!is_power_of_two(dim))
    throw std::invalid_argument("devectorize: dimension must be a power of two");
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Superoperator unitary_to_superop(const Operator& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("unitary_to_superop: matrix must be square");
  const double defect =
      (u.adjoint() * u - Operator::Identity(u.rows(), u.cols())).norm();
  if (defect > 1e-10)
    throw std::invalid_argument("unitary_to_superop: input is not unitary (||U^dag U - I||_F = " +
                                std::to_string(defect) + ")");
  return Eigen::kroneckerProduct(u.conjugate(), u);
}

Superoperator mix_channels(std::span<const Superoperator> channels, std::span<const double> weights) {
  if (channels.empty()) throw std::invalid_argument("mix_channels: no channels");
  if (channels.size() != weights.size())
    throw std::invalid_argument("mix_channels: channel and weight counts differ");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("mix_channels: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("mix_channels: weights sum to " + std::to_string(total) +
                                ", expected 1");
  const auto rows = channels.front().rows();
  Superoperator out = Superoperator::Zero(rows, channels.front().cols());
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (channels[k].rows() != rows || channels[k].cols() != out.cols())
      throw std::invalid_argument("mix_channels: channel dimensions differ");
    out += weights[k] * channels[k];
  }
  return out;
}

RelaxationRates::RelaxationRates(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("RelaxationRates: n_qubits must be positive");
}

RelaxationRates RelaxationRates::from_spin_system(const SpinSystem& sys) {
  sys.validate();
  RelaxationRates rates(sys.n_qubits);
  for (const PauliLabel& label : all_pauli_labels(sys.n_qubits)) {
    double r = 0.0;
    for (std::size_t j = 0; j < label.size(); ++j) {
      switch (label[j]) {
        case Pauli::I: break;
        case Pauli::X:
        case Pauli::Y: r += 1.0 / sys.t2_s[j]; break;
        case Pauli::Z: r += 1.0 / sys.t1_s[j]; break;
      }
    }
    if (r != 0.0) rates.set_rate(label, r);
  }
  return rates;
}

double RelaxationRates::rate(const PauliLabel& label) const {
  if (label.size() != n_qubits_) throw std::invalid_argument("RelaxationRates: label length mismatch");
  auto it = rates_.find(label.str());
  return it == rates_.end() ? 0.0 : it->second;
}

void RelaxationRates::set_rate(const PauliLabel& label, double rate) {
  if (label.size() != n_qubits_) throw std::invalid_argument("RelaxationRates: label length mismatch");
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("RelaxationRates: rate for " + label.str() + " must be finite and >= 0");
  if (label.is_identity() && rate != 0.0)
    throw std::invalid_argument("RelaxationRates: identity rate must be 0");
  rates_[label.str()] = rate;
}

Superoperator relaxation_superop(const RelaxationRates& rates, double t) {
  if (t < 0.0) throw std::invalid_argument("relaxation_superop: time must be non-negative");
  const std::size_t n = rates.n_qubits();
  const auto dim = Eigen::Index{1} << n;
  const auto len = dim * dim;
  const auto labels = all_pauli_labels(n);
  // Columns are the normalized vec(P_a)/sqrt(N); orthonormal under the HS product.
  CMatrix basis(len, static_cast<Eigen::Index>(labels.size()));
  Eigen::VectorXd decay(static_cast<Eigen::Index>(labels.size()));
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t a = 0; a < labels.size(); ++a) {
    const auto col = static_cast<Eigen::Index>(a);
    basis.col(col) = norm * vectorize(pauli_product(labels[a]));
    decay(col) = std::exp(-rates.rate(labels[a]) * t);
  }
  return basis * decay.cast<Complex>().asDiagonal() * basis.adjoint();
}

double fidelity(const StateVecL& a, const StateVecL& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Complex f = a.dot(b);  // conjugates a
  if (std::abs(f.imag()) > 1e-10)
    throw std::runtime_error("fidelity: inner product has imaginary part " +
                             std::to_string(f.imag()) + "; inputs are not Hermitian");
  return f.real();
}

double purity(const StateVecL& a) { return a.squaredNorm(); }

Complex trace_of(const StateVecL& v) { return devectorize(v).trace(); }

StateVecL basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("basis_state: index out of range");
  const auto d = static_cast<Eigen::Index>(dim);
  Operator rho = Operator::Zero(d, d);
  rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return vectorize(rho);
}

}  // namespace incoh
