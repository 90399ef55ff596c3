#include "incoh/spincore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace incoh {

namespace {

constexpr double kPi = std::numbers::pi;

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("invalid Pauli symbol '") + c + "'");
}

char pauli_char(Pauli p) {
  constexpr char chars[] = {'I', 'X', 'Y', 'Z'};
  return chars[static_cast<int>(p)];
}

}  // namespace

PauliLabel::PauliLabel(std::vector<Pauli> symbols) : symbols_(std::move(symbols)) {}

PauliLabel PauliLabel::parse(std::string_view text) {
  std::vector<Pauli> symbols;
  symbols.reserve(text.size());
  for (char c : text) symbols.push_back(pauli_from_char(c));
  return PauliLabel(std::move(symbols));
}

PauliLabel PauliLabel::z_on(std::size_t n_qubits, std::initializer_list<int> qubits) {
  std::vector<Pauli> symbols(n_qubits, Pauli::I);
  for (int q : qubits) {
    if (q < 1 || static_cast<std::size_t>(q) > n_qubits)
      throw std::invalid_argument("qubit index out of range");
    symbols[q - 1] = Pauli::Z;
  }
  return PauliLabel(std::move(symbols));
}

bool PauliLabel::is_identity() const {
  for (Pauli p : symbols_)
    if (p != Pauli::I) return false;
  return true;
}

std::string PauliLabel::str() const {
  std::string s;
  for (Pauli p : symbols_) s.push_back(pauli_char(p));
  return s;
}

std::vector<PauliLabel> all_pauli_labels(std::size_t n_qubits) {
  std::size_t count = std::size_t{1} << (2 * n_qubits);
  std::vector<PauliLabel> labels;
  labels.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::vector<Pauli> symbols(n_qubits);
    std::size_t rest = idx;
    for (std::size_t j = n_qubits; j-- > 0;) {
      symbols[j] = static_cast<Pauli>(rest & 3U);
      rest >>= 2;
    }
    labels.emplace_back(std::move(symbols));
  }
  return labels;
}

Operator pauli_matrix(Pauli p) {
  const Complex i{0.0, 1.0};
  Operator m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Operator pauli_product(const PauliLabel& label, std::size_t n_qubits) {
  if (n_qubits != 0 && label.size() != n_qubits)
    throw std::invalid_argument("Pauli label length " + std::to_string(label.size()) +
                                " does not match qubit count " + std::to_string(n_qubits));
  if (label.size() == 0) throw std::invalid_argument("empty Pauli label");
  Operator out = Operator::Identity(1, 1);
  for (Pauli p : label.symbols()) {
    Operator next = Eigen::kroneckerProduct(out, pauli_matrix(p));
    out = std::move(next);
  }
  return out;
}

Operator embed(const Operator& single, int qubit, std::size_t n_qubits) {
  if (single.rows() != 2 || single.cols() != 2)
    throw std::invalid_argument("embed expects a 2x2 operator");
  if (qubit < 1 || static_cast<std::size_t>(qubit) > n_qubits)
    throw std::invalid_argument("qubit index " + std::to_string(qubit) + " out of range");
  std::size_t left = std::size_t{1} << (qubit - 1);
  std::size_t right = std::size_t{1} << (n_qubits - qubit);
  Operator tmp = Eigen::kroneckerProduct(Operator::Identity(left, left), single);
  return Eigen::kroneckerProduct(tmp, Operator::Identity(right, right));
}

Channel SpinSystem::channel(int qubit) const {
  if (qubit < 1 || static_cast<std::size_t>(qubit) > n_qubits)
    throw std::invalid_argument("qubit index " + std::to_string(qubit) + " out of range");
  if (!channels.empty()) return channels[qubit - 1];
  return qubit == 1 ? Channel::Hydrogen : Channel::Carbon;
}

void SpinSystem::validate() const {
  if (n_qubits == 0) throw std::invalid_argument("spin_system: n_qubits must be positive");
  if (n_qubits > 5) throw std::invalid_argument("spin_system: at most 5 qubits are supported");
  auto check_len = [&](std::size_t len, const char* field) {
    if (len != n_qubits)
      throw std::invalid_argument(std::string("spin_system.") + field + ": expected " +
                                  std::to_string(n_qubits) + " entries, got " +
                                  std::to_string(len));
  };
  check_len(frequencies_hz.size(), "frequencies_hz");
  check_len(t1_s.size(), "t1_s");
  check_len(t2_s.size(), "t2_s");
  if (!channels.empty()) check_len(channels.size(), "channels");
  if (static_cast<std::size_t>(couplings_hz.rows()) != n_qubits ||
      static_cast<std::size_t>(couplings_hz.cols()) != n_qubits)
    throw std::invalid_argument("spin_system.couplings_hz: expected a " +
                                std::to_string(n_qubits) + "x" + std::to_string(n_qubits) +
                                " matrix");
  for (double f : frequencies_hz)
    if (!std::isfinite(f)) throw std::invalid_argument("spin_system.frequencies_hz: non-finite value");
  for (std::size_t j = 0; j < n_qubits; ++j) {
    if (couplings_hz(j, j) != 0.0)
      throw std::invalid_argument("spin_system.couplings_hz: diagonal must be zero");
    for (std::size_t k = 0; k < n_qubits; ++k) {
      if (!std::isfinite(couplings_hz(j, k)))
        throw std::invalid_argument("spin_system.couplings_hz: non-finite value");
      if (couplings_hz(j, k) != couplings_hz(k, j))
        throw std::invalid_argument("spin_system.couplings_hz: matrix must be symmetric");
    }
    if (!(t1_s[j] > 0.0)) throw std::invalid_argument("spin_system.t1_s: values must be positive");
    if (!(t2_s[j] > 0.0)) throw std::invalid_argument("spin_system.t2_s: values must be positive");
    if (t2_s[j] > 2.0 * t1_s[j])
      throw std::invalid_argument("spin_system.t2_s: T2 must not exceed 2*T1 (qubit " +
                                  std::to_string(j + 1) + ")");
  }
}

SpinSystem default_spin_system() {
  SpinSystem sys;
  sys.n_qubits = 3;
  // Carbons split symmetrically about the carrier by their 1.201 kHz separation.
  sys.frequencies_hz = {0.0, 600.5, -600.5};
  sys.couplings_hz = Eigen::MatrixXd::Zero(3, 3);
  sys.couplings_hz(0, 1) = sys.couplings_hz(1, 0) = 235.7;
  sys.couplings_hz(0, 2) = sys.couplings_hz(2, 0) = 42.9;
  sys.couplings_hz(1, 2) = sys.couplings_hz(2, 1) = 132.6;
  sys.t1_s = {10.4, 3.0, 3.0};
  sys.t2_s = {3.0, 1.5, 1.5};
  return sys;
}

namespace {

Operator hamiltonian_impl(const SpinSystem& sys, bool secular_heteronuclear) {
  sys.validate();
  const std::size_t n = sys.n_qubits;
  const auto dim = static_cast<Eigen::Index>(sys.dim());
  Operator h = Operator::Zero(dim, dim);
  for (std::size_t j = 0; j < n; ++j) {
    const int q = static_cast<int>(j) + 1;
    h += kPi * sys.frequencies_hz[j] * embed(pauli_matrix(Pauli::Z), q, n);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double jc = sys.couplings_hz(j, k);
      if (jc == 0.0) continue;
      const int qj = static_cast<int>(j) + 1;
      const int qk = static_cast<int>(k) + 1;
      const bool secular_only =
          secular_heteronuclear && sys.channel(qj) != sys.channel(qk);
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        if (secular_only && p != Pauli::Z) continue;
        h += (kPi * jc / 2.0) * embed(pauli_matrix(p), qj, n) * embed(pauli_matrix(p), qk, n);
      }
    }
  }
  return h;
}

}  // namespace

Operator internal_hamiltonian(const SpinSystem& sys) { return hamiltonian_impl(sys, false); }

Operator rotating_frame_hamiltonian(const SpinSystem& sys) { return hamiltonian_impl(sys, true); }

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= tol * scale;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).norm() <= tol;
}

Operator propagator(const Operator& h, double t) {
  if (h.rows() != h.cols()) throw std::invalid_argument("propagator: Hamiltonian must be square");
  if (!is_hermitian(h)) throw std::invalid_argument("propagator: Hamiltonian is not Hermitian");
  if (t < 0.0) throw std::invalid_argument("propagator: time must be non-negative");
  if (t == 0.0) return Operator::Identity(h.rows(), h.cols());
  // Symmetrize so the solver sees an exactly Hermitian input.
  const CMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  if (eig.info() != Eigen::Success) throw std::runtime_error("propagator: eigensolver failed");
  const Eigen::VectorXd& w = eig.eigenvalues();
  CVector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::polar(1.0, -w(k) * t);
  const CMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Operator rotation(Pauli axis, double angle) {
  if (axis == Pauli::I) throw std::invalid_argument("rotation axis must be X, Y or Z");
  const Complex i{0.0, 1.0};
  return std::cos(angle / 2.0) * Operator::Identity(2, 2) -
         i * std::sin(angle / 2.0) * pauli_matrix(axis);
}

}  // namespace incoh
