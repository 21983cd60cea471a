#pragma once

// Dense Hermitian-operator backend for certification: partial transpose,
// negativity, PPT certificates, fidelity, party permutation, and the
// correlated-Pauli twirl channel. Everything here runs on <= 12 qubits;
// larger systems must be reduced at the stabilizer level first.
//
// Index convention: qubit 0 is the most significant bit of the basis index,
// matching the tensor-factor order used everywhere else in the library.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bell.hpp"
#include "pauli.hpp"

namespace abechain {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kDensifyCap = 12;

inline std::size_t dim_for_qubits(std::size_t k) {
  if (k > kDensifyCap) throw std::invalid_argument("dense subsystem above the 12-qubit cap");
  return std::size_t{1} << k;
}

struct DensityMatrix {
  std::size_t k = 0;
  Matrix m;

  DensityMatrix() = default;
  DensityMatrix(std::size_t qubits, Matrix entries) : k(qubits), m(std::move(entries)) {
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(k));
    if (m.rows() != d || m.cols() != d) throw std::invalid_argument("density dimension mismatch");
  }

  std::size_t dim() const { return std::size_t{1} << k; }
};

// Bipartition of the k qubit positions; `left` is the transposed side.
struct Cut {
  std::vector<std::size_t> left;

  static Cut of(std::initializer_list<std::size_t> qs) { return Cut{std::vector<std::size_t>(qs)}; }
};

namespace detail {

inline std::uint64_t cut_mask(const DensityMatrix& rho, const Cut& cut) {
  if (cut.left.empty() || cut.left.size() >= rho.k) throw std::invalid_argument("cut sides must both be nonempty");
  std::uint64_t mask = 0;
  for (std::size_t q : cut.left) {
    if (q >= rho.k) throw std::invalid_argument("cut qubit out of range");
    const std::uint64_t bit = std::uint64_t{1} << (rho.k - 1 - q);
    if (mask & bit) throw std::invalid_argument("cut lists a qubit twice");
    mask |= bit;
  }
  return mask;
}

inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Matrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return solver.eigenvalues();
}

}  // namespace detail

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline const Matrix& letter_matrix(PauliLetter l) {
  static const Matrix i2 = (Matrix(2, 2) << 1, 0, 0, 1).finished();
  static const Matrix x2 = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  static const Matrix z2 = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  static const Matrix y2 =
      (Matrix(2, 2) << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0).finished();
  switch (l) {
    case PauliLetter::I: return i2;
    case PauliLetter::X: return x2;
    case PauliLetter::Z: return z2;
    case PauliLetter::Y: return y2;
  }
  throw std::invalid_argument("unknown Pauli letter");
}

// Dense rendering of a PauliString, phase included.
inline Matrix pauli_matrix(const PauliString& p) {
  Matrix out = letter_matrix(p.letter(0));
  for (std::size_t q = 1; q < p.num_qubits(); ++q) out = kron(out, letter_matrix(p.letter(q)));
  return p.phase() * out;
}

inline Vector bell_vector(BellIndex b) {
  const double r = 1.0 / std::numbers::sqrt2;
  Vector v(4);
  switch (b) {
    case BellIndex::psi_plus: v << 0, r, r, 0; break;
    case BellIndex::psi_minus: v << 0, r, -r, 0; break;
    case BellIndex::phi_plus: v << r, 0, 0, r; break;
    case BellIndex::phi_minus: v << r, 0, 0, -r; break;
  }
  return v;
}

inline DensityMatrix maximally_mixed(std::size_t k) {
  const auto d = static_cast<Eigen::Index>(dim_for_qubits(k));
  return DensityMatrix(k, Matrix::Identity(d, d) / static_cast<double>(d));
}

inline Matrix partial_transpose(const DensityMatrix& rho, const Cut& cut) {
  const std::uint64_t mask = detail::cut_mask(rho, cut);
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Matrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto ru = static_cast<std::uint64_t>(r), cu = static_cast<std::uint64_t>(c);
      const auto rr = static_cast<Eigen::Index>((ru & ~mask) | (cu & mask));
      const auto cc = static_cast<Eigen::Index>((cu & ~mask) | (ru & mask));
      out(rr, cc) = rho.m(r, c);
    }
  }
  return out;
}

// (trace norm of the partial transpose - 1) / 2; zero for PPT states.
inline double negativity(const DensityMatrix& rho, const Cut& cut) {
  const Eigen::VectorXd ev = detail::hermitian_eigenvalues(partial_transpose(rho, cut));
  const double v = (ev.cwiseAbs().sum() - 1.0) / 2.0;
  return v > 0.0 ? v : 0.0;
}

struct PptCertificate {
  bool is_ppt = false;
  double min_eigenvalue = 0.0;
};

inline PptCertificate ppt_certificate(const DensityMatrix& rho, const Cut& cut, double tol = 1e-10) {
  if (!(tol > 0.0)) throw std::invalid_argument("PPT tolerance must be positive");
  const Eigen::VectorXd ev = detail::hermitian_eigenvalues(partial_transpose(rho, cut));
  const double lo = ev.minCoeff();
  return {lo >= -tol, lo};
}

inline double fidelity_pure(const DensityMatrix& rho, const Vector& psi) {
  if (psi.size() != static_cast<Eigen::Index>(rho.dim())) throw std::invalid_argument("fidelity dimension mismatch");
  return std::real(psi.dot(rho.m * psi));
}

// Qubit relabeling: input qubit position q becomes output position perm[q].
inline DensityMatrix permute_parties(const DensityMatrix& rho, const std::vector<std::size_t>& perm) {
  if (perm.size() != rho.k) throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(rho.k, false);
  for (std::size_t t : perm) {
    if (t >= rho.k || seen[t]) throw std::invalid_argument("not a qubit permutation");
    seen[t] = true;
  }
  const auto d = static_cast<Eigen::Index>(rho.dim());
  std::vector<Eigen::Index> moved(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    std::uint64_t out = 0;
    for (std::size_t q = 0; q < rho.k; ++q)
      if ((static_cast<std::uint64_t>(i) >> (rho.k - 1 - q)) & 1u) out |= std::uint64_t{1} << (rho.k - 1 - perm[q]);
    moved[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(out);
  }
  Matrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) out(moved[static_cast<std::size_t>(r)], moved[static_cast<std::size_t>(c)]) = rho.m(r, c);
  return DensityMatrix(rho.k, std::move(out));
}

// Correlated two-qubit Pauli twirl: (1/4) sum over s of (s(x)s) rho (s(x)s).
// Unital, trace preserving, idempotent; Werner states are fixed points.
inline DensityMatrix abe_channel(const DensityMatrix& rho) {
  if (rho.k != 2) throw std::invalid_argument("twirl channel is defined on two qubits");
  Matrix acc = Matrix::Zero(4, 4);
  for (PauliLetter l : {PauliLetter::I, PauliLetter::X, PauliLetter::Z, PauliLetter::Y}) {
    const Matrix u = kron(letter_matrix(l), letter_matrix(l));
    acc += u * rho.m * u;
  }
  return DensityMatrix(2, acc / 4.0);
}

// p |psi-><psi-| + (1 - p) I/4.
inline DensityMatrix werner(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("Werner weight out of [0, 1]");
  const Vector s = bell_vector(BellIndex::psi_minus);
  Matrix m = p * (s * s.adjoint()) + (1.0 - p) * Matrix::Identity(4, 4) / 4.0;
  return DensityMatrix(2, std::move(m));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

struct DensityHealth {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
};

inline DensityHealth density_health(const DensityMatrix& rho) {
  DensityHealth h;
  h.hermiticity_error = max_abs_diff(rho.m, rho.m.adjoint());
  h.trace_error = std::abs(rho.m.trace() - std::complex<double>(1.0, 0.0));
  h.min_eigenvalue = detail::hermitian_eigenvalues(rho.m).minCoeff();
  return h;
}

}  // namespace abechain
