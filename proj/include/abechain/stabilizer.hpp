#pragma once

// Pure n-qubit stabilizer states as tableaux of n commuting, independent,
// real-signed generators. Clifford gates conjugate the generators in place;
// measurements return every branch with its exact dyadic probability.
//
// The canonical form is the unique reduced row echelon form over GF(2) with
// column order x_0 .. x_{n-1}, z_0 .. z_{n-1}; generator phases are carried
// through every row operation, so canonical keys decide state equality.

#include <algorithm>
#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bell.hpp"
#include "density.hpp"
#include "dyadic.hpp"
#include "pauli.hpp"

namespace abechain {

enum class Gate : std::uint8_t { H, S, X, Y, Z, CNOT };

struct GateOp {
  Gate kind = Gate::H;
  std::size_t a = 0;
  std::size_t b = 0;  // CNOT target; ignored by one-qubit gates

  static GateOp single(Gate g, std::size_t q) { return {g, q, q}; }
  static GateOp cnot(std::size_t c, std::size_t t) { return {Gate::CNOT, c, t}; }
};

using Circuit = std::vector<GateOp>;

inline std::complex<double> i_power(unsigned e) {
  constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[e & 3u];
}

class StabilizerState {
 public:
  // |0...0>, stabilized by +Z on every qubit.
  explicit StabilizerState(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxQubits) throw std::invalid_argument("qubit count out of range");
    gens_.reserve(n);
    for (std::size_t q = 0; q < n; ++q) gens_.push_back(PauliString::single(n, q, PauliLetter::Z));
  }

  static StabilizerState from_generators(const std::vector<PauliString>& gens) {
    if (gens.empty()) throw std::invalid_argument("empty generator list");
    const std::size_t n = gens[0].num_qubits();
    if (gens.size() != n) throw std::invalid_argument("need exactly one generator per qubit");
    for (const auto& g : gens) {
      if (g.num_qubits() != n) throw std::invalid_argument("generator size mismatch");
      if (!g.hermitian()) throw std::invalid_argument("generator phase must be a real sign");
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!gens[i].commutes_with(gens[j])) throw std::invalid_argument("generators must commute");
    StabilizerState s(n);
    s.gens_ = gens;
    StabilizerState probe = s;
    probe.canonicalize();
    for (const auto& g : probe.gens_)
      if (g.identity_bits()) throw std::invalid_argument("generators must be independent");
    return s;
  }

  static StabilizerState tensor(const StabilizerState& a, const StabilizerState& b) {
    const std::size_t n = a.n_ + b.n_;
    if (n > kMaxQubits) throw std::invalid_argument("tensor exceeds the qubit word size");
    std::vector<PauliString> gens;
    gens.reserve(n);
    auto embed = [n](const PauliString& g, std::size_t offset) {
      PauliString out(n);
      out.set_phase_exp(g.phase_exp());
      for (std::size_t q = 0; q < g.num_qubits(); ++q) out.set_letter(offset + q, g.letter(q));
      return out;
    };
    for (const auto& g : a.gens_) gens.push_back(embed(g, 0));
    for (const auto& g : b.gens_) gens.push_back(embed(g, a.n_));
    StabilizerState s(n);
    s.gens_ = std::move(gens);
    return s;
  }

  std::size_t num_qubits() const { return n_; }
  const std::vector<PauliString>& generators() const { return gens_; }
  const PauliString& generator(std::size_t i) const { return gens_.at(i); }

  void h(std::size_t q) {
    check_q(q);
    for (auto& g : gens_) {
      const bool xb = g.x_bit(q), zb = g.z_bit(q);
      if (xb && zb) g.negate();
      g.set_letter(q, static_cast<PauliLetter>((zb ? 1u : 0u) | (xb ? 2u : 0u)));
    }
  }

  void s(std::size_t q) {
    check_q(q);
    for (auto& g : gens_) {
      const bool xb = g.x_bit(q), zb = g.z_bit(q);
      if (xb && zb) g.negate();
      if (xb) g.set_letter(q, static_cast<PauliLetter>(1u | (zb ? 0u : 2u)));
    }
  }

  void x(std::size_t q) {
    check_q(q);
    for (auto& g : gens_)
      if (g.z_bit(q)) g.negate();
  }

  void y(std::size_t q) {
    check_q(q);
    for (auto& g : gens_)
      if (g.x_bit(q) != g.z_bit(q)) g.negate();
  }

  void z(std::size_t q) {
    check_q(q);
    for (auto& g : gens_)
      if (g.x_bit(q)) g.negate();
  }

  void cnot(std::size_t c, std::size_t t) {
    check_q(c);
    check_q(t);
    if (c == t) throw std::invalid_argument("CNOT requires distinct qubits");
    for (auto& g : gens_) {
      const bool xc = g.x_bit(c), zc = g.z_bit(c), xt = g.x_bit(t), zt = g.z_bit(t);
      if (xc && zt && (xt == zc)) g.negate();
      g.set_letter(t, static_cast<PauliLetter>(((xt != xc) ? 1u : 0u) | (zt ? 2u : 0u)));
      g.set_letter(c, static_cast<PauliLetter>((xc ? 1u : 0u) | ((zc != zt) ? 2u : 0u)));
    }
  }

  void apply(const GateOp& op) {
    switch (op.kind) {
      case Gate::H: h(op.a); return;
      case Gate::S: s(op.a); return;
      case Gate::X: x(op.a); return;
      case Gate::Y: y(op.a); return;
      case Gate::Z: z(op.a); return;
      case Gate::CNOT: cnot(op.a, op.b); return;
    }
    throw std::invalid_argument("unknown gate");
  }

  void apply(const Circuit& circuit) {
    for (const auto& op : circuit) apply(op);
  }

  // Conjugation by a Pauli: flips the sign of every anticommuting generator.
  void apply_pauli(const PauliString& p) {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli size mismatch");
    for (auto& g : gens_)
      if (!g.commutes_with(p)) g.negate();
  }

  std::vector<std::size_t> anticommuting_generators(const PauliString& p) const {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli size mismatch");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (!gens_[i].commutes_with(p)) out.push_back(i);
    return out;
  }

  // Outcome sign of a measurement operator that commutes with every
  // generator: reduces p over the canonical rows and compares phases.
  int deterministic_sign(const PauliString& p) const {
    StabilizerState c = *this;
    c.canonicalize();
    PauliString acc(n_);
    for (const auto& row : c.gens_) {
      const std::size_t col = pivot_column(row);
      if (column_bit(p, col) != column_bit(acc, col)) acc.mul_inplace(row);
    }
    if (acc.x_word() != p.x_word() || acc.z_word() != p.z_word())
      throw std::logic_error("operator is not in the stabilizer group up to sign");
    const unsigned diff = (4u + p.phase_exp() - acc.phase_exp()) & 3u;
    if (diff == 0) return 1;
    if (diff == 2) return -1;
    throw std::logic_error("imaginary phase for a deterministic outcome");
  }

  // Collapse for an anticommuting measurement: restore commutation by the
  // pivot, then replace the pivot row with the (signed) measured operator.
  void collapse(const std::vector<std::size_t>& anti, const PauliString& signed_p) {
    const std::size_t pivot = anti.front();
    for (std::size_t idx = 1; idx < anti.size(); ++idx) gens_[anti[idx]].mul_inplace(gens_[pivot]);
    gens_[pivot] = signed_p;
  }

  void canonicalize() {
    std::size_t r = 0;
    for (std::size_t col = 0; col < 2 * n_ && r < n_; ++col) {
      std::size_t pivot = n_;
      for (std::size_t i = r; i < n_; ++i)
        if (column_bit(gens_[i], col)) {
          pivot = i;
          break;
        }
      if (pivot == n_) continue;
      std::swap(gens_[r], gens_[pivot]);
      for (std::size_t i = 0; i < n_; ++i)
        if (i != r && column_bit(gens_[i], col)) gens_[i].mul_inplace(gens_[r]);
      ++r;
    }
  }

  StabilizerState canonical() const {
    StabilizerState c = *this;
    c.canonicalize();
    return c;
  }

  std::string canonical_key() const {
    StabilizerState c = canonical();
    std::ostringstream out;
    out << std::hex << n_;
    for (const auto& g : c.gens_) out << ';' << g.x_word() << ',' << g.z_word() << ',' << int(g.phase_exp());
    return out.str();
  }

  // Generators of the subgroup of stabilizer elements supported entirely on
  // `subset`: eliminate every outside column, keep the rows left untouched.
  std::vector<PauliString> subgroup_within(const std::vector<std::size_t>& subset) const {
    std::uint64_t inside = 0;
    for (std::size_t q : subset) {
      check_q(q);
      inside |= std::uint64_t{1} << q;
    }
    std::vector<PauliString> rows = gens_;
    std::size_t r = 0;
    for (std::size_t col = 0; col < 2 * n_; ++col) {
      const std::size_t q = col < n_ ? col : col - n_;
      if ((inside >> q) & 1u) continue;
      std::size_t pivot = n_;
      for (std::size_t i = r; i < n_; ++i)
        if (column_bit(rows[i], col)) {
          pivot = i;
          break;
        }
      if (pivot == n_) continue;
      std::swap(rows[r], rows[pivot]);
      for (std::size_t i = 0; i < n_; ++i)
        if (i != r && column_bit(rows[i], col)) rows[i].mul_inplace(rows[r]);
      ++r;
    }
    return std::vector<PauliString>(rows.begin() + static_cast<std::ptrdiff_t>(r), rows.end());
  }

 private:
  std::size_t n_;
  std::vector<PauliString> gens_;

  void check_q(std::size_t q) const {
    if (q >= n_) throw std::out_of_range("qubit index out of range");
  }

  static bool column_bit(const PauliString& p, std::size_t col) {
    return col < p.num_qubits() ? p.x_bit(col) : p.z_bit(col - p.num_qubits());
  }

  static std::size_t pivot_column(const PauliString& p) {
    if (p.x_word() != 0) return static_cast<std::size_t>(std::countr_zero(p.x_word()));
    if (p.z_word() != 0) return p.num_qubits() + static_cast<std::size_t>(std::countr_zero(p.z_word()));
    throw std::logic_error("identity row has no pivot");
  }
};

inline bool same_state(const StabilizerState& a, const StabilizerState& b) {
  return a.num_qubits() == b.num_qubits() && a.canonical_key() == b.canonical_key();
}

// The joint eigenstate of (s_xx XX, s_zz ZZ) named by the index.
inline StabilizerState prepare_bell(BellIndex b) {
  const BellSigns signs = bell_signs(b);
  PauliString xx = PauliString::from_label("XX");
  PauliString zz = PauliString::from_label("ZZ");
  if (signs.xx_negative) xx.negate();
  if (signs.zz_negative) zz.negate();
  return StabilizerState::from_generators({xx, zz});
}

inline StabilizerState apply_clifford(StabilizerState state, Gate gate, const std::vector<std::size_t>& targets) {
  if (gate == Gate::CNOT) {
    if (targets.size() != 2) throw std::invalid_argument("CNOT takes two targets");
    state.cnot(targets[0], targets[1]);
  } else {
    if (targets.size() != 1) throw std::invalid_argument("one-qubit gate takes one target");
    state.apply(GateOp::single(gate, targets[0]));
  }
  return state;
}

struct PauliBranch {
  bool negative = false;  // measured eigenvalue is -1
  Dyadic probability = Dyadic(1);
  StabilizerState state;
};

inline std::vector<PauliBranch> measure_pauli(const StabilizerState& s, const PauliString& p) {
  if (p.num_qubits() != s.num_qubits()) throw std::invalid_argument("pauli size mismatch");
  if (!p.hermitian()) throw std::invalid_argument("measurement operator must have a real sign");
  const auto anti = s.anticommuting_generators(p);
  if (anti.empty()) {
    const int sign = s.deterministic_sign(p);
    return {{sign < 0, Dyadic(1), s}};
  }
  PauliString plus_p = p;
  plus_p.set_phase_exp(0);
  StabilizerState plus = s;
  plus.collapse(anti, plus_p);
  StabilizerState minus = plus;
  minus.collapse({anti.front()}, plus_p.negated());
  const bool measured_negative = p.phase_exp() == 2;
  return {{measured_negative, Dyadic::pow2(1), std::move(plus)},
          {!measured_negative, Dyadic::pow2(1), std::move(minus)}};
}

struct BellBranch {
  BellIndex outcome = BellIndex::phi_plus;
  Dyadic probability = Dyadic(1);
  StabilizerState state;
};

// XX then ZZ on (qa, qb); the sign pair names the Bell outcome and the
// measured qubits are left in that Bell state.
inline std::vector<BellBranch> bell_measure(const StabilizerState& s, std::size_t qa, std::size_t qb) {
  if (qa == qb) throw std::invalid_argument("Bell measurement needs two distinct qubits");
  const std::size_t n = s.num_qubits();
  PauliString xx(n), zz(n);
  xx.set_letter(qa, PauliLetter::X);
  xx.set_letter(qb, PauliLetter::X);
  zz.set_letter(qa, PauliLetter::Z);
  zz.set_letter(qb, PauliLetter::Z);
  std::array<std::optional<BellBranch>, kBellCount> found;
  for (auto& bx : measure_pauli(s, xx)) {
    for (auto& bz : measure_pauli(bx.state, zz)) {
      const BellIndex idx = bell_from_signs(bx.negative, bz.negative);
      found[static_cast<std::size_t>(idx)] =
          BellBranch{idx, bx.probability * bz.probability, std::move(bz.state)};
    }
  }
  std::vector<BellBranch> out;
  for (BellIndex idx : kBellOrder)
    if (auto& br = found[static_cast<std::size_t>(idx)]) out.push_back(std::move(*br));
  return out;
}

// 2^{-|subset|}  *  sum of all stabilizer-group elements supported inside
// `subset`, rendered on the subset in the given qubit order.
inline DensityMatrix reduced_density(const StabilizerState& s, const std::vector<std::size_t>& subset) {
  const std::size_t k = subset.size();
  if (k == 0) throw std::invalid_argument("empty subset");
  const std::size_t dim = dim_for_qubits(k);
  {
    std::uint64_t seen = 0;
    for (std::size_t q : subset) {
      if (q >= s.num_qubits()) throw std::out_of_range("subset qubit out of range");
      if ((seen >> q) & 1u) throw std::invalid_argument("subset lists a qubit twice");
      seen |= std::uint64_t{1} << q;
    }
  }
  const auto sub = s.subgroup_within(subset);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  auto render = [&](const PauliString& g) {
    std::uint64_t lx = 0, lz = 0;
    for (std::size_t t = 0; t < k; ++t) {
      const std::uint64_t bit = std::uint64_t{1} << (k - 1 - t);
      if (g.x_bit(subset[t])) lx |= bit;
      if (g.z_bit(subset[t])) lz |= bit;
    }
    const std::complex<double> coeff =
        g.phase() * i_power(static_cast<unsigned>(std::popcount(lx & lz)));
    for (std::uint64_t y = 0; y < dim; ++y) {
      const double sign = (std::popcount(lz & y) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(y ^ lx), static_cast<Eigen::Index>(y)) += coeff * sign;
    }
  };
  PauliString acc(s.num_qubits());
  render(acc);
  for (std::uint64_t c = 1; c < (std::uint64_t{1} << sub.size()); ++c) {
    acc.mul_inplace(sub[static_cast<std::size_t>(std::countr_zero(c))]);
    render(acc);
  }
  m /= static_cast<double>(dim);
  return DensityMatrix(k, std::move(m));
}

// Unit state vector fixed by every generator, up to the global phase that is
// normalized away by making the first nonzero amplitude real positive.
inline Vector to_statevector(const StabilizerState& s) {
  const std::size_t n = s.num_qubits();
  const std::size_t dim = dim_for_qubits(n);
  const StabilizerState c = s.canonical();

  // A basis state of nonzero amplitude: the diagonal rows (no X part) fix the
  // parity of their pivot bit; every other bit can be taken zero.
  std::uint64_t idx0 = 0;
  for (const auto& row : c.generators()) {
    if (row.x_word() != 0) continue;
    const std::size_t q = static_cast<std::size_t>(std::countr_zero(row.z_word()));
    if (row.phase_exp() == 2) idx0 |= std::uint64_t{1} << (n - 1 - q);
  }

  auto apply_pauli_dense = [&](const PauliString& g, const Vector& v) {
    std::uint64_t lx = 0, lz = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
      if (g.x_bit(q)) lx |= bit;
      if (g.z_bit(q)) lz |= bit;
    }
    const std::complex<double> coeff =
        g.phase() * i_power(static_cast<unsigned>(std::popcount(g.x_word() & g.z_word())));
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::uint64_t y = 0; y < dim; ++y) {
      const double sign = (std::popcount(lz & y) & 1) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(y ^ lx)) += coeff * sign * v(static_cast<Eigen::Index>(y));
    }
    return out;
  };

  Vector psi = Vector::Zero(static_cast<Eigen::Index>(dim));
  psi(static_cast<Eigen::Index>(idx0)) = 1.0;
  for (const auto& g : c.generators()) psi = (psi + apply_pauli_dense(g, psi)) / 2.0;
  const double norm = psi.norm();
  if (!(norm > 1e-9)) throw std::logic_error("projector chain annihilated the seed state");
  psi /= norm;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi(i)) > 1e-9) {
      psi *= std::conj(psi(i)) / std::abs(psi(i));
      break;
    }
  }
  return psi;
}

}  // namespace abechain
