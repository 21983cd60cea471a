#pragma once

// Single-word n-qubit Pauli operators (n <= 64) with an i^e phase.
//
// Conventions, fixed project-wide:
//   - qubit q contributes the factor W(x,z) = i^(x*z) X^x Z^z, so that
//     (0,0) = I, (1,0) = X, (0,1) = Z and (1,1) = Y with no hidden phase;
//   - a PauliString is i^phase_exp * W(x_0,z_0) (x) ... (x) W(x_{n-1},z_{n-1});
//   - qubit 0 is the leftmost tensor factor (most significant index bit).

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace abechain {

inline constexpr std::size_t kMaxQubits = 64;

// Encoded as x + 2z so the letter doubles as its own bit pattern.
enum class PauliLetter : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr char letter_char(PauliLetter l) {
  constexpr char table[4] = {'I', 'X', 'Z', 'Y'};
  return table[static_cast<int>(l)];
}

constexpr PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Z': return PauliLetter::Z;
    case 'Y': return PauliLetter::Y;
    default: throw std::invalid_argument("unknown Pauli letter");
  }
}

// Composition of letters as group elements modulo phase: bitwise XOR.
constexpr PauliLetter letter_product(PauliLetter a, PauliLetter b) {
  return static_cast<PauliLetter>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

class PauliString {
 public:
  explicit PauliString(std::size_t n) : n_(checked_size(n)) {}

  static PauliString single(std::size_t n, std::size_t q, PauliLetter l, std::uint8_t phase_exp = 0) {
    PauliString p(n);
    p.set_letter(q, l);
    p.set_phase_exp(phase_exp);
    return p;
  }

  // "+XIZY", "-iYZ", "ZZ" (implicit +). The sign prefix is the i^e phase.
  static PauliString from_label(std::string_view s) {
    std::uint8_t e = 0;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
      bool minus = s.front() == '-';
      s.remove_prefix(1);
      if (!s.empty() && s.front() == 'i') {
        e = 1;
        s.remove_prefix(1);
      }
      if (minus) e = static_cast<std::uint8_t>((e + 2) & 3);
    } else if (!s.empty() && s.front() == 'i') {
      e = 1;
      s.remove_prefix(1);
    }
    PauliString p(s.size());
    p.set_phase_exp(e);
    for (std::size_t q = 0; q < s.size(); ++q) p.set_letter(q, letter_from_char(s[q]));
    return p;
  }

  std::size_t num_qubits() const { return n_; }

  bool x_bit(std::size_t q) const { return (x_ >> check_q(q)) & 1u; }
  bool z_bit(std::size_t q) const { return (z_ >> check_q(q)) & 1u; }

  PauliLetter letter(std::size_t q) const {
    check_q(q);
    return static_cast<PauliLetter>(((x_ >> q) & 1u) | (((z_ >> q) & 1u) << 1));
  }

  void set_letter(std::size_t q, PauliLetter l) {
    check_q(q);
    std::uint64_t m = std::uint64_t{1} << q;
    std::uint8_t v = static_cast<std::uint8_t>(l);
    x_ = (x_ & ~m) | ((v & 1u) ? m : 0);
    z_ = (z_ & ~m) | ((v & 2u) ? m : 0);
  }

  std::uint8_t phase_exp() const { return phase_; }
  void set_phase_exp(std::uint8_t e) { phase_ = e & 3u; }

  std::complex<double> phase() const {
    constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_];
  }

  bool hermitian() const { return (phase_ & 1u) == 0; }
  bool identity_bits() const { return x_ == 0 && z_ == 0; }
  int weight() const { return std::popcount(x_ | z_); }

  std::uint64_t x_word() const { return x_; }
  std::uint64_t z_word() const { return z_; }

  void negate() { phase_ = static_cast<std::uint8_t>((phase_ + 2) & 3u); }

  [[nodiscard]] PauliString negated() const {
    PauliString p = *this;
    p.negate();
    return p;
  }

  // In-place product *this = *this * o; phases combine exactly mod 4.
  void mul_inplace(const PauliString& o) {
    if (o.n_ != n_) throw std::invalid_argument("pauli size mismatch");
    const std::uint64_t x1 = x_, z1 = z_, x2 = o.x_, z2 = o.z_;
    // Per-qubit product phase is +i on the forward cycle X->Y->Z->X and -i
    // on the reverse cycle; identical or identity letters contribute nothing.
    const std::uint64_t plus =
        (x1 & ~z1 & x2 & z2) | (x1 & z1 & ~x2 & z2) | (~x1 & z1 & x2 & ~z2);
    const std::uint64_t minus =
        (x1 & ~z1 & ~x2 & z2) | (x1 & z1 & x2 & ~z2) | (~x1 & z1 & x2 & z2);
    const int t = std::popcount(plus) - std::popcount(minus);
    phase_ = static_cast<std::uint8_t>((phase_ + o.phase_ + ((t % 4) + 4)) & 3u);
    x_ ^= x2;
    z_ ^= z2;
  }

  friend PauliString operator*(PauliString a, const PauliString& b) {
    a.mul_inplace(b);
    return a;
  }

  bool commutes_with(const PauliString& o) const {
    if (o.n_ != n_) throw std::invalid_argument("pauli size mismatch");
    return ((std::popcount(x_ & o.z_) + std::popcount(z_ & o.x_)) & 1) == 0;
  }

  bool anticommutes_with(const PauliString& o) const { return !commutes_with(o); }

  std::string label() const {
    static constexpr const char* prefix[4] = {"+", "+i", "-", "-i"};
    std::string s = prefix[phase_];
    for (std::size_t q = 0; q < n_; ++q) s += letter_char(letter(q));
    return s;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) = default;

 private:
  std::size_t n_;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  std::uint8_t phase_ = 0;

  static std::size_t checked_size(std::size_t n) {
    if (n == 0 || n > kMaxQubits) throw std::invalid_argument("pauli size out of range");
    return n;
  }

  std::size_t check_q(std::size_t q) const {
    if (q >= n_) throw std::out_of_range("qubit index out of range");
    return q;
  }
};

}  // namespace abechain
