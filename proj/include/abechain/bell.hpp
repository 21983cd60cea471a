#pragma once

// The four Bell states as a discrete algebra.
//
// Index order is psi+, psi-, phi+, phi-. Each Bell state is the joint +-1
// eigenstate of (s_xx XX, s_zz ZZ); the sign pair identifies the state, and
// a one-qubit Pauli on either half permutes the states by flipping signs:
// an X component flips s_zz, a Z component flips s_xx.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pauli.hpp"

namespace abechain {

enum class BellIndex : std::uint8_t { psi_plus = 0, psi_minus = 1, phi_plus = 2, phi_minus = 3 };

inline constexpr int kBellCount = 4;

inline constexpr BellIndex kBellOrder[kBellCount] = {
    BellIndex::psi_plus, BellIndex::psi_minus, BellIndex::phi_plus, BellIndex::phi_minus};

constexpr const char* bell_name(BellIndex b) {
  switch (b) {
    case BellIndex::psi_plus: return "psi+";
    case BellIndex::psi_minus: return "psi-";
    case BellIndex::phi_plus: return "phi+";
    case BellIndex::phi_minus: return "phi-";
  }
  throw std::invalid_argument("unknown Bell index");
}

struct BellSigns {
  bool xx_negative = false;
  bool zz_negative = false;

  friend bool operator==(const BellSigns&, const BellSigns&) = default;
};

constexpr BellSigns bell_signs(BellIndex b) {
  switch (b) {
    case BellIndex::psi_plus: return {false, true};
    case BellIndex::psi_minus: return {true, true};
    case BellIndex::phi_plus: return {false, false};
    case BellIndex::phi_minus: return {true, false};
  }
  throw std::invalid_argument("unknown Bell index");
}

constexpr BellIndex bell_from_signs(bool xx_negative, bool zz_negative) {
  if (!xx_negative && !zz_negative) return BellIndex::phi_plus;
  if (!xx_negative && zz_negative) return BellIndex::psi_plus;
  if (xx_negative && !zz_negative) return BellIndex::phi_minus;
  return BellIndex::psi_minus;
}

constexpr BellIndex bell_from_signs(const BellSigns& s) {
  return bell_from_signs(s.xx_negative, s.zz_negative);
}

// Bell state reached from b by applying l to one qubit (either one).
constexpr BellIndex bell_applied(BellIndex b, PauliLetter l) {
  BellSigns s = bell_signs(b);
  std::uint8_t v = static_cast<std::uint8_t>(l);
  if (v & 1u) s.zz_negative = !s.zz_negative;
  if (v & 2u) s.xx_negative = !s.xx_negative;
  return bell_from_signs(s);
}

// Letter that flips the XX sign iff dxx and the ZZ sign iff dzz when applied
// to one qubit of a Bell pair: the X component flips ZZ, the Z component XX.
constexpr PauliLetter letter_for_sign_delta(bool dxx, bool dzz) {
  std::uint8_t x = dzz ? 1u : 0u;
  std::uint8_t z = dxx ? 1u : 0u;
  return static_cast<PauliLetter>(x | (z << 1));
}

// XOR of two sign pairs; sign deltas compose additively over F2 x F2.
constexpr BellSigns sign_delta(const BellSigns& a, const BellSigns& b) {
  return {a.xx_negative != b.xx_negative, a.zz_negative != b.zz_negative};
}

// One-qubit Pauli turning `from` into `to` up to global phase; unique.
constexpr PauliLetter conversion_letter(BellIndex from, BellIndex to) {
  BellSigns d = sign_delta(bell_signs(from), bell_signs(to));
  return letter_for_sign_delta(d.xx_negative, d.zz_negative);
}

}  // namespace abechain
