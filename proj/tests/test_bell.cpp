#include <catch2/catch_amalgamated.hpp>

#include "abechain/bell.hpp"
#include "abechain/density.hpp"
#include "dense_oracle.hpp"

using namespace abechain;

TEST_CASE("sign pairs identify the four Bell states") {
  CHECK(bell_signs(BellIndex::phi_plus) == BellSigns{false, false});
  CHECK(bell_signs(BellIndex::psi_plus) == BellSigns{false, true});
  CHECK(bell_signs(BellIndex::phi_minus) == BellSigns{true, false});
  CHECK(bell_signs(BellIndex::psi_minus) == BellSigns{true, true});
  for (BellIndex b : kBellOrder) CHECK(bell_from_signs(bell_signs(b)) == b);
}

TEST_CASE("sign pairs match the dense eigenvalue equations") {
  for (BellIndex b : kBellOrder) {
    const Vector v = bell_vector(b);
    const BellSigns s = bell_signs(b);
    const Matrix xx = oracle::dense_operator({1, 1}, 0);
    const Matrix zz = oracle::dense_operator({2, 2}, 0);
    const double sx = s.xx_negative ? -1.0 : 1.0;
    const double sz = s.zz_negative ? -1.0 : 1.0;
    CHECK((xx * v - sx * v).norm() < 1e-15);
    CHECK((zz * v - sz * v).norm() < 1e-15);
  }
}

TEST_CASE("one-qubit letters permute Bell states as their sign flips say") {
  for (BellIndex from : kBellOrder) {
    for (PauliLetter l : {PauliLetter::I, PauliLetter::X, PauliLetter::Z, PauliLetter::Y}) {
      const BellIndex to = bell_applied(from, l);
      // Dense check: (letter (x) I) |from> is |to> up to a global phase.
      const Matrix u = kron(letter_matrix(l), letter_matrix(PauliLetter::I));
      const Vector moved = u * bell_vector(from);
      CHECK(std::abs(std::abs(moved.dot(bell_vector(to))) - 1.0) < 1e-15);
      // Acting on the second qubit reaches the same state.
      const Matrix u2 = kron(letter_matrix(PauliLetter::I), letter_matrix(l));
      const Vector moved2 = u2 * bell_vector(from);
      CHECK(std::abs(std::abs(moved2.dot(bell_vector(to))) - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("conversion letters are the unique one-qubit bridges") {
  for (BellIndex from : kBellOrder) {
    for (BellIndex to : kBellOrder) {
      const PauliLetter l = conversion_letter(from, to);
      CHECK(bell_applied(from, l) == to);
      if (from == to) CHECK(l == PauliLetter::I);
      // Uniqueness: no other letter makes the jump.
      for (PauliLetter other : {PauliLetter::I, PauliLetter::X, PauliLetter::Z, PauliLetter::Y})
        if (other != l) CHECK(bell_applied(from, other) != to);
    }
  }
}

TEST_CASE("sign deltas compose additively") {
  const BellSigns a = bell_signs(BellIndex::psi_plus);
  const BellSigns b = bell_signs(BellIndex::phi_minus);
  CHECK(sign_delta(a, a) == BellSigns{false, false});
  CHECK(sign_delta(a, b) == BellSigns{true, true});
  CHECK(letter_for_sign_delta(false, false) == PauliLetter::I);
  CHECK(letter_for_sign_delta(false, true) == PauliLetter::X);
  CHECK(letter_for_sign_delta(true, false) == PauliLetter::Z);
  CHECK(letter_for_sign_delta(true, true) == PauliLetter::Y);
}

TEST_CASE("bell names are distinct") {
  CHECK(std::string(bell_name(BellIndex::psi_plus)) == "psi+");
  CHECK(std::string(bell_name(BellIndex::psi_minus)) == "psi-");
  CHECK(std::string(bell_name(BellIndex::phi_plus)) == "phi+");
  CHECK(std::string(bell_name(BellIndex::phi_minus)) == "phi-");
}
