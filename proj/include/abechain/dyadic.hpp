#pragma once

// Exact dyadic rationals num / 2^exp.
//
// Every measurement probability and ensemble weight in this library is a
// dyadic rational, and all weight arithmetic is carried out exactly in this
// type. Conversion to double happens only at the dense-analysis boundary.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace abechain {

class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr Dyadic(std::int64_t integer) : num_(integer) {}

  // num / 2^exp, reduced so the numerator is odd (or zero).
  static constexpr Dyadic from_parts(std::int64_t num, unsigned exp) {
    Dyadic d;
    d.num_ = num;
    d.exp_ = exp;
    d.normalize();
    return d;
  }

  // 1 / 2^k
  static constexpr Dyadic pow2(unsigned k) { return from_parts(1, k); }

  constexpr std::int64_t numerator() const { return num_; }
  constexpr unsigned exponent() const { return exp_; }

  constexpr bool is_zero() const { return num_ == 0; }
  constexpr bool is_one() const { return num_ == 1 && exp_ == 0; }
  constexpr bool is_positive() const { return num_ > 0; }
  constexpr bool is_negative() const { return num_ < 0; }

  constexpr Dyadic halved() const { return from_parts(num_, exp_ + 1); }

  friend constexpr Dyadic operator+(Dyadic a, Dyadic b) {
    unsigned e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
    return from_parts(shifted(a.num_, e - a.exp_) + shifted(b.num_, e - b.exp_), e);
  }

  friend constexpr Dyadic operator-(Dyadic a, Dyadic b) {
    unsigned e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
    return from_parts(shifted(a.num_, e - a.exp_) - shifted(b.num_, e - b.exp_), e);
  }

  friend constexpr Dyadic operator*(Dyadic a, Dyadic b) {
    if (a.num_ != 0 && b.num_ != 0) {
      std::int64_t hi = a.num_ < 0 ? -a.num_ : a.num_;
      if (hi > (std::int64_t{1} << 62) / (b.num_ < 0 ? -b.num_ : b.num_))
        throw std::overflow_error("dyadic multiply overflow");
    }
    return from_parts(a.num_ * b.num_, a.exp_ + b.exp_);
  }

  // Exact quotient when it is again dyadic, nullopt otherwise.
  constexpr std::optional<Dyadic> checked_div(Dyadic d) const {
    if (d.num_ == 0) throw std::domain_error("dyadic division by zero");
    std::int64_t n = num_, q = d.num_ < 0 ? -d.num_ : d.num_;
    bool neg = d.num_ < 0;
    // strip the common odd factor; what remains of q must be a power of two
    std::int64_t g = gcd_i64(n < 0 ? -n : n, q);
    n /= g;
    q /= g;
    if (q & (q - 1)) return std::nullopt;
    unsigned t = 0;
    while (q > 1) {
      q >>= 1;
      ++t;
    }
    if (neg) n = -n;
    unsigned up = d.exp_;  // dividing by d multiplies by 2^d.exp_ / d.num_
    if (up >= exp_ + t) return from_parts(shifted(n, up - exp_ - t), 0);
    return from_parts(n, exp_ + t - up);
  }

  friend constexpr bool operator==(Dyadic a, Dyadic b) {
    return a.num_ == b.num_ && a.exp_ == b.exp_;
  }

  friend constexpr bool operator<(Dyadic a, Dyadic b) {
    Dyadic d = b - a;
    return d.num_ > 0;
  }

  double to_double() const { return std::ldexp(static_cast<double>(num_), -static_cast<int>(exp_)); }

  std::string to_string() const {
    if (exp_ == 0) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(std::int64_t{1} << exp_);
  }

 private:
  std::int64_t num_ = 0;
  unsigned exp_ = 0;

  constexpr void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    while (exp_ > 0 && (num_ & 1) == 0) {
      num_ >>= 1;
      --exp_;
    }
  }

  static constexpr std::int64_t shifted(std::int64_t v, unsigned k) {
    if (k >= 62) throw std::overflow_error("dyadic exponent overflow");
    std::int64_t a = v < 0 ? -v : v;
    if (a != 0 && a > ((std::int64_t{1} << 62) >> k)) throw std::overflow_error("dyadic shift overflow");
    return v << k;
  }

  static constexpr std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
    while (b != 0) {
      std::int64_t t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
};

}  // namespace abechain
