#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "isoclass/error.hpp"

namespace isoclass {

using residue_t = std::uint32_t;

/// Prime field F_p for odd p < 2^20. Cheap to copy; all arithmetic is on
/// canonical residues in [0, p).
class PrimeField {
 public:
  static constexpr residue_t kMaxModulus = residue_t{1} << 20;

  PrimeField() = default;
  explicit PrimeField(residue_t p) : p_(p) {
    require(p >= 3 && p < kMaxModulus && (p & 1u) && is_prime(p), ErrorCode::InvalidModulus,
            "modulus must be an odd prime below 2^20, got " + std::to_string(p));
  }

  residue_t p() const { return p_; }

  residue_t reduce(long long v) const {
    long long r = v % static_cast<long long>(p_);
    return static_cast<residue_t>(r < 0 ? r + p_ : r);
  }
  residue_t add(residue_t a, residue_t b) const {
    residue_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  residue_t sub(residue_t a, residue_t b) const { return a >= b ? a - b : a + p_ - b; }
  residue_t neg(residue_t a) const { return a == 0 ? 0 : p_ - a; }
  residue_t mul(residue_t a, residue_t b) const {
    return static_cast<residue_t>((std::uint64_t{a} * b) % p_);
  }
  residue_t pow(residue_t a, std::uint64_t e) const {
    std::uint64_t r = 1, b = a % p_;
    while (e) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return static_cast<residue_t>(r);
  }
  residue_t inv(residue_t a) const {
    require(a % p_ != 0, ErrorCode::Singular, "inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }
  residue_t div(residue_t a, residue_t b) const { return mul(a, inv(b)); }

  /// Legendre symbol: 1, p-1 (i.e. -1), or 0.
  int legendre(residue_t a) const {
    a %= p_;
    if (a == 0) return 0;
    return pow(a, (p_ - 1) / 2) == 1 ? 1 : -1;
  }
  bool is_square(residue_t a) const { return legendre(a) >= 0; }

  /// Smallest quadratic non-residue.
  residue_t nonsquare() const {
    for (residue_t a = 2;; ++a)
      if (legendre(a) < 0) return a;
  }

  /// Tonelli-Shanks. Returns the smaller of the two roots.
  residue_t sqrt(residue_t a) const {
    a %= p_;
    if (a == 0) return 0;
    require(legendre(a) == 1, ErrorCode::Internal, "sqrt of a non-residue");
    residue_t q = p_ - 1, s = 0;
    while ((q & 1u) == 0) {
      q >>= 1;
      ++s;
    }
    residue_t z = nonsquare();
    residue_t m = s, c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
    while (t != 1) {
      residue_t i = 0, tt = t;
      while (tt != 1) {
        tt = mul(tt, tt);
        ++i;
      }
      residue_t b = c;
      for (residue_t j = 0; j + 1 < m - i; ++j) b = mul(b, b);
      m = i;
      c = mul(b, b);
      t = mul(t, c);
      r = mul(r, b);
    }
    return std::min(r, neg(r));
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

  static bool is_prime(residue_t n) {
    if (n < 2) return false;
    for (residue_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  residue_t p_ = 3;
};

struct FieldElement {
  residue_t residue = 0;
  PrimeField field;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field == b.field && a.residue == b.residue;
  }
};

enum class DiscClass { Square, NonSquare };

inline DiscClass disc_class_of(const PrimeField& f, residue_t det) {
  return f.is_square(det) ? DiscClass::Square : DiscClass::NonSquare;
}

inline DiscClass operator*(DiscClass a, DiscClass b) {
  return a == b ? DiscClass::Square : DiscClass::NonSquare;
}

}  // namespace isoclass
