#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "isoclass/field.hpp"

namespace isoclass {

/// Dense univariate polynomial over F_p, coefficients in ascending degree.
/// Always normalized: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient vector and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(PrimeField f) : f_(f) {}
  Polynomial(PrimeField f, std::vector<residue_t> coeffs) : f_(f), c_(std::move(coeffs)) {
    for (auto& x : c_) x %= f_.p();
    trim();
  }
  static Polynomial from_signed(PrimeField f, const std::vector<long long>& coeffs) {
    std::vector<residue_t> c;
    c.reserve(coeffs.size());
    for (long long v : coeffs) c.push_back(f.reduce(v));
    return Polynomial(f, std::move(c));
  }

  static Polynomial constant(PrimeField f, residue_t a) { return Polynomial(f, {a}); }
  static Polynomial one(PrimeField f) { return constant(f, 1); }
  static Polynomial x(PrimeField f) { return Polynomial(f, {0, 1}); }
  /// x - a
  static Polynomial linear(PrimeField f, residue_t a) { return Polynomial(f, {f.neg(a % f.p()), 1}); }
  static Polynomial monomial(PrimeField f, std::size_t k, residue_t a = 1) {
    std::vector<residue_t> c(k + 1, 0);
    c[k] = a;
    return Polynomial(f, std::move(c));
  }

  const PrimeField& field() const { return f_; }
  const std::vector<residue_t>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  residue_t coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0; }
  residue_t leading() const { return c_.empty() ? 0 : c_.back(); }
  residue_t constant_term() const { return coeff(0); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Polynomial monic() const {
    if (is_zero()) return *this;
    residue_t li = f_.inv(leading());
    return scaled(li);
  }
  Polynomial scaled(residue_t a) const {
    std::vector<residue_t> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = f_.mul(c_[i], a);
    return Polynomial(f_, std::move(r));
  }

  residue_t eval(residue_t a) const {
    residue_t r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = f_.add(f_.mul(r, a), c_[i]);
    return r;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial(f_);
    std::vector<residue_t> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = f_.mul(c_[i], f_.reduce(static_cast<long long>(i)));
    return Polynomial(f_, std::move(r));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    std::vector<residue_t> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.f_.add(a.coeff(i), b.coeff(i));
    return Polynomial(a.f_, std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    std::vector<residue_t> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.f_.sub(a.coeff(i), b.coeff(i));
    return Polynomial(a.f_, std::move(r));
  }
  Polynomial operator-() const { return Polynomial(f_) - *this; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.f_);
    const std::uint64_t p = a.f_.p();
    std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        acc[i + j] = (acc[i + j] + std::uint64_t{a.c_[i]} * b.c_[j]) % p;
      }
    }
    std::vector<residue_t> r(acc.begin(), acc.end());
    return Polynomial(a.f_, std::move(r));
  }
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  /// Euclidean division; returns (quotient, remainder).
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    check_same(d);
    require(!d.is_zero(), ErrorCode::ZeroPolynomial, "division by zero polynomial");
    if (degree() < d.degree()) return {Polynomial(f_), *this};
    std::vector<residue_t> r = c_;
    std::vector<residue_t> q(c_.size() - d.c_.size() + 1, 0);
    residue_t li = f_.inv(d.leading());
    const std::size_t dd = d.c_.size() - 1;
    for (std::size_t k = q.size(); k-- > 0;) {
      residue_t coef = f_.mul(r[k + dd], li);
      q[k] = coef;
      if (coef == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) r[k + j] = f_.sub(r[k + j], f_.mul(coef, d.c_[j]));
    }
    return {Polynomial(f_, std::move(q)), Polynomial(f_, std::move(r))};
  }
  friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return a.divmod(b).first; }
  friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return a.divmod(b).second; }

  bool divides(const Polynomial& g) const { return (g % *this).is_zero(); }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.f_ == b.f_ && a.c_ == b.c_;
  }
  /// Global order: degree first, then coefficient residues read from the
  /// constant term upward.
  friend std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      if (c_[i] != 1 || i == 0) s += std::to_string(c_[i]);
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void check_same(const Polynomial& o) const {
    require(f_ == o.f_, ErrorCode::FieldMismatch, "polynomials over different fields");
  }

  PrimeField f_;
  std::vector<residue_t> c_;
};

inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Extended Euclid: returns (g, s, t) with s*a + t*b = g monic.
struct ExtGcd {
  Polynomial g, s, t;
};
inline ExtGcd ext_gcd(const Polynomial& a, const Polynomial& b) {
  const PrimeField& f = a.field();
  Polynomial r0 = a, r1 = b, s0 = Polynomial::one(f), s1(f), t0(f), t1 = Polynomial::one(f);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Polynomial s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  residue_t li = f.inv(r0.leading());
  return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

inline Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial(a.field());
  return (a / gcd(a, b) * b).monic();
}

/// Inverse of a modulo m; throws Singular if gcd(a, m) != 1.
inline Polynomial inverse_mod(const Polynomial& a, const Polynomial& m) {
  ExtGcd e = ext_gcd(a % m, m);
  require(e.g.is_one(), ErrorCode::Singular, "polynomial not invertible modulo " + m.to_string());
  return e.s % m;
}

inline Polynomial pow_mod(Polynomial base, std::uint64_t e, const Polynomial& m) {
  Polynomial r = Polynomial::one(base.field()) % m;
  base = base % m;
  while (e) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return r;
}

inline Polynomial pow(Polynomial base, std::uint64_t e) {
  Polynomial r = Polynomial::one(base.field());
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

/// f(g) mod m (Horner).
inline Polynomial compose_mod(const Polynomial& f, const Polynomial& g, const Polynomial& m) {
  Polynomial r(f.field());
  const auto& c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) r = (r * g + Polynomial::constant(f.field(), c[i])) % m;
  return r;
}

/// Dual polynomial f* = f(0)^{-1} x^n f(1/x); its roots are the inverses of
/// the roots of f.
inline Polynomial dual_poly(const Polynomial& f) {
  require(!f.is_zero(), ErrorCode::ZeroPolynomial, "dual of zero polynomial");
  require(f.is_monic(), ErrorCode::NonMonic, "dual_poly needs a monic polynomial");
  require(f.constant_term() != 0, ErrorCode::ZeroConstantTerm, "0 is a root of " + f.to_string());
  const PrimeField& F = f.field();
  residue_t c0 = F.inv(f.constant_term());
  const int n = f.degree();
  std::vector<residue_t> r(n + 1);
  for (int k = 0; k <= n; ++k) r[k] = F.mul(c0, f.coeff(n - k));
  return Polynomial(F, std::move(r));
}

inline bool is_self_dual(const Polynomial& f) {
  require(f.is_monic(), ErrorCode::NonMonic, "is_self_dual needs a monic polynomial");
  const PrimeField& F = f.field();
  require(f.eval(0) != 0 && f.eval(1) != 0 && f.eval(F.p() - 1) != 0, ErrorCode::ExcludedRoot,
          "0, 1 or -1 is a root of " + f.to_string());
  return dual_poly(f) == f;
}

inline Polynomial squarefree_part(const Polynomial& f) {
  require(!f.is_zero(), ErrorCode::ZeroPolynomial, "squarefree part of zero");
  require(f.is_monic(), ErrorCode::NonMonic, "squarefree_part needs a monic polynomial");
  Polynomial d = f.derivative();
  if (d.is_zero()) {
    // f is a p-th power g(x^p) = g^{(1/p)}(x)^p; recurse on the p-th root.
    const residue_t p = f.field().p();
    std::vector<residue_t> r;
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) r.push_back(f.coeffs()[i]);
    return squarefree_part(Polynomial(f.field(), r));
  }
  Polynomial g = gcd(f, d);
  Polynomial s = f / g;
  // In characteristic p, f / gcd(f, f') drops factors with exponent
  // divisible by p; fold those back in from the quotient.
  Polynomial rest = g;
  for (Polynomial common = gcd(rest, s); !common.is_one(); common = gcd(rest, s)) rest = rest / common;
  if (!rest.is_one()) s = s * squarefree_part(rest.monic());
  return s.monic();
}

}  // namespace isoclass
