#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "isoclass/polynomial.hpp"

namespace isoclass {

struct FactorPower {
  Polynomial factor;
  int exponent = 1;
  friend bool operator==(const FactorPower&, const FactorPower&) = default;
};

struct Factorization {
  std::vector<FactorPower> factors;
  FieldElement unit;

  Polynomial product() const {
    Polynomial r = Polynomial::constant(unit.field, unit.residue);
    for (const auto& fp : factors) r *= pow(fp.factor, fp.exponent);
    return r;
  }
};

/// Seed of the equal-degree splitting generator. Fixed so that every run
/// makes the same random choices.
inline constexpr std::uint64_t kFactorSeed = 0x5EEDF00DCAFEULL;

namespace detail {

inline Polynomial pth_root(const Polynomial& f) {
  const residue_t p = f.field().p();
  std::vector<residue_t> r;
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) r.push_back(f.coeffs()[i]);
  return Polynomial(f.field(), std::move(r));
}

// Squarefree factorization of a monic f: pairs (squarefree g, multiplicity).
inline void squarefree_factorization(const Polynomial& f, int mult, std::vector<FactorPower>& out) {
  if (f.degree() < 1) return;
  const int p = static_cast<int>(f.field().p());
  Polynomial d = f.derivative();
  if (d.is_zero()) {
    squarefree_factorization(pth_root(f), mult * p, out);
    return;
  }
  Polynomial c = gcd(f, d);
  Polynomial w = f / c;
  int i = 1;
  while (!w.is_one()) {
    Polynomial y = gcd(w, c);
    Polynomial fac = (w / y).monic();
    if (fac.degree() > 0) out.push_back({fac, i * mult});
    ++i;
    w = y;
    c = c / y;
  }
  c = c.monic();
  if (!c.is_one()) squarefree_factorization(pth_root(c), mult * p, out);
}

// Distinct-degree factorization of a monic squarefree f.
inline std::vector<std::pair<Polynomial, int>> distinct_degree(Polynomial f) {
  std::vector<std::pair<Polynomial, int>> out;
  const PrimeField& F = f.field();
  const Polynomial x = Polynomial::x(F);
  Polynomial h = x % f;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = pow_mod(h, F.p(), f);
    Polynomial g = gcd(f, h - x);
    if (!g.is_one()) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
  return out;
}

// Cantor-Zassenhaus equal-degree splitting (p odd).
inline void equal_degree(const Polynomial& g, int d, std::mt19937_64& rng, std::vector<Polynomial>& out) {
  const int n = g.degree();
  if (n == d) {
    out.push_back(g.monic());
    return;
  }
  const PrimeField& F = g.field();
  for (;;) {
    std::vector<residue_t> rc(n);
    for (auto& v : rc) v = static_cast<residue_t>(rng() % F.p());
    Polynomial r(F, rc);
    if (r.degree() < 1) continue;
    // r^((p^d - 1)/2) = (r * r^p * ... * r^(p^(d-1)))^((p-1)/2)
    Polynomial s = r % g, frob = r % g;
    for (int j = 1; j < d; ++j) {
      frob = pow_mod(frob, F.p(), g);
      s = s * frob % g;
    }
    s = pow_mod(s, (F.p() - 1) / 2, g);
    Polynomial a = gcd(g, s - Polynomial::one(F));
    if (a.degree() > 0 && a.degree() < n) {
      equal_degree(a, d, rng, out);
      equal_degree(g / a, d, rng, out);
      return;
    }
  }
}

inline std::vector<int> prime_divisors(int n) {
  std::vector<int> r;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      r.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) r.push_back(n);
  return r;
}

}  // namespace detail

inline Factorization factor(const Polynomial& f) {
  require(!f.is_zero(), ErrorCode::ZeroPolynomial, "cannot factor the zero polynomial");
  const PrimeField& F = f.field();
  Factorization out;
  out.unit = {f.leading(), F};
  std::vector<FactorPower> sqf;
  detail::squarefree_factorization(f.monic(), 1, sqf);
  std::mt19937_64 rng(kFactorSeed);
  std::vector<FactorPower> all;
  for (const auto& [g, mult] : sqf) {
    for (const auto& [h, d] : detail::distinct_degree(g)) {
      std::vector<Polynomial> pieces;
      detail::equal_degree(h, d, rng, pieces);
      for (auto& q : pieces) all.push_back({q, mult});
    }
  }
  std::sort(all.begin(), all.end(), [](const FactorPower& a, const FactorPower& b) { return a.factor < b.factor; });
  // Merge equal factors (multiplicities from different squarefree layers).
  for (auto& fp : all) {
    if (!out.factors.empty() && out.factors.back().factor == fp.factor)
      out.factors.back().exponent += fp.exponent;
    else
      out.factors.push_back(fp);
  }
  return out;
}

/// Rabin irreducibility test.
inline bool is_irreducible(const Polynomial& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  const PrimeField& F = f.field();
  Polynomial g = f.monic();
  const int n = g.degree();
  const Polynomial x = Polynomial::x(F);
  auto frob_power = [&](int k) {
    Polynomial h = x % g;
    for (int i = 0; i < k; ++i) h = pow_mod(h, F.p(), g);
    return h;
  };
  for (int q : detail::prime_divisors(n))
    if (!gcd(g, frob_power(n / q) - x).is_one()) return false;
  return (frob_power(n) - x % g).is_zero();
}

enum class FactorTag { SelfDual, PlusOne, MinusOne, DualPairLow, DualPairHigh };

constexpr std::string_view tag_name(FactorTag t) {
  switch (t) {
    case FactorTag::SelfDual: return "self_dual";
    case FactorTag::PlusOne: return "plus_one";
    case FactorTag::MinusOne: return "minus_one";
    case FactorTag::DualPairLow: return "pair_low";
    case FactorTag::DualPairHigh: return "pair_high";
  }
  return "?";
}

struct FactorClass {
  FactorTag tag = FactorTag::SelfDual;
  std::optional<Polynomial> partner;
  bool is_pair() const { return tag == FactorTag::DualPairLow || tag == FactorTag::DualPairHigh; }
};

inline FactorClass classify_factor(const Polynomial& q) {
  require(q.is_monic(), ErrorCode::NonMonic, "classify_factor needs a monic polynomial");
  require(q.constant_term() != 0, ErrorCode::ZeroConstantTerm, "0 is a root of " + q.to_string());
  require(is_irreducible(q), ErrorCode::Reducible, q.to_string() + " is reducible");
  const PrimeField& F = q.field();
  if (q == Polynomial::linear(F, 1)) return {FactorTag::PlusOne, std::nullopt};
  if (q == Polynomial::linear(F, F.p() - 1)) return {FactorTag::MinusOne, std::nullopt};
  Polynomial d = dual_poly(q);
  if (d == q) return {FactorTag::SelfDual, std::nullopt};
  return {q < d ? FactorTag::DualPairLow : FactorTag::DualPairHigh, d};
}

}  // namespace isoclass
