#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "isoclass/factor.hpp"
#include "isoclass/matrix.hpp"

namespace isoclass {

enum class AlgebraKind { Simple, Pair };

constexpr std::string_view algebra_kind_name(AlgebraKind k) { return k == AlgebraKind::Simple ? "simple" : "pair"; }

/// Elements are polynomials in t reduced modulo the algebra's modulus.
using AlgebraElement = Polynomial;

/// F-linear map h: E -> F given by its values on the power basis t^j.
struct Functional {
  Vector coeffs;
  residue_t operator()(const PrimeField& F, const AlgebraElement& e) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < e.coeffs().size(); ++j) s = (s + std::uint64_t{coeffs[j]} * e.coeffs()[j]) % F.p();
    return static_cast<residue_t>(s);
  }
  friend bool operator==(const Functional&, const Functional&) = default;
};

class CyclicAlgebra;

/// F-algebra automorphism of E commuting with bar, determined by f(t).
struct Automorphism {
  AlgebraElement image;  // f(t)
  Matrix forward;        // columns: f(t^j) in the power basis
  Matrix backward;       // inverse of forward
};

namespace detail {

struct AlgebraCache {
  std::once_flag h_once;
  Functional h;
  Matrix pairing_inverse;
  std::once_flag aut_once;
  std::vector<Automorphism> automorphisms;
  std::optional<Error> aut_error;
};

inline std::shared_ptr<AlgebraCache> algebra_cache(const Polynomial& modulus) {
  static std::mutex mu;
  static std::map<std::pair<residue_t, std::vector<residue_t>>, std::shared_ptr<AlgebraCache>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[{modulus.field().p(), modulus.coeffs()}];
  if (!slot) slot = std::make_shared<AlgebraCache>();
  return slot;
}

}  // namespace detail

/// E = F[x]/(q^d) (Simple) or F[x]/((q q*)^d) (Pair, isomorphic to the sum
/// F[x]/(q^d) + F[x]/(q*^d)), with the involution t -> t^{-1}.
class CyclicAlgebra {
 public:
  static CyclicAlgebra simple(const Polynomial& prime, int d) {
    return CyclicAlgebra(AlgebraKind::Simple, prime, std::nullopt, d);
  }
  static CyclicAlgebra pair(const Polynomial& low, const Polynomial& high, int d) {
    return CyclicAlgebra(AlgebraKind::Pair, low, high, d);
  }

  AlgebraKind kind() const { return kind_; }
  const Polynomial& prime() const { return prime_; }
  const std::optional<Polynomial>& partner() const { return partner_; }
  int d() const { return d_; }
  int c() const { return c_; }
  const Polynomial& modulus() const { return modulus_; }
  /// Product of the distinct primes; generates the radical.
  const Polynomial& radical_generator() const { return rad_; }
  const PrimeField& field() const { return modulus_.field(); }
  int dim() const { return modulus_.degree(); }
  int prime_degree() const { return prime_.degree(); }
  /// Residue involution is trivial exactly for the prime x - 1.
  bool trivial_residue_involution() const { return kind_ == AlgebraKind::Simple && prime_.degree() == 1; }

  bool same_parameters(const CyclicAlgebra& o) const {
    return kind_ == o.kind_ && prime_.degree() == o.prime_.degree() && d_ == o.d_ && field() == o.field();
  }
  friend bool operator==(const CyclicAlgebra& a, const CyclicAlgebra& b) {
    return a.kind_ == b.kind_ && a.modulus_ == b.modulus_;
  }

  AlgebraElement element(const Polynomial& f) const { return f % modulus_; }
  AlgebraElement zero() const { return Polynomial(field()); }
  AlgebraElement one() const { return Polynomial::one(field()) % modulus_; }
  AlgebraElement t() const { return Polynomial::x(field()) % modulus_; }
  AlgebraElement scalar(residue_t a) const { return Polynomial::constant(field(), a) % modulus_; }

  AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const { return a * b % modulus_; }
  AlgebraElement pow(const AlgebraElement& a, std::uint64_t e) const { return pow_mod(a, e, modulus_); }
  bool is_unit(const AlgebraElement& a) const { return gcd(a, modulus_).is_one(); }
  AlgebraElement inv(const AlgebraElement& a) const { return inverse_mod(a, modulus_); }
  bool in_radical(const AlgebraElement& a) const { return (a % rad_).is_zero(); }

  AlgebraElement bar(const AlgebraElement& a) const { return compose_mod(a, tinv_, modulus_); }

  /// Coefficient vector of length dim().
  Vector coords(const AlgebraElement& a) const {
    Vector v(dim(), 0);
    for (std::size_t j = 0; j < a.coeffs().size(); ++j) v[j] = a.coeffs()[j];
    return v;
  }
  AlgebraElement from_coords(const Vector& v) const { return Polynomial(field(), v); }

  /// Matrix of multiplication by a in the power basis.
  Matrix regular_rep(const AlgebraElement& a) const {
    Matrix m(dim(), dim(), field());
    AlgebraElement x = a % modulus_;
    for (int j = 0; j < dim(); ++j) {
      m.set_col(j, coords(x));
      x = mul(x, t());
    }
    return m;
  }
  /// Matrix of bar in the power basis.
  Matrix bar_matrix() const {
    Matrix m(dim(), dim(), field());
    AlgebraElement x = one();
    for (int j = 0; j < dim(); ++j) {
      m.set_col(j, coords(x));
      x = mul(x, tinv_);
    }
    return m;
  }

  /// The chosen functional h (first valid one in lexicographic order).
  const Functional& h() const {
    ensure_h();
    return cache_->h;
  }
  /// Inverse of the pairing matrix [h(t^{l+b})].
  const Matrix& pairing_inverse() const {
    ensure_h();
    return cache_->pairing_inverse;
  }
  residue_t apply_h(const AlgebraElement& a) const { return h()(field(), a); }

  /// Solves h(t^l x) = rhs_l for l < dim().
  AlgebraElement solve_h(const Vector& rhs) const { return from_coords(pairing_inverse() * rhs); }

  const std::vector<Automorphism>& automorphisms() const;

  Automorphism make_automorphism(const AlgebraElement& image) const {
    Matrix fwd(dim(), dim(), field());
    AlgebraElement x = one();
    for (int j = 0; j < dim(); ++j) {
      fwd.set_col(j, coords(x));
      x = mul(x, image);
    }
    auto bwd = try_inverse(fwd);
    require(bwd.has_value(), ErrorCode::Internal, "image does not generate the algebra");
    return {image % modulus_, fwd, *bwd};
  }
  AlgebraElement apply(const Automorphism& f, const AlgebraElement& a) const {
    return from_coords(f.forward * coords(a));
  }
  AlgebraElement apply_inverse(const Automorphism& f, const AlgebraElement& a) const {
    return from_coords(f.backward * coords(a));
  }
  /// The unit lambda with h(f(a)) = h(lambda a) for all a.
  AlgebraElement twist_factor(const Automorphism& f) const {
    Vector rhs(dim());
    AlgebraElement x = one();
    for (int l = 0; l < dim(); ++l) {
      rhs[l] = apply_h(apply(f, x));
      x = mul(x, t());
    }
    return solve_h(rhs);
  }

  /// t - t^{-1}; a unit with bar(theta) = -theta when x^2 - 1 is prime to the modulus.
  AlgebraElement theta() const { return (t() - tinv_) % modulus_; }

  /// Newton square root of a unit x whose residue has the root x0 in F.
  AlgebraElement sqrt_unit(const AlgebraElement& x, residue_t x0) const {
    const PrimeField& F = field();
    AlgebraElement w = scalar(x0);
    const AlgebraElement half = scalar(F.inv(2));
    for (int it = 0; it < 64; ++it) {
      if (mul(w, w) == x % modulus_) return w;
      w = mul(half, w + mul(x, inv(w)));
    }
    fail(ErrorCode::Internal, "square root iteration did not converge");
  }

 private:
  CyclicAlgebra(AlgebraKind kind, Polynomial prime, std::optional<Polynomial> partner, int d)
      : kind_(kind), prime_(std::move(prime)), partner_(std::move(partner)), d_(d) {
    require(d >= 1, ErrorCode::OutOfRange, "algebra exponent must be positive");
    require(prime_.is_monic() && prime_.constant_term() != 0, ErrorCode::ZeroConstantTerm,
            "algebra prime must be monic with nonzero constant term");
    rad_ = kind_ == AlgebraKind::Pair ? prime_ * *partner_ : prime_;
    modulus_ = isoclass::pow(rad_, static_cast<std::uint64_t>(d_));
    const PrimeField& F = modulus_.field();
    // x + 1 behaves like x - 1 under t -> -t, which commutes with bar.
    const bool pm_one = prime_ == Polynomial::linear(F, 1) || prime_ == Polynomial::linear(F, F.p() - 1);
    c_ = (kind_ == AlgebraKind::Simple && pm_one && d_ % 2 == 0) ? -1 : 1;
    tinv_ = inverse_mod(Polynomial::x(F), modulus_);
    cache_ = detail::algebra_cache(modulus_);
  }

  void ensure_h() const;

  AlgebraKind kind_;
  Polynomial prime_;
  std::optional<Polynomial> partner_;
  int d_;
  int c_ = 1;
  Polynomial rad_, modulus_, tinv_;
  std::shared_ptr<detail::AlgebraCache> cache_;
};

/// First functional, in lexicographic order of coefficient vectors, with
/// h(bar e) = h(c e) and a non-degenerate pairing (a, b) -> h(ab).
inline Functional choose_h(const CyclicAlgebra& E) {
  const PrimeField& F = E.field();
  const int D = E.dim();
  Matrix cond = E.bar_matrix();
  const residue_t c = E.c() == 1 ? 1 : F.p() - 1;
  for (int i = 0; i < D; ++i) cond(i, i) = F.sub(cond(i, i), c);
  // h (as a row vector) must satisfy h * cond = 0.
  Matrix null = nullspace(cond.transpose());
  const std::size_t r = null.cols();
  require(r > 0, ErrorCode::SearchExhausted, "no bar-compatible functional");
  Matrix rows = rref(null.transpose()).m;
  // Powers t^0 .. t^{2D-2} for the pairing test.
  std::vector<Vector> powers;
  AlgebraElement x = E.one();
  for (int k = 0; k < 2 * D - 1; ++k) {
    powers.push_back(E.coords(x));
    x = E.mul(x, E.t());
  }
  // Coordinates a_1..a_r in lexicographic order; rows are in reduced echelon
  // form, so this matches lexicographic order on the functionals themselves.
  std::vector<residue_t> a(r, 0);
  const std::uint64_t kMaxTries = 1000000;
  for (std::uint64_t tries = 0; tries < kMaxTries; ++tries) {
    std::size_t pos = r;
    while (pos-- > 0) {
      if (++a[pos] < F.p()) break;
      a[pos] = 0;
    }
    if (pos == static_cast<std::size_t>(-1)) break;
    Vector h(D, 0);
    for (std::size_t i = 0; i < r; ++i)
      if (a[i])
        for (int j = 0; j < D; ++j) h[j] = F.add(h[j], F.mul(a[i], rows(i, j)));
    Matrix pairing(D, D, F);
    for (int l = 0; l < D; ++l)
      for (int b = 0; b < D; ++b) {
        std::uint64_t s = 0;
        for (int j = 0; j < D; ++j) s = (s + std::uint64_t{h[j]} * powers[l + b][j]) % F.p();
        pairing(l, b) = static_cast<residue_t>(s);
      }
    if (det(pairing) != 0) return {h};
  }
  fail(ErrorCode::SearchExhausted, "no non-degenerate bar-compatible functional found");
}

inline void CyclicAlgebra::ensure_h() const {
  std::call_once(cache_->h_once, [this] {
    cache_->h = choose_h(*this);
    const PrimeField& F = field();
    const int D = dim();
    Matrix pairing(D, D, F);
    std::vector<AlgebraElement> powers;
    AlgebraElement x = one();
    for (int k = 0; k < 2 * D - 1; ++k) {
      powers.push_back(x);
      x = mul(x, t());
    }
    for (int l = 0; l < D; ++l)
      for (int b = 0; b < D; ++b) pairing(l, b) = cache_->h(F, powers[l + b]);
    cache_->pairing_inverse = inverse(pairing);
  });
}

/// Enumeration bound on the number of candidate images examined.
inline constexpr std::uint64_t kAutomorphismBound = std::uint64_t{1} << 24;

/// All F-algebra automorphisms f of a Simple algebra with f(bar a) = bar f(a).
/// Candidates f(t) are Frobenius conjugates of t plus radical elements.
inline std::vector<Automorphism> algebra_automorphisms(const CyclicAlgebra& E) {
  require(E.kind() == AlgebraKind::Simple, ErrorCode::AlgebraMismatch, "automorphisms need a simple algebra");
  const PrimeField& F = E.field();
  const int D = E.dim(), m = E.prime_degree();
  const int free_dim = D - m;  // radical = prime * F[x]/(prime^{d-1})
  std::uint64_t count = static_cast<std::uint64_t>(m);
  for (int i = 0; i < free_dim; ++i) {
    count *= F.p();
    require(count <= kAutomorphismBound, ErrorCode::TooLarge, "automorphism enumeration bound exceeded");
  }
  std::vector<Automorphism> out;
  AlgebraElement frob = E.t();
  for (int j = 0; j < m; ++j) {
    std::vector<residue_t> y(free_dim, 0);
    for (;;) {
      AlgebraElement e = (frob + E.mul(E.prime(), Polynomial(F, y))) % E.modulus();
      if (E.mul(E.bar(e), e) == E.one() && compose_mod(E.modulus(), e, E.modulus()).is_zero()) {
        Matrix fwd(D, D, F);
        AlgebraElement x = E.one();
        for (int k = 0; k < D; ++k) {
          fwd.set_col(k, E.coords(x));
          x = E.mul(x, e);
        }
        if (auto bwd = try_inverse(fwd)) out.push_back({e, fwd, *bwd});
      }
      int pos = 0;
      while (pos < free_dim && ++y[pos] == F.p()) y[pos++] = 0;
      if (pos == free_dim) break;
    }
    frob = E.pow(frob, F.p());
  }
  std::sort(out.begin(), out.end(), [](const Automorphism& a, const Automorphism& b) { return a.image < b.image; });
  return out;
}

inline const std::vector<Automorphism>& CyclicAlgebra::automorphisms() const {
  std::call_once(cache_->aut_once, [this] {
    try {
      cache_->automorphisms = algebra_automorphisms(*this);
    } catch (const Error& e) {
      cache_->aut_error = e;
    }
  });
  if (cache_->aut_error) throw *cache_->aut_error;
  return cache_->automorphisms;
}

}  // namespace isoclass
