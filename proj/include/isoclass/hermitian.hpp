#pragma once

#include <compare>
#include <optional>
#include <string_view>
#include <vector>

#include "isoclass/algebra.hpp"
#include "isoclass/decomp.hpp"

namespace isoclass {

enum class HermTag { HermRank, SymDisc, AltRank, PairRank };

constexpr std::string_view herm_tag_name(HermTag t) {
  switch (t) {
    case HermTag::HermRank: return "herm_rank";
    case HermTag::SymDisc: return "sym_disc";
    case HermTag::AltRank: return "alt_rank";
    case HermTag::PairRank: return "pair_rank";
  }
  return "?";
}

struct HermitianClass {
  HermTag tag = HermTag::HermRank;
  int rank = 0;
  std::optional<DiscClass> disc;  // SymDisc only
  friend bool operator==(const HermitianClass&, const HermitianClass&) = default;
  friend auto operator<=>(const HermitianClass&, const HermitianClass&) = default;
};

/// k x k matrix over an algebra, row-major.
struct EMatrix {
  int k = 0;
  std::vector<AlgebraElement> a;
  AlgebraElement& operator()(int i, int j) { return a[i * k + j]; }
  const AlgebraElement& operator()(int i, int j) const { return a[i * k + j]; }
  friend bool operator==(const EMatrix&, const EMatrix&) = default;
};

inline EMatrix ematrix_identity(const CyclicAlgebra& E, int k) {
  EMatrix m{k, std::vector<AlgebraElement>(k * k, E.zero())};
  for (int i = 0; i < k; ++i) m(i, i) = E.one();
  return m;
}
inline EMatrix ematrix_mul(const CyclicAlgebra& E, const EMatrix& x, const EMatrix& y) {
  EMatrix r{x.k, std::vector<AlgebraElement>(x.k * x.k, E.zero())};
  for (int i = 0; i < x.k; ++i)
    for (int j = 0; j < x.k; ++j) {
      AlgebraElement s = E.zero();
      for (int l = 0; l < x.k; ++l) s += x(i, l) * y(l, j);
      r(i, j) = E.element(s);
    }
  return r;
}
inline EMatrix ematrix_transpose(const EMatrix& x) {
  EMatrix r = x;
  for (int i = 0; i < x.k; ++i)
    for (int j = 0; j < x.k; ++j) r(i, j) = x(j, i);
  return r;
}
inline EMatrix ematrix_bar(const CyclicAlgebra& E, const EMatrix& x) {
  EMatrix r = x;
  for (auto& e : r.a) e = E.bar(e);
  return r;
}
inline EMatrix ematrix_scaled(const CyclicAlgebra& E, const AlgebraElement& s, const EMatrix& x) {
  EMatrix r = x;
  for (auto& e : r.a) e = E.mul(s, e);
  return r;
}
/// F-linear representation: block (i, j) acts as multiplication by x(i, j).
inline Matrix ematrix_regular(const CyclicAlgebra& E, const EMatrix& x) {
  const int D = E.dim();
  Matrix r(x.k * D, x.k * D, E.field());
  for (int i = 0; i < x.k; ++i)
    for (int j = 0; j < x.k; ++j) {
      Matrix b = E.regular_rep(x(i, j));
      for (int u = 0; u < D; ++u)
        for (int v = 0; v < D; ++v) r(i * D + u, j * D + v) = b(u, v);
    }
  return r;
}
inline std::optional<EMatrix> ematrix_inverse(const CyclicAlgebra& E, const EMatrix& x) {
  auto inv = try_inverse(ematrix_regular(E, x));
  if (!inv) return std::nullopt;
  const int D = E.dim();
  EMatrix r{x.k, std::vector<AlgebraElement>(x.k * x.k, E.zero())};
  for (int i = 0; i < x.k; ++i)
    for (int j = 0; j < x.k; ++j) {
      Vector c(D);
      for (int u = 0; u < D; ++u) c[u] = (*inv)(i * D + u, j * D);
      r(i, j) = E.from_coords(c);
    }
  return r;
}

/// Free E-module of rank k with a sesquilinear form satisfying
/// H(v, u) = sign * bar(H(u, v)); sign is the algebra constant c times the
/// symmetry sign of the ambient form.
struct HermitianSpace {
  CyclicAlgebra algebra;
  int sign = 1;
  EMatrix gram;
  int rank() const { return gram.k; }

  /// H(x, y) for coordinate vectors over E.
  AlgebraElement value(const std::vector<AlgebraElement>& x, const std::vector<AlgebraElement>& y) const {
    const CyclicAlgebra& E = algebra;
    AlgebraElement s = E.zero();
    for (int i = 0; i < gram.k; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < gram.k; ++j) {
        if (y[j].is_zero()) continue;
        s += x[i] * gram(i, j) % E.modulus() * E.bar(y[j]);
      }
    }
    return E.element(s);
  }
  bool is_hermitian() const {
    const CyclicAlgebra& E = algebra;
    for (int i = 0; i < gram.k; ++i)
      for (int j = 0; j < gram.k; ++j) {
        AlgebraElement rhs = E.bar(gram(j, i));
        if (sign < 0) rhs = E.element(-rhs);
        if (gram(i, j) != rhs) return false;
      }
    return true;
  }
  bool is_unimodular() const { return det(ematrix_regular(algebra, gram)) != 0; }
};

/// e(A) v for an algebra element e.
inline Vector act(const AlgebraElement& e, const Matrix& a, const Vector& v) {
  const PrimeField& F = a.field();
  Vector r(v.size(), 0);
  const auto& c = e.coeffs();
  for (std::size_t j = c.size(); j-- > 0;) {
    r = a * r;
    if (c[j])
      for (std::size_t i = 0; i < v.size(); ++i) r[i] = F.add(r[i], F.mul(c[j], v[i]));
  }
  return r;
}

/// H(u, v): the algebra element with h(t^l H) = B(A^l u, v) for all l.
inline AlgebraElement induced_value(const CyclicAlgebra& E, const Matrix& a, const Matrix& gram, const Vector& u,
                                    const Vector& v) {
  Vector rhs(E.dim());
  Vector x = u;
  for (int l = 0; l < E.dim(); ++l) {
    rhs[l] = bilinear(gram, x, v);
    x = a * x;
  }
  return E.solve_h(rhs);
}

/// Induced form on a block through A = sign * T, with the algebra's own h.
inline HermitianSpace induced_hermitian(const Matrix& a, const BilinearSpace& space, const CyclicAlgebra& E,
                                        const std::vector<Vector>& gens) {
  const int k = static_cast<int>(gens.size());
  HermitianSpace h{E, space.epsilon() * E.c(), {k, std::vector<AlgebraElement>(k * k, E.zero())}};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) h.gram(i, j) = induced_value(E, a, space.gram(), gens[i], gens[j]);
  return h;
}

/// Variant with an explicit functional; the pairing must be non-degenerate.
inline HermitianSpace induced_hermitian(const Matrix& a, const BilinearSpace& space, const CyclicAlgebra& E,
                                        const std::vector<Vector>& gens, const Functional& h) {
  const PrimeField& F = E.field();
  const int D = E.dim(), k = static_cast<int>(gens.size());
  Matrix pairing(D, D, F);
  std::vector<AlgebraElement> powers;
  AlgebraElement x = E.one();
  for (int i = 0; i < 2 * D - 1; ++i) {
    powers.push_back(x);
    x = E.mul(x, E.t());
  }
  for (int l = 0; l < D; ++l)
    for (int b = 0; b < D; ++b) pairing(l, b) = h(F, powers[l + b]);
  auto pinv = try_inverse(pairing);
  require(pinv.has_value(), ErrorCode::SingularSystem, "functional gives a degenerate pairing");
  HermitianSpace out{E, space.epsilon() * E.c(), {k, std::vector<AlgebraElement>(k * k, E.zero())}};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Vector rhs(D);
      Vector y = gens[i];
      for (int l = 0; l < D; ++l) {
        rhs[l] = bilinear(space.gram(), y, gens[j]);
        y = a * y;
      }
      out.gram(i, j) = E.from_coords(*pinv * rhs);
    }
  return out;
}

inline HermitianClass residue_class(const HermitianSpace& h) {
  require(h.is_unimodular(), ErrorCode::NotUnimodular, "hermitian gram is not invertible over the algebra");
  const CyclicAlgebra& E = h.algebra;
  const int k = h.rank();
  if (E.kind() == AlgebraKind::Pair) return {HermTag::PairRank, k, std::nullopt};
  if (!E.trivial_residue_involution()) return {HermTag::HermRank, k, std::nullopt};
  // Residue field is F: evaluate at the root of the prime (t = 1 or t = -1).
  const PrimeField& F = E.field();
  const residue_t root = F.neg(E.prime().constant_term());
  Matrix res(k, k, F);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) res(i, j) = h.gram(i, j).eval(root);
  if (res.transpose() == res) return {HermTag::SymDisc, k, disc_class_of(F, det(res))};
  require(res.transpose() == -res, ErrorCode::Internal, "residue form is neither symmetric nor alternating");
  return {HermTag::AltRank, k, std::nullopt};
}

/// H^f: gram entries lambda_f * f^{-1}(G_ij), the form induced by f(T)
/// through the same functional.
inline HermitianSpace twist(const HermitianSpace& h, const Automorphism& f) {
  const CyclicAlgebra& E = h.algebra;
  AlgebraElement lambda = E.twist_factor(f);
  HermitianSpace out = h;
  for (auto& e : out.gram.a) e = E.mul(lambda, E.apply_inverse(f, e));
  return out;
}

/// Automorphism of E_small = F[x]/(r^{d_small}) induced by f on a quotient.
inline Automorphism restrict_automorphism(const CyclicAlgebra& small, const Automorphism& f) {
  return small.make_automorphism(small.element(f.image));
}

/// Classes of H under all automorphisms of E (sorted, deduplicated).
inline std::vector<HermitianClass> class_orbit(const HermitianSpace& h) {
  std::vector<HermitianClass> out{residue_class(h)};
  if (out[0].tag == HermTag::SymDisc) {
    for (const auto& f : h.algebra.automorphisms()) out.push_back(residue_class(twist(h, f)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline bool hermitian_equivalent(const HermitianSpace& h1, const HermitianSpace& h2, bool allow_automorphism) {
  require(h1.algebra.same_parameters(h2.algebra), ErrorCode::AlgebraMismatch,
          "hermitian spaces over algebras with different parameters");
  if (h1.sign != h2.sign || h1.rank() != h2.rank()) return false;
  if (!allow_automorphism) return h1.algebra == h2.algebra && residue_class(h1) == residue_class(h2);
  HermitianClass c2 = residue_class(h2);
  if (h1.algebra == h2.algebra) {
    for (const auto& c : class_orbit(h1))
      if (c == c2) return true;
    return false;
  }
  // Different primes of equal degree: only rank-type classes can occur here.
  return residue_class(h1).tag == c2.tag && c2.tag != HermTag::SymDisc;
}

/// Canonical gram for a class: identity (times theta for sign -1) for
/// nontrivial residue involution and pairs, diag(1, .., 1, delta?) for
/// symmetric type, hyperbolic blocks for alternating type.
inline EMatrix canonical_gram(const CyclicAlgebra& E, int sign, const HermitianClass& cls) {
  const int k = cls.rank;
  EMatrix n = ematrix_identity(E, k);
  switch (cls.tag) {
    case HermTag::HermRank:
    case HermTag::PairRank:
      if (sign < 0) n = ematrix_scaled(E, E.theta(), n);
      break;
    case HermTag::SymDisc:
      if (cls.disc == DiscClass::NonSquare) n(k - 1, k - 1) = E.scalar(E.field().nonsquare());
      break;
    case HermTag::AltRank:
      for (int i = 0; i < k; ++i) n(i, i) = E.zero();
      for (int i = 0; i + 1 < k; i += 2) {
        n(i, i + 1) = E.one();
        n(i + 1, i) = E.scalar(E.field().p() - 1);
      }
      break;
  }
  return n;
}

namespace detail {

using EVec = std::vector<AlgebraElement>;

inline EVec evec_axpy(const CyclicAlgebra& E, const AlgebraElement& s, const EVec& x, const EVec& y) {
  EVec r = y;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = E.element(r[i] + s * x[i]);
  return r;
}
inline EVec evec_scale(const CyclicAlgebra& E, const AlgebraElement& s, const EVec& x) {
  EVec r = x;
  for (auto& e : r) e = E.mul(s, e);
  return r;
}

// Residue of a bar-fixed unit lies in K_0; a with N(a) = u for a bar-fixed
// unit u, for algebras with nontrivial residue involution.
inline AlgebraElement solve_norm(const CyclicAlgebra& E, const AlgebraElement& u) {
  const PrimeField& F = E.field();
  const Polynomial& r = E.prime();
  const int m = r.degree();
  const AlgebraElement ures = u % r;
  std::vector<residue_t> c(m, 0);
  for (;;) {
    AlgebraElement a0 = E.element(Polynomial(F, c));
    if (!a0.is_zero()) {
      AlgebraElement n0 = E.mul(a0, E.bar(a0));
      if (n0 % r == ures) {
        // N(a0) = u (1 + nu); correct by the square root of 1 + nu.
        AlgebraElement ratio = E.mul(n0, E.inv(u));
        AlgebraElement w = E.sqrt_unit(ratio, 1);
        AlgebraElement a = E.mul(a0, E.inv(w));
        require(E.mul(a, E.bar(a)) == u, ErrorCode::Internal, "norm equation lift failed");
        return a;
      }
    }
    int pos = 0;
    while (pos < m && ++c[pos] == F.p()) c[pos++] = 0;
    require(pos < m, ErrorCode::Internal, "norm equation has no residue solution");
  }
}

}  // namespace detail

struct CanonicalBasis {
  EMatrix p;  // columns are the new generators in old coordinates
  EMatrix normal;
};

/// P with P^T G bar(P) = canonical_gram(class).
inline CanonicalBasis canonical_basis(const HermitianSpace& h) {
  using detail::EVec;
  const HermitianClass cls = residue_class(h);
  const CyclicAlgebra& E = h.algebra;
  const PrimeField& F = E.field();
  const int k = h.rank();
  EMatrix target = canonical_gram(E, h.sign, cls);
  EMatrix p = ematrix_identity(E, k);

  if (cls.tag == HermTag::PairRank) {
    // E = A x A' with idempotent e; P = G'^{-T} e + (1 - e) I.
    EMatrix g = h.gram;
    if (h.sign < 0) g = ematrix_scaled(E, E.inv(E.theta()), g);
    Polynomial ql = pow(E.prime(), E.d()), qh = pow(*E.partner(), E.d());
    ExtGcd eg = ext_gcd(ql, qh);  // s ql + t qh = 1; e = t qh is 1 mod ql-part
    AlgebraElement e = E.element(eg.t * qh);
    AlgebraElement e1 = E.element(E.one() - e);
    auto gi = ematrix_inverse(E, g);
    require(gi.has_value(), ErrorCode::NotUnimodular, "pair gram not invertible");
    EMatrix git = ematrix_transpose(*gi);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) p(i, j) = E.element(git(i, j) * e + (i == j ? e1 : E.zero()));
  } else if (cls.tag == HermTag::AltRank) {
    std::vector<EVec> rest, done;
    for (int i = 0; i < k; ++i) {
      EVec v(k, E.zero());
      v[i] = E.one();
      rest.push_back(v);
    }
    const AlgebraElement half = E.scalar(F.inv(2));
    while (!rest.empty()) {
      std::size_t j = 1;
      while (j < rest.size() && !E.is_unit(h.value(rest[0], rest[j]))) ++j;
      require(j < rest.size(), ErrorCode::NotUnimodular, "alternating residue form is degenerate");
      EVec u = rest[0], v = rest[j];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      rest.erase(rest.begin());
      // Make v isotropic: v += b u with b = -H(v,v) / (2 H(u,v)).
      for (int it = 0; it < 64 && !h.value(v, v).is_zero(); ++it) {
        AlgebraElement b = E.mul(E.element(-h.value(v, v)), E.mul(half, E.inv(h.value(u, v))));
        v = detail::evec_axpy(E, b, u, v);
      }
      require(h.value(v, v).is_zero(), ErrorCode::Internal, "isotropic correction did not converge");
      // Then u, exactly: u += a v with a = H(u,u) / (2 bar(H(u,v))).
      AlgebraElement r = h.value(u, v);
      AlgebraElement a = E.mul(h.value(u, u), E.mul(half, E.inv(E.bar(r))));
      u = detail::evec_axpy(E, a, v, u);
      // H(u, v) = 1.
      v = detail::evec_scale(E, E.inv(E.bar(h.value(u, v))), v);
      for (auto& w : rest) {
        AlgebraElement wu = h.value(w, u), wv = h.value(w, v);
        w = detail::evec_axpy(E, E.element(-wv), u, w);
        w = detail::evec_axpy(E, wu, v, w);
      }
      done.push_back(u);
      done.push_back(v);
    }
    for (int c = 0; c < k; ++c)
      for (int i = 0; i < k; ++i) p(i, c) = done[c][i];
  } else {
    // Hermitian (sign +1 after theta scaling) Gram-Schmidt with unit pivots.
    HermitianSpace hh = h;
    if (cls.tag == HermTag::HermRank && h.sign < 0) {
      hh.gram = ematrix_scaled(E, E.inv(E.theta()), h.gram);
      hh.sign = 1;
    }
    std::vector<EVec> rest, done;
    for (int i = 0; i < k; ++i) {
      EVec v(k, E.zero());
      v[i] = E.one();
      rest.push_back(v);
    }
    std::vector<bool> delta_slot;
    while (!rest.empty()) {
      std::size_t pick = rest.size();
      for (std::size_t i = 0; i < rest.size() && pick == rest.size(); ++i)
        if (E.is_unit(hh.value(rest[i], rest[i]))) pick = i;
      if (pick == rest.size()) {
        for (std::size_t i = 0; i < rest.size() && pick == rest.size(); ++i)
          for (std::size_t j = i + 1; j < rest.size() && pick == rest.size(); ++j) {
            AlgebraElement hij = hh.value(rest[i], rest[j]);
            if (E.is_unit(hij)) {
              rest[i] = detail::evec_axpy(E, E.inv(E.bar(hij)), rest[j], rest[i]);
              pick = i;
            }
          }
        require(pick < rest.size() && E.is_unit(hh.value(rest[pick], rest[pick])), ErrorCode::NotUnimodular,
                "no unit pivot found");
      }
      EVec v = rest[pick];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
      AlgebraElement u = hh.value(v, v);
      AlgebraElement uinv = E.inv(u);
      for (auto& w : rest) w = detail::evec_axpy(E, E.element(-E.mul(hh.value(w, v), uinv)), v, w);
      bool is_delta = false;
      if (cls.tag == HermTag::HermRank) {
        v = detail::evec_scale(E, detail::solve_norm(E, uinv), v);
      } else {
        residue_t u0 = u.eval(F.neg(E.prime().constant_term()));  // residue at the root of the prime
        residue_t target0 = F.is_square(u0) ? F.inv(u0) : F.div(F.nonsquare(), u0);
        is_delta = !F.is_square(u0);
        AlgebraElement x = is_delta ? E.mul(E.scalar(F.nonsquare()), uinv) : uinv;
        v = detail::evec_scale(E, E.sqrt_unit(x, F.sqrt(target0)), v);
      }
      done.push_back(v);
      delta_slot.push_back(is_delta);
    }
    if (cls.tag == HermTag::SymDisc) {
      // Pair up delta entries: delta (x^2 + y^2) = 1.
      const residue_t target = F.inv(F.nonsquare());
      residue_t x = 0, y = 0;
      for (residue_t a = 0; a < F.p(); ++a) {
        residue_t r = F.sub(target, F.mul(a, a));
        if (F.is_square(r)) {
          x = a;
          y = F.sqrt(r);
          break;
        }
      }
      std::vector<EVec> ones, deltas;
      for (std::size_t i = 0; i < done.size(); ++i) (delta_slot[i] ? deltas : ones).push_back(done[i]);
      while (deltas.size() >= 2) {
        EVec u = deltas.back();
        deltas.pop_back();
        EVec w = deltas.back();
        deltas.pop_back();
        EVec u2 = detail::evec_axpy(E, E.scalar(y), w, detail::evec_scale(E, E.scalar(x), u));
        EVec w2 = detail::evec_axpy(E, E.scalar(F.neg(y)), u, detail::evec_scale(E, E.scalar(x), w));
        ones.push_back(u2);
        ones.push_back(w2);
      }
      for (auto& v : deltas) ones.push_back(v);
      done = ones;
    }
    for (int c = 0; c < k; ++c)
      for (int i = 0; i < k; ++i) p(i, c) = done[c][i];
  }
  EMatrix normal = ematrix_mul(E, ematrix_mul(E, ematrix_transpose(p), h.gram), ematrix_bar(E, p));
  require(normal == target, ErrorCode::Internal, "canonical basis does not reach the normal form");
  return {p, normal};
}

}  // namespace isoclass
