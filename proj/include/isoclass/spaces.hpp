#pragma once

#include <optional>
#include <random>
#include <string_view>
#include <utility>

#include "isoclass/matrix.hpp"

namespace isoclass {

enum class Kind { Symmetric, Skew };

constexpr std::string_view kind_name(Kind k) { return k == Kind::Symmetric ? "symmetric" : "skew"; }
constexpr int kind_sign(Kind k) { return k == Kind::Symmetric ? 1 : -1; }

/// Non-degenerate symmetric or skew bilinear space (F_p^n, G).
class BilinearSpace {
 public:
  BilinearSpace() = default;
  BilinearSpace(Kind kind, Matrix gram) : kind_(kind), gram_(std::move(gram)) {
    require(gram_.square(), ErrorCode::DimensionMismatch, "gram matrix must be square");
    const Matrix t = gram_.transpose();
    if (kind_ == Kind::Symmetric)
      require(t == gram_, ErrorCode::NotSymmetric, "gram matrix is not symmetric");
    else
      require(t == -gram_, ErrorCode::NotSymmetric, "gram matrix is not skew-symmetric");
    require(det(gram_) != 0, ErrorCode::Degenerate, "gram matrix is singular");
    // Over odd characteristic a non-degenerate skew form has even dimension;
    // the determinant test already enforces it.
  }

  Kind kind() const { return kind_; }
  const Matrix& gram() const { return gram_; }
  const PrimeField& field() const { return gram_.field(); }
  std::size_t dim() const { return gram_.rows(); }
  int epsilon() const { return kind_sign(kind_); }

  residue_t pair(const Vector& u, const Vector& v) const { return bilinear(gram_, u, v); }

  friend bool operator==(const BilinearSpace& a, const BilinearSpace& b) {
    return a.kind_ == b.kind_ && a.gram_ == b.gram_;
  }

 private:
  Kind kind_ = Kind::Symmetric;
  Matrix gram_;
};

inline bool check_isometry(const Matrix& m, const BilinearSpace& s) {
  require(m.rows() == s.dim() && m.cols() == s.dim() && m.field() == s.field(), ErrorCode::DimensionMismatch,
          "matrix does not match the space dimension");
  return m.transpose() * s.gram() * m == s.gram();
}

/// A matrix together with the space it preserves. Validated on construction.
class Isometry {
 public:
  Isometry() = default;
  Isometry(Matrix m, BilinearSpace s) : m_(std::move(m)), s_(std::move(s)) {
    require(check_isometry(m_, s_), ErrorCode::NotAnIsometry, "matrix does not preserve the form");
  }
  static Isometry unchecked(Matrix m, BilinearSpace s) {
    Isometry t;
    t.m_ = std::move(m);
    t.s_ = std::move(s);
    return t;
  }

  const Matrix& matrix() const { return m_; }
  const BilinearSpace& space() const { return s_; }
  const PrimeField& field() const { return s_.field(); }
  std::size_t dim() const { return s_.dim(); }

  Isometry inverse() const {
    // T^{-1} = G^{-1} T^T G for an isometry.
    return unchecked(::isoclass::inverse(s_.gram()) * m_.transpose() * s_.gram(), s_);
  }
  Isometry negated() const { return unchecked(-m_, s_); }
  friend Isometry operator*(const Isometry& a, const Isometry& b) { return unchecked(a.m_ * b.m_, a.s_); }
  friend bool operator==(const Isometry& a, const Isometry& b) { return a.s_ == b.s_ && a.m_ == b.m_; }

 private:
  Matrix m_;
  BilinearSpace s_;
};

struct FormInvariant {
  std::size_t rank = 0;
  std::optional<DiscClass> disc;  // symmetric only
  Kind kind = Kind::Symmetric;
  friend bool operator==(const FormInvariant&, const FormInvariant&) = default;
};

inline FormInvariant form_invariant(const BilinearSpace& s) {
  residue_t d = det(s.gram());
  require(d != 0, ErrorCode::Degenerate, "gram matrix is singular");
  FormInvariant f{s.dim(), std::nullopt, s.kind()};
  if (s.kind() == Kind::Symmetric) f.disc = disc_class_of(s.field(), d);
  return f;
}

/// Subspace given by linearly independent basis columns.
struct Subspace {
  Matrix basis;
  std::size_t dim() const { return basis.cols(); }
  std::size_t ambient() const { return basis.rows(); }
};

inline Subspace radical(const Subspace& w, const BilinearSpace& s) {
  if (w.dim() == 0) return w;
  Matrix restricted = w.basis.transpose() * s.gram() * w.basis;
  return {w.basis * nullspace(restricted)};
}

namespace detail {

// Symmetric Gram-Schmidt on the columns of `basis` w.r.t. gram g.
// Returns P = basis * Q with P^T g P diagonal.
inline Matrix orthogonal_basis(const Matrix& g, Matrix basis) {
  const PrimeField& F = g.field();
  std::vector<Vector> rest = basis.columns(), done;
  while (!rest.empty()) {
    std::size_t pick = rest.size();
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (bilinear(g, rest[i], rest[i]) != 0) {
        pick = i;
        break;
      }
    if (pick == rest.size()) {
      bool found = false;
      for (std::size_t i = 0; i < rest.size() && !found; ++i)
        for (std::size_t j = i + 1; j < rest.size() && !found; ++j)
          if (bilinear(g, rest[i], rest[j]) != 0) {
            rest[i] = add(F, rest[i], rest[j]);
            pick = i;
            found = true;
          }
      require(found, ErrorCode::Degenerate, "form is degenerate on the given subspace");
    }
    Vector v = rest[pick];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    residue_t inv = F.inv(bilinear(g, v, v));
    for (auto& w : rest) w = axpy(F, F.neg(F.mul(bilinear(g, w, v), inv)), v, w);
    done.push_back(std::move(v));
  }
  return Matrix::from_columns(F, g.rows(), done);
}

}  // namespace detail

inline Matrix diagonalize(const BilinearSpace& s) {
  require(s.kind() == Kind::Symmetric, ErrorCode::NotSymmetric, "diagonalize needs a symmetric space");
  return detail::orthogonal_basis(s.gram(), Matrix::identity(s.dim(), s.field()));
}

/// P with P^T G P in normal form: diag(1, ..., 1, 1 or delta) (delta the
/// least non-residue) for symmetric G, block-diag of [[0,1],[-1,0]] for skew.
inline Matrix normal_form_basis(const Matrix& g, Kind kind) {
  const PrimeField& F = g.field();
  const std::size_t n = g.rows();
  if (kind == Kind::Symmetric) {
    Matrix p = detail::orthogonal_basis(g, Matrix::identity(n, F));
    const residue_t delta = F.nonsquare();
    std::vector<Vector> ones, deltas;
    for (std::size_t j = 0; j < n; ++j) {
      Vector v = p.col(j);
      residue_t a = bilinear(g, v, v);
      residue_t s = F.is_square(a) ? F.sqrt(F.inv(a)) : F.sqrt(F.div(delta, a));
      for (auto& x : v) x = F.mul(x, s);
      (F.is_square(a) ? ones : deltas).push_back(std::move(v));
    }
    // delta*(x^2 + y^2) = 1 turns a pair of delta-vectors into two unit vectors.
    residue_t x = 0, y = 0, target = F.inv(delta);
    for (residue_t a = 0; a < F.p(); ++a) {
      residue_t r = F.sub(target, F.mul(a, a));
      if (F.is_square(r)) {
        x = a;
        y = F.sqrt(r);
        break;
      }
    }
    while (deltas.size() >= 2) {
      Vector u = deltas.back();
      deltas.pop_back();
      Vector w = deltas.back();
      deltas.pop_back();
      Vector u2(n), w2(n);
      for (std::size_t i = 0; i < n; ++i) {
        u2[i] = F.add(F.mul(x, u[i]), F.mul(y, w[i]));
        w2[i] = F.sub(F.mul(x, w[i]), F.mul(y, u[i]));
      }
      ones.push_back(std::move(u2));
      ones.push_back(std::move(w2));
    }
    for (auto& v : deltas) ones.push_back(v);
    return Matrix::from_columns(F, n, ones);
  }
  std::vector<Vector> rest = Matrix::identity(n, F).columns(), done;
  while (!rest.empty()) {
    std::size_t j = 1;
    while (j < rest.size() && bilinear(g, rest[0], rest[j]) == 0) ++j;
    require(j < rest.size(), ErrorCode::Degenerate, "skew form is degenerate");
    Vector e = rest[0], f = rest[j];
    residue_t inv = F.inv(bilinear(g, e, f));
    for (auto& x : f) x = F.mul(x, inv);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    rest.erase(rest.begin());
    for (auto& w : rest) {
      // w - B(w,f) e + B(w,e) f is orthogonal to e and f when B(e,f) = 1.
      residue_t wf = bilinear(g, w, f), we = bilinear(g, w, e);
      w = axpy(F, F.neg(wf), e, w);
      w = axpy(F, we, f, w);
    }
    done.push_back(std::move(e));
    done.push_back(std::move(f));
  }
  return Matrix::from_columns(F, n, done);
}

/// P with P^T G1 P = G2, for two forms of the same kind and invariant.
inline Matrix congruence(const Matrix& g1, const Matrix& g2, Kind kind) {
  Matrix q1 = normal_form_basis(g1, kind), q2 = normal_form_basis(g2, kind);
  require(q1.transpose() * g1 * q1 == q2.transpose() * g2 * q2, ErrorCode::SpaceMismatch,
          "forms are not equivalent");
  return q1 * inverse(q2);
}

inline BilinearSpace standard_space(std::size_t m, Kind kind, PrimeField f) {
  Matrix g(2 * m, 2 * m, f);
  const residue_t eps = kind == Kind::Symmetric ? 1 : f.p() - 1;
  for (std::size_t i = 0; i < m; ++i) {
    g(i, m + i) = 1;
    g(m + i, i) = eps;
  }
  return BilinearSpace(kind, g);
}

/// A on W (first m coordinates), (A^{-1})^T on W* (last m).
inline Isometry standard_embed(const Matrix& a, Kind kind) {
  require(a.square(), ErrorCode::DimensionMismatch, "standard_embed needs a square matrix");
  auto ai = try_inverse(a);
  require(ai.has_value(), ErrorCode::Singular, "standard_embed needs an invertible matrix");
  const std::size_t m = a.rows();
  Matrix d = ai->transpose();
  Matrix e(2 * m, 2 * m, a.field());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      e(i, j) = a(i, j);
      e(m + i, m + j) = d(i, j);
    }
  return Isometry(e, standard_space(m, kind, a.field()));
}

inline Matrix reflection(const BilinearSpace& s, const Vector& v) {
  const PrimeField& F = s.field();
  residue_t q = s.pair(v, v);
  require(q != 0, ErrorCode::Internal, "reflection in an isotropic vector");
  Vector gv = s.gram() * v;
  residue_t coef = F.neg(F.div(2, q));
  Matrix r = Matrix::identity(s.dim(), F);
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) r(i, j) = F.add(r(i, j), F.mul(coef, F.mul(v[i], gv[j])));
  return r;
}

inline Matrix transvection(const BilinearSpace& s, const Vector& v, residue_t lambda) {
  const PrimeField& F = s.field();
  Vector gv = s.gram() * v;
  Matrix r = Matrix::identity(s.dim(), F);
  // x -> x + lambda B(x, v) v, with B(x, v) = sum_j x_j (G v)_j.
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) r(i, j) = F.add(r(i, j), F.mul(lambda, F.mul(v[i], gv[j])));
  return r;
}

inline Isometry random_isometry(const BilinearSpace& s, std::uint64_t seed) {
  const PrimeField& F = s.field();
  const std::size_t n = s.dim();
  std::mt19937_64 rng(seed);
  Matrix m = Matrix::identity(n, F);
  const std::uint64_t count = rng() % (2 * n + 1);
  for (std::uint64_t k = 0; k < count; ++k) {
    Vector v(n);
    for (;;) {
      for (auto& x : v) x = static_cast<residue_t>(rng() % F.p());
      if (is_zero(v)) continue;
      if (s.kind() == Kind::Symmetric && s.pair(v, v) == 0) continue;
      break;
    }
    if (s.kind() == Kind::Symmetric) {
      m = reflection(s, v) * m;
    } else {
      residue_t lambda = static_cast<residue_t>(1 + rng() % (F.p() - 1));
      m = transvection(s, v, lambda) * m;
    }
  }
  return Isometry(m, s);
}

}  // namespace isoclass
