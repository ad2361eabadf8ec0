#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isoclass/polynomial.hpp"

namespace isoclass {

using Vector = std::vector<residue_t>;

/// Dense row-major matrix over F_p.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, PrimeField f) : r_(rows), c_(cols), f_(f), a_(rows * cols, 0) {}

  static Matrix identity(std::size_t n, PrimeField f) {
    Matrix m(n, n, f);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix from_rows(PrimeField f, const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    Matrix m(r, c, f);
    for (std::size_t i = 0; i < r; ++i) {
      require(rows[i].size() == c, ErrorCode::DimensionMismatch, "ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = f.reduce(rows[i][j]);
    }
    return m;
  }
  static Matrix from_columns(PrimeField f, std::size_t n, const std::vector<Vector>& cols) {
    Matrix m(n, cols.size(), f);
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
    return m;
  }
  static Matrix diagonal(PrimeField f, const std::vector<residue_t>& d) {
    Matrix m(d.size(), d.size(), f);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i] % f.p();
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }
  const PrimeField& field() const { return f_; }
  const std::vector<residue_t>& data() const { return a_; }

  residue_t operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  residue_t& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }

  Vector col(std::size_t j) const {
    Vector v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vector row(std::size_t i) const { return Vector(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }
  std::vector<Vector> columns() const {
    std::vector<Vector> r;
    for (std::size_t j = 0; j < c_; ++j) r.push_back(col(j));
    return r;
  }
  void set_col(std::size_t j, const Vector& v) {
    for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(c_, r_, f_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.c_ == b.r_ && a.f_ == b.f_, ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    Matrix m(a.r_, b.c_, a.f_);
    const std::uint64_t p = a.f_.p();
    std::vector<std::uint64_t> acc(b.c_);
    for (std::size_t i = 0; i < a.r_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < a.c_; ++k) {
        const std::uint64_t x = a(i, k);
        if (!x) continue;
        const residue_t* brow = &b.a_[k * b.c_];
        for (std::size_t j = 0; j < b.c_; ++j) acc[j] = (acc[j] + x * brow[j]) % p;
      }
      for (std::size_t j = 0; j < b.c_; ++j) m(i, j) = static_cast<residue_t>(acc[j]);
    }
    return m;
  }
  friend Vector operator*(const Matrix& a, const Vector& v) {
    require(a.c_ == v.size(), ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
    Vector r(a.r_);
    const std::uint64_t p = a.f_.p();
    for (std::size_t i = 0; i < a.r_; ++i) {
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < a.c_; ++k) s = (s + std::uint64_t{a(i, k)} * v[k]) % p;
      r[i] = static_cast<residue_t>(s);
    }
    return r;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    require(a.r_ == b.r_ && a.c_ == b.c_, ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
    Matrix m = a;
    for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.f_.add(a.a_[i], b.a_[i]);
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    require(a.r_ == b.r_ && a.c_ == b.c_, ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
    Matrix m = a;
    for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.f_.sub(a.a_[i], b.a_[i]);
    return m;
  }
  Matrix scaled(residue_t s) const {
    Matrix m = *this;
    for (auto& x : m.a_) x = f_.mul(x, s);
    return m;
  }
  Matrix operator-() const { return scaled(f_.p() - 1); }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.f_ == b.f_ && a.a_ == b.a_;
  }
  bool is_zero() const {
    for (auto x : a_)
      if (x) return false;
    return true;
  }
  bool is_identity() const { return square() && *this == identity(r_, f_); }

  /// Columns [j0, j0 + k).
  Matrix col_range(std::size_t j0, std::size_t k) const {
    Matrix m(r_, k, f_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = (*this)(i, j0 + j);
    return m;
  }
  Matrix hcat(const Matrix& o) const {
    require(r_ == o.r_, ErrorCode::DimensionMismatch, "hcat row mismatch");
    Matrix m(r_, c_ + o.c_, f_);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < c_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < o.c_; ++j) m(i, c_ + j) = o(i, j);
    }
    return m;
  }

  std::vector<std::vector<long long>> to_rows() const {
    std::vector<std::vector<long long>> r(r_, std::vector<long long>(c_));
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) r[i][j] = (*this)(i, j);
    return r;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  PrimeField f_;
  std::vector<residue_t> a_;
};

struct RowEchelon {
  Matrix m;                        // reduced row echelon form
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

inline RowEchelon rref(Matrix m) {
  const PrimeField& F = m.field();
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    residue_t inv = F.inv(m(row, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = F.mul(m(row, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      residue_t f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(row, j)));
    }
    piv.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(piv)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Basis of {v : m v = 0}, as columns.
inline Matrix nullspace(const Matrix& m) {
  const PrimeField& F = m.field();
  RowEchelon e = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : e.pivots) is_piv[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_piv[free]) continue;
    Vector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = F.neg(e.m(r, free));
    basis.push_back(std::move(v));
  }
  return Matrix::from_columns(F, m.cols(), basis);
}

inline residue_t det(Matrix m) {
  require(m.square(), ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  const PrimeField& F = m.field();
  const std::size_t n = m.rows();
  residue_t d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && m(sel, c) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(sel, j), m(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, m(c, c));
    residue_t inv = F.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      residue_t f = F.mul(m(i, c), inv);
      for (std::size_t j = c; j < n; ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(c, j)));
    }
  }
  return d;
}

inline std::optional<Matrix> try_inverse(const Matrix& m) {
  require(m.square(), ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  RowEchelon e = rref(m.hcat(Matrix::identity(n, m.field())));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n, m.field());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.m(i, n + j);
  return inv;
}

inline Matrix inverse(const Matrix& m) {
  auto r = try_inverse(m);
  require(r.has_value(), ErrorCode::Singular, "matrix is singular");
  return *r;
}

/// Some solution x of a x = b, if any.
inline std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  Matrix aug(a.rows(), a.cols() + 1, a.field());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  RowEchelon e = rref(aug);
  Vector x(a.cols(), 0);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x[e.pivots[r]] = e.m(r, a.cols());
  }
  return x;
}

/// f(M) by Horner.
inline Matrix evaluate(const Polynomial& f, const Matrix& m) {
  const PrimeField& F = m.field();
  Matrix r(m.rows(), m.cols(), F);
  const auto& c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    r = r * m;
    for (std::size_t k = 0; k < m.rows(); ++k) r(k, k) = F.add(r(k, k), c[i]);
  }
  return r;
}

inline Matrix matrix_power(Matrix m, std::uint64_t e) {
  Matrix r = Matrix::identity(m.rows(), m.field());
  while (e) {
    if (e & 1) r = r * m;
    m = m * m;
    e >>= 1;
  }
  return r;
}

/// Bilinear value u^T G v.
inline residue_t bilinear(const Matrix& g, const Vector& u, const Vector& v) {
  const PrimeField& F = g.field();
  Vector gv = g * v;
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s = (s + std::uint64_t{u[i]} * gv[i]) % F.p();
  return static_cast<residue_t>(s);
}

inline Vector add(const PrimeField& F, const Vector& a, const Vector& b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
  return r;
}
inline Vector axpy(const PrimeField& F, residue_t s, const Vector& x, const Vector& y) {
  Vector r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = F.add(y[i], F.mul(s, x[i]));
  return r;
}
inline bool is_zero(const Vector& v) {
  for (auto x : v)
    if (x) return false;
  return true;
}

}  // namespace isoclass
