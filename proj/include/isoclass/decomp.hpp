#pragma once

#include <algorithm>
#include <optional>
#include <string_view>
#include <vector>

#include "isoclass/algebra.hpp"
#include "isoclass/factor.hpp"
#include "isoclass/spaces.hpp"

namespace isoclass {

/// Monic annihilator of v under m (order ideal generator).
inline Polynomial vector_annihilator(const Matrix& m, const Vector& v) {
  const PrimeField& F = m.field();
  const std::size_t n = m.rows();
  std::vector<Vector> krylov{v};
  for (;;) {
    Vector next = m * krylov.back();
    Matrix k = Matrix::from_columns(F, n, krylov);
    if (auto coef = solve(k, next)) {
      std::vector<residue_t> c(krylov.size() + 1);
      for (std::size_t i = 0; i < krylov.size(); ++i) c[i] = F.neg((*coef)[i]);
      c.back() = 1;
      return Polynomial(F, c);
    }
    krylov.push_back(std::move(next));
  }
}

inline Polynomial minimal_polynomial(const Matrix& m) {
  const PrimeField& F = m.field();
  Polynomial r = Polynomial::one(F);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Vector e(m.rows(), 0);
    e[i] = 1;
    if (evaluate(r, m) * e == Vector(m.rows(), 0)) continue;
    r = lcm(r, vector_annihilator(m, e));
  }
  return r;
}
inline Polynomial minimal_polynomial(const Isometry& t) { return minimal_polynomial(t.matrix()); }

struct ElementaryDivisor {
  Polynomial prime;
  int power = 1;
  int multiplicity = 1;
  friend bool operator==(const ElementaryDivisor&, const ElementaryDivisor&) = default;
};
using ElementaryDivisorList = std::vector<ElementaryDivisor>;

/// Block sizes of q in the module structure of m: returns multiplicity of
/// q^j for j = 1..e (index j-1).
inline std::vector<int> block_counts(const Matrix& m, const Polynomial& q, int e) {
  const int n = static_cast<int>(m.rows()), deg = q.degree();
  std::vector<int> r(e + 2, 0);  // r[j] = dim ker q(m)^j / deg
  Matrix qm = evaluate(q, m), power = Matrix::identity(m.rows(), m.field());
  for (int j = 1; j <= e + 1; ++j) {
    power = power * qm;
    r[j] = (n - static_cast<int>(rank(power))) / deg;
  }
  std::vector<int> out(e, 0);
  for (int j = 1; j <= e; ++j) out[j - 1] = (r[j] - r[j - 1]) - (r[j + 1] - r[j]);
  return out;
}

inline ElementaryDivisorList elementary_divisors(const Matrix& m) {
  ElementaryDivisorList out;
  Factorization f = factor(minimal_polynomial(m));
  for (const auto& [q, e] : f.factors) {
    std::vector<int> counts = block_counts(m, q, e);
    for (int j = 1; j <= e; ++j)
      if (counts[j - 1] > 0) out.push_back({q, j, counts[j - 1]});
  }
  return out;
}
inline ElementaryDivisorList elementary_divisors(const Isometry& t) { return elementary_divisors(t.matrix()); }

enum class BlockKind { SelfDual, Unipotent, Pair };

constexpr std::string_view block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::SelfDual: return "self_dual";
    case BlockKind::Unipotent: return "unipotent";
    case BlockKind::Pair: return "pair";
  }
  return "?";
}

struct PrimaryComponent {
  FactorClass factor_class;          // SelfDual, PlusOne, MinusOne or DualPairLow
  Polynomial prime;                  // the Low member for pairs
  std::optional<Polynomial> partner; // q* for pairs
  int d = 1;
  Subspace basis;                    // pairs: low half columns first
  std::size_t low_dim = 0;           // pairs: size of the low half
  BlockKind kind_of_block = BlockKind::SelfDual;

  /// The component is a module through sign * T (MinusOne uses -T).
  int sign() const { return factor_class.tag == FactorTag::MinusOne ? -1 : 1; }
  /// Prime of sign * T on the component.
  Polynomial module_prime() const {
    return factor_class.tag == FactorTag::MinusOne ? Polynomial::linear(prime.field(), 1) : prime;
  }
  CyclicAlgebra algebra(int power) const {
    return kind_of_block == BlockKind::Pair ? CyclicAlgebra::pair(prime, *partner, power)
                                            : CyclicAlgebra::simple(module_prime(), power);
  }
};

struct ElementaryDivisorBlock {
  int d_i = 1;
  int k_i = 1;
  Subspace basis;                 // {A^j g_i}
  std::vector<Vector> generators; // module generators g_1..g_k
};

inline std::vector<PrimaryComponent> primary_decomposition(const Isometry& t) {
  const Matrix& m = t.matrix();
  Factorization f = factor(minimal_polynomial(m));
  std::vector<PrimaryComponent> out;
  auto exponent_of = [&](const Polynomial& q) {
    for (const auto& fp : f.factors)
      if (fp.factor == q) return fp.exponent;
    fail(ErrorCode::Internal, "dual factor missing from minimal polynomial");
  };
  for (const auto& [q, e] : f.factors) {
    FactorClass fc = classify_factor(q);
    if (fc.tag == FactorTag::DualPairHigh) continue;
    PrimaryComponent c;
    c.factor_class = fc;
    c.prime = q;
    c.d = e;
    Matrix ker = nullspace(evaluate(pow(q, e), m));
    if (fc.tag == FactorTag::DualPairLow) {
      c.partner = fc.partner;
      c.kind_of_block = BlockKind::Pair;
      Matrix ker2 = nullspace(evaluate(pow(*fc.partner, exponent_of(*fc.partner)), m));
      c.low_dim = ker.cols();
      c.basis = {ker.hcat(ker2)};
    } else {
      c.kind_of_block = fc.tag == FactorTag::SelfDual ? BlockKind::SelfDual : BlockKind::Unipotent;
      c.basis = {ker};
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const PrimaryComponent& a, const PrimaryComponent& b) {
    if (a.factor_class.tag != b.factor_class.tag) return a.factor_class.tag < b.factor_class.tag;
    return a.prime < b.prime;
  });
  return out;
}

namespace detail {

// Columns of w (as coordinates) with f(a) w' = 0, returned in ambient coordinates.
inline Matrix kernel_within(const Matrix& op, const Matrix& w) {
  if (w.cols() == 0) return w;
  return w * nullspace(op * w);
}

inline Matrix span_columns(const PrimeField& F, std::size_t n, const std::vector<Vector>& cols) {
  return Matrix::from_columns(F, n, cols);
}

// Greedy choice of vectors g from the columns of w whose images in w / k
// are independent over F[x]/(r); `m` is deg r.
inline std::vector<Vector> select_generators(const Matrix& a, const Matrix& w, const Matrix& k, int m) {
  const PrimeField& F = a.field();
  const std::size_t n = a.rows();
  std::vector<Vector> current = k.columns(), gens;
  std::size_t rk = rank(span_columns(F, n, current));
  for (std::size_t j = 0; j < w.cols() && rk < w.cols(); ++j) {
    std::vector<Vector> trial = current;
    Vector v = w.col(j);
    for (int s = 0; s < m; ++s) {
      trial.push_back(v);
      v = a * v;
    }
    std::size_t r2 = rank(span_columns(F, n, trial));
    if (r2 > rk) {
      require(r2 == rk + static_cast<std::size_t>(m), ErrorCode::NotFree, "partial independence in quotient");
      current = std::move(trial);
      rk = r2;
      gens.push_back(w.col(j));
    }
  }
  require(rk == w.cols(), ErrorCode::NotFree, "quotient not spanned by generators");
  return gens;
}

inline int nilpotency_index(const Matrix& op, const Matrix& w) {
  int d = 0;
  Matrix x = w;
  while (!x.is_zero()) {
    x = op * x;
    ++d;
  }
  return d;
}

inline Matrix cyclic_span(const Matrix& a, const std::vector<Vector>& gens, int len) {
  std::vector<Vector> cols;
  for (const auto& g : gens) {
    Vector v = g;
    for (int j = 0; j < len; ++j) {
      cols.push_back(v);
      v = a * v;
    }
  }
  return Matrix::from_columns(a.field(), a.rows(), cols);
}

}  // namespace detail

/// Generators of a block that is free over E: recomputed greedily from the
/// block basis and checked.
inline std::vector<Vector> free_module_basis(const ElementaryDivisorBlock& block, const CyclicAlgebra& E,
                                             const Matrix& a) {
  const Matrix& w = block.basis.basis;
  Matrix r = evaluate(E.radical_generator(), a);
  Matrix k = detail::kernel_within(matrix_power(r, block.d_i - 1), w);
  std::vector<Vector> gens;
  if (E.kind() == AlgebraKind::Simple) {
    gens = detail::select_generators(a, w, k, E.prime_degree());
  } else {
    Matrix wl = detail::kernel_within(matrix_power(evaluate(E.prime(), a), block.d_i), w);
    Matrix wh = detail::kernel_within(matrix_power(evaluate(*E.partner(), a), block.d_i), w);
    Matrix kl = detail::kernel_within(matrix_power(evaluate(E.prime(), a), block.d_i - 1), wl);
    Matrix kh = detail::kernel_within(matrix_power(evaluate(*E.partner(), a), block.d_i - 1), wh);
    auto gl = detail::select_generators(a, wl, kl, E.prime_degree());
    auto gh = detail::select_generators(a, wh, kh, E.prime_degree());
    require(gl.size() == gh.size(), ErrorCode::NotFree, "pair halves have different ranks");
    for (std::size_t i = 0; i < gl.size(); ++i) gens.push_back(add(a.field(), gl[i], gh[i]));
  }
  Matrix span = detail::cyclic_span(a, gens, E.dim());
  require(span.cols() == w.cols() && rank(span) == w.cols(), ErrorCode::NotFree, "block is not free");
  return gens;
}

/// Orthogonal splitting of a primary component into blocks V_{d_i}, each free
/// of rank k_i over F[x]/(r^{d_i}), peeled off from the top power downward.
/// `a` is sign * T.
inline std::vector<ElementaryDivisorBlock> ed_orthogonal_split(const PrimaryComponent& c, const Isometry& t) {
  const PrimeField& F = t.field();
  const Matrix& g = t.space().gram();
  const Matrix a = c.sign() > 0 ? t.matrix() : -t.matrix();
  std::vector<ElementaryDivisorBlock> out;
  const int m = c.prime.degree();

  if (c.kind_of_block != BlockKind::Pair) {
    Matrix r = evaluate(c.module_prime(), a);
    {
      Matrix check = r;
      for (int j = 1; j < c.d; ++j) check = check * r;
      require((check * c.basis.basis).is_zero(), ErrorCode::NotPrimary, "component is not primary");
    }
    Matrix w = c.basis.basis;
    while (w.cols() > 0) {
      const int d = detail::nilpotency_index(r, w);
      Matrix k = detail::kernel_within(matrix_power(r, d - 1), w);
      auto gens = detail::select_generators(a, w, k, m);
      Matrix block = detail::cyclic_span(a, gens, m * d);
      require(rank(block) == block.cols(), ErrorCode::NotFree, "block generators are dependent");
      Matrix restricted = block.transpose() * g * block;
      require(det(restricted) != 0, ErrorCode::Internal, "top block is degenerate");
      out.push_back({d, static_cast<int>(gens.size()), {block}, gens});
      w = w * nullspace(block.transpose() * g * w);
    }
  } else {
    Matrix rl = evaluate(c.prime, a), rh = evaluate(*c.partner, a);
    Matrix wl = c.basis.basis.col_range(0, c.low_dim);
    Matrix wh = c.basis.basis.col_range(c.low_dim, c.basis.dim() - c.low_dim);
    while (wl.cols() > 0 || wh.cols() > 0) {
      const int d = detail::nilpotency_index(rl, wl);
      require(d == detail::nilpotency_index(rh, wh), ErrorCode::Internal, "pair halves disagree");
      Matrix kl = detail::kernel_within(matrix_power(rl, d - 1), wl);
      Matrix kh = detail::kernel_within(matrix_power(rh, d - 1), wh);
      auto gl = detail::select_generators(a, wl, kl, m);
      auto gh = detail::select_generators(a, wh, kh, m);
      require(gl.size() == gh.size(), ErrorCode::Internal, "pair halves have different ranks");
      std::vector<Vector> gens;
      for (std::size_t i = 0; i < gl.size(); ++i) gens.push_back(add(F, gl[i], gh[i]));
      Matrix block = detail::cyclic_span(a, gens, 2 * m * d);
      require(rank(block) == block.cols(), ErrorCode::NotFree, "block generators are dependent");
      require(det(block.transpose() * g * block) != 0, ErrorCode::Internal, "pair block is degenerate");
      out.push_back({d, static_cast<int>(gens.size()), {block}, gens});
      Matrix w = wl.hcat(wh);
      w = w * nullspace(block.transpose() * g * w);
      wl = detail::kernel_within(matrix_power(rl, c.d), w);
      wh = detail::kernel_within(matrix_power(rh, c.d), w);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ElementaryDivisorBlock& x, const ElementaryDivisorBlock& y) { return x.d_i < y.d_i; });
  return out;
}

}  // namespace isoclass
