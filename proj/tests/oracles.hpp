#pragma once

// Independent reference computations for the tests. Nothing here calls the
// algorithms under test; they rely only on the value types (field, matrix,
// polynomial) and on exhaustive search.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "isoclass/census.hpp"
#include "isoclass/classify.hpp"

namespace oracle {

using namespace isoclass;

inline std::vector<residue_t> roots(const Polynomial& f) {
  std::vector<residue_t> out;
  for (residue_t a = 0; a < f.field().p(); ++a)
    if (f.eval(a) == 0) out.push_back(a);
  return out;
}

/// Degree <= 3 irreducibility by absence of roots.
inline bool irreducible_small(const Polynomial& f) {
  if (f.degree() <= 0) return false;
  if (f.degree() == 1) return true;
  return roots(f).empty();
}

/// F_{p^2} = F_p[y]/(y^2 - delta) for a nonsquare delta.
struct Fp2 {
  PrimeField F;
  residue_t delta;
  explicit Fp2(PrimeField f) : F(f), delta(0) {
    std::set<residue_t> squares;
    for (residue_t a = 1; a < F.p(); ++a) squares.insert(F.mul(a, a));
    for (residue_t a = 2; a < F.p(); ++a)
      if (!squares.count(a)) {
        delta = a;
        break;
      }
  }
  using El = std::pair<residue_t, residue_t>;  // a + b y
  El mul(El x, El y) const {
    return {F.add(F.mul(x.first, y.first), F.mul(delta, F.mul(x.second, y.second))),
            F.add(F.mul(x.first, y.second), F.mul(x.second, y.first))};
  }
  El add(El x, El y) const { return {F.add(x.first, y.first), F.add(x.second, y.second)}; }
  El eval(const Polynomial& f, El x) const {
    El r{0, 0};
    for (std::size_t i = f.coeffs().size(); i-- > 0;) r = add(mul(r, x), {f.coeffs()[i], 0});
    return r;
  }
  std::vector<El> elements() const {
    std::vector<El> out;
    for (residue_t a = 0; a < F.p(); ++a)
      for (residue_t b = 0; b < F.p(); ++b) out.push_back({a, b});
    return out;
  }
  El inv(El x) const {
    for (auto y : elements())
      if (mul(x, y) == El{1, 0}) return y;
    return {0, 0};
  }
  std::multiset<El> roots(const Polynomial& f) const {
    std::multiset<El> out;
    for (auto x : elements())
      if (eval(f, x) == El{0, 0}) out.insert(x);
    return out;
  }
};

/// Every n x n matrix over F_p (p^(n^2) of them), for tiny n.
inline void for_each_matrix(const PrimeField& F, std::size_t n, const std::function<void(const Matrix&)>& visit) {
  Matrix m(n, n, F);
  const std::size_t cells = n * n;
  for (;;) {
    visit(m);
    std::size_t pos = 0;
    while (pos < cells) {
      residue_t& x = m(pos / n, pos % n);
      if (++x < F.p()) break;
      x = 0;
      ++pos;
    }
    if (pos == cells) return;
  }
}

inline std::size_t isometry_count(const BilinearSpace& s) {
  std::size_t count = 0;
  for_each_matrix(s.field(), s.dim(), [&](const Matrix& m) {
    if (m.transpose() * s.gram() * m == s.gram()) ++count;
  });
  return count;
}

/// Is there an invertible P with P^T g1 P = g2?
inline bool forms_equivalent(const Matrix& g1, const Matrix& g2) {
  bool found = false;
  for_each_matrix(g1.field(), g1.rows(), [&](const Matrix& p) {
    if (!found && p.transpose() * g1 * p == g2) found = true;
  });
  return found;
}

/// Two labelings of the same set induce the same partition.
template <class A, class B>
bool same_partition(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  std::map<A, B> ab;
  std::map<B, A> ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [x, fx] = ab.emplace(a[i], b[i]);
    auto [y, fy] = ba.emplace(b[i], a[i]);
    if (x->second != b[i] || y->second != a[i]) return false;
  }
  return true;
}

/// Brute-force conjugacy classes: class of x is {g x g^-1}, computed
/// directly from the definition over all g.
inline std::vector<std::size_t> conjugacy_labels(const GroupTable& g) {
  std::vector<std::size_t> label(g.size(), SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (label[x] != SIZE_MAX) continue;
    for (std::size_t c = 0; c < g.size(); ++c) label[g.require_index(g[c] * g[x] * g.inverse_of(c))] = next;
    ++next;
  }
  return label;
}

// ---------------------------------------------------------------------------
// Hermitian forms over a small algebra E = F[x]/(m), elements encoded as
// integers by their base-p coefficient digits. Orbits of GL_k(E) acting by
// G -> P G bar(P)^T are found by union-find over generator moves.

class SmallAlgebra {
 public:
  explicit SmallAlgebra(const Polynomial& modulus) : F_(modulus.field()), dim_(modulus.degree()) {
    size_ = 1;
    for (int i = 0; i < dim_; ++i) size_ *= F_.p();
    std::vector<residue_t> m = modulus.coeffs();
    // Multiplication by reduction of the schoolbook product.
    mul_.assign(size_ * size_, 0);
    add_.assign(size_ * size_, 0);
    for (int a = 0; a < size_; ++a)
      for (int b = 0; b < size_; ++b) {
        auto x = digits(a), y = digits(b);
        std::vector<residue_t> prod(2 * dim_, 0), sum(dim_, 0);
        for (int i = 0; i < dim_; ++i) {
          sum[i] = F_.add(x[i], y[i]);
          for (int j = 0; j < dim_; ++j) prod[i + j] = F_.add(prod[i + j], F_.mul(x[i], y[j]));
        }
        for (int k = 2 * dim_ - 1; k >= dim_; --k) {
          residue_t c = prod[k];
          if (!c) continue;
          for (int i = 0; i <= dim_; ++i) prod[k - dim_ + i] = F_.sub(prod[k - dim_ + i], F_.mul(c, m[i]));
        }
        prod.resize(dim_);
        mul_[a * size_ + b] = encode(prod);
        add_[a * size_ + b] = encode(sum);
      }
    neg_.resize(size_);
    for (int a = 0; a < size_; ++a) {
      auto x = digits(a);
      for (auto& c : x) c = F_.neg(c);
      neg_[a] = encode(x);
    }
    // x is the digit vector (0, 1, 0, ...) unless dim = 1, where x = -m_0.
    t_ = dim_ > 1 ? static_cast<int>(F_.p()) : encode({F_.neg(m[0])});
    for (int a = 0; a < size_; ++a)
      if (is_unit_slow(a)) units_.push_back(a);
    int tinv = -1;
    for (int a = 0; a < size_ && tinv < 0; ++a)
      if (mul(t_, a) == one_) tinv = a;
    // bar(sum c_i t^i) = sum c_i t^{-i}
    bar_.resize(size_);
    for (int a = 0; a < size_; ++a) {
      auto x = digits(a);
      int r = 0;
      for (int i = dim_; i-- > 0;) r = add(mul(r, tinv), scalar(x[i]));
      bar_[a] = r;
    }
  }

  int size() const { return size_; }
  int dim() const { return dim_; }
  const PrimeField& field() const { return F_; }
  int mul(int a, int b) const { return mul_[a * size_ + b]; }
  int add(int a, int b) const { return add_[a * size_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int bar(int a) const { return bar_[a]; }
  int one() const { return one_; }
  const std::vector<int>& units() const { return units_; }
  int scalar(residue_t c) const { return static_cast<int>(c); }

  std::vector<residue_t> digits(int a) const {
    std::vector<residue_t> d(dim_);
    for (int i = 0; i < dim_; ++i) {
      d[i] = static_cast<residue_t>(a % static_cast<int>(F_.p()));
      a /= static_cast<int>(F_.p());
    }
    return d;
  }
  int encode(const std::vector<residue_t>& d) const {
    int r = 0;
    for (std::size_t i = d.size(); i-- > 0;) r = r * static_cast<int>(F_.p()) + static_cast<int>(d[i]);
    return r;
  }

 private:
  bool is_unit_slow(int a) const {
    for (int b = 0; b < size_; ++b)
      if (mul(a, b) == one_) return true;
    return false;
  }

  PrimeField F_;
  int dim_;
  int size_;
  int one_ = 1, t_ = 0;
  std::vector<int> mul_, add_, neg_, bar_, units_;
};

/// Gram matrices are k*k row-major vectors of encoded elements.
using SmallGram = std::vector<int>;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

struct HermitianOrbits {
  std::vector<SmallGram> grams;
  std::vector<std::size_t> orbit;  // representative index per gram
};

/// All grams with G^T = sign * bar(G), partitioned into GL_k(E) orbits
/// (k = 1 or 2).
inline HermitianOrbits hermitian_orbits(const SmallAlgebra& A, int k, int sign) {
  const int q = A.size();
  auto conj_sign = [&](int a) { return sign > 0 ? A.bar(a) : A.neg(A.bar(a)); };
  std::vector<int> diag_ok, diag_pos(q, -1);
  for (int a = 0; a < q; ++a)
    if (conj_sign(a) == a) {
      diag_pos[a] = static_cast<int>(diag_ok.size());
      diag_ok.push_back(a);
    }
  const std::size_t nd = diag_ok.size();
  HermitianOrbits out;
  // Index of a gram: (pos(G11) * nd + pos(G22)) * q + G12 for k = 2.
  if (k == 1) {
    for (int a : diag_ok) out.grams.push_back({a});
  } else {
    for (int a : diag_ok)
      for (int d : diag_ok)
        for (int b = 0; b < q; ++b) out.grams.push_back({a, b, conj_sign(b), d});
  }
  auto index_of = [&](const std::array<int, 4>& g) -> std::size_t {
    if (k == 1) return static_cast<std::size_t>(diag_pos[g[0]]);
    return (static_cast<std::size_t>(diag_pos[g[0]]) * nd + static_cast<std::size_t>(diag_pos[g[3]])) * q +
           static_cast<std::size_t>(g[1]);
  };
  // P G bar(P)^T
  auto transform = [&](const std::array<int, 4>& p, const SmallGram& g) {
    std::array<int, 4> pg{}, r{};
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) pg[i * k + j] = A.add(pg[i * k + j], A.mul(p[i * k + l], g[l * k + j]));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) r[i * k + j] = A.add(r[i * k + j], A.mul(pg[i * k + l], A.bar(p[j * k + l])));
    if (k == 1) return std::array<int, 4>{r[0], 0, 0, 0};
    return r;
  };
  std::vector<std::array<int, 4>> moves;
  for (int u : A.units()) moves.push_back(k == 1 ? std::array<int, 4>{u, 0, 0, 0} : std::array<int, 4>{u, 0, 0, A.one()});
  if (k == 2) {
    for (int a = 1; a < q; ++a) {
      moves.push_back({A.one(), a, 0, A.one()});
      moves.push_back({A.one(), 0, a, A.one()});
    }
    moves.push_back({0, A.one(), A.one(), 0});
  }
  DisjointSets ds(out.grams.size());
  for (std::size_t i = 0; i < out.grams.size(); ++i)
    for (const auto& p : moves) ds.unite(i, index_of(transform(p, out.grams[i])));
  out.orbit.resize(out.grams.size());
  for (std::size_t i = 0; i < out.grams.size(); ++i) out.orbit[i] = ds.find(i);
  return out;
}

inline HermitianSpace to_hermitian(const CyclicAlgebra& E, const SmallAlgebra& A, int sign, int k,
                                   const SmallGram& g) {
  HermitianSpace h{E, sign, {k, std::vector<AlgebraElement>(k * k, E.zero())}};
  for (int i = 0; i < k * k; ++i) h.gram.a[i] = E.from_coords(A.digits(g[i]));
  return h;
}

struct DecisionTableResult {
  std::size_t unimodular_grams = 0;
  std::size_t orbits = 0;
  std::size_t discrepancies = 0;
};

/// Residue-class verdicts against GL_k(E) orbits on unimodular grams: two
/// grams must share an orbit exactly when their classes agree.
inline DecisionTableResult hermitian_decision_table(const CyclicAlgebra& E, int k, int sign) {
  SmallAlgebra A(E.modulus());
  HermitianOrbits orb = hermitian_orbits(A, k, sign);
  std::map<std::size_t, HermitianClass> class_of_orbit;
  std::map<HermitianClass, std::size_t> orbit_of_class;
  DecisionTableResult r;
  for (std::size_t i = 0; i < orb.grams.size(); ++i) {
    HermitianSpace h = to_hermitian(E, A, sign, k, orb.grams[i]);
    if (!h.is_unimodular()) continue;
    ++r.unimodular_grams;
    HermitianClass c = residue_class(h);
    auto [a, fresh_orbit] = class_of_orbit.emplace(orb.orbit[i], c);
    if (!(a->second == c)) ++r.discrepancies;
    auto [b, fresh_class] = orbit_of_class.emplace(c, orb.orbit[i]);
    if (b->second != orb.orbit[i]) ++r.discrepancies;
  }
  r.orbits = class_of_orbit.size();
  return r;
}

// ---------------------------------------------------------------------------
// Semisimple z-data for real groups, enumerated as ordered block sequences
// and canonicalized afterwards.

struct RealBlocks {
  std::vector<std::pair<int, int>> elliptic;  // hermitian (a, b)
  std::vector<std::pair<int, int>> pairs;     // (l, e)
  std::pair<int, int> plus{0, 0}, minus{0, 0};
  auto key() const { return std::tie(elliptic, pairs, plus, minus); }
  friend bool operator<(const RealBlocks& x, const RealBlocks& y) { return x.key() < y.key(); }
};

inline RealBlocks canonical(RealBlocks d, bool symplectic) {
  if (symplectic)
    for (auto& [a, b] : d.elliptic)
      if (a < b) std::swap(a, b);
  std::sort(d.elliptic.begin(), d.elliptic.end());
  std::sort(d.pairs.begin(), d.pairs.end());
  if (std::tie(d.minus.first, d.minus.second) > std::tie(d.plus.first, d.plus.second)) std::swap(d.plus, d.minus);
  return d;
}

/// Count over O(p, q) (symplectic = false) or Sp(2n) with p = 2n, q = 0.
inline std::size_t real_zclass_count(bool symplectic, int p, int q) {
  std::set<RealBlocks> seen;
  RealBlocks cur;
  // Remaining (P, Q) for O; for Sp, P is the remaining dimension and Q = 0.
  auto rec = [&](auto&& self, int P, int Q) -> void {
    // Finish with the ±1 eigenspaces.
    if (symplectic) {
      for (int a = 0; a <= P; a += 2) {
        RealBlocks d = cur;
        if ((P - a) % 2) continue;
        d.plus = {a, 0};
        d.minus = {P - a, 0};
        seen.insert(canonical(d, true));
      }
    } else {
      for (int a = 0; a <= P; ++a)
        for (int b = 0; b <= Q; ++b) {
          RealBlocks d = cur;
          d.plus = {a, b};
          d.minus = {P - a, Q - b};
          seen.insert(canonical(d, false));
        }
    }
    // Or add another block in any order.
    for (int a = 0; 2 * a <= P; ++a)
      for (int b = 0; (symplectic ? 2 * (a + b) <= P : 2 * b <= Q); ++b) {
        if (a + b == 0) continue;
        cur.elliptic.push_back({a, b});
        if (symplectic)
          self(self, P - 2 * (a + b), Q);
        else
          self(self, P - 2 * a, Q - 2 * b);
        cur.elliptic.pop_back();
      }
    for (int l = 1; l <= 2; ++l)
      for (int e = 1; symplectic ? 2 * l * e <= P : (l * e <= P && l * e <= Q); ++e) {
        cur.pairs.push_back({l, e});
        if (symplectic)
          self(self, P - 2 * l * e, Q);
        else
          self(self, P - l * e, Q - l * e);
        cur.pairs.pop_back();
      }
  };
  rec(rec, p, q);
  return seen.size();
}

}  // namespace oracle
