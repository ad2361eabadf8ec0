#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "isoclass/classify.hpp"

namespace isoclass {

inline constexpr std::size_t kCensusMaxDim = 6;
inline constexpr int kRealCensusMaxDim = 10;

enum class CrossCheck { Passed, Skipped, Failed };

inline const char* crosscheck_name(CrossCheck c) {
  switch (c) {
    case CrossCheck::Passed: return "passed";
    case CrossCheck::Skipped: return "skipped";
    case CrossCheck::Failed: return "failed";
  }
  return "?";
}

struct CensusParams {
  std::size_t n = 1;
  residue_t p = 3;
  Kind kind = Kind::Symmetric;
  DiscClass disc = DiscClass::Square;  // symmetric only: class of det(gram)
};

struct CensusOptions {
  bool crosscheck = true;
  std::uint64_t crosscheck_bound = kGroupOrderBound;  // estimated group order
  unsigned jobs = 1;
  const GroupTable* table = nullptr;  // reused if it is the census space's group
};

inline void check_census_params(const CensusParams& c) {
  require(c.n >= 1 && c.n <= kCensusMaxDim, ErrorCode::OutOfRange, "census dimension must lie in [1, 6]");
  require(c.p == 3 || c.p == 5 || c.p == 7, ErrorCode::OutOfRange, "census prime must be 3, 5 or 7");
  require(c.kind == Kind::Symmetric || c.n % 2 == 0, ErrorCode::OutOfRange, "skew spaces have even dimension");
}

/// I_n, or diag(1, .., 1, delta) for the nonsquare class; the standard
/// space for skew kind.
inline BilinearSpace census_space(const CensusParams& c) {
  PrimeField F(c.p);
  if (c.kind == Kind::Skew) return standard_space(c.n / 2, Kind::Skew, F);
  Matrix g = Matrix::identity(c.n, F);
  if (c.disc == DiscClass::NonSquare) g(c.n - 1, c.n - 1) = F.nonsquare();
  return BilinearSpace(Kind::Symmetric, g);
}

template <class Item>
struct CensusReport {
  CensusParams params;
  std::string what;  // zclass, conjugacy or unipotent
  std::vector<Item> items;
  CrossCheck crosscheck = CrossCheck::Skipped;
  std::optional<std::size_t> brute_force_count;
  std::size_t count() const { return items.size(); }
};

using ZClassCensus = CensusReport<ZClassInvariant>;
using ConjugacyCensus = CensusReport<ConjugacyInvariant>;

namespace detail {

struct Model {
  Matrix gram;
  Matrix t;
};

// E^k with B(u, v) = h(H(u, v)) in the power basis t^a e_i, and T acting as
// multiplication by t (by -t when negate).
inline Model hermitian_model(const HermitianSpace& hs, bool negate) {
  const CyclicAlgebra& E = hs.algebra;
  const int D = E.dim(), k = hs.rank();
  const PrimeField& F = E.field();
  const std::size_t n = static_cast<std::size_t>(D * k);
  std::vector<AlgebraElement> powers{E.one()};
  for (int a = 1; a < D; ++a) powers.push_back(E.mul(powers.back(), E.t()));
  Matrix g(n, n, F), t(n, n, F);
  Matrix mt = E.regular_rep(E.t());
  if (negate) mt = -mt;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
          g(i * D + a, j * D + b) = E.apply_h(E.mul(E.mul(powers[a], hs.gram(i, j)), E.bar(powers[b])));
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) t(i * D + a, i * D + b) = mt(a, b);
  return {g, t};
}

inline Model direct_sum(const PrimeField& F, const std::vector<Model>& parts) {
  std::size_t n = 0;
  for (const auto& m : parts) n += m.gram.rows();
  Model out{Matrix(n, n, F), Matrix(n, n, F)};
  std::size_t off = 0;
  for (const auto& m : parts) {
    for (std::size_t i = 0; i < m.gram.rows(); ++i)
      for (std::size_t j = 0; j < m.gram.rows(); ++j) {
        out.gram(off + i, off + j) = m.gram(i, j);
        out.t(off + i, off + j) = m.t(i, j);
      }
    off += m.gram.rows();
  }
  return out;
}

// One way a single prime can occur as a primary component.
struct AtomOption {
  std::vector<InvariantBlock> blocks;
  ZComponent z;
  std::optional<DiscClass> disc;
  Model model;
  int dim = 0;
};

struct Atom {
  FactorTag tag = FactorTag::SelfDual;
  Polynomial prime;
  std::optional<Polynomial> partner;
  std::vector<AtomOption> options;
};

// Monic polynomials of degree m with nonzero constant term.
inline std::vector<Polynomial> monic_polynomials(const PrimeField& F, int m) {
  std::vector<Polynomial> out;
  Vector c(m + 1, 0);
  c[m] = 1;
  c[0] = 1;
  for (;;) {
    out.emplace_back(F, c);
    int pos = 0;
    while (pos < m && ++c[pos] == F.p()) {
      c[pos] = pos == 0 ? 1 : 0;
      ++pos;
    }
    if (pos == m) break;
  }
  return out;
}

// Palindromic monic polynomials of even degree m with constant term 1.
inline std::vector<Polynomial> palindromic_polynomials(const PrimeField& F, int m) {
  std::vector<Polynomial> out;
  const int half = m / 2;
  Vector free(half, 0);  // coefficients 1..half
  for (;;) {
    Vector c(m + 1, 0);
    c[0] = c[m] = 1;
    for (int j = 1; j <= half; ++j) c[j] = c[m - j] = free[j - 1];
    out.emplace_back(F, c);
    int pos = 0;
    while (pos < half && ++free[pos] == F.p()) free[pos++] = 0;
    if (pos == half) break;
  }
  return out;
}

inline std::vector<Atom> census_primes(const PrimeField& F, std::size_t n) {
  std::vector<Atom> out;
  out.push_back({FactorTag::PlusOne, Polynomial::linear(F, 1), std::nullopt, {}});
  out.push_back({FactorTag::MinusOne, Polynomial::linear(F, F.p() - 1), std::nullopt, {}});
  for (int m = 1; 2 * m <= static_cast<int>(n); ++m)
    for (const auto& q : monic_polynomials(F, m)) {
      if (!is_irreducible(q)) continue;
      FactorClass fc = classify_factor(q);
      if (fc.tag == FactorTag::DualPairLow) out.push_back({fc.tag, q, fc.partner, {}});
    }
  for (int m = 2; m <= static_cast<int>(n); m += 2)
    for (const auto& q : palindromic_polynomials(F, m)) {
      if (q.eval(1) == 0 || q.eval(F.p() - 1) == 0 || !is_irreducible(q)) continue;
      if (classify_factor(q).tag == FactorTag::SelfDual) out.push_back({FactorTag::SelfDual, q, std::nullopt, {}});
    }
  return out;
}

// Shapes {(d_i, k_i)} with distinct d_i and weight * sum d_i k_i <= budget.
inline void block_shapes(int weight, int budget, int min_d, std::vector<std::pair<int, int>>& cur,
                         std::vector<std::vector<std::pair<int, int>>>& out) {
  if (!cur.empty()) out.push_back(cur);
  for (int d = min_d; weight * d <= budget; ++d)
    for (int k = 1; weight * d * k <= budget; ++k) {
      cur.emplace_back(d, k);
      block_shapes(weight, budget - weight * d * k, d + 1, cur, out);
      cur.pop_back();
    }
}

inline std::vector<HermitianClass> candidate_classes(const Atom& a, int k) {
  switch (a.tag) {
    case FactorTag::SelfDual: return {{HermTag::HermRank, k, std::nullopt}};
    case FactorTag::PlusOne:
    case FactorTag::MinusOne:
      return {{HermTag::SymDisc, k, DiscClass::Square}, {HermTag::SymDisc, k, DiscClass::NonSquare},
              {HermTag::AltRank, k, std::nullopt}};
    default: return {{HermTag::PairRank, k, std::nullopt}};
  }
}

// Fills a.options by realizing every shape and class assignment as an
// actual isometry and reading its invariants back through the classifier.
inline void realize_atom(Atom& a, Kind kind, int budget) {
  const PrimeField& F = a.prime.field();
  const bool pair = a.partner.has_value();
  const bool negate = a.tag == FactorTag::MinusOne;
  const Polynomial module_prime = negate ? Polynomial::linear(F, 1) : a.prime;
  const int weight = a.prime.degree() * (pair ? 2 : 1);
  std::vector<std::vector<std::pair<int, int>>> shapes;
  std::vector<std::pair<int, int>> cur;
  block_shapes(weight, budget, 1, cur, shapes);
  for (const auto& shape : shapes) {
    // Per block: the realizable (class, model) choices.
    std::vector<std::vector<std::pair<HermitianClass, Model>>> choices;
    for (auto [d, k] : shape) {
      CyclicAlgebra E = pair ? CyclicAlgebra::pair(a.prime, *a.partner, d) : CyclicAlgebra::simple(module_prime, d);
      const int sign = kind_sign(kind) * E.c();
      std::vector<std::pair<HermitianClass, Model>> opts;
      for (const auto& cls : candidate_classes(a, k)) {
        HermitianSpace hs{E, sign, canonical_gram(E, sign, cls)};
        if (!hs.is_hermitian() || !hs.is_unimodular() || residue_class(hs) != cls) continue;
        opts.emplace_back(cls, hermitian_model(hs, negate));
      }
      choices.push_back(std::move(opts));
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) continue;
    for (;;) {
      std::vector<Model> parts;
      std::vector<InvariantBlock> blocks;
      for (std::size_t b = 0; b < choices.size(); ++b) {
        const auto& [cls, model] = choices[b][idx[b]];
        parts.push_back(model);
        blocks.push_back({a.tag, a.prime, shape[b].first, shape[b].second, cls});
      }
      Model m = direct_sum(F, parts);
      BilinearSpace space(kind, m.gram);
      Analysis an = analyze(Isometry(m.t, space));
      require(an.components.size() == 1 && conjugacy_invariant(an).blocks == blocks, ErrorCode::Internal,
              "census model does not realize its intended data");
      std::optional<DiscClass> disc;
      if (kind == Kind::Symmetric) disc = disc_class_of(F, det(m.gram));
      a.options.push_back({blocks, zclass_component(an.components[0]), disc, m, static_cast<int>(m.gram.rows())});
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == choices[pos].size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }
}

// Every combination of distinct primes with one option each filling
// dimension n with the right discriminant; calls visit(chosen options).
template <class Visit>
void combine_atoms(const std::vector<Atom>& atoms, const CensusParams& c, Visit&& visit) {
  std::vector<const AtomOption*> chosen;
  auto rec = [&](auto&& self, std::size_t i, int left, DiscClass disc) -> void {
    if (left == 0) {
      if (c.kind == Kind::Skew || disc == c.disc) visit(chosen);
      return;
    }
    if (i == atoms.size()) return;
    self(self, i + 1, left, disc);
    for (const auto& o : atoms[i].options) {
      if (o.dim > left) continue;
      chosen.push_back(&o);
      self(self, i + 1, left - o.dim, o.disc ? disc * *o.disc : disc);
      chosen.pop_back();
    }
  };
  rec(rec, 0, static_cast<int>(c.n), DiscClass::Square);
}

inline std::vector<Atom> census_atoms(const CensusParams& c, bool unipotent_only) {
  PrimeField F(c.p);
  std::vector<Atom> atoms = unipotent_only ? std::vector<Atom>{{FactorTag::PlusOne, Polynomial::linear(F, 1), std::nullopt, {}}}
                                           : census_primes(F, c.n);
  for (auto& a : atoms) realize_atom(a, c.kind, static_cast<int>(c.n));
  return atoms;
}

inline ConjugacyInvariant combined_invariant(const CensusParams& c, const std::vector<const AtomOption*>& chosen) {
  ConjugacyInvariant inv{c.p, c.n, c.kind, {}};
  for (const auto* o : chosen) inv.blocks.insert(inv.blocks.end(), o->blocks.begin(), o->blocks.end());
  std::sort(inv.blocks.begin(), inv.blocks.end());
  return inv;
}

inline bool crosscheck_enabled(const CensusParams& c, const CensusOptions& opt) {
  return opt.crosscheck && estimated_group_order(census_space(c)) <= static_cast<double>(opt.crosscheck_bound);
}

inline const GroupTable& census_table(const BilinearSpace& s, const CensusOptions& opt, std::optional<GroupTable>& own) {
  if (opt.table && opt.table->space() == s) return *opt.table;
  own = enumerate_group(s);
  return *own;
}

inline bool is_unipotent(const Matrix& m) {
  Matrix u = m - Matrix::identity(m.rows(), m.field());
  return matrix_power(u, m.rows()).is_zero();
}

}  // namespace detail

/// All z-class invariants realized in I(V, B) for the census space.
/// Cross-checked against the brute-force z-partition, as sets, when the
/// group is enumerable.
inline ZClassCensus zclass_census_fp(const CensusParams& c, const CensusOptions& opt = {}) {
  check_census_params(c);
  auto atoms = detail::census_atoms(c, false);
  std::set<ZClassInvariant> found;
  detail::combine_atoms(atoms, c, [&](const std::vector<const detail::AtomOption*>& chosen) {
    std::vector<ZComponent> comps;
    for (const auto* o : chosen) comps.push_back(o->z);
    found.insert(make_zclass_invariant(c.p, c.n, c.kind, std::move(comps)));
  });
  ZClassCensus out{c, "zclass", {found.begin(), found.end()}, CrossCheck::Skipped, std::nullopt};
  if (detail::crosscheck_enabled(c, opt)) {
    BilinearSpace s = census_space(c);
    std::optional<GroupTable> own;
    const GroupTable& g = detail::census_table(s, opt, own);
    ClassPartition conj = conjugacy_partition(g);
    ClassPartition z = zclass_partition(g, conj, opt.jobs);
    std::set<ZClassInvariant> seen;
    std::vector<char> done(conj.count, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (done[conj.class_of[i]]) continue;
      done[conj.class_of[i]] = 1;
      seen.insert(zclass_invariant(Isometry::unchecked(g[i], s)));
    }
    out.brute_force_count = z.count;
    out.crosscheck = seen == found && z.count == found.size() ? CrossCheck::Passed : CrossCheck::Failed;
  }
  return out;
}

/// Conjugacy invariants realized by models. When the group is enumerable
/// they are listed from the brute-force classes instead, and the check
/// passes when the invariant partition equals the brute-force one and the
/// invariants equal the modeled ones.
inline ConjugacyCensus conjugacy_census_fp(const CensusParams& c, const CensusOptions& opt = {}) {
  check_census_params(c);
  std::set<ConjugacyInvariant> modeled;
  auto atoms = detail::census_atoms(c, false);
  detail::combine_atoms(atoms, c, [&](const auto& chosen) { modeled.insert(detail::combined_invariant(c, chosen)); });
  if (!detail::crosscheck_enabled(c, opt))
    return {c, "conjugacy", {modeled.begin(), modeled.end()}, CrossCheck::Skipped, std::nullopt};
  BilinearSpace s = census_space(c);
  std::optional<GroupTable> own;
  const GroupTable& g = detail::census_table(s, opt, own);
  ClassPartition conj = conjugacy_partition(g);
  std::map<ConjugacyInvariant, std::size_t> inv_class;  // invariant -> brute-force class
  bool identical = true;
  for (std::size_t i = 0; i < g.size() && identical; ++i) {
    auto [it, fresh] = inv_class.emplace(conjugacy_invariant(Isometry::unchecked(g[i], s)), conj.class_of[i]);
    if (!fresh && it->second != conj.class_of[i]) identical = false;
  }
  identical = identical && inv_class.size() == conj.count;
  ConjugacyCensus out{c, "conjugacy", {}, CrossCheck::Failed, conj.count};
  for (const auto& [inv, cls] : inv_class) out.items.push_back(inv);
  if (identical && std::equal(modeled.begin(), modeled.end(), out.items.begin(), out.items.end()))
    out.crosscheck = CrossCheck::Passed;
  return out;
}

/// Conjugacy invariants of unipotent isometries (single prime x - 1).
inline ConjugacyCensus unipotent_census_fp(const CensusParams& c, const CensusOptions& opt = {}) {
  check_census_params(c);
  auto atoms = detail::census_atoms(c, true);
  std::set<ConjugacyInvariant> found;
  detail::combine_atoms(atoms, c, [&](const auto& chosen) { found.insert(detail::combined_invariant(c, chosen)); });
  ConjugacyCensus out{c, "unipotent", {found.begin(), found.end()}, CrossCheck::Skipped, std::nullopt};
  if (detail::crosscheck_enabled(c, opt)) {
    BilinearSpace s = census_space(c);
    std::optional<GroupTable> own;
    const GroupTable& g = detail::census_table(s, opt, own);
    ClassPartition conj = conjugacy_partition(g);
    std::set<std::size_t> classes;
    std::set<ConjugacyInvariant> seen;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!detail::is_unipotent(g[i]) || !classes.insert(conj.class_of[i]).second) continue;
      seen.insert(conjugacy_invariant(Isometry::unchecked(g[i], s)));
    }
    out.brute_force_count = classes.size();
    out.crosscheck = seen == found && classes.size() == found.size() ? CrossCheck::Passed : CrossCheck::Failed;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Semisimple z-class data for real orthogonal and symplectic groups.

struct RealSignature {
  int a = 0, b = 0;
  int dim() const { return a + b; }
  friend bool operator==(const RealSignature&, const RealSignature&) = default;
  friend auto operator<=>(const RealSignature&, const RealSignature&) = default;
};

/// Eigenvalues off the unit circle: l = 1 for a real pair r, 1/r and l = 2
/// for a complex quadruple; the centralizer factor is GL_e over R or C.
struct RealPairBlock {
  int l = 1;
  int e = 1;
  friend bool operator==(const RealPairBlock&, const RealPairBlock&) = default;
  friend auto operator<=>(const RealPairBlock&, const RealPairBlock&) = default;
};

/// One semisimple z-class of O(p, q) or Sp(2n, R). Elliptic entries are
/// hermitian signatures over C, one per distinct conjugate pair of unit
/// eigenvalues; for Sp they are stored with a >= b since complex
/// conjugation swaps the signature of a skew-hermitian form. The +1 and
/// -1 eigenspaces carry a signature for O and (dim, 0) for Sp.
struct RealZDatum {
  std::vector<RealSignature> elliptic;
  std::vector<RealPairBlock> pairs;
  std::optional<RealSignature> plus, minus;
  friend bool operator==(const RealZDatum&, const RealZDatum&) = default;
  friend auto operator<=>(const RealZDatum&, const RealZDatum&) = default;
};

struct RealCensusParams {
  bool symplectic = false;
  int p = 1, q = 0;  // O(p, q)
  int dim = 2;       // Sp(dim)
};

struct RealCensus {
  RealCensusParams params;
  std::vector<RealZDatum> items;
  std::size_t count() const { return items.size(); }
};

/// T -> -T swaps the eigenspaces without changing the centralizer; the
/// representative with the larger +1 part is kept.
inline RealZDatum normalize_real_datum(RealZDatum d) {
  std::sort(d.elliptic.begin(), d.elliptic.end());
  std::sort(d.pairs.begin(), d.pairs.end());
  if (std::tie(d.plus, d.minus) < std::tie(d.minus, d.plus)) std::swap(d.plus, d.minus);
  return d;
}

namespace detail {

// Multisets drawn from `items` (index non-decreasing) whose weights sum to
// exactly `target`; weight(item) must be positive.
template <class T, class Weight, class Visit>
void weighted_multisets(const std::vector<T>& items, Weight weight, int target, Visit&& visit) {
  std::vector<T> cur;
  auto rec = [&](auto&& self, std::size_t from, int left) -> void {
    if (left == 0) {
      visit(cur);
      return;
    }
    for (std::size_t i = from; i < items.size(); ++i) {
      int w = weight(items[i]);
      if (w > left) continue;
      cur.push_back(items[i]);
      self(self, i, left - w);
      cur.pop_back();
    }
  };
  rec(rec, 0, target);
}

}  // namespace detail

inline void check_real_params(const RealCensusParams& r) {
  if (r.symplectic) {
    require(r.dim >= 2 && r.dim % 2 == 0 && r.dim <= kRealCensusMaxDim, ErrorCode::OutOfRange,
            "symplectic dimension must be even and at most 10");
  } else {
    require(r.p >= 0 && r.q >= 0 && r.p + r.q >= 1 && r.p + r.q <= kRealCensusMaxDim, ErrorCode::OutOfRange,
            "signature must satisfy 1 <= p + q <= 10");
  }
}

/// Hyperbolic part, then elliptic part, then the ±1 eigenspaces with the
/// remaining dimension.
inline RealCensus zclass_census_real(const RealCensusParams& r) {
  using detail::weighted_multisets;
  check_real_params(r);
  std::set<RealZDatum> found;
  const int total = r.symplectic ? r.dim : r.p + r.q;
  std::vector<RealPairBlock> pair_items;
  for (int l = 1; l <= 2; ++l)
    for (int e = 1; 2 * l * e <= total; ++e) pair_items.push_back({l, e});
  std::vector<RealSignature> ell_items;
  for (int a = 0; 2 * a <= total; ++a)
    for (int b = 0; 2 * (a + b) <= total; ++b)
      if (a + b > 0 && (!r.symplectic || a >= b)) ell_items.push_back({a, b});

  for (int hw = 0; 2 * hw <= total; ++hw) {
    if (!r.symplectic && (hw > r.p || hw > r.q)) break;
    weighted_multisets(pair_items, [](const RealPairBlock& x) { return x.l * x.e; }, hw, [&](const auto& pairs) {
      if (r.symplectic) {
        for (int ew = 0; 2 * hw + 2 * ew <= total; ++ew)
          weighted_multisets(ell_items, [](const RealSignature& s) { return s.dim(); }, ew, [&](const auto& ell) {
            const int rest = total - 2 * hw - 2 * ew;
            for (int plus = 0; plus <= rest; plus += 2) {
              RealZDatum d{ell, pairs, std::nullopt, std::nullopt};
              if (plus) d.plus = RealSignature{plus, 0};
              if (rest - plus) d.minus = RealSignature{rest - plus, 0};
              found.insert(normalize_real_datum(d));
            }
          });
        return;
      }
      const int P = r.p - hw, Q = r.q - hw;
      for (int ea = 0; 2 * ea <= P; ++ea)
        for (int eb = 0; 2 * eb <= Q; ++eb) {
          // Elliptic multisets with total signature (ea, eb).
          weighted_multisets(ell_items, [](const RealSignature& s) { return s.dim(); }, ea + eb, [&](const auto& ell) {
            int sa = 0;
            for (const auto& s : ell) sa += s.a;
            if (sa != ea) return;
            const int ra = P - 2 * ea, rb = Q - 2 * eb;
            for (int pa = 0; pa <= ra; ++pa)
              for (int pb = 0; pb <= rb; ++pb) {
                RealZDatum d{ell, pairs, std::nullopt, std::nullopt};
                if (pa + pb) d.plus = RealSignature{pa, pb};
                if (ra - pa + rb - pb) d.minus = RealSignature{ra - pa, rb - pb};
                found.insert(normalize_real_datum(d));
              }
          });
        }
    });
  }
  return {r, {found.begin(), found.end()}};
}

}  // namespace isoclass
