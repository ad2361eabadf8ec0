#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "isoclass/decomp.hpp"
#include "isoclass/group.hpp"
#include "isoclass/hermitian.hpp"

namespace isoclass {

struct BlockData {
  ElementaryDivisorBlock block;
  CyclicAlgebra algebra;
  HermitianSpace form;
  HermitianClass cls;
};

struct ComponentData {
  PrimaryComponent component;
  Matrix module_matrix;  // sign * T
  std::vector<BlockData> blocks;
};

/// Full pipeline output: primary components, their elementary-divisor
/// blocks, induced hermitian forms and residue classes.
struct Analysis {
  Isometry isometry;
  std::vector<ComponentData> components;
};

inline Analysis analyze(const Isometry& t) {
  Analysis out{t, {}};
  for (auto& c : primary_decomposition(t)) {
    ComponentData cd{c, c.sign() > 0 ? t.matrix() : -t.matrix(), {}};
    for (auto& b : ed_orthogonal_split(c, t)) {
      CyclicAlgebra E = c.algebra(b.d_i);
      HermitianSpace h = induced_hermitian(cd.module_matrix, t.space(), E, b.generators);
      HermitianClass cls = residue_class(h);
      cd.blocks.push_back({std::move(b), E, std::move(h), cls});
    }
    out.components.push_back(std::move(cd));
  }
  return out;
}

struct InvariantBlock {
  FactorTag tag = FactorTag::SelfDual;  // pairs use DualPairLow
  Polynomial prime;
  int d_i = 1;
  int k_i = 1;
  HermitianClass cls;
  friend bool operator==(const InvariantBlock&, const InvariantBlock&) = default;
  friend auto operator<=>(const InvariantBlock&, const InvariantBlock&) = default;
  int dim() const { return prime.degree() * d_i * k_i * (tag == FactorTag::DualPairLow ? 2 : 1); }
};

struct ConjugacyInvariant {
  residue_t p = 3;
  std::size_t n = 0;
  Kind kind = Kind::Symmetric;
  std::vector<InvariantBlock> blocks;
  friend bool operator==(const ConjugacyInvariant&, const ConjugacyInvariant&) = default;
  friend auto operator<=>(const ConjugacyInvariant&, const ConjugacyInvariant&) = default;
};

inline ConjugacyInvariant conjugacy_invariant(const Analysis& a) {
  const Isometry& t = a.isometry;
  ConjugacyInvariant inv{t.field().p(), t.dim(), t.space().kind(), {}};
  for (const auto& c : a.components)
    for (const auto& b : c.blocks)
      inv.blocks.push_back({c.component.factor_class.tag, c.component.prime, b.block.d_i, b.block.k_i, b.cls});
  std::sort(inv.blocks.begin(), inv.blocks.end());
  return inv;
}
inline ConjugacyInvariant conjugacy_invariant(const Isometry& t) { return conjugacy_invariant(analyze(t)); }

struct ZBlock {
  int d_i = 1;
  int k_i = 1;
  HermitianClass cls;
  friend bool operator==(const ZBlock&, const ZBlock&) = default;
  friend auto operator<=>(const ZBlock&, const ZBlock&) = default;
};

struct ZComponent {
  FactorTag tag = FactorTag::SelfDual;
  int degree = 1;  // degree of the prime (of q for pairs)
  std::vector<ZBlock> blocks;
  friend bool operator==(const ZComponent&, const ZComponent&) = default;
  friend auto operator<=>(const ZComponent&, const ZComponent&) = default;
};

struct ZClassInvariant {
  residue_t p = 3;
  std::size_t n = 0;
  Kind kind = Kind::Symmetric;
  std::vector<ZComponent> components;
  friend bool operator==(const ZClassInvariant&, const ZClassInvariant&) = default;
  friend auto operator<=>(const ZClassInvariant&, const ZClassInvariant&) = default;
};

namespace detail {

// Over F_3 the orthogonal group of a hyperbolic plane is {±1} x {±1} on its
// two anisotropic lines, so a semisimple ±1 eigenspace of that shape with no
// opposite eigenspace has the centralizer of a +1 line plus a -1 line.
inline void merge_small_field_planes(residue_t p, Kind kind, std::vector<ZComponent>& comps) {
  if (p != 3 || kind != Kind::Symmetric) return;
  auto find = [&](FactorTag tag) {
    return std::find_if(comps.begin(), comps.end(), [&](const ZComponent& c) { return c.tag == tag; });
  };
  const HermitianClass plane{HermTag::SymDisc, 2, DiscClass::NonSquare};
  for (FactorTag tag : {FactorTag::PlusOne, FactorTag::MinusOne}) {
    FactorTag other = tag == FactorTag::PlusOne ? FactorTag::MinusOne : FactorTag::PlusOne;
    auto it = find(tag);
    if (it == comps.end() || find(other) != comps.end()) continue;
    if (it->blocks != std::vector<ZBlock>{{1, 2, plane}}) continue;
    it->blocks = {{1, 1, {HermTag::SymDisc, 1, DiscClass::Square}}};
    comps.push_back({other, 1, {{1, 1, {HermTag::SymDisc, 1, DiscClass::NonSquare}}}});
    return;
  }
}

}  // namespace detail

/// Sorts components and applies the +1/-1 swap normalization (the smaller
/// of the two sorted lists is kept).
inline ZClassInvariant make_zclass_invariant(residue_t p, std::size_t n, Kind kind, std::vector<ZComponent> comps) {
  detail::merge_small_field_planes(p, kind, comps);
  std::vector<ZComponent> swapped = comps;
  for (auto& c : swapped) {
    if (c.tag == FactorTag::PlusOne)
      c.tag = FactorTag::MinusOne;
    else if (c.tag == FactorTag::MinusOne)
      c.tag = FactorTag::PlusOne;
  }
  std::sort(comps.begin(), comps.end());
  std::sort(swapped.begin(), swapped.end());
  return {p, n, kind, std::min(comps, swapped)};
}

/// Component datum up to involution-compatible automorphisms of the top
/// algebra, applied to all blocks of the component at once.
inline ZComponent zclass_component(const ComponentData& c) {
  ZComponent z{c.component.factor_class.tag, c.component.prime.degree(), {}};
  for (const auto& b : c.blocks) z.blocks.push_back({b.block.d_i, b.block.k_i, b.cls});
  bool has_disc = false;
  for (const auto& b : c.blocks) has_disc |= b.cls.tag == HermTag::SymDisc;
  if (!has_disc) return z;
  CyclicAlgebra top = c.component.algebra(c.component.d);
  for (const auto& f : top.automorphisms()) {
    std::vector<ZBlock> cand;
    for (const auto& b : c.blocks) {
      HermitianClass cls = b.cls;
      if (cls.tag == HermTag::SymDisc) cls = residue_class(twist(b.form, restrict_automorphism(b.algebra, f)));
      cand.push_back({b.block.d_i, b.block.k_i, cls});
    }
    z.blocks = std::min(z.blocks, cand);
  }
  return z;
}

inline ZClassInvariant zclass_invariant(const Analysis& a) {
  std::vector<ZComponent> comps;
  for (const auto& c : a.components) comps.push_back(zclass_component(c));
  const Isometry& t = a.isometry;
  return make_zclass_invariant(t.field().p(), t.dim(), t.space().kind(), std::move(comps));
}
inline ZClassInvariant zclass_invariant(const Isometry& t) { return zclass_invariant(analyze(t)); }

inline void require_same_space(const Isometry& s, const Isometry& t) {
  require(s.space() == t.space(), ErrorCode::SpaceMismatch, "isometries act on different spaces");
}

inline bool are_conjugate(const Isometry& s, const Isometry& t) {
  require_same_space(s, t);
  return conjugacy_invariant(s) == conjugacy_invariant(t);
}

inline bool same_zclass(const Isometry& s, const Isometry& t) {
  require_same_space(s, t);
  return zclass_invariant(s) == zclass_invariant(t);
}

inline bool is_real(const Isometry& t) { return are_conjugate(t, t.inverse()); }

namespace detail {

// F-basis {A^l g'_i} of a block after the canonical change of generators.
inline std::vector<Vector> canonical_block_basis(const ComponentData& c, const BlockData& b) {
  const CyclicAlgebra& E = b.algebra;
  CanonicalBasis cb = canonical_basis(b.form);
  const int k = b.block.k_i;
  std::vector<Vector> cols;
  for (int i = 0; i < k; ++i) {
    Vector g(c.module_matrix.rows(), 0);
    for (int a = 0; a < k; ++a) g = add(E.field(), g, act(cb.p(a, i), c.module_matrix, b.block.generators[a]));
    for (int l = 0; l < E.dim(); ++l) {
      cols.push_back(g);
      g = c.module_matrix * g;
    }
  }
  return cols;
}

}  // namespace detail

/// C with C S C^{-1} = T assembled block by block from canonical bases, or
/// nothing if that construction does not go through.
inline std::optional<Isometry> canonical_witness(const Isometry& s, const Isometry& t) {
  require_same_space(s, t);
  Analysis as = analyze(s), at = analyze(t);
  require(conjugacy_invariant(as) == conjugacy_invariant(at), ErrorCode::NotConjugate, "isometries are not conjugate");
  const PrimeField& F = s.field();
  const std::size_t n = s.dim();
  std::vector<Vector> xs, xt;
  bool aligned = as.components.size() == at.components.size();
  for (std::size_t ci = 0; aligned && ci < as.components.size(); ++ci) {
    const auto &cs = as.components[ci], &ct = at.components[ci];
    aligned = cs.blocks.size() == ct.blocks.size() && cs.component.prime == ct.component.prime;
    for (std::size_t bi = 0; aligned && bi < cs.blocks.size(); ++bi) {
      auto bs = detail::canonical_block_basis(cs, cs.blocks[bi]);
      auto bt = detail::canonical_block_basis(ct, ct.blocks[bi]);
      xs.insert(xs.end(), bs.begin(), bs.end());
      xt.insert(xt.end(), bt.begin(), bt.end());
    }
  }
  if (!aligned || xs.size() != n) return std::nullopt;
  Matrix ms = Matrix::from_columns(F, n, xs), mt = Matrix::from_columns(F, n, xt);
  auto inv = try_inverse(ms);
  if (!inv) return std::nullopt;
  Matrix c = mt * *inv;
  if (!check_isometry(c, s.space()) || c * s.matrix() != t.matrix() * c) return std::nullopt;
  return Isometry(c, s.space());
}

/// canonical_witness, falling back to a search of `table`, or of the
/// enumerated group when it is small enough.
inline Isometry conjugating_witness(const Isometry& s, const Isometry& t, const GroupTable* table = nullptr) {
  if (auto c = canonical_witness(s, t)) return *c;
  std::optional<GroupTable> own;
  if (!table && estimated_group_order(s.space()) <= static_cast<double>(kGroupOrderBound)) {
    own = enumerate_group(s.space());
    table = &*own;
  }
  if (table) {
    for (const auto& c : table->elements())
      if (c * s.matrix() == t.matrix() * c) return Isometry(c, s.space());
  }
  fail(ErrorCode::WitnessUnavailable, "canonical construction failed and the group is too large to search");
}

struct JordanDecomposition {
  Isometry semisimple, unipotent;
  Polynomial semisimple_poly, unipotent_poly;  // T_s = s(T), T_u = u(T)
};

/// Newton iteration s <- s - f(s) / f'(s) in F[x]/(m_T) on the squarefree
/// part f of m_T, from s = x.
inline JordanDecomposition jordan_decompose(const Isometry& t) {
  const PrimeField& F = t.field();
  Polynomial m = minimal_polynomial(t);
  Polynomial f = squarefree_part(m), fp = f.derivative();
  Polynomial s = Polynomial::x(F) % m;
  for (int it = 0; it < 64; ++it) {
    Polynomial fs = compose_mod(f, s, m);
    if (fs.is_zero()) break;
    s = (s - fs * inverse_mod(compose_mod(fp, s, m), m)) % m;
  }
  require(compose_mod(f, s, m).is_zero(), ErrorCode::Internal, "Jordan iteration did not converge");
  Polynomial u = Polynomial::x(F) * inverse_mod(s, m) % m;
  Matrix ts = evaluate(s, t.matrix()), tu = evaluate(u, t.matrix());
  return {Isometry(ts, t.space()), Isometry(tu, t.space()), s, u};
}

struct CentralizerFactor {
  std::string label;  // unitary, orthogonal, symplectic, general_linear
  FactorTag tag = FactorTag::SelfDual;
  Polynomial prime;
  std::optional<Polynomial> partner;
  int d_i = 1;
  AlgebraKind algebra_kind = AlgebraKind::Simple;
  int rank = 1;
};

struct CentralizerDescription {
  std::vector<CentralizerFactor> factors;
};

inline CentralizerDescription centralizer_description(const Isometry& t) {
  CentralizerDescription out;
  for (const auto& c : analyze(t).components)
    for (const auto& b : c.blocks) {
      std::string label;
      switch (b.cls.tag) {
        case HermTag::HermRank: label = "unitary"; break;
        case HermTag::PairRank: label = "general_linear"; break;
        case HermTag::SymDisc: label = "orthogonal"; break;
        case HermTag::AltRank: label = "symplectic"; break;
      }
      out.factors.push_back({label, c.component.factor_class.tag, c.component.prime, c.component.partner,
                             b.block.d_i, b.algebra.kind(), b.block.k_i});
    }
  return out;
}

}  // namespace isoclass
