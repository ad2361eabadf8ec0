#include <gtest/gtest.h>

#include <random>

#include "isoclass/classify.hpp"
#include "oracles.hpp"

using namespace isoclass;

namespace {

Polynomial poly(residue_t p, std::vector<long long> c) { return Polynomial::from_signed(PrimeField(p), c); }

std::vector<CyclicAlgebra> small_algebras() {
  std::vector<CyclicAlgebra> out;
  for (int d = 1; d <= 3; ++d) {
    out.push_back(CyclicAlgebra::simple(poly(3, {-1, 1}), d));
    out.push_back(CyclicAlgebra::simple(poly(5, {-1, 1}), d));
    out.push_back(CyclicAlgebra::simple(poly(5, {1, 1}), d));
  }
  out.push_back(CyclicAlgebra::simple(poly(3, {1, 0, 1}), 1));
  out.push_back(CyclicAlgebra::simple(poly(3, {1, 0, 1}), 2));
  out.push_back(CyclicAlgebra::simple(poly(7, {1, 0, 1}), 1));
  out.push_back(CyclicAlgebra::pair(poly(5, {-2, 1}), poly(5, {-3, 1}), 1));
  out.push_back(CyclicAlgebra::pair(poly(5, {-2, 1}), poly(5, {-3, 1}), 2));
  return out;
}

std::vector<AlgebraElement> all_elements(const CyclicAlgebra& E) {
  oracle::SmallAlgebra A(E.modulus());
  std::vector<AlgebraElement> out;
  for (int a = 0; a < A.size(); ++a) out.push_back(E.from_coords(A.digits(a)));
  return out;
}

bool valid_functional(const CyclicAlgebra& E, const Vector& h) {
  const PrimeField& F = E.field();
  Functional f{h};
  std::vector<AlgebraElement> powers;
  AlgebraElement x = E.one();
  for (int k = 0; k < E.dim(); ++k) {
    powers.push_back(x);
    x = E.mul(x, E.t());
  }
  for (const auto& e : powers) {
    residue_t lhs = f(F, E.bar(e));
    residue_t rhs = E.c() == 1 ? f(F, e) : F.neg(f(F, e));
    if (lhs != rhs) return false;
  }
  Matrix pairing(E.dim(), E.dim(), F);
  for (int l = 0; l < E.dim(); ++l)
    for (int b = 0; b < E.dim(); ++b) pairing(l, b) = f(F, E.mul(powers[l], powers[b]));
  return det(pairing) != 0;
}

}  // namespace

TEST(CyclicAlgebra, BarIsAnInvolutiveAutomorphism) {
  for (const auto& E : small_algebras()) {
    auto els = all_elements(E);
    EXPECT_TRUE(E.mul(E.t(), E.bar(E.t())) == E.one());
    for (std::size_t i = 0; i < els.size(); i += 3) {
      const auto& a = els[i];
      EXPECT_EQ(E.bar(E.bar(a)), a);
      const auto& b = els[(i * 7 + 1) % els.size()];
      EXPECT_EQ(E.bar(E.mul(a, b)), E.mul(E.bar(a), E.bar(b)));
    }
  }
}

TEST(CyclicAlgebra, SignConstant) {
  EXPECT_EQ(CyclicAlgebra::simple(poly(5, {-1, 1}), 1).c(), 1);
  EXPECT_EQ(CyclicAlgebra::simple(poly(5, {-1, 1}), 2).c(), -1);
  EXPECT_EQ(CyclicAlgebra::simple(poly(5, {-1, 1}), 3).c(), 1);
  EXPECT_EQ(CyclicAlgebra::simple(poly(5, {-1, 1}), 4).c(), -1);
  EXPECT_EQ(CyclicAlgebra::simple(poly(5, {1, 1}), 2).c(), -1);
  EXPECT_EQ(CyclicAlgebra::simple(poly(5, {1, 1}), 3).c(), 1);
  EXPECT_EQ(CyclicAlgebra::simple(poly(3, {1, 0, 1}), 2).c(), 1);
  EXPECT_EQ(CyclicAlgebra::pair(poly(5, {-2, 1}), poly(5, {-3, 1}), 2).c(), 1);
}

TEST(CyclicAlgebra, FunctionalIsFirstValidInLexOrder) {
  for (const auto& E : small_algebras()) {
    if (E.dim() > 4) continue;
    const Vector& chosen = E.h().coeffs;
    EXPECT_TRUE(valid_functional(E, chosen));
    // Walk functionals with coordinate 0 most significant.
    oracle::SmallAlgebra A(E.modulus());
    std::optional<Vector> first;
    for (int code = 1; code < A.size() && !first; ++code) {
      Vector h = A.digits(code);
      std::reverse(h.begin(), h.end());
      if (valid_functional(E, h)) first = h;
    }
    ASSERT_TRUE(first.has_value());
    EXPECT_EQ(*first, chosen) << E.modulus().to_string();
  }
}

TEST(CyclicAlgebra, FunctionalIsCachedPerModulus) {
  auto a = CyclicAlgebra::simple(poly(7, {1, 0, 1}), 2);
  auto b = CyclicAlgebra::simple(poly(7, {1, 0, 1}), 2);
  EXPECT_EQ(&a.h(), &b.h());
}

TEST(CyclicAlgebra, ThetaIsSkew) {
  for (const auto& E : small_algebras()) {
    if (E.prime() == Polynomial::linear(E.field(), 1) || E.prime() == Polynomial::linear(E.field(), E.field().p() - 1))
      continue;
    AlgebraElement th = E.theta();
    EXPECT_TRUE(E.is_unit(th));
    EXPECT_EQ(E.bar(th), E.element(-th));
  }
}

TEST(InducedForm, DefiningIdentityOnRandomIsometries) {
  for (residue_t p : {3u, 5u, 7u}) {
    PrimeField F(p);
    std::vector<BilinearSpace> spaces{BilinearSpace(Kind::Symmetric, Matrix::identity(4, F)),
                                      BilinearSpace(Kind::Symmetric, Matrix::diagonal(F, {1, 1, F.nonsquare()})),
                                      standard_space(2, Kind::Skew, F)};
    for (const auto& s : spaces)
      for (std::uint64_t seed = 0; seed < 15; ++seed) {
        Analysis a = analyze(random_isometry(s, seed + 1000 * p));
        for (const auto& c : a.components)
          for (const auto& b : c.blocks) {
            const CyclicAlgebra& E = b.algebra;
            const auto& g = b.block.generators;
            EXPECT_TRUE(b.form.is_hermitian());
            EXPECT_EQ(b.form.sign, s.epsilon() * E.c());
            for (std::size_t i = 0; i < g.size(); ++i)
              for (std::size_t j = 0; j < g.size(); ++j) {
                AlgebraElement tl = E.one();
                for (int l = 0; l < E.dim(); ++l) {
                  residue_t lhs = E.apply_h(E.mul(tl, b.form.gram(static_cast<int>(i), static_cast<int>(j))));
                  residue_t rhs = bilinear(s.gram(), act(tl, c.module_matrix, g[i]), g[j]);
                  EXPECT_EQ(lhs, rhs);
                  tl = E.mul(tl, E.t());
                }
              }
          }
      }
  }
}

TEST(ResidueClass, CanonicalGramRoundTrip) {
  for (const auto& E : small_algebras())
    for (int sign : {1, -1})
      for (int k = 1; k <= 3; ++k) {
        std::vector<HermitianClass> classes;
        if (E.kind() == AlgebraKind::Pair) {
          classes.push_back({HermTag::PairRank, k, std::nullopt});
        } else if (!E.trivial_residue_involution()) {
          classes.push_back({HermTag::HermRank, k, std::nullopt});
        } else if (sign > 0) {
          classes.push_back({HermTag::SymDisc, k, DiscClass::Square});
          classes.push_back({HermTag::SymDisc, k, DiscClass::NonSquare});
        } else if (k % 2 == 0) {
          classes.push_back({HermTag::AltRank, k, std::nullopt});
        }
        for (const auto& cls : classes) {
          HermitianSpace h{E, sign, canonical_gram(E, sign, cls)};
          EXPECT_TRUE(h.is_hermitian());
          EXPECT_TRUE(h.is_unimodular());
          EXPECT_EQ(residue_class(h), cls);
        }
      }
}

TEST(CanonicalBasis, ReachesCanonicalGram) {
  for (residue_t p : {3u, 5u, 7u}) {
    PrimeField F(p);
    std::vector<BilinearSpace> spaces{BilinearSpace(Kind::Symmetric, Matrix::identity(5, F)),
                                      standard_space(2, Kind::Skew, F), standard_space(3, Kind::Symmetric, F)};
    for (const auto& s : spaces)
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Analysis a = analyze(random_isometry(s, seed * 17 + p));
        for (const auto& c : a.components)
          for (const auto& b : c.blocks) {
            const CyclicAlgebra& E = b.algebra;
            CanonicalBasis cb = canonical_basis(b.form);
            EMatrix moved = ematrix_mul(E, ematrix_mul(E, ematrix_transpose(cb.p), b.form.gram), ematrix_bar(E, cb.p));
            EXPECT_EQ(moved, canonical_gram(E, b.form.sign, b.cls));
          }
      }
  }
}

TEST(ResidueClass, NonUnimodularThrows) {
  auto E = CyclicAlgebra::simple(poly(5, {-1, 1}), 2);
  HermitianSpace h{E, 1, {1, {E.element(poly(5, {-1, 1}))}}};
  EXPECT_THROW(residue_class(h), Error);
}

TEST(HermitianEquivalence, DecisionTableOnSmallAlgebras) {
  for (const auto& E : small_algebras()) {
    if (E.dim() > 2) continue;
    for (int sign : {1, -1})
      for (int k = 1; k <= 2; ++k) {
        auto r = oracle::hermitian_decision_table(E, k, sign);
        EXPECT_EQ(r.discrepancies, 0u) << E.modulus().to_string() << " k=" << k << " sign=" << sign;
      }
  }
}

TEST(HermitianEquivalence, OrbitContainsOwnClass) {
  auto E = CyclicAlgebra::simple(poly(5, {-1, 1}), 3);
  HermitianSpace h{E, 1, canonical_gram(E, 1, {HermTag::SymDisc, 1, DiscClass::Square})};
  auto orbit = class_orbit(h);
  EXPECT_NE(std::find(orbit.begin(), orbit.end(), residue_class(h)), orbit.end());
  EXPECT_TRUE(hermitian_equivalent(h, h, true));
  EXPECT_TRUE(hermitian_equivalent(h, h, false));
  HermitianSpace g{E, 1, canonical_gram(E, 1, {HermTag::SymDisc, 1, DiscClass::NonSquare})};
  EXPECT_FALSE(hermitian_equivalent(h, g, false));
}
