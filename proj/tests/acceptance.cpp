// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runtime limits are part of the criteria and are checked.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "isoclass/census.hpp"
#include "isoclass/classify.hpp"
#include "oracles.hpp"

using namespace isoclass;

namespace {

constexpr double kNoLimit = 0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Named {
  std::string name;
  BilinearSpace space;
};

BilinearSpace sym(std::vector<residue_t> d, residue_t p) {
  return BilinearSpace(Kind::Symmetric, Matrix::diagonal(PrimeField(p), d));
}

// Groups named by the conjugacy and z-class oracle criteria, both
// discriminants where the orthogonal group depends on it.
std::vector<Named> oracle_groups() {
  return {
      {"O(2,3)", sym({1, 1}, 3)},       {"O(2,3)'", sym({1, 2}, 3)},
      {"O(2,5)", sym({1, 1}, 5)},       {"O(2,5)'", sym({1, 2}, 5)},
      {"O(3,3)", sym({1, 1, 1}, 3)},    {"O(3,3)'", sym({1, 1, 2}, 3)},
      {"Sp(2,3)", standard_space(1, Kind::Skew, PrimeField(3))},
      {"Sp(2,5)", standard_space(1, Kind::Skew, PrimeField(5))},
  };
}

std::vector<BilinearSpace> random_spaces(residue_t p, std::size_t n, Kind kind) {
  PrimeField F(p);
  if (kind == Kind::Skew) return {standard_space(n / 2, Kind::Skew, F)};
  std::vector<residue_t> d(n, 1);
  std::vector<BilinearSpace> out{BilinearSpace(Kind::Symmetric, Matrix::diagonal(F, d))};
  d.back() = F.nonsquare();
  out.emplace_back(Kind::Symmetric, Matrix::diagonal(F, d));
  return out;
}

// All (n, p, kind) with n <= 6, p in {3, 5, 7}.
template <class Visit>
void for_each_setting(Visit&& visit) {
  for (residue_t p : {3u, 5u, 7u})
    for (std::size_t n = 1; n <= 6; ++n)
      for (Kind kind : {Kind::Symmetric, Kind::Skew}) {
        if (kind == Kind::Skew && n % 2) continue;
        visit(p, n, kind);
      }
}

Polynomial strip_plus_minus_one(Polynomial m) {
  const PrimeField& F = m.field();
  for (const auto& q : {Polynomial::linear(F, 1), Polynomial::linear(F, F.p() - 1)})
    while (q.divides(m)) m = m / q;
  return m;
}

Outcome self_dual_minimal_polynomials() {
  std::size_t checked = 0, failures = 0;
  for_each_setting([&](residue_t p, std::size_t n, Kind kind) {
    auto spaces = random_spaces(p, n, kind);
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      Isometry t = random_isometry(spaces[seed % spaces.size()], seed * 7919 + p * 131 + n);
      Polynomial r = strip_plus_minus_one(minimal_polynomial(t));
      ++checked;
      if (!(dual_poly(r) == r)) ++failures;
    }
  });
  return {failures == 0, std::to_string(checked) + " isometries, " + std::to_string(failures) + " failures"};
}

Outcome induced_form_identity() {
  std::size_t isometries = 0, checks = 0, failures = 0;
  std::vector<std::tuple<residue_t, std::size_t, Kind>> settings;
  for_each_setting([&](residue_t p, std::size_t n, Kind kind) { settings.emplace_back(p, n, kind); });
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto [p, n, kind] = settings[i % settings.size()];
    auto spaces = random_spaces(p, n, kind);
    const BilinearSpace& s = spaces[(i / settings.size()) % spaces.size()];
    Analysis a = analyze(random_isometry(s, 40000 + i));
    ++isometries;
    for (const auto& c : a.components)
      for (const auto& b : c.blocks) {
        const CyclicAlgebra& E = b.algebra;
        const auto& g = b.block.generators;
        for (std::size_t u = 0; u < g.size(); ++u)
          for (std::size_t v = 0; v < g.size(); ++v) {
            AlgebraElement e = E.one();
            for (int l = 0; l < E.dim(); ++l) {
              residue_t lhs = E.apply_h(E.mul(e, b.form.gram(static_cast<int>(u), static_cast<int>(v))));
              residue_t rhs = bilinear(s.gram(), act(e, c.module_matrix, g[u]), g[v]);
              ++checks;
              if (lhs != rhs) ++failures;
              e = E.mul(e, E.t());
            }
          }
      }
  }
  return {failures == 0, std::to_string(isometries) + " isometries, " + std::to_string(checks) + " identities, " +
                             std::to_string(failures) + " failures"};
}

Isometry element(const GroupTable& g, std::size_t i) { return Isometry(g[i], g.space()); }

Outcome conjugacy_oracle() {
  std::ostringstream detail;
  bool pass = true;
  for (const auto& [name, s] : oracle_groups()) {
    GroupTable g = enumerate_group(s);
    auto labels = oracle::conjugacy_labels(g);
    std::vector<ConjugacyInvariant> inv;
    for (std::size_t i = 0; i < g.size(); ++i) inv.push_back(conjugacy_invariant(element(g, i)));
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if ((inv[i] == inv[j]) != (labels[i] == labels[j])) ++mismatches;
    std::size_t classes = 1 + *std::max_element(labels.begin(), labels.end());
    pass &= mismatches == 0;
    detail << name << " |G|=" << g.size() << " classes=" << classes << (mismatches ? " MISMATCH " : "") << "; ";
  }
  return {pass, detail.str()};
}

Outcome sp2f3_class_count() {
  CensusParams c{2, 3, Kind::Skew, DiscClass::Square};
  GroupTable g = enumerate_group(census_space(c));
  auto labels = oracle::conjugacy_labels(g);
  std::size_t bf = 1 + *std::max_element(labels.begin(), labels.end());
  ConjugacyCensus r = conjugacy_census_fp(c);
  return {bf == 7 && r.count() == 7, "brute force " + std::to_string(bf) + ", census " + std::to_string(r.count())};
}

Outcome reality() {
  std::size_t checked = 0, failures = 0;
  std::vector<BilinearSpace> groups{sym({1}, 5),          sym({1, 1}, 3),       sym({1, 2}, 3),
                                    sym({1, 1}, 5),       sym({1, 2}, 5),       sym({1, 1}, 7),
                                    sym({1, 1, 1}, 3),    sym({1, 1, 2}, 3),    sym({1, 1, 1}, 5),
                                    sym({1, 1, 1, 1}, 3), sym({1, 1, 1, 2}, 3), sym({1, 1, 1}, 7)};
  for (const auto& s : groups) {
    GroupTable g = enumerate_group(s);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ++checked;
      if (!is_real(element(g, i))) ++failures;
    }
  }
  std::size_t enumerated = checked;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    residue_t p = std::array<residue_t, 3>{3, 5, 7}[i % 3];
    std::size_t n = 1 + (i / 3) % 6;
    auto spaces = random_spaces(p, n, Kind::Symmetric);
    ++checked;
    if (!is_real(random_isometry(spaces[(i / 18) % 2], 90000 + i))) ++failures;
  }
  return {failures == 0, std::to_string(enumerated) + " enumerated + " + std::to_string(checked - enumerated) +
                             " random, " + std::to_string(failures) + " not real"};
}

Outcome zclass_oracle() {
  std::ostringstream detail;
  bool pass = true;
  for (const auto& [name, s] : oracle_groups()) {
    GroupTable g = enumerate_group(s);
    ClassPartition conj = conjugacy_partition(g);
    ClassPartition zp = zclass_partition(g, conj);
    std::vector<ZClassInvariant> inv;
    for (std::size_t i = 0; i < g.size(); ++i) inv.push_back(zclass_invariant(element(g, i)));
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if ((inv[i] == inv[j]) != (zp.class_of[i] == zp.class_of[j])) ++mismatches;
    // The literal definition (some C with C Z(S) C^-1 = Z(T)) on class
    // representatives, against the library verdict.
    std::vector<std::size_t> rep(conj.count, SIZE_MAX);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (rep[conj.class_of[i]] == SIZE_MAX) rep[conj.class_of[i]] = i;
    for (auto a : rep)
      for (auto b : rep)
        if (same_zclass(element(g, a), element(g, b)) != bf_same_zclass(g[a], g[b], g)) ++mismatches;
    pass &= mismatches == 0;
    detail << name << " z=" << zp.count << (mismatches ? " MISMATCH" : "") << "; ";
  }
  PrimeField F(3);
  BilinearSpace sp = standard_space(1, Kind::Skew, F);
  Isometry u1(Matrix::from_rows(F, {{1, 1}, {0, 1}}), sp), u2(Matrix::from_rows(F, {{1, 2}, {0, 1}}), sp);
  bool transvections = !are_conjugate(u1, u2) && same_zclass(u1, u2);
  pass &= transvections;
  detail << "Sp(2,3) transvections " << (transvections ? "non-conjugate, same z" : "WRONG");
  return {pass, detail.str()};
}

Outcome witnesses() {
  std::size_t pairs = 0, canonical = 0, searched = 0, failures = 0;
  for (const auto& [name, s] : oracle_groups()) {
    GroupTable g = enumerate_group(s);
    auto labels = oracle::conjugacy_labels(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (labels[i] != labels[j]) continue;
        ++pairs;
        Isometry a = element(g, i), b = element(g, j);
        bool from_canonical = canonical_witness(a, b).has_value();
        Isometry c = conjugating_witness(a, b, &g);
        (from_canonical ? canonical : searched)++;
        const Matrix& cm = c.matrix();
        auto ci = try_inverse(cm);
        if (!ci || !(cm * a.matrix() * *ci == b.matrix()) || !(cm.transpose() * s.gram() * cm == s.gram()))
          ++failures;
      }
  }
  return {failures == 0, std::to_string(pairs) + " conjugate pairs (" + std::to_string(canonical) + " canonical, " +
                             std::to_string(searched) + " by search), " + std::to_string(failures) + " failures"};
}

bool jordan_ok(const Isometry& t) {
  JordanDecomposition jd = jordan_decompose(t);
  const Matrix &m = t.matrix(), &ts = jd.semisimple.matrix(), &tu = jd.unipotent.matrix();
  const PrimeField& F = t.field();
  Polynomial ms = minimal_polynomial(ts);
  return ts * tu == m && ts * tu == tu * ts && check_isometry(ts, t.space()) && check_isometry(tu, t.space()) &&
         gcd(ms, ms.derivative()).is_one() &&
         matrix_power(tu - Matrix::identity(t.dim(), F), t.dim()).is_zero() &&
         evaluate(jd.semisimple_poly, m) == ts && evaluate(jd.unipotent_poly, m) == tu;
}

Outcome jordan() {
  std::size_t random_failures = 0, centralizer_failures = 0, elements = 0;
  std::vector<std::tuple<residue_t, std::size_t, Kind>> settings;
  for_each_setting([&](residue_t p, std::size_t n, Kind kind) { settings.emplace_back(p, n, kind); });
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto [p, n, kind] = settings[i % settings.size()];
    auto spaces = random_spaces(p, n, kind);
    if (!jordan_ok(random_isometry(spaces[(i / 7) % spaces.size()], 70000 + i))) ++random_failures;
  }
  std::vector<Named> groups = oracle_groups();
  groups.push_back({"O(4,3)", sym({1, 1, 1, 1}, 3)});
  for (const auto& [name, s] : groups) {
    GroupTable g = enumerate_group(s);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ++elements;
      Isometry t = element(g, i);
      if (!jordan_ok(t)) ++random_failures;
      JordanDecomposition jd = jordan_decompose(t);
      auto z = bf_centralizer(g[i], g), zs = bf_centralizer(jd.semisimple.matrix(), g),
           zu = bf_centralizer(jd.unipotent.matrix(), g);
      std::vector<std::size_t> both;
      std::set_intersection(zs.begin(), zs.end(), zu.begin(), zu.end(), std::back_inserter(both));
      if (z != both) ++centralizer_failures;
    }
  }
  return {random_failures == 0 && centralizer_failures == 0,
          "200 random + " + std::to_string(elements) + " enumerated, " + std::to_string(random_failures) +
              " post-condition failures, " + std::to_string(centralizer_failures) + " centralizer failures"};
}

Outcome censuses() {
  std::ostringstream detail;
  bool pass = true;
  std::size_t fp_runs = 0, crosschecked = 0;
  for (residue_t p : {3u, 5u})
    for (std::size_t n = 1; n <= 4; ++n)
      for (Kind kind : {Kind::Symmetric, Kind::Skew}) {
        if (kind == Kind::Skew && n % 2) continue;
        for (DiscClass disc : {DiscClass::Square, DiscClass::NonSquare}) {
          if (kind == Kind::Skew && disc == DiscClass::NonSquare) continue;
          CensusParams c{n, p, kind, disc};
          BilinearSpace s = census_space(c);
          const bool enumerable = estimated_group_order(s) <= static_cast<double>(kGroupOrderBound);
          std::optional<GroupTable> table;
          CensusOptions opt;
          if (enumerable) {
            table = enumerate_group(s);
            opt.table = &*table;
          }
          ZClassCensus z = zclass_census_fp(c, opt);
          ConjugacyCensus u = unipotent_census_fp(c, opt);
          ++fp_runs;
          bool ok = z.count() > 0 && u.count() > 0;
          if (enumerable) {
            ok &= z.crosscheck == CrossCheck::Passed && u.crosscheck == CrossCheck::Passed;
            ++crosschecked;
          } else {
            ok &= z.crosscheck != CrossCheck::Failed && u.crosscheck != CrossCheck::Failed;
          }
          if (!ok) {
            pass = false;
            detail << "FAILED n=" << n << " p=" << p << " " << kind_name(kind) << "; ";
          }
        }
      }
  std::size_t real_runs = 0;
  for (int total = 1; total <= 6; ++total)
    for (int p = 0; p <= total; ++p) {
      ++real_runs;
      std::size_t got = zclass_census_real({false, p, total - p, 0}).count();
      std::size_t want = oracle::real_zclass_count(false, p, total - p);
      if (got != want) {
        pass = false;
        detail << "O(" << p << "," << total - p << ") " << got << "!=" << want << "; ";
      }
    }
  for (int d = 2; d <= 8; d += 2) {
    ++real_runs;
    std::size_t got = zclass_census_real({true, 0, 0, d}).count();
    std::size_t want = oracle::real_zclass_count(true, d, 0);
    if (got != want) {
      pass = false;
      detail << "Sp(" << d << ") " << got << "!=" << want << "; ";
    }
  }
  detail << fp_runs << " finite-field settings (" << crosschecked << " cross-checked), " << real_runs
         << " real settings";
  return {pass, detail.str()};
}

// Monic irreducible polynomials of degree m over F_p, nonzero constant term.
std::vector<Polynomial> irreducibles(const PrimeField& F, int m) {
  std::vector<Polynomial> out;
  std::vector<residue_t> c(m + 1, 0);
  c[m] = 1;
  for (;;) {
    Polynomial f(F, c);
    if (c[0] != 0 && is_irreducible(f)) out.push_back(f);
    int pos = 0;
    while (pos < m && ++c[pos] == F.p()) c[pos++] = 0;
    if (pos == m) return out;
  }
}

Outcome hermitian_table() {
  std::size_t algebras = 0, grams = 0, orbits = 0, discrepancies = 0;
  for (residue_t p = 3; p <= 81; p += 2) {
    if (!PrimeField::is_prime(p)) continue;
    PrimeField F(p);
    auto size_ok = [&](int dim) {
      std::uint64_t s = 1;
      for (int i = 0; i < dim; ++i) s *= p;
      return s <= 81;
    };
    std::vector<CyclicAlgebra> list;
    for (int m = 1; size_ok(m); ++m)
      for (const auto& q : irreducibles(F, m)) {
        FactorClass fc = classify_factor(q);
        if (fc.tag == FactorTag::DualPairHigh) continue;
        const int width = fc.tag == FactorTag::DualPairLow ? 2 * m : m;
        for (int d = 1; size_ok(width * d); ++d)
          list.push_back(fc.tag == FactorTag::DualPairLow ? CyclicAlgebra::pair(q, *fc.partner, d)
                                                          : CyclicAlgebra::simple(q, d));
      }
    for (const auto& E : list) {
      ++algebras;
      for (int sign : {1, -1})
        for (int k = 1; k <= 2; ++k) {
          auto r = oracle::hermitian_decision_table(E, k, sign);
          grams += r.unimodular_grams;
          orbits += r.orbits;
          discrepancies += r.discrepancies;
        }
    }
  }
  return {discrepancies == 0, std::to_string(algebras) + " algebras, " + std::to_string(grams) +
                                  " unimodular grams in " + std::to_string(orbits) + " orbits, " +
                                  std::to_string(discrepancies) + " discrepancies"};
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "self-dual minimal polynomials", 60, self_dual_minimal_polynomials},
      {2, "induced-form identity", 120, induced_form_identity},
      {3, "conjugacy oracle equivalence", 300, conjugacy_oracle},
      {4, "Sp(2,F_3) conjugacy class count", kNoLimit, sp2f3_class_count},
      {5, "reality of orthogonal elements", kNoLimit, reality},
      {6, "z-class oracle equivalence", 600, zclass_oracle},
      {7, "witness validity", kNoLimit, witnesses},
      {8, "Jordan decomposition", kNoLimit, jordan},
      {9, "finiteness censuses", kNoLimit, censuses},
      {10, "hermitian equivalence decision table", kNoLimit, hermitian_table},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_seconds == kNoLimit || sec <= c.limit_seconds;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::string limit = c.limit_seconds == kNoLimit ? "" : " / limit " + std::to_string(static_cast<int>(c.limit_seconds)) + "s";
    std::printf("[%s] criterion %d: %s (%.1fs%s) %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, sec, limit.c_str(),
                o.detail.c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
