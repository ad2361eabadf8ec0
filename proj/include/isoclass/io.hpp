#pragma once

// JSON encoding of spaces, isometries, polynomials, reports and censuses.
// Requires the single-header nlohmann/json on the include path.

#include <string>
#include <vector>

#include "json.hpp"

#include "isoclass/census.hpp"
#include "isoclass/classify.hpp"
#include "isoclass/factor.hpp"

namespace isoclass::io {

using nlohmann::json;

inline constexpr const char* kSchema = "isoclass/1";

inline json with_schema(json j) {
  j["schema"] = kSchema;
  return j;
}

/// Compact dump; object keys come out sorted, so equal values give equal bytes.
inline std::string dump(const json& j) { return j.dump(); }

// ---- decoding ------------------------------------------------------------

inline const json& field(const json& j, const char* key) {
  require(j.is_object(), ErrorCode::Parse, "expected a JSON object");
  auto it = j.find(key);
  require(it != j.end(), ErrorCode::Parse, std::string("missing field \"") + key + "\"");
  return *it;
}

inline long long integer(const json& j, const char* what) {
  require(j.is_number_integer(), ErrorCode::Parse, std::string(what) + " must be an integer");
  return j.get<long long>();
}

inline PrimeField field_from_json(const json& j) {
  long long p = integer(field(j, "p"), "p");
  require(p > 2 && p < (1LL << 20), ErrorCode::InvalidModulus, "p must be an odd prime below 2^20");
  return PrimeField(static_cast<residue_t>(p));
}

inline Kind kind_from_json(const json& j) {
  const json& k = field(j, "kind");
  require(k.is_string(), ErrorCode::Parse, "kind must be a string");
  if (k == "symmetric") return Kind::Symmetric;
  if (k == "skew") return Kind::Skew;
  fail(ErrorCode::Parse, "kind must be \"symmetric\" or \"skew\"");
}

inline Matrix matrix_from_json(const PrimeField& F, const json& j, const char* what) {
  require(j.is_array() && !j.empty(), ErrorCode::Parse, std::string(what) + " must be a non-empty array of rows");
  std::vector<std::vector<long long>> rows;
  for (const auto& r : j) {
    require(r.is_array() && r.size() == j.size(), ErrorCode::Parse, std::string(what) + " must be square");
    std::vector<long long> row;
    for (const auto& x : r) row.push_back(integer(x, what));
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(F, rows);
}

inline BilinearSpace space_from_json(const json& j) {
  PrimeField F = field_from_json(j);
  Kind kind = kind_from_json(j);
  return BilinearSpace(kind, matrix_from_json(F, field(j, "gram"), "gram"));
}

inline Isometry isometry_from_json(const json& j) {
  BilinearSpace s = space_from_json(j);
  Matrix m = matrix_from_json(s.field(), field(j, "matrix"), "matrix");
  require(m.rows() == s.dim(), ErrorCode::DimensionMismatch, "matrix and gram sizes differ");
  return Isometry(m, s);
}

inline Polynomial polynomial_from_json(const json& j) {
  PrimeField F = field_from_json(j);
  const json& c = field(j, "poly");
  require(c.is_array(), ErrorCode::Parse, "poly must be an array of coefficients");
  std::vector<long long> coeffs;
  for (const auto& x : c) coeffs.push_back(integer(x, "coefficient"));
  return Polynomial::from_signed(F, coeffs);
}

// ---- encoding ------------------------------------------------------------

inline json matrix_json(const Matrix& m) { return m.to_rows(); }

inline json coeffs_json(const Polynomial& f) { return f.coeffs(); }

inline json polynomial_json(const Polynomial& f) { return {{"p", f.field().p()}, {"poly", coeffs_json(f)}}; }

inline json space_json(const BilinearSpace& s) {
  return {{"p", s.field().p()}, {"kind", std::string(kind_name(s.kind()))}, {"gram", matrix_json(s.gram())}};
}

inline json isometry_json(const Isometry& t) {
  json j = space_json(t.space());
  j["matrix"] = matrix_json(t.matrix());
  return j;
}

inline const char* disc_name(DiscClass d) { return d == DiscClass::Square ? "square" : "nonsquare"; }

/// "pair" for both halves of a dual pair, else the factor tag.
inline std::string class_label(FactorTag t) {
  if (t == FactorTag::DualPairLow || t == FactorTag::DualPairHigh) return "pair";
  return std::string(tag_name(t));
}

inline json factorization_json(const Polynomial& f, const Factorization& fz) {
  json factors = json::array();
  for (const auto& fp : fz.factors) {
    json e{{"poly", coeffs_json(fp.factor)}, {"exponent", fp.exponent}};
    if (fp.factor.constant_term() != 0) {
      FactorClass fc = classify_factor(fp.factor);
      e["class"] = std::string(tag_name(fc.tag));
      if (fc.partner) e["partner"] = coeffs_json(*fc.partner);
    } else {
      e["class"] = nullptr;
    }
    factors.push_back(std::move(e));
  }
  return {{"p", f.field().p()}, {"poly", coeffs_json(f)}, {"unit", fz.unit.residue}, {"factors", factors}};
}

inline json hermitian_class_json(const HermitianClass& c) {
  return {{"tag", std::string(herm_tag_name(c.tag))}, {"rank", c.rank},
          {"disc", c.disc ? json(disc_name(*c.disc)) : json(nullptr)}};
}

inline json decomposition_json(const Analysis& a) {
  json out = json::array();
  for (const auto& c : a.components) {
    json blocks = json::array();
    for (const auto& b : c.blocks)
      blocks.push_back({{"d_i", b.block.d_i}, {"k_i", b.block.k_i}, {"dim", b.block.basis.basis.cols()}});
    json e{{"prime", coeffs_json(c.component.prime)},
           {"class", class_label(c.component.factor_class.tag)},
           {"d", c.component.d},
           {"blocks", blocks}};
    if (c.component.partner) e["partner"] = coeffs_json(*c.component.partner);
    out.push_back(std::move(e));
  }
  return out;
}

inline json hermitian_json(const Analysis& a) {
  json out = json::array();
  for (const auto& c : a.components)
    for (const auto& b : c.blocks) {
      json gram = json::array();
      for (int i = 0; i < b.form.rank(); ++i) {
        json row = json::array();
        for (int j = 0; j < b.form.rank(); ++j) row.push_back(coeffs_json(b.form.gram(i, j)));
        gram.push_back(std::move(row));
      }
      out.push_back({{"prime", coeffs_json(c.component.prime)},
                     {"d", b.block.d_i},
                     {"c", b.algebra.c()},
                     {"rank", b.block.k_i},
                     {"gram", gram},
                     {"class", hermitian_class_json(b.cls)}});
    }
  return out;
}

inline json conjugacy_invariant_json(const ConjugacyInvariant& inv) {
  json blocks = json::array();
  for (const auto& b : inv.blocks)
    blocks.push_back({{"class", class_label(b.tag)},
                      {"prime", coeffs_json(b.prime)},
                      {"d_i", b.d_i},
                      {"k_i", b.k_i},
                      {"dim", b.dim()},
                      {"form", hermitian_class_json(b.cls)}});
  return {{"mode", "conjugacy"},
          {"p", inv.p},
          {"n", inv.n},
          {"kind", std::string(kind_name(inv.kind))},
          {"blocks", blocks}};
}

inline json zclass_invariant_json(const ZClassInvariant& inv) {
  json comps = json::array();
  for (const auto& c : inv.components) {
    json blocks = json::array();
    for (const auto& b : c.blocks)
      blocks.push_back({{"d_i", b.d_i}, {"k_i", b.k_i}, {"form", hermitian_class_json(b.cls)}});
    comps.push_back({{"class", class_label(c.tag)}, {"degree", c.degree}, {"blocks", blocks}});
  }
  return {{"mode", "zclass"},
          {"p", inv.p},
          {"n", inv.n},
          {"kind", std::string(kind_name(inv.kind))},
          {"components", comps}};
}

inline json item_json(const ZClassInvariant& z) { return zclass_invariant_json(z); }
inline json item_json(const ConjugacyInvariant& c) { return conjugacy_invariant_json(c); }

/// `limit` caps the item list; the count is always the full one.
template <class Item>
json census_json(const CensusReport<Item>& r, std::size_t limit = SIZE_MAX) {
  json params{{"field", "fp"}, {"n", r.params.n}, {"p", r.params.p}, {"kind", std::string(kind_name(r.params.kind))},
              {"what", r.what}};
  if (r.params.kind == Kind::Symmetric) params["disc"] = disc_name(r.params.disc);
  json items = json::array();
  for (std::size_t i = 0; i < r.items.size() && i < limit; ++i) items.push_back(item_json(r.items[i]));
  json j{{"params", params},
         {"count", r.count()},
         {"items", items},
         {"truncated", r.items.size() > limit},
         {"crosscheck", crosscheck_name(r.crosscheck)}};
  if (r.brute_force_count) j["brute_force_count"] = *r.brute_force_count;
  return j;
}

inline json real_datum_json(const RealZDatum& d, bool symplectic) {
  auto sig = [&](const std::optional<RealSignature>& s) -> json {
    if (!s) return nullptr;
    if (symplectic) return {{"dim", s->a}};
    return {{"a", s->a}, {"b", s->b}};
  };
  json ell = json::array(), pairs = json::array();
  for (const auto& s : d.elliptic) ell.push_back({{"a", s.a}, {"b", s.b}});
  for (const auto& p : d.pairs) pairs.push_back({{"l", p.l}, {"e", p.e}});
  return {{"elliptic", ell}, {"pairs", pairs}, {"plus", sig(d.plus)}, {"minus", sig(d.minus)}};
}

inline json real_census_json(const RealCensus& r, std::size_t limit = SIZE_MAX) {
  json params{{"field", "real"}, {"what", "zclass"}, {"semisimple", true}};
  if (r.params.symplectic)
    params["symplectic"] = r.params.dim;
  else
    params["signature"] = {r.params.p, r.params.q};
  json items = json::array();
  for (std::size_t i = 0; i < r.items.size() && i < limit; ++i)
    items.push_back(real_datum_json(r.items[i], r.params.symplectic));
  return {{"params", params},
          {"count", r.count()},
          {"items", items},
          {"truncated", r.items.size() > limit},
          {"crosscheck", "skipped"}};
}

inline json error_json(const Error& e) { return {{"error", std::string(e.name())}, {"message", e.what()}}; }

}  // namespace isoclass::io
