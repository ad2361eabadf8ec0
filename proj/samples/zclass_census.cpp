// Counts z-classes and conjugacy classes of small finite classical groups,
// then the semisimple z-classes of a few real ones.
#include <cstdio>

#include "isoclass/census.hpp"

using namespace isoclass;

int main() {
  struct Row {
    const char* name;
    CensusParams params;
  };
  const Row rows[] = {
      {"O(3, F_3)", {3, 3, Kind::Symmetric, DiscClass::Square}},
      {"O(2, F_5)'", {2, 5, Kind::Symmetric, DiscClass::NonSquare}},
      {"Sp(2, F_3)", {2, 3, Kind::Skew, DiscClass::Square}},
      {"Sp(4, F_5)", {4, 5, Kind::Skew, DiscClass::Square}},
  };
  for (const auto& [name, c] : rows) {
    ZClassCensus z = zclass_census_fp(c);
    ConjugacyCensus k = conjugacy_census_fp(c);
    std::printf("%-12s z-classes %4zu (%s)  conjugacy classes %4zu (%s)\n", name, z.count(),
                crosscheck_name(z.crosscheck), k.count(), crosscheck_name(k.crosscheck));
  }

  for (auto [p, q] : {std::pair{3, 0}, {2, 1}, {2, 2}})
    std::printf("O(%d,%d) semisimple z-classes %zu\n", p, q, zclass_census_real({false, p, q, 0}).count());
  for (int d = 2; d <= 8; d += 2)
    std::printf("Sp(%d, R) semisimple z-classes %zu\n", d, zclass_census_real({true, 0, 0, d}).count());
}
