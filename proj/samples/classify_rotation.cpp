// Classifies a quarter turn in O(2) over F_7 and compares it with its inverse.
#include <iostream>

#include "isoclass/classify.hpp"

using namespace isoclass;

int main() {
  PrimeField F(7);
  BilinearSpace plane(Kind::Symmetric, Matrix::identity(2, F));
  Isometry r(Matrix::from_rows(F, {{0, -1}, {1, 0}}), plane);

  std::cout << "minimal polynomial " << minimal_polynomial(r).to_string() << "\n";
  for (const auto& b : conjugacy_invariant(r).blocks)
    std::cout << "block " << b.prime.to_string() << " d=" << b.d_i << " k=" << b.k_i << " "
              << tag_name(b.tag) << " " << herm_tag_name(b.cls.tag) << " rank " << b.cls.rank << "\n";
  for (const auto& f : centralizer_description(r).factors) std::cout << "centralizer factor " << f.label << "\n";

  std::cout << "conjugate to inverse: " << std::boolalpha << are_conjugate(r, r.inverse()) << "\n";
  Isometry c = conjugating_witness(r, r.inverse());
  std::cout << "witness\n";
  for (const auto& row : c.matrix().to_rows()) {
    for (long long x : row) std::cout << " " << x;
    std::cout << "\n";
  }
}
