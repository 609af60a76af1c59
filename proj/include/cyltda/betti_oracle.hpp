#pragma once

#include "cyltda/filtration.hpp"

namespace cyltda {

/// Persistent Betti number beta_q^{r,s} computed straight from its
/// definition, dim Z_q(K_r) - dim(B_q(K_s) ∩ Z_q(K_r)), by GF(2) Gaussian
/// elimination on the sub-complexes at levels r and s. Deliberately shares
/// no code with compute_persistence; it is the oracle for that path.
long persistent_betti_oracle(const FilteredComplex& complex, int q, double r, double s);

}  // namespace cyltda
