#pragma once

#include <vector>

#include "bexcl/kernel.hpp"

namespace bexcl {

// Full spectrum of P via eigendecomposition of the symmetrization
// S_ij = sqrt(P_ij P_ji) (valid for reversible chains; S is similar to P).
// Returned sorted in decreasing order.  Independent of the closed-form route:
// it never touches the stationary distribution or the eigenfunction formulas.
std::vector<double> reversible_spectrum(const TransitionMatrix& P);

// Second-largest eigenvalue from the full spectrum.
double second_eigenvalue_dense(const TransitionMatrix& P);

}  // namespace bexcl
