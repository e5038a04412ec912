#pragma once

#include "becnet/moments.hpp"
#include "becnet/spin.hpp"

namespace becnet {

// Closed-form moments of the product CSS_x state evolved under
// chi_local sum (J^z_i)^2 + chi_nloc sum_{i<j} J^z_i J^z_j for time t.
MomentTable gie_moments(const EnsembleDim& d, int n_sites, const Couplings& c, double t);

// Single-site reduced density matrix of the same state.
MatrixXcd gie_reduced_state(const EnsembleDim& d, int n_sites, const Couplings& c, double t);

}  // namespace becnet
