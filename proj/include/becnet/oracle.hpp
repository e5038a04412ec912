#pragma once

#include "becnet/moments.hpp"
#include "becnet/spin.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace becnet {

// Exact state of M identical qudits in the (N+1)^M tensor basis. Site 0 is
// the slowest-varying index.
class GlobalState {
public:
    GlobalState(const EnsembleDim& d, int n_sites, VectorXcd amplitudes);

    static GlobalState product(const std::vector<LocalState>& locals,
                               std::size_t cap = defaults().oracle_cap);
    static GlobalState product(const LocalState& local, int n_sites,
                               std::size_t cap = defaults().oracle_cap);

    const EnsembleDim& dim() const { return dim_; }
    int n_sites() const { return m_; }
    const VectorXcd& amplitudes() const { return amp_; }
    // Distance between consecutive indices of one site's factor.
    Eigen::Index stride(int site) const;

private:
    EnsembleDim dim_;
    int m_;
    VectorXcd amp_;
};

// Checked (N+1)^M.
std::size_t tensor_size(const EnsembleDim& d, int n_sites, std::size_t cap = defaults().oracle_cap);

// exp(-i t [chi_local sum mu_i^2 + chi_nloc sum_{i<j} mu_i mu_j]).
GlobalState evolve_diagonal(const GlobalState& s, const Couplings& c, double t);

GlobalState apply_local(const GlobalState& s, int site, const MatrixXcd& gate);

// <s| J^{a_0}_{i_0} J^{a_1}_{i_1} ... |s>; the last operator acts first.
cplx expect(const GlobalState& s, const std::vector<std::pair<int, Axis>>& ops);

// Partial trace onto one site.
MatrixXcd reduce(const GlobalState& s, int keep);

// Every first and symmetrized second moment of the state.
MomentTable oracle_moments(const GlobalState& s, double t);

// Hermitian matrix of sum_i J^a_i on the full tensor space, for Fisher checks.
MatrixXcd collective_operator(const EnsembleDim& d, int n_sites, Axis a);

}  // namespace becnet
