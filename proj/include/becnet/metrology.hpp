#pragma once

#include "becnet/moments.hpp"

#include <optional>
#include <vector>

namespace becnet {

// Minimum over theta of Var(cos(theta) Y - sin(theta) Z) for a 2x2 (Y, Z)
// covariance. theta lies in [-pi/2, pi/2); an isotropic block yields theta = 0
// with degenerate set.
struct Quadrature {
    double variance;
    double theta;
    bool degenerate;
};

Quadrature min_quadrature(double var_y, double var_z, double cov_yz);

// 3M x 3M symmetrized covariance, site-major, axes (x, y, z).
MatrixXd covariance(const MomentTable& m);

// 3x3 covariance of the summed spin sum_i J_i.
Eigen::Matrix3d collective_covariance(const MatrixXd& cov);

struct Squeezing {
    double xi2;
    double theta;
    bool degenerate;
};

Squeezing local_squeezing(const MomentTable& m, int site);
Squeezing collective_squeezing(const MomentTable& m);

// Largest eigenvalue of each site's 3x3 block.
VectorXd local_gamma(const MatrixXd& cov);

// 4 lambda_max of the collective covariance: the pure-state Fisher information
// maximized over rotations of the total spin.
double fisher_collective_pure(const Eigen::Matrix3d& collective_cov);

// F_ab = 2 sum_{kl} (p_k - p_l)^2 / (p_k + p_l) Re(<k|A|l><l|B|k>).
MatrixXd fisher_matrix(const MatrixXcd& rho, const std::vector<MatrixXcd>& ops,
                       double eps_p = defaults().fisher_eps_p);

// lambda_max of the 3x3 Fisher matrix of (J^x, J^y, J^z) on a single-site state.
double fisher_local(const MatrixXcd& rho);

struct WitnessInputs {
    double gamma_loc;
    double f_col;
    double xi2_col;
    int n_atoms;
    int n_sites;
    std::optional<double> f_loc;
};

struct WitnessRecord {
    double tau = 0.0;
    double xi2_loc = 0.0;
    double xi2_col = 0.0;
    double gamma_loc = 0.0;
    double f_col = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::optional<double> f_loc, c1_tilde, c2_tilde;
};

WitnessRecord witnesses(const WitnessInputs& in);

// Full pipeline for a pure global state described by its moments. Gamma_loc is
// the maximum over sites; all sites are evaluated.
WitnessRecord evaluate_pure(const MomentTable& m, std::optional<double> f_loc = std::nullopt);

// Relative spread of the per-site Gamma_loc values; zero under site symmetry.
double gamma_site_spread(const MatrixXd& cov);

}  // namespace becnet
