#pragma once

#include "becnet/core.hpp"

#include <utility>
#include <vector>

namespace becnet {

// One double well along x: harmonic trap plus a barrier, Gaussian
// V0 exp(-x^2 / (2 w^2)) and/or a tabulated profile (linear interpolation,
// zero outside the table). SI units throughout.
struct DoubleWellSpec {
    double mass = 39.0 * si::amu;
    double omega_x = 0.0, omega_y = 0.0, omega_z = 0.0;
    double barrier_height = 0.0;
    double barrier_width = 1e-6;
    std::vector<std::pair<double, double>> tabulated;
    double x_min = 0.0, x_max = 0.0;
    int n_points = 512;
    // Refinement check against a grid with half the spacing.
    bool check_refinement = true;

    double potential(double x) const;
};

struct ModePair {
    double mass;
    double x0, h;
    VectorXd psi_gs, psi_ex, psi_l, psi_r;
    // Transverse oscillator lengths, sigma^2 = hbar / (m omega).
    double sigma_y, sigma_z;
    double e_gs, e_ex;

    VectorXd grid() const;
};

ModePair solve_double_well(const DoubleWellSpec& spec);

// int |psi_L(r)|^4 d^3r with Gaussian transverse factors.
double contact_integral(const ModePair& modes);

// Density |psi(r)|^2 = f(x) N(y; 0, var_y) N(z; 0, var_z) with f tabulated on
// x0 + j h and normalized to one.
struct ModeDensity {
    double x0, h;
    VectorXd f;
    double var_y, var_z;
};

enum class Well { left, right };

ModeDensity mode_density(const ModePair& modes, Well w);

// Gaussian density with the given centre along x and variances.
ModeDensity gaussian_density(double centre_x, double var_x, double var_y, double var_z, double x0, double h, int n);

// int int n_a(r) U_dd(r - r') n_b(r' - displacement) with
// U_dd = (1 - 3 cos^2) / (4 pi |r - r'|^3), dipoles along z. Both densities
// must share the grid spacing.
double dipolar_integral(const ModeDensity& a, const ModeDensity& b, const Eigen::Vector3d& displacement);

struct CouplingResult {
    double contact_integral;
    double chi_cont_per_a0;
    double chi_loc, chi_nloc, chi_nz_ab, chi_nz_ba;
    double d_self, d_lr;
    double d_lalb, d_rarb, d_ralb, d_larb;
};

// Site B's modes displaced by offset_b relative to site A's.
CouplingResult couplings_dw(const ModePair& site_a, const ModePair& site_b, const Eigen::Vector3d& offset_b,
                            double c_dd);

// mu0 mu^2 for a magnetic moment mu.
double magnetic_cdd(double moment = si::mu_B);

// G dE^2 / (d c^4 hbar), rad/s.
double cgb_coupling(double delta_e, double d);

struct BmvCouplings {
    double chi_loc, chi_nloc, chi_nz;
};

// Two interferometers of arm separation d_prime at distance d; rad/s.
// self_energy is the constant D absorbed into chi_loc.
BmvCouplings bmv_couplings(double mass, double d, double d_prime, double self_energy = 0.0);

}  // namespace becnet
