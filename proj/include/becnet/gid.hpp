#pragma once

#include "becnet/moments.hpp"
#include "becnet/spin.hpp"

#include <array>
#include <optional>

namespace becnet {

// Local one-axis twisting for tau_rot, a rotation by theta about x, then
// nonlocal evolution for tau. Exactly one of theta / beta is given, with
// beta = theta - theta0 - pi/2.
struct GidSchedule {
    double tau_rot = 0.0;
    std::optional<double> theta;
    std::optional<double> beta;
};

struct GidAngles {
    double theta;
    double theta0;
    double beta;
    bool degenerate;
};

// exp(-i tau_rot (J^z)^2) |CSS_x>.
LocalState prepare_local(const EnsembleDim& d, double tau_rot);

struct OptimalAngle {
    double theta0;
    bool degenerate;
};

OptimalAngle optimal_angle(const LocalState& psi);

GidAngles resolve_angles(const LocalState& prepared, const GidSchedule& s);

// V_az = <J~^a exp(i tau J~^z)>, V_za = <exp(i tau J~^z) J~^a> on the prepared
// state, with J~^a = exp(i theta J^x) J^a exp(-i theta J^x).
struct VQuantities {
    cplx v_z;
    std::array<cplx, 3> az;
    std::array<cplx, 3> za;

    double r_az(Axis a) const { return az[static_cast<int>(a)].real(); }
    double i_az(Axis a) const { return az[static_cast<int>(a)].imag(); }
    double r_za(Axis a) const { return za[static_cast<int>(a)].real(); }
    double i_za(Axis a) const { return za[static_cast<int>(a)].imag(); }
};

VQuantities v_quantities(const LocalState& psi, double theta, double tau);

// Holds the rotated local state for one schedule; each tau then costs O(N)
// for moments and O(N^2) for the reduced state, independent of M.
class GidEngine {
public:
    GidEngine(const EnsembleDim& d, int n_sites, const GidSchedule& s);

    const EnsembleDim& dim() const { return dim_; }
    int n_sites() const { return m_; }
    const GidAngles& angles() const { return angles_; }
    const LocalState& prepared() const { return prepared_; }
    const LocalState& rotated() const { return rotated_; }

    VQuantities v(double tau) const;
    MomentTable moments(double tau) const;
    // Single-site reduced state: the partner sites act as a classical mixture
    // of jz phases.
    MatrixXcd reduced_state(double tau) const;
    double purity(double tau) const;

private:
    cplx g(double phi) const;
    cplx b(double phi) const;
    cplx dz(double phi) const;
    VectorXcd envelope(double tau) const;

    EnsembleDim dim_;
    int m_;
    GidAngles angles_;
    LocalState prepared_, rotated_;
    VectorXd mu_, prob_;
    VectorXcd raise_overlap_;
    cplx a1_, pp_, anti_;
    double ladder_sum_, jz_, jz2_;
};

MomentTable gid_moments(const EnsembleDim& d, int n_sites, const GidSchedule& s, double tau);

// M = 2 reduced state of site A.
MatrixXcd reduced_state_gid(const EnsembleDim& d, const GidSchedule& s, double tau);

}  // namespace becnet
