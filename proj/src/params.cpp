#include "becnet/params.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace becnet {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

// Composite Gauss-Legendre nodes and weights on [lo, hi] with the given panel count.
void panel_rule(double lo, double hi, int panels, std::vector<double>& x, std::vector<double>& w) {
    const auto& abs = Gauss::abscissa();
    const auto& wts = Gauss::weights();
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t i = 0; i < abs.size(); ++i) {
            if (abs[i] == 0.0) {
                x.push_back(mid);
                w.push_back(half * wts[i]);
                continue;
            }
            x.push_back(mid - half * abs[i]);
            w.push_back(half * wts[i]);
            x.push_back(mid + half * abs[i]);
            w.push_back(half * wts[i]);
        }
    }
}

// Finite-difference weights for derivatives 0..max_deriv at z (Fornberg).
MatrixXd fornberg(double z, const std::vector<double>& xs, int max_deriv) {
    const int n = static_cast<int>(xs.size());
    MatrixXd c = MatrixXd::Zero(n, max_deriv + 1);
    double c1 = 1.0;
    double c4 = xs[0] - z;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_deriv);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

double normal(double x, double var) { return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * si::pi * var); }

struct LowestPair {
    double e0, e1;
    VectorXd v0, v1;
};

// Two lowest eigenpairs of -1/2 d^2/dx^2 + v on a uniform Dirichlet grid,
// 8th-order stencil, by shifted subspace iteration.
LowestPair lowest_pair(const VectorXd& v, double h) {
    static constexpr double stencil[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    const int n = static_cast<int>(v.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(9 * n);
    const double kin = -0.5 / (h * h);
    for (int j = 0; j < n; ++j) {
        trip.emplace_back(j, j, kin * stencil[0] + v(j));
        for (int k = 1; k <= 4; ++k) {
            if (j + k < n) {
                trip.emplace_back(j, j + k, kin * stencil[k]);
                trip.emplace_back(j + k, j, kin * stencil[k]);
            }
        }
    }
    Eigen::SparseMatrix<double> hmat(n, n);
    hmat.setFromTriplets(trip.begin(), trip.end());

    const double shift = v.minCoeff() - 1.0;
    Eigen::SparseMatrix<double> a = hmat;
    for (int j = 0; j < n; ++j) a.coeffRef(j, j) -= shift;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw Error("double well: factorization failed");

    const int p = std::min(6, n);
    MatrixXd x(n, p);
    for (int k = 0; k < p; ++k)
        for (int j = 0; j < n; ++j) x(j, k) = std::sin((k + 1) * si::pi * (j + 1) / (n + 1.0));

    VectorXd theta;
    for (int it = 0; it < 20000; ++it) {
        MatrixXd y = ldlt.solve(x);
        Eigen::HouseholderQR<MatrixXd> qr(y);
        MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, p);
        MatrixXd hq = hmat * q;
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(q.transpose() * hq);
        x = q * es.eigenvectors();
        theta = es.eigenvalues();
        MatrixXd r = hq * es.eigenvectors() - x * theta.asDiagonal();
        const double scale = std::max(1.0, std::abs(theta(1)));
        if (r.col(0).norm() < 1e-11 * scale && r.col(1).norm() < 1e-11 * scale) {
            return {theta(0), theta(1), x.col(0), x.col(1)};
        }
    }
    throw Error("double well: eigensolver did not converge");
}

}  // namespace

double DoubleWellSpec::potential(double x) const {
    double v = 0.5 * mass * omega_x * omega_x * x * x;
    if (barrier_height != 0.0) v += barrier_height * std::exp(-0.5 * x * x / (barrier_width * barrier_width));
    if (!tabulated.empty() && x >= tabulated.front().first && x <= tabulated.back().first) {
        auto it = std::lower_bound(tabulated.begin(), tabulated.end(), x,
                                   [](const auto& p, double val) { return p.first < val; });
        if (it == tabulated.begin()) {
            v += it->second;
        } else {
            auto lo = it - 1;
            const double f = (x - lo->first) / (it->first - lo->first);
            v += lo->second + f * (it->second - lo->second);
        }
    }
    return v;
}

VectorXd ModePair::grid() const {
    const auto n = psi_gs.size();
    return VectorXd::LinSpaced(n, x0, x0 + (n - 1) * h);
}

namespace {

struct Solved {
    double e0, e1;
    VectorXd v0, v1;
};

// Energies in units of hbar^2 / (m l^2), wavefunctions normalized in SI.
Solved solve_grid(const DoubleWellSpec& s, int n, double length) {
    const double h = (s.x_max - s.x_min) / (n - 1);
    const double unit_e = si::hbar * si::hbar / (s.mass * length * length);
    VectorXd v(n);
    for (int j = 0; j < n; ++j) v(j) = s.potential(s.x_min + j * h) / unit_e;
    LowestPair lp = lowest_pair(v, h / length);
    const double norm = 1.0 / std::sqrt(h);
    return {lp.e0, lp.e1, lp.v0.normalized() * norm, lp.v1.normalized() * norm};
}

}  // namespace

ModePair solve_double_well(const DoubleWellSpec& s) {
    if (s.mass <= 0.0) throw DomainError("double well: mass must be positive");
    if (s.omega_y <= 0.0 || s.omega_z <= 0.0) throw DomainError("double well: transverse frequencies must be positive");
    if (!(s.x_max > s.x_min)) throw DomainError("double well: x_max must exceed x_min");
    if (s.n_points < 256) throw DomainError("double well: n_points must be at least 256");
    if (s.barrier_width <= 0.0) throw DomainError("double well: barrier_width must be positive");
    for (std::size_t i = 1; i < s.tabulated.size(); ++i)
        if (!(s.tabulated[i].first > s.tabulated[i - 1].first))
            throw DomainError("double well: tabulated positions must increase");

    const double length = s.omega_x > 0.0 ? std::sqrt(si::hbar / (s.mass * s.omega_x)) : (s.x_max - s.x_min) / 10.0;
    const double unit_e = si::hbar * si::hbar / (s.mass * length * length);
    Solved base = solve_grid(s, s.n_points, length);

    ModePair m;
    m.mass = s.mass;
    m.x0 = s.x_min;
    m.h = (s.x_max - s.x_min) / (s.n_points - 1);
    m.e_gs = base.e0 * unit_e;
    m.e_ex = base.e1 * unit_e;
    m.psi_gs = base.v0;
    m.psi_ex = base.v1;
    if (m.psi_gs.sum() < 0.0) m.psi_gs = -m.psi_gs;
    const double peak = std::max(m.psi_gs.cwiseAbs().maxCoeff(), m.psi_ex.cwiseAbs().maxCoeff());
    const int last = s.n_points - 1;
    const double edge = std::max({std::abs(m.psi_gs(0)), std::abs(m.psi_gs(last)), std::abs(m.psi_ex(0)),
                                  std::abs(m.psi_ex(last))});
    if (edge > 1e-6 * peak) throw DomainError("double well: grid does not cover the lowest modes");

    if (s.check_refinement) {
        Solved fine = solve_grid(s, 2 * (s.n_points - 1) + 1, length);
        const double d0 = std::abs(fine.e0 - base.e0) / std::max(1.0, std::abs(base.e0));
        const double d1 = std::abs(fine.e1 - base.e1) / std::max(1.0, std::abs(base.e1));
        if (std::max(d0, d1) > defaults().refinement)
            throw RefinementError("double well: eigenvalue drift " + std::to_string(std::max(d0, d1)) +
                                  " under grid refinement");
    }

    const VectorXd x = m.grid();
    m.psi_l = (m.psi_gs + m.psi_ex) / std::sqrt(2.0);
    if (x.dot(m.psi_l.cwiseAbs2()) > 0.0) {
        m.psi_ex = -m.psi_ex;
        m.psi_l = (m.psi_gs + m.psi_ex) / std::sqrt(2.0);
    }
    m.psi_r = (m.psi_gs - m.psi_ex) / std::sqrt(2.0);
    m.sigma_y = std::sqrt(si::hbar / (s.mass * s.omega_y));
    m.sigma_z = std::sqrt(si::hbar / (s.mass * s.omega_z));
    return m;
}

double contact_integral(const ModePair& m) {
    const double along = m.h * m.psi_l.array().pow(4).sum();
    return along / (2.0 * si::pi * m.sigma_y * m.sigma_z);
}

ModeDensity mode_density(const ModePair& m, Well w) {
    const VectorXd& psi = w == Well::left ? m.psi_l : m.psi_r;
    return {m.x0, m.h, psi.cwiseAbs2(), 0.5 * m.sigma_y * m.sigma_y, 0.5 * m.sigma_z * m.sigma_z};
}

ModeDensity gaussian_density(double centre_x, double var_x, double var_y, double var_z, double x0, double h, int n) {
    if (var_x <= 0.0 || var_y <= 0.0 || var_z <= 0.0) throw DomainError("gaussian_density: variances must be positive");
    VectorXd f(n);
    for (int j = 0; j < n; ++j) f(j) = normal(x0 + j * h - centre_x, var_x);
    f /= h * f.sum();
    return {x0, h, f, var_y, var_z};
}

double dipolar_integral(const ModeDensity& a, const ModeDensity& b, const Eigen::Vector3d& disp) {
    if (std::abs(a.h - b.h) > 1e-12 * a.h) throw DomainError("dipolar_integral: densities must share the grid spacing");
    const double h = a.h;
    const int na = static_cast<int>(a.f.size());
    const int nb = static_cast<int>(b.f.size());
    const int lo = -(nb - 1);
    const int count = na + nb - 1;

    // Longitudinal overlap c_m = int f_a(x) f_b(x - u_m - dx) sampled at u_m = s0 + m h.
    VectorXd c = VectorXd::Zero(count);
    for (int k = 0; k < count; ++k) {
        const int m = lo + k;
        const int j0 = std::max(0, m);
        const int j1 = std::min(na - 1, nb - 1 + m);
        double acc = 0.0;
        for (int j = j0; j <= j1; ++j) acc += a.f(j) * b.f(j - m);
        c(k) = h * acc;
    }
    const double s0 = a.x0 - b.x0 - disp.x();
    auto u_at = [&](int k) { return s0 + (lo + k) * h; };

    // Q_x and its even derivatives at u = 0 from a local 12-point stencil.
    double q0 = 0.0, q2 = 0.0, q4 = 0.0;
    {
        const int centre = static_cast<int>(std::floor(-s0 / h)) - lo;
        const int first = centre - 5;
        std::vector<double> xs;
        std::vector<double> vals;
        for (int k = first; k < first + 12; ++k) {
            xs.push_back(s0 + (lo + k) * h);
            vals.push_back(k >= 0 && k < count ? c(k) : 0.0);
        }
        const MatrixXd wts = fornberg(0.0, xs, 4);
        for (int i = 0; i < 12; ++i) {
            q0 += wts(i, 0) * vals[i];
            q2 += wts(i, 2) * vals[i];
            q4 += wts(i, 4) * vals[i];
        }
    }

    const double vy = a.var_y + b.var_y;
    const double vz = a.var_z + b.var_z;
    const double dy = disp.y();
    const double dz = disp.z();

    auto x_of = [&](double lam) {
        if (lam < h * h) return q0 + lam * q2 + 0.5 * lam * lam * q4;
        const double var = 2.0 * lam;
        const double cut = std::sqrt(2.0 * 745.0 * var);
        double acc = 0.0;
        for (int k = 0; k < count; ++k) {
            const double u = u_at(k);
            if (std::abs(u) > cut) continue;
            acc += c(k) * normal(u, var);
        }
        return h * acc;
    };
    auto integrand = [&](double lam) {
        const double w = vz + 2.0 * lam;
        const double zpp = normal(dz, w) * (dz * dz / (w * w) - 1.0 / w);
        return x_of(lam) * normal(dy, vy + 2.0 * lam) * zpp;
    };

    const double span = std::max(na, nb) * h + std::abs(s0);
    const double small = std::min({h * h, vy, vz});
    const double large = std::max({vy, vz, span * span, disp.squaredNorm()});
    const double lam_lo = 1e-8 * small;
    const double lam_hi = 1e12 * large;
    const double s_lo = std::log(lam_lo);
    const double s_hi = std::log(lam_hi);
    const int panels = static_cast<int>(std::ceil((s_hi - s_lo) / 0.5));
    std::vector<double> nodes, weights;
    panel_rule(s_lo, s_hi, panels, nodes, weights);

    double total = lam_lo * integrand(lam_lo);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double lam = std::exp(nodes[i]);
        total += weights[i] * lam * integrand(lam);
    }
    // Large-lambda tail decays as lambda^{-5/2}.
    total += integrand(lam_hi) * lam_hi / 1.5;

    const double q_origin = q0 * normal(dy, vy) * normal(dz, vz);
    return -total - q_origin / 3.0;
}

CouplingResult couplings_dw(const ModePair& sa, const ModePair& sb, const Eigen::Vector3d& offset, double c_dd) {
    const ModeDensity la = mode_density(sa, Well::left);
    const ModeDensity ra = mode_density(sa, Well::right);
    const ModeDensity lb = mode_density(sb, Well::left);
    const ModeDensity rb = mode_density(sb, Well::right);
    const Eigen::Vector3d zero = Eigen::Vector3d::Zero();

    CouplingResult r;
    r.contact_integral = contact_integral(sa);
    r.chi_cont_per_a0 = 4.0 * si::pi * si::hbar * si::a0 / sa.mass * r.contact_integral;
    r.d_self = dipolar_integral(la, la, zero);
    r.d_lr = dipolar_integral(la, ra, zero);
    r.d_lalb = dipolar_integral(la, lb, offset);
    r.d_rarb = dipolar_integral(ra, rb, offset);
    r.d_ralb = dipolar_integral(ra, lb, offset);
    r.d_larb = dipolar_integral(la, rb, offset);
    r.chi_loc = c_dd * (r.d_self - r.d_lr) / si::hbar;
    r.chi_nloc = c_dd * (r.d_lalb + r.d_rarb - r.d_ralb - r.d_larb) / si::hbar;
    r.chi_nz_ab = c_dd / (2.0 * si::hbar) * (r.d_lalb - r.d_rarb + r.d_ralb - r.d_larb);
    r.chi_nz_ba = c_dd / (2.0 * si::hbar) * (r.d_lalb - r.d_rarb - r.d_ralb + r.d_larb);
    return r;
}

double magnetic_cdd(double moment) { return si::mu0 * moment * moment; }

double cgb_coupling(double delta_e, double d) {
    if (!(d > 0.0)) throw DomainError("cgb_coupling: distance must be positive");
    const double c2 = si::c * si::c;
    return si::G * delta_e * delta_e / (d * c2 * c2 * si::hbar);
}

BmvCouplings bmv_couplings(double mass, double d, double dp, double self_energy) {
    if (!(d > 0.0) || !(dp > 0.0)) throw DomainError("bmv_couplings: distances must be positive");
    if (!(mass > 0.0)) throw DomainError("bmv_couplings: mass must be positive");
    const double gm2 = si::G * mass * mass;
    BmvCouplings b;
    b.chi_nloc = -gm2 * 2.0 * dp * dp / (d * (d + dp) * (d + 2.0 * dp)) / si::hbar;
    b.chi_loc = (gm2 / dp - self_energy) / si::hbar;
    b.chi_nz = -gm2 * dp / (d * (d + 2.0 * dp)) / si::hbar;
    return b;
}

}  // namespace becnet
