#include <doctest.h>

#include "becnet/params.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace becnet;

namespace {

constexpr double um = 1e-6;

DoubleWellSpec harmonic_spec() {
    DoubleWellSpec s;
    s.mass = 39.0 * si::amu;
    s.omega_x = 2.0 * si::pi * 100.0;
    s.omega_y = 2.0 * si::pi * 200.0;
    s.omega_z = 2.0 * si::pi * 300.0;
    const double ax = std::sqrt(si::hbar / (s.mass * s.omega_x));
    s.x_min = -12.0 * ax;
    s.x_max = 12.0 * ax;
    s.n_points = 512;
    return s;
}

DoubleWellSpec well_spec(double height_in_hw) {
    DoubleWellSpec s = harmonic_spec();
    const double ax = std::sqrt(si::hbar / (s.mass * s.omega_x));
    s.barrier_height = height_in_hw * si::hbar * s.omega_x;
    s.barrier_width = 0.5 * ax;
    return s;
}

ModeDensity cloud(double cx, double sx, double sy, double sz, double h = 0.02 * um) {
    const int n = static_cast<int>(std::ceil(24.0 * sx / h)) + 1;
    return gaussian_density(cx, sx * sx, sy * sy, sz * sz, cx - 12.0 * sx, h, n);
}

// Pair density mean and variance for clouds centred at ca and cb + disp.
double realspace(const Eigen::Vector3d& ca, const Eigen::Vector3d& va, const Eigen::Vector3d& cb,
                 const Eigen::Vector3d& vb) {
    return oracles::dipolar_realspace(ca - cb, va + vb);
}

ModePair gaussian_modes(double xw, double sx, double sy, double sz, double h, int n) {
    ModePair m;
    m.mass = 39.0 * si::amu;
    m.h = h;
    m.x0 = -0.5 * (n - 1) * h;
    const VectorXd x = VectorXd::LinSpaced(n, m.x0, m.x0 + (n - 1) * h);
    auto g = [&](double c) {
        VectorXd v(n);
        for (int j = 0; j < n; ++j) v(j) = std::exp(-0.25 * (x(j) - c) * (x(j) - c) / (sx * sx));
        return VectorXd(v / std::sqrt(h * v.squaredNorm()));
    };
    m.psi_l = g(-xw);
    m.psi_r = g(xw);
    m.psi_gs = (m.psi_l + m.psi_r) / std::sqrt(2.0);
    m.psi_ex = (m.psi_l - m.psi_r) / std::sqrt(2.0);
    // Transverse density variance sigma^2 / 2.
    m.sigma_y = std::sqrt(2.0) * sy;
    m.sigma_z = std::sqrt(2.0) * sz;
    m.e_gs = m.e_ex = 0.0;
    return m;
}

}  // namespace

TEST_CASE("harmonic limit of the double-well solver") {
    const DoubleWellSpec s = harmonic_spec();
    const ModePair m = solve_double_well(s);
    const double hw = si::hbar * s.omega_x;
    CHECK(std::abs((m.e_ex - m.e_gs) / hw - 1.0) < 1e-4);
    CHECK(std::abs(m.e_gs / hw - 0.5) < 1e-6);
    CHECK(std::abs(m.h * m.psi_l.squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(m.h * m.psi_l.dot(m.psi_r)) < 1e-6);
    CHECK(m.grid().dot(m.psi_l.cwiseAbs2()) < 0.0);

    // Ground state against the analytic Gaussian and its contact integral.
    const double ax = std::sqrt(si::hbar / (s.mass * s.omega_x));
    const VectorXd x = m.grid();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double g = std::exp(-0.5 * x(j) * x(j) / (ax * ax)) / std::pow(si::pi * ax * ax, 0.25);
        worst = std::max(worst, std::abs(m.psi_gs(j) - g));
    }
    CHECK(worst * std::sqrt(ax) < 1e-6);
    ModePair gs = m;
    gs.psi_l = m.psi_gs;
    const double gauss_i = 1.0 / (std::pow(2.0 * si::pi, 1.5) * ax * m.sigma_y * m.sigma_z);
    CHECK(std::abs(contact_integral(gs) / gauss_i - 1.0) < 1e-3);
}

TEST_CASE("symmetric double well modes are mirror images") {
    const ModePair m = solve_double_well(well_spec(6.0));
    const Eigen::Index n = m.psi_l.size();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) worst = std::max(worst, std::abs(m.psi_l(j) - m.psi_r(n - 1 - j)));
    CHECK(worst * std::sqrt(m.h) < 1e-8);
    CHECK(std::abs(m.h * m.psi_r.squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(m.h * m.psi_l.dot(m.psi_r)) < 1e-6);
}

TEST_CASE("tunnel splitting shrinks with barrier height") {
    double previous = HUGE_VAL;
    for (double height : {0.0, 2.0, 4.0, 8.0, 12.0, 16.0}) {
        const ModePair m = solve_double_well(well_spec(height));
        const double split = m.e_ex - m.e_gs;
        CHECK(split > 0.0);
        CHECK(split < previous);
        previous = split;
    }
}

TEST_CASE("double-well solver rejects bad grids") {
    DoubleWellSpec coarse = harmonic_spec();
    coarse.x_min *= 60.0;
    coarse.x_max *= 60.0;
    coarse.n_points = 256;
    CHECK_THROWS_AS(solve_double_well(coarse), RefinementError);

    DoubleWellSpec narrow = harmonic_spec();
    narrow.x_min /= 6.0;
    narrow.x_max /= 6.0;
    CHECK_THROWS_AS(solve_double_well(narrow), DomainError);

    DoubleWellSpec few = harmonic_spec();
    few.n_points = 100;
    CHECK_THROWS_AS(solve_double_well(few), DomainError);
}

TEST_CASE("couplings converge under grid refinement") {
    DoubleWellSpec s = well_spec(6.0);
    const ModePair a = solve_double_well(s);
    s.n_points = 2 * (s.n_points - 1) + 1;
    const ModePair b = solve_double_well(s);
    const Eigen::Vector3d off(0.0, 6.0 * um, 0.0);
    const CouplingResult ra = couplings_dw(a, a, off, magnetic_cdd());
    const CouplingResult rb = couplings_dw(b, b, off, magnetic_cdd());
    CHECK(std::abs(rb.chi_cont_per_a0 / ra.chi_cont_per_a0 - 1.0) < 1e-4);
    CHECK(std::abs(rb.chi_loc / ra.chi_loc - 1.0) < 1e-4);
    CHECK(std::abs(rb.chi_nloc / ra.chi_nloc - 1.0) < 1e-4);
}

TEST_CASE("contact integral of Gaussian modes") {
    const double sx = 0.8 * um, sy = 1.1 * um, sz = 0.6 * um;
    ModePair m = gaussian_modes(4.0 * um, sx, 1.0, 1.0, sx / 20.0, 1201);
    // Wavefunction width parameter: psi ~ exp(-x^2 / (2 s^2)) with s^2 = 2 sx^2.
    const double s = std::sqrt(2.0) * sx;
    m.sigma_y = sy;
    m.sigma_z = sz;
    const double expected = 1.0 / (std::pow(2.0 * si::pi, 1.5) * s * sy * sz);
    CHECK(std::abs(contact_integral(m) / expected - 1.0) < 1e-9);

    ModePair wide = gaussian_modes(8.0 * um, 2.0 * sx, 1.0, 1.0, sx / 10.0, 1201);
    wide.sigma_y = 2.0 * sy;
    wide.sigma_z = 2.0 * sz;
    CHECK(std::abs(contact_integral(wide) / contact_integral(m) - 0.125) < 1e-9);
}

TEST_CASE("spherical self term vanishes") {
    const double s = 1.0 * um;
    const ModeDensity a = cloud(0.0, s, s, s);
    const double d = dipolar_integral(a, a, Eigen::Vector3d::Zero());
    const double scale = 1.0 / (std::pow(2.0 * si::pi, 1.5) * std::pow(2.0 * s * s, 1.5));
    CHECK(std::abs(d) < 1e-6 * scale);
}

TEST_CASE("dipolar integral matches real-space quadrature") {
    struct Geo {
        Eigen::Vector3d sa, sb, disp;
    };
    const Geo geos[] = {
        {{1.0, 0.7, 1.3}, {1.0, 0.7, 1.3}, {0.0, 0.0, 0.0}},
        {{0.6, 1.0, 0.8}, {0.9, 0.5, 1.1}, {1.5, 0.7, 0.4}},
        {{0.5, 0.5, 1.5}, {0.7, 0.6, 0.5}, {0.0, 6.0, 2.0}},
        {{0.8, 0.8, 0.8}, {0.8, 0.8, 0.8}, {5.0, 0.0, 0.0}},
        {{0.8, 0.9, 0.7}, {0.8, 0.9, 0.7}, {0.0, 0.0, 4.0}},
    };
    for (const Geo& g : geos) {
        const Eigen::Vector3d sa = g.sa * um, sb = g.sb * um, disp = g.disp * um;
        const double h = std::min(sa.x(), sb.x()) / 25.0;
        const ModeDensity a = gaussian_density(0.0, sa.x() * sa.x(), sa.y() * sa.y(), sa.z() * sa.z(), -12.0 * sa.x(), h,
                                               static_cast<int>(24.0 * sa.x() / h) + 1);
        const ModeDensity b = gaussian_density(0.3 * um, sb.x() * sb.x(), sb.y() * sb.y(), sb.z() * sb.z(),
                                               0.3 * um - 12.0 * sb.x(), h, static_cast<int>(24.0 * sb.x() / h) + 1);
        const double fast = dipolar_integral(a, b, disp);
        const Eigen::Vector3d cb = Eigen::Vector3d(0.3 * um, 0.0, 0.0) + disp;
        const double slow = realspace(Eigen::Vector3d::Zero(), sa.cwiseAbs2(), cb, sb.cwiseAbs2());
        CHECK(std::abs(fast / slow - 1.0) < 1e-4);
    }
}

TEST_CASE("point-dipole limit and symmetry") {
    const double s = 0.5 * um, d = 40.0 * um;
    const ModeDensity a = cloud(0.0, s, s, s);
    const double along_z = dipolar_integral(a, a, Eigen::Vector3d(0.0, 0.0, d));
    const double along_x = dipolar_integral(a, a, Eigen::Vector3d(d, 0.0, 0.0));
    CHECK(std::abs(along_z / along_x + 2.0) < 1e-3);
    CHECK(along_x > 0.0);
    CHECK(std::abs(along_x * 4.0 * si::pi * d * d * d - 1.0) < 1e-3);

    const ModeDensity p = cloud(-0.4 * um, 0.7 * um, 0.9 * um, 0.6 * um);
    const ModeDensity q = cloud(0.9 * um, 0.5 * um, 1.2 * um, 0.8 * um);
    const Eigen::Vector3d disp(1.1 * um, -2.0 * um, 0.7 * um);
    const double pq = dipolar_integral(p, q, disp);
    const double qp = dipolar_integral(q, p, -disp);
    CHECK(std::abs(pq / qp - 1.0) < 1e-8);
}

TEST_CASE("couplings match Monte-Carlo and real-space oracles") {
    const double sx = 0.5 * um, sy = 0.8 * um, sz = 0.6 * um, xw = 2.0 * um;
    const double h = sx / 25.0;
    const int n = static_cast<int>(2.0 * (xw + 12.0 * sx) / h) + 1;
    const ModePair m = gaussian_modes(xw, sx, sy, sz, h, n);
    const Eigen::Vector3d off(1.0 * um, 8.0 * um, 0.0);
    const double cdd = magnetic_cdd();
    const CouplingResult r = couplings_dw(m, m, off, cdd);

    const Eigen::Vector3d v1(sx * sx, sy * sy, sz * sz);
    const Eigen::Vector3d var = 2.0 * v1;
    const Eigen::Vector3d cl(-xw, 0.0, 0.0), cr(xw, 0.0, 0.0);
    // Pair-density means c_a - c_b for the four inter-site integrals.
    const std::vector<Eigen::Vector3d> means = {cl - (cl + off), cr - (cr + off), cr - (cl + off), cl - (cr + off)};
    const std::vector<double> mc = oracles::dipolar_mc(means, var, 2'000'000, 7);
    const double chi_nloc_mc = cdd * (mc[0] + mc[1] - mc[2] - mc[3]) / si::hbar;
    const double chi_nz_ab_mc = cdd / (2.0 * si::hbar) * (mc[0] - mc[1] + mc[2] - mc[3]);
    const double chi_nz_ba_mc = cdd / (2.0 * si::hbar) * (mc[0] - mc[1] - mc[2] + mc[3]);
    CHECK(std::abs(r.chi_nloc / chi_nloc_mc - 1.0) < 1e-3);
    CHECK(std::abs(r.d_lalb / mc[0] - 1.0) < 1e-3);
    CHECK(std::abs(r.d_ralb / mc[2] - 1.0) < 1e-3);
    CHECK(std::abs(r.d_larb / mc[3] - 1.0) < 1e-3);
    // Mirror symmetry: D_LALB = D_RARB so the two chi_Nz differ only through D_RALB - D_LARB.
    CHECK(std::abs(r.d_lalb / r.d_rarb - 1.0) < 1e-8);
    CHECK(std::abs(r.chi_nz_ab - chi_nz_ab_mc) < 1e-3 * std::abs(r.chi_nloc));
    CHECK(std::abs(r.chi_nz_ba - chi_nz_ba_mc) < 1e-3 * std::abs(r.chi_nloc));
    CHECK(std::abs(r.chi_nz_ab + r.chi_nz_ba - cdd / si::hbar * (r.d_lalb - r.d_rarb)) < 1e-12 * std::abs(r.chi_nloc));

    const double self = oracles::dipolar_realspace(Eigen::Vector3d::Zero(), var);
    const double lr = oracles::dipolar_realspace(cl - cr, var);
    CHECK(std::abs(r.d_self / self - 1.0) < 1e-4);
    CHECK(std::abs(r.d_lr / lr - 1.0) < 1e-4);
    CHECK(std::abs(r.chi_loc / (cdd * (self - lr) / si::hbar) - 1.0) < 1e-3);
    for (std::size_t k = 0; k < means.size(); ++k) {
        const double rs = oracles::dipolar_realspace(means[k], var);
        CHECK(std::abs(mc[k] / rs - 1.0) < 1e-3);
    }

    const CouplingResult zero = couplings_dw(m, m, off, 0.0);
    CHECK(zero.chi_loc == 0.0);
    CHECK(zero.chi_nloc == 0.0);
    const double g = 4.0 * si::pi * si::hbar * si::hbar * si::a0 / m.mass;
    CHECK(std::abs(zero.chi_cont_per_a0 / (g * contact_integral(m) / si::hbar) - 1.0) < 1e-14);
}

TEST_CASE("CGB coupling") {
    // G / (c^4 hbar) with CODATA 2018 constants.
    CHECK(cgb_coupling(1.0, 1.0) == doctest::Approx(7.835105e-11).epsilon(1e-6));
    CHECK(cgb_coupling(1.0, 2.0) == doctest::Approx(0.5 * cgb_coupling(1.0, 1.0)).epsilon(1e-15));
    CHECK(cgb_coupling(1e-3, 1.0) == doctest::Approx(1e-6 * cgb_coupling(1.0, 1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(cgb_coupling(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(cgb_coupling(1.0, -1.0), DomainError);
}

TEST_CASE("BMV couplings") {
    const double m = 1e-14, d = 1e-4;
    const double far = -si::G * m * m / d / si::hbar;
    CHECK(std::abs(bmv_couplings(m, d, 100.0 * d).chi_nloc / far - 20000.0 / 20301.0) < 1e-12);
    CHECK(std::abs(bmv_couplings(m, d, 1e6 * d).chi_nloc / far - 1.0) < 1e-5);
    CHECK(std::abs(bmv_couplings(m, d, 1e-6 * d).chi_nloc / far) < 1e-11);
    const BmvCouplings b = bmv_couplings(m, d, 3.0 * d, 0.0);
    CHECK(b.chi_loc == doctest::Approx(si::G * m * m / (3.0 * d) / si::hbar).epsilon(1e-14));
    CHECK(b.chi_nz == doctest::Approx(-si::G * m * m * 3.0 / (7.0 * d) / si::hbar).epsilon(1e-14));
    CHECK_THROWS_AS(bmv_couplings(m, 0.0, d), DomainError);
}
