#include "becnet/metrology.hpp"

#include "becnet/spin.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace becnet {

Quadrature min_quadrature(double var_y, double var_z, double cov_yz) {
    // Var(c Y - s Z) = mean + half_diff cos(2t) - cov sin(2t).
    const double mean = 0.5 * (var_y + var_z);
    const double half_diff = 0.5 * (var_y - var_z);
    const double r = std::hypot(half_diff, cov_yz);
    if (r <= defaults().degenerate * std::max(std::abs(mean), 1e-300)) return {mean - r, 0.0, true};
    double theta = 0.5 * std::atan2(cov_yz, -half_diff);
    if (theta >= 0.5 * si::pi) theta -= si::pi;
    return {mean - r, theta, false};
}

MatrixXd covariance(const MomentTable& m) {
    m.require_complete();
    MatrixXd g = m.second() - m.first() * m.first().transpose();
    return 0.5 * (g + g.transpose());
}

Eigen::Matrix3d collective_covariance(const MatrixXd& cov) {
    Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
    const Eigen::Index m = cov.rows() / 3;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) c += cov.block<3, 3>(3 * i, 3 * j);
    return c;
}

namespace {

Squeezing wineland(double n_total, double polarization, double var_y, double var_z, double cov_yz) {
    const double p2 = polarization * polarization;
    if (!(p2 > 0.0)) throw DivergenceError("squeezing: zero polarization along x");
    const Quadrature q = min_quadrature(var_y, var_z, cov_yz);
    const double xi2 = n_total * q.variance / p2;
    if (!std::isfinite(xi2)) throw DivergenceError("squeezing: polarization too small, xi^2 diverges");
    return {xi2, q.theta, q.degenerate};
}

}  // namespace

Squeezing local_squeezing(const MomentTable& m, int site) {
    if (site < 0 || site >= m.n_sites()) throw DomainError("local_squeezing: site out of range");
    const MatrixXd g = covariance(m);
    const int y = MomentTable::index(site, Axis::y), z = MomentTable::index(site, Axis::z);
    return wineland(m.n_atoms(), m.mean(site, Axis::x), g(y, y), g(z, z), g(y, z));
}

Squeezing collective_squeezing(const MomentTable& m) {
    const Eigen::Matrix3d c = collective_covariance(covariance(m));
    double px = 0.0;
    for (int i = 0; i < m.n_sites(); ++i) px += m.mean(i, Axis::x);
    return wineland(static_cast<double>(m.n_atoms()) * m.n_sites(), px, c(1, 1), c(2, 2), c(1, 2));
}

VectorXd local_gamma(const MatrixXd& cov) {
    const Eigen::Index m = cov.rows() / 3;
    VectorXd out(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov.block<3, 3>(3 * i, 3 * i), Eigen::EigenvaluesOnly);
        out[i] = es.eigenvalues().maxCoeff();
    }
    return out;
}

double gamma_site_spread(const MatrixXd& cov) {
    const VectorXd g = local_gamma(cov);
    const double top = g.cwiseAbs().maxCoeff();
    return top > 0.0 ? (g.maxCoeff() - g.minCoeff()) / top : 0.0;
}

double fisher_collective_pure(const Eigen::Matrix3d& collective_cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(collective_cov, Eigen::EigenvaluesOnly);
    return 4.0 * es.eigenvalues().maxCoeff();
}

MatrixXd fisher_matrix(const MatrixXcd& rho, const std::vector<MatrixXcd>& ops, double eps_p) {
    const Eigen::Index n = rho.rows();
    if (rho.cols() != n) throw DomainError("fisher_matrix: rho must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("fisher_matrix: rho not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()));
    const VectorXd& p = es.eigenvalues();
    if (p.minCoeff() < -defaults().psd)
        throw DomainError("fisher_matrix: rho has eigenvalue " + std::to_string(p.minCoeff()) + " < 0");
    if (std::abs(p.sum() - 1.0) > 1e-9) throw DomainError("fisher_matrix: rho must have unit trace");

    MatrixXd w = MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
            const double s = p[k] + p[l];
            if (s > eps_p) w(k, l) = (p[k] - p[l]) * (p[k] - p[l]) / s;
        }

    std::vector<MatrixXcd> rotated;
    rotated.reserve(ops.size());
    for (const MatrixXcd& a : ops) {
        if (a.rows() != n || a.cols() != n) throw DomainError("fisher_matrix: operator dimension mismatch");
        rotated.push_back(es.eigenvectors().adjoint() * a * es.eigenvectors());
    }
    const auto k = static_cast<Eigen::Index>(ops.size());
    MatrixXd f(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            const double v =
                2.0 * (w.array() * (rotated[a].array() * rotated[b].array().conjugate()).real()).sum();
            f(a, b) = f(b, a) = v;
        }
    return f;
}

double fisher_local(const MatrixXcd& rho) {
    const SpinOps so = build_spin_ops(EnsembleDim(static_cast<int>(rho.rows()) - 1));
    const MatrixXd f = fisher_matrix(rho, {so.jx, so.jy, so.jz});
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(f, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

WitnessRecord witnesses(const WitnessInputs& in) {
    if (!(in.f_col > 0.0)) throw DomainError("witnesses: F_col must be positive");
    if (in.n_atoms < 1 || in.n_sites < 2) throw DomainError("witnesses: need N >= 1 and M >= 2");
    WitnessRecord r;
    r.xi2_col = in.xi2_col;
    r.gamma_loc = in.gamma_loc;
    r.f_col = in.f_col;
    r.c1 = 4.0 * in.n_sites * in.gamma_loc / in.f_col;
    r.c2 = 4.0 * in.xi2_col * in.gamma_loc / in.n_atoms;
    if (in.f_loc) {
        r.f_loc = *in.f_loc;
        r.c1_tilde = in.n_sites * *in.f_loc / in.f_col;
        r.c2_tilde = in.xi2_col * *in.f_loc / in.n_atoms;
    }
    return r;
}

WitnessRecord evaluate_pure(const MomentTable& m, std::optional<double> f_loc) {
    const MatrixXd cov = covariance(m);
    WitnessInputs in;
    in.gamma_loc = local_gamma(cov).maxCoeff();
    in.f_col = fisher_collective_pure(collective_covariance(cov));
    in.xi2_col = collective_squeezing(m).xi2;
    in.n_atoms = m.n_atoms();
    in.n_sites = m.n_sites();
    in.f_loc = f_loc;
    WitnessRecord r = witnesses(in);
    r.tau = m.t();
    r.xi2_loc = local_squeezing(m, 0).xi2;
    return r;
}

}  // namespace becnet
