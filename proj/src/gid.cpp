#include "becnet/gid.hpp"

#include "becnet/metrology.hpp"

#include <cmath>

namespace becnet {

LocalState prepare_local(const EnsembleDim& d, double tau_rot) {
    LocalState psi = css_x(d);
    for (int k = 0; k < d.dim(); ++k) psi[k] *= std::polar(1.0, -tau_rot * d.mu(k) * d.mu(k));
    return psi;
}

OptimalAngle optimal_angle(const LocalState& psi) {
    const EnsembleDim d(static_cast<int>(psi.size()) - 1);
    const VectorXcd y = apply_spin(d, Axis::y, psi);
    const VectorXcd z = apply_spin(d, Axis::z, psi);
    const double my = psi.dot(y).real(), mz = psi.dot(z).real();
    const Quadrature q =
        min_quadrature(y.squaredNorm() - my * my, z.squaredNorm() - mz * mz, y.dot(z).real() - my * mz);
    return {q.theta, q.degenerate};
}

GidAngles resolve_angles(const LocalState& prepared, const GidSchedule& s) {
    if (s.theta.has_value() == s.beta.has_value())
        throw DomainError("GidSchedule: give exactly one of theta and beta");
    if (!(s.tau_rot >= 0.0) || !std::isfinite(s.tau_rot)) throw DomainError("GidSchedule: tau_rot must be >= 0");
    const OptimalAngle o = optimal_angle(prepared);
    GidAngles a{};
    a.theta0 = o.theta0;
    a.degenerate = o.degenerate;
    if (s.theta) {
        a.theta = *s.theta;
        a.beta = a.theta - a.theta0 - 0.5 * si::pi;
    } else {
        a.beta = *s.beta;
        a.theta = a.beta + a.theta0 + 0.5 * si::pi;
    }
    return a;
}

VQuantities v_quantities(const LocalState& psi, double theta, double tau) {
    const EnsembleDim d(static_cast<int>(psi.size()) - 1);
    const LocalState r = Rotation(d).apply(psi, Axis::x, theta);
    VectorXcd fwd(d.dim()), back(d.dim());
    for (int k = 0; k < d.dim(); ++k) {
        fwd[k] = std::polar(1.0, tau * d.mu(k)) * r[k];
        back[k] = std::conj(std::polar(1.0, tau * d.mu(k))) * r[k];
    }
    VQuantities v{};
    v.v_z = back.dot(r);
    for (Axis a : kAxes) {
        const VectorXcd ja = apply_spin(d, a, r);
        // <r| J e^{i tau Jz} |r> and <r| e^{i tau Jz} J |r>.
        v.az[static_cast<int>(a)] = ja.dot(fwd);
        v.za[static_cast<int>(a)] = back.dot(ja);
    }
    return v;
}

GidEngine::GidEngine(const EnsembleDim& d, int n_sites, const GidSchedule& s)
    : dim_(d), m_(n_sites), prepared_(prepare_local(d, s.tau_rot)) {
    if (n_sites < 2) throw DomainError("gid: network needs M >= 2");
    angles_ = resolve_angles(prepared_, s);
    rotated_ = Rotation(d).apply(prepared_, Axis::x, angles_.theta);
    mu_ = jz_diagonal(d);
    prob_ = rotated_.cwiseAbs2();
    const VectorXd l = ladder(d);
    raise_overlap_.resize(d.n());
    for (int k = 1; k <= d.n(); ++k) raise_overlap_[k - 1] = std::conj(rotated_[k - 1]) * l[k - 1] * rotated_[k];
    const VectorXcd up = apply_jplus(d, rotated_);
    const VectorXcd down = apply_jminus(d, rotated_);
    a1_ = rotated_.dot(up);
    pp_ = rotated_.dot(apply_jplus(d, up));
    VectorXcd shifted(d.dim());
    for (int k = 0; k < d.dim(); ++k) shifted[k] = (2.0 * mu_[k] + 1.0) * rotated_[k];
    anti_ = rotated_.dot(apply_jplus(d, shifted));
    ladder_sum_ = up.squaredNorm() + down.squaredNorm();
    jz_ = prob_.dot(mu_);
    jz2_ = prob_.dot(mu_.cwiseAbs2());
}

cplx GidEngine::g(double phi) const {
    cplx s = 0.0;
    for (int k = 0; k < dim_.dim(); ++k) s += prob_[k] * std::polar(1.0, phi * mu_[k]);
    return s;
}

cplx GidEngine::b(double phi) const {
    cplx s = 0.0;
    for (int k = 1; k <= dim_.n(); ++k) s += raise_overlap_[k - 1] * std::polar(1.0, phi * mu_[k]);
    return s;
}

cplx GidEngine::dz(double phi) const {
    cplx s = 0.0;
    for (int k = 0; k < dim_.dim(); ++k) s += prob_[k] * mu_[k] * std::polar(1.0, phi * mu_[k]);
    return s;
}

VQuantities GidEngine::v(double tau) const {
    return v_quantities(prepared_, angles_.theta, tau);
}

MomentTable GidEngine::moments(double tau) const {
    const long m = m_;
    const cplx g1 = g(tau), g2 = g(2.0 * tau);
    const cplx g1_all = int_pow(g1, m - 1), g1_rest = int_pow(g1, m - 2);
    const cplx g2_all = int_pow(g2, m - 1), g2_rest = int_pow(g2, m - 2);
    const cplx bp = b(tau);
    const cplx bm = b(-tau);

    const cplx plus = a1_ * g1_all;
    const cplx pp = pp_ * g2_all;
    const cplx anti = anti_ * g1_all;
    // <J+_i J+_j>, <J+_i J-_j>, <J+_i Jz_j> for i != j.
    const cplx cross_pp = bp * std::polar(1.0, tau) * bp * g2_rest;
    const double cross_pm = std::norm(bm);
    const cplx cross_pz = a1_ * dz(tau) * g1_rest;

    MomentTable t(dim_.n(), m_, tau);
    for (int i = 0; i < m_; ++i) {
        t.set_mean(i, Axis::x, plus.real());
        t.set_mean(i, Axis::y, plus.imag());
        t.set_mean(i, Axis::z, jz_);
        t.set_second(i, Axis::x, i, Axis::x, 0.25 * (2.0 * pp.real() + ladder_sum_));
        t.set_second(i, Axis::y, i, Axis::y, 0.25 * (ladder_sum_ - 2.0 * pp.real()));
        t.set_second(i, Axis::z, i, Axis::z, jz2_);
        t.set_second(i, Axis::x, i, Axis::y, 0.5 * pp.imag());
        t.set_second(i, Axis::x, i, Axis::z, 0.5 * anti.real());
        t.set_second(i, Axis::y, i, Axis::z, 0.5 * anti.imag());
        for (int j = 0; j < m_; ++j) {
            if (j == i) continue;
            t.set_second(i, Axis::x, j, Axis::x, 0.5 * (cross_pp.real() + cross_pm));
            t.set_second(i, Axis::y, j, Axis::y, 0.5 * (cross_pm - cross_pp.real()));
            t.set_second(i, Axis::x, j, Axis::y, 0.5 * cross_pp.imag());
            t.set_second(i, Axis::x, j, Axis::z, cross_pz.real());
            t.set_second(i, Axis::y, j, Axis::z, cross_pz.imag());
            t.set_second(i, Axis::z, j, Axis::z, jz_ * jz_);
        }
    }
    return t;
}

VectorXcd GidEngine::envelope(double tau) const {
    const int n = dim_.n();
    VectorXcd e(2 * n + 1);
    // G(phi) = e^{i phi S} sum_k p_k e^{-i phi k}, evaluated by Horner; G(-phi) = conj G(phi).
    for (int k = 0; k <= n; ++k) {
        const double phi = tau * k;
        const cplx w = std::polar(1.0, -phi);
        cplx acc = 0.0;
        for (int j = n; j >= 0; --j) acc = acc * w + prob_[j];
        const cplx gk = int_pow(acc * std::polar(1.0, 0.5 * phi * n), m_ - 1);
        e[n + k] = gk;
        e[n - k] = std::conj(gk);
    }
    return e;
}

MatrixXcd GidEngine::reduced_state(double tau) const {
    const int n = dim_.n();
    const VectorXcd e = envelope(tau);
    MatrixXcd rho(dim_.dim(), dim_.dim());
    for (int p = 0; p < dim_.dim(); ++p)
        for (int q = 0; q < dim_.dim(); ++q) rho(p, q) = rotated_[p] * std::conj(rotated_[q]) * e[p - q + n];
    return rho;
}

double GidEngine::purity(double tau) const {
    const int n = dim_.n();
    const VectorXcd e = envelope(tau);
    double s = 0.0;
    for (int p = 0; p < dim_.dim(); ++p)
        for (int q = 0; q < dim_.dim(); ++q) s += prob_[p] * prob_[q] * std::norm(e[p - q + n]);
    return s;
}

MomentTable gid_moments(const EnsembleDim& d, int n_sites, const GidSchedule& s, double tau) {
    return GidEngine(d, n_sites, s).moments(tau);
}

MatrixXcd reduced_state_gid(const EnsembleDim& d, const GidSchedule& s, double tau) {
    return GidEngine(d, 2, s).reduced_state(tau);
}

}  // namespace becnet
