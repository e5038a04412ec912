#include "becnet/spin.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace becnet {

EnsembleDim::EnsembleDim(int n_atoms) : n_(n_atoms) {
    if (n_atoms < 1) throw DomainError("EnsembleDim: N must be >= 1, got " + std::to_string(n_atoms));
}

const MatrixXcd& SpinOps::operator[](Axis a) const {
    switch (a) {
        case Axis::x: return jx;
        case Axis::y: return jy;
        default: return jz;
    }
}

VectorXd jz_diagonal(const EnsembleDim& d) {
    VectorXd mu(d.dim());
    for (int k = 0; k < d.dim(); ++k) mu[k] = d.mu(k);
    return mu;
}

VectorXd ladder(const EnsembleDim& d) {
    const double s = d.spin();
    VectorXd l(d.n());
    for (int k = 1; k <= d.n(); ++k) {
        const double m = d.mu(k);
        l[k - 1] = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    return l;
}

SpinOps build_spin_ops(const EnsembleDim& d) {
    const int n = d.dim();
    const VectorXd l = ladder(d);
    MatrixXcd jp = MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) jp(k - 1, k) = l[k - 1];
    const MatrixXcd jm = jp.adjoint();
    SpinOps ops;
    ops.jx = 0.5 * (jp + jm);
    ops.jy = cplx(0.0, -0.5) * (jp - jm);
    ops.jz = jz_diagonal(d).cast<cplx>().asDiagonal();
    return ops;
}

VectorXcd apply_jplus(const EnsembleDim& d, const VectorXcd& v) {
    const VectorXd l = ladder(d);
    VectorXcd out = VectorXcd::Zero(d.dim());
    out.head(d.n()) = l.cwiseProduct(v.tail(d.n()));
    return out;
}

VectorXcd apply_jminus(const EnsembleDim& d, const VectorXcd& v) {
    const VectorXd l = ladder(d);
    VectorXcd out = VectorXcd::Zero(d.dim());
    out.tail(d.n()) = l.cwiseProduct(v.head(d.n()));
    return out;
}

VectorXcd apply_spin(const EnsembleDim& d, Axis a, const VectorXcd& v) {
    switch (a) {
        case Axis::x: return 0.5 * (apply_jplus(d, v) + apply_jminus(d, v));
        case Axis::y: return cplx(0.0, -0.5) * (apply_jplus(d, v) - apply_jminus(d, v));
        default: return jz_diagonal(d).cwiseProduct(v);
    }
}

LocalState css_x(const EnsembleDim& d) {
    const double n = d.n();
    LocalState psi(d.dim());
    for (int k = 0; k < d.dim(); ++k) {
        const double lg = std::lgamma(n + 1) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1);
        psi[k] = std::exp(0.5 * lg - 0.5 * n * std::log(2.0));
    }
    psi.normalize();
    return psi;
}

LocalState dicke(const EnsembleDim& d, int k) {
    if (k < 0 || k >= d.dim()) throw DomainError("dicke: index out of range");
    LocalState psi = LocalState::Zero(d.dim());
    psi[k] = 1.0;
    return psi;
}

namespace {

// LU factorization with partial pivoting of a tridiagonal matrix, following
// the LAPACK gttrf/gttrs layout.
struct TridiagLU {
    std::vector<double> dl, d, du, du2;
    std::vector<char> swapped;

    TridiagLU(double shift, const VectorXd& off, double tiny) {
        const int n = static_cast<int>(off.size()) + 1;
        d.assign(n, -shift);
        dl.assign(off.data(), off.data() + off.size());
        du = dl;
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        swapped.assign(n > 1 ? n - 1 : 0, 0);
        auto guard = [tiny](double& p) {
            if (std::abs(p) < tiny) p = std::signbit(p) ? -tiny : tiny;
        };
        for (int i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                guard(d[i]);
                const double f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                const double f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                const double t = du[i];
                du[i] = d[i + 1];
                d[i + 1] = t - f * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        guard(d[n - 1]);
    }

    void solve(VectorXd& b) const {
        const int n = static_cast<int>(d.size());
        for (int i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double t = b[i] - dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = t;
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (int i = n - 3; i >= 0; --i) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
};

}  // namespace

MatrixXd jx_eigenvectors(const EnsembleDim& d) {
    const int n = d.dim();
    const VectorXd off = 0.5 * ladder(d);
    const double tiny = std::numeric_limits<double>::epsilon() * (d.spin() + 1.0);

    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorXd start(n);
    for (int k = 0; k < n; ++k) start[k] = u(rng);

    MatrixXd v(n, n);
    for (int j = 0; j < n; ++j) {
        const TridiagLU lu(d.mu(j), off, tiny);
        VectorXd x = start;
        for (int it = 0; it < 3; ++it) {
            lu.solve(x);
            x /= x.norm();
        }
        Eigen::Index imax;
        x.cwiseAbs().maxCoeff(&imax);
        if (x[imax] < 0) x = -x;
        v.col(j) = x;
    }
    return v;
}

Rotation::Rotation(const EnsembleDim& d) : dim_(d), v_(jx_eigenvectors(d)), mu_(jz_diagonal(d)) {}

LocalState Rotation::apply(const LocalState& state, Axis axis, double angle) const {
    if (state.size() != dim_.dim()) throw DomainError("rotate: state dimension mismatch");
    const auto phase = [&](double a) {
        VectorXcd p(dim_.dim());
        for (int k = 0; k < dim_.dim(); ++k) p[k] = std::polar(1.0, -a * mu_[k]);
        return p;
    };
    if (axis == Axis::z) return phase(angle).cwiseProduct(state);
    // exp(-i a Jy) = U exp(-i a Jx) U^dagger with U = exp(-i pi/2 Jz).
    LocalState psi = axis == Axis::y ? phase(-0.5 * si::pi).cwiseProduct(state) : state;
    const auto real_mul = [](const auto& m, const VectorXcd& x) -> VectorXcd {
        VectorXcd y(m.rows());
        y.real() = m * x.real();
        y.imag() = m * x.imag();
        return y;
    };
    VectorXcd c = phase(angle).cwiseProduct(real_mul(v_.transpose(), psi));
    psi = real_mul(v_, c);
    if (axis == Axis::y) psi = phase(0.5 * si::pi).cwiseProduct(psi);
    return psi;
}

MatrixXcd Rotation::matrix(Axis axis, double angle) const {
    const int n = dim_.dim();
    MatrixXcd u(n, n);
    for (int k = 0; k < n; ++k) u.col(k) = apply(dicke(dim_, k), axis, angle);
    return u;
}

LocalState rotate(const LocalState& state, Axis axis, double angle) {
    const EnsembleDim d(static_cast<int>(state.size()) - 1);
    if (axis == Axis::z) {
        LocalState out(state.size());
        for (int k = 0; k < d.dim(); ++k) out[k] = std::polar(1.0, -angle * d.mu(k)) * state[k];
        return out;
    }
    return Rotation(d).apply(state, axis, angle);
}

}  // namespace becnet
