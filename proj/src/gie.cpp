#include "becnet/gie.hpp"

#include <cmath>

namespace becnet {

namespace {
void check_sites(int m) {
    if (m < 2) throw DomainError("gie: network needs M >= 2");
}
}  // namespace

MomentTable gie_moments(const EnsembleDim& d, int n_sites, const Couplings& c, double t) {
    check_sites(n_sites);
    const long n = d.n();
    const long m = n_sites;
    const double nn = static_cast<double>(n);
    const double a = c.local() * t;
    const double b = c.chi_nloc * t;
    const double ca = std::cos(a);

    const double half_all = int_pow(std::cos(0.5 * b), n * (m - 1));
    const double full_all = int_pow(std::cos(b), n * (m - 1));
    const double half_rest = int_pow(std::cos(0.5 * b), n * (m - 2));
    const double full_rest = int_pow(std::cos(b), n * (m - 2));

    const double jx = 0.5 * nn * int_pow(ca, n - 1) * half_all;
    const double base = nn * (nn + 1.0) / 8.0;
    // N = 1 has no intra-site pair terms; skip the negative powers.
    const double twist = n < 2 ? 0.0 : nn * (nn - 1.0) / 8.0 * int_pow(std::cos(2.0 * a), n - 2) * full_all;
    const double yz = n < 2 ? 0.0 : nn * (nn - 1.0) / 4.0 * int_pow(ca, n - 2) * std::sin(a) * half_all;

    const double minus = int_pow(std::cos(a - 0.5 * b), 2 * n - 2);
    const double plus = int_pow(std::cos(a + 0.5 * b), 2 * n - 2) * full_rest;
    const double cross_xx = nn * nn / 8.0 * (minus + plus);
    const double cross_yy = nn * nn / 8.0 * (minus - plus);
    const double cross_yz =
        nn * nn / 4.0 * std::sin(0.5 * b) * int_pow(std::cos(0.5 * b), n - 1) * int_pow(ca, n - 1) * half_rest;

    MomentTable table(d.n(), n_sites, t);
    for (int i = 0; i < n_sites; ++i) {
        table.set_mean(i, Axis::x, jx);
        table.set_mean(i, Axis::y, 0.0);
        table.set_mean(i, Axis::z, 0.0);
        table.set_second(i, Axis::x, i, Axis::x, base + twist);
        table.set_second(i, Axis::y, i, Axis::y, base - twist);
        table.set_second(i, Axis::z, i, Axis::z, 0.25 * nn);
        table.set_second(i, Axis::x, i, Axis::y, 0.0);
        table.set_second(i, Axis::x, i, Axis::z, 0.0);
        table.set_second(i, Axis::y, i, Axis::z, yz);
        for (int j = 0; j < i; ++j) {
            table.set_second(i, Axis::x, j, Axis::x, cross_xx);
            table.set_second(i, Axis::y, j, Axis::y, cross_yy);
            table.set_second(i, Axis::z, j, Axis::z, 0.0);
            table.set_second(i, Axis::y, j, Axis::z, cross_yz);
            table.set_second(i, Axis::z, j, Axis::y, cross_yz);
            for (Axis p : {Axis::y, Axis::z}) {
                table.set_second(i, Axis::x, j, p, 0.0);
                table.set_second(i, p, j, Axis::x, 0.0);
            }
        }
    }
    return table;
}

MatrixXcd gie_reduced_state(const EnsembleDim& d, int n_sites, const Couplings& c, double t) {
    check_sites(n_sites);
    const LocalState psi = css_x(d);
    const long n = d.n();
    const double a = c.local() * t;
    const double b = c.chi_nloc * t;
    MatrixXcd rho(d.dim(), d.dim());
    for (int p = 0; p < d.dim(); ++p) {
        for (int q = 0; q < d.dim(); ++q) {
            const double mp = d.mu(p), mq = d.mu(q);
            const double env = int_pow(std::cos(0.5 * b * (mp - mq)), n * (n_sites - 1));
            rho(p, q) = psi[p] * std::conj(psi[q]) * env * std::polar(1.0, -a * (mp * mp - mq * mq));
        }
    }
    return rho;
}

}  // namespace becnet
