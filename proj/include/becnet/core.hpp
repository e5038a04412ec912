#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace becnet {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

enum class Axis { x = 0, y = 1, z = 2 };

inline constexpr Axis kAxes[3] = {Axis::x, Axis::y, Axis::z};

inline char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

// Default numerical tolerances. Every module reads its thresholds from here.
struct Tolerances {
    double hermitian = 1e-12;
    double unitary = 1e-10;
    double psd = 1e-9;
    double fisher_eps_p = 1e-12;
    double degenerate = 1e-12;
    double oracle_check = 1e-8;
    double refinement = 1e-6;
    std::size_t oracle_cap = 1'000'000;
};

inline const Tolerances& defaults() {
    static const Tolerances t{};
    return t;
}

// CODATA 2018.
namespace si {
inline constexpr double G = 6.67430e-11;
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double mu0 = 1.25663706212e-6;
inline constexpr double mu_B = 9.2740100783e-24;
inline constexpr double a0 = 5.29177210903e-11;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace si

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error {
    using Error::Error;
};
struct SizeCapError : Error {
    using Error::Error;
};
struct IncompleteMomentTable : Error {
    using Error::Error;
};
struct DivergenceError : Error {
    using Error::Error;
};
struct RefinementError : Error {
    using Error::Error;
};

// x^n for integer n. Binary powering below |n| = 64, log-space with sign
// tracking above.
template <typename Scalar>
Scalar int_pow(Scalar x, long n) {
    using std::abs;
    using std::exp;
    using std::log;
    if (n < 0) return Scalar(1) / int_pow(x, -n);
    if (n < 64) {
        Scalar r(1);
        Scalar b = x;
        for (long k = n; k > 0; k >>= 1) {
            if (k & 1) r *= b;
            b *= b;
        }
        return r;
    }
    if (x == Scalar(0)) return Scalar(0);
    const Scalar mag = exp(Scalar(n) * log(abs(x)));
    return (x < Scalar(0) && (n & 1)) ? -mag : mag;
}

inline cplx int_pow(cplx x, long n) {
    if (n < 0) return 1.0 / int_pow(x, -n);
    if (n < 64) {
        cplx r(1.0), b = x;
        for (long k = n; k > 0; k >>= 1) {
            if (k & 1) r *= b;
            b *= b;
        }
        return r;
    }
    const double m = std::abs(x);
    if (m == 0.0) return 0.0;
    return std::polar(std::exp(static_cast<double>(n) * std::log(m)),
                      static_cast<double>(n) * std::arg(x));
}

}  // namespace becnet
