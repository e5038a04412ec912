#pragma once

#include "becnet/core.hpp"

namespace becnet {

// Basis convention used throughout: jz eigenbasis ordered by descending
// eigenvalue, index k <-> mu = N/2 - k.
class EnsembleDim {
public:
    explicit EnsembleDim(int n_atoms);

    int n() const { return n_; }
    int dim() const { return n_ + 1; }
    double spin() const { return 0.5 * n_; }
    // 2*mu_k as an exact integer.
    int two_mu(int k) const { return n_ - 2 * k; }
    double mu(int k) const { return 0.5 * two_mu(k); }

private:
    int n_;
};

struct SpinOps {
    MatrixXcd jx, jy, jz;
    const MatrixXcd& operator[](Axis a) const;
};

using LocalState = VectorXcd;

SpinOps build_spin_ops(const EnsembleDim& d);

// Eigenvalues of jz in basis order.
VectorXd jz_diagonal(const EnsembleDim& d);

// l[k-1] = <mu_{k-1}| J+ |mu_k> for k = 1..N.
VectorXd ladder(const EnsembleDim& d);

// Matrix-free products with the spin operators, O(N).
VectorXcd apply_jplus(const EnsembleDim& d, const VectorXcd& v);
VectorXcd apply_jminus(const EnsembleDim& d, const VectorXcd& v);
VectorXcd apply_spin(const EnsembleDim& d, Axis a, const VectorXcd& v);

LocalState css_x(const EnsembleDim& d);

// |mu> basis vector.
LocalState dicke(const EnsembleDim& d, int k);

// Real orthogonal eigenvectors of jx, column j belonging to eigenvalue mu_j.
// The eigenvalues are known exactly, so the vectors come from inverse
// iteration on the tridiagonal matrix, O(N^2) overall.
MatrixXd jx_eigenvectors(const EnsembleDim& d);

// exp(-i angle J^axis) |state>.
LocalState rotate(const LocalState& state, Axis axis, double angle);

// Reusable form of rotate for a fixed N: the jx eigenvectors are computed
// once at construction.
class Rotation {
public:
    explicit Rotation(const EnsembleDim& d);

    LocalState apply(const LocalState& state, Axis axis, double angle) const;
    MatrixXcd matrix(Axis axis, double angle) const;
    const EnsembleDim& dim() const { return dim_; }

private:
    EnsembleDim dim_;
    MatrixXd v_;
    VectorXd mu_;
};

}  // namespace becnet
