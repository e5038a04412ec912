#include "becnet/oracle.hpp"

#include <cmath>
#include <string>

namespace becnet {

std::size_t tensor_size(const EnsembleDim& d, int n_sites, std::size_t cap) {
    if (n_sites < 1) throw DomainError("oracle: need at least one site");
    std::size_t total = 1;
    for (int i = 0; i < n_sites; ++i) {
        total *= static_cast<std::size_t>(d.dim());
        if (total > cap)
            throw SizeCapError("oracle: (N+1)^M exceeds cap of " + std::to_string(cap) + " amplitudes (N=" +
                               std::to_string(d.n()) + ", M=" + std::to_string(n_sites) + ")");
    }
    return total;
}

GlobalState::GlobalState(const EnsembleDim& d, int n_sites, VectorXcd amplitudes)
    : dim_(d), m_(n_sites), amp_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amp_.size()) != tensor_size(d, n_sites, static_cast<std::size_t>(-1)))
        throw DomainError("GlobalState: amplitude count does not match (N+1)^M");
}

GlobalState GlobalState::product(const std::vector<LocalState>& locals, std::size_t cap) {
    if (locals.empty()) throw DomainError("GlobalState::product: no factors");
    const EnsembleDim d(static_cast<int>(locals.front().size()) - 1);
    tensor_size(d, static_cast<int>(locals.size()), cap);
    VectorXcd amp = locals.front();
    for (std::size_t i = 1; i < locals.size(); ++i) {
        if (locals[i].size() != d.dim()) throw DomainError("GlobalState::product: factor dimensions differ");
        VectorXcd next(amp.size() * d.dim());
        for (Eigen::Index a = 0; a < amp.size(); ++a) next.segment(a * d.dim(), d.dim()) = amp[a] * locals[i];
        amp = std::move(next);
    }
    return GlobalState(d, static_cast<int>(locals.size()), std::move(amp));
}

GlobalState GlobalState::product(const LocalState& local, int n_sites, std::size_t cap) {
    return product(std::vector<LocalState>(static_cast<std::size_t>(n_sites), local), cap);
}

Eigen::Index GlobalState::stride(int site) const {
    Eigen::Index s = 1;
    for (int i = site + 1; i < m_; ++i) s *= dim_.dim();
    return s;
}

namespace {

void check_site(const GlobalState& s, int site) {
    if (site < 0 || site >= s.n_sites())
        throw DomainError("oracle: site " + std::to_string(site) + " out of range [0, " +
                          std::to_string(s.n_sites()) + ")");
}

// Applies op to one tensor factor of v. op need not be unitary.
VectorXcd apply_factor(const GlobalState& s, const VectorXcd& v, int site, const MatrixXcd& op) {
    const Eigen::Index dim = s.dim().dim();
    const Eigen::Index st = s.stride(site);
    const Eigen::Index block = dim * st;
    VectorXcd out(v.size());
    for (Eigen::Index o = 0; o < v.size(); o += block) {
        Eigen::Map<const MatrixXcd> in(v.data() + o, st, dim);
        Eigen::Map<MatrixXcd> res(out.data() + o, st, dim);
        res.noalias() = in * op.transpose();
    }
    return out;
}

}  // namespace

GlobalState evolve_diagonal(const GlobalState& s, const Couplings& c, double t) {
    const int m = s.n_sites();
    const int dim = s.dim().dim();
    std::vector<int> digit(m, 0);
    VectorXcd amp = s.amplitudes();
    for (Eigen::Index idx = 0; idx < amp.size(); ++idx) {
        long long tot = 0, sq = 0;
        for (int i = 0; i < m; ++i) {
            const long long tm = s.dim().two_mu(digit[i]);
            tot += tm;
            sq += tm * tm;
        }
        const double sum_sq = 0.25 * static_cast<double>(sq);
        const double sum_pairs = 0.125 * static_cast<double>(tot * tot - sq);
        amp[idx] *= std::polar(1.0, -t * (c.local() * sum_sq + c.chi_nloc * sum_pairs));
        for (int i = m - 1; i >= 0; --i) {
            if (++digit[i] < dim) break;
            digit[i] = 0;
        }
    }
    return GlobalState(s.dim(), m, std::move(amp));
}

GlobalState apply_local(const GlobalState& s, int site, const MatrixXcd& gate) {
    check_site(s, site);
    if (gate.rows() != s.dim().dim() || gate.cols() != s.dim().dim())
        throw DomainError("apply_local: gate dimension mismatch");
    const double dev =
        (gate.adjoint() * gate - MatrixXcd::Identity(gate.rows(), gate.cols())).cwiseAbs().maxCoeff();
    if (dev > defaults().unitary) throw DomainError("apply_local: gate is not unitary");
    return GlobalState(s.dim(), s.n_sites(), apply_factor(s, s.amplitudes(), site, gate));
}

cplx expect(const GlobalState& s, const std::vector<std::pair<int, Axis>>& ops) {
    const SpinOps so = build_spin_ops(s.dim());
    VectorXcd v = s.amplitudes();
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        check_site(s, it->first);
        v = apply_factor(s, v, it->first, so[it->second]);
    }
    return s.amplitudes().dot(v);
}

MatrixXcd reduce(const GlobalState& s, int keep) {
    check_site(s, keep);
    const Eigen::Index dim = s.dim().dim();
    const Eigen::Index st = s.stride(keep);
    MatrixXcd rho = MatrixXcd::Zero(dim, dim);
    for (Eigen::Index o = 0; o < s.amplitudes().size(); o += dim * st) {
        Eigen::Map<const MatrixXcd> b(s.amplitudes().data() + o, st, dim);
        rho.noalias() += b.transpose() * b.conjugate();
    }
    return rho;
}

MomentTable oracle_moments(const GlobalState& s, double t) {
    const int m = s.n_sites();
    const SpinOps so = build_spin_ops(s.dim());
    std::vector<VectorXcd> v;
    v.reserve(3 * m);
    for (int i = 0; i < m; ++i)
        for (Axis a : kAxes) v.push_back(apply_factor(s, s.amplitudes(), i, so[a]));
    MomentTable table(s.dim().n(), m, t);
    for (int p = 0; p < 3 * m; ++p) {
        table.set_mean(p / 3, kAxes[p % 3], s.amplitudes().dot(v[p]).real());
        for (int q = 0; q <= p; ++q) table.set_second(p / 3, kAxes[p % 3], q / 3, kAxes[q % 3], v[p].dot(v[q]).real());
    }
    return table;
}

MatrixXcd collective_operator(const EnsembleDim& d, int n_sites, Axis a) {
    const auto size = static_cast<Eigen::Index>(tensor_size(d, n_sites));
    const GlobalState shape(d, n_sites, VectorXcd::Zero(size));
    const SpinOps so = build_spin_ops(d);
    MatrixXcd out = MatrixXcd::Zero(size, size);
    for (Eigen::Index col = 0; col < size; ++col) {
        VectorXcd e = VectorXcd::Zero(size);
        e[col] = 1.0;
        for (int i = 0; i < n_sites; ++i) out.col(col) += apply_factor(shape, e, i, so[a]);
    }
    return out;
}

}  // namespace becnet
