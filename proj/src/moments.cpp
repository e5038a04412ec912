#include "becnet/moments.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace becnet {

MomentTable::MomentTable(int n_atoms, int n_sites, double t)
    : n_(n_atoms),
      m_(n_sites),
      t_(t),
      first_(VectorXd::Constant(3 * n_sites, std::numeric_limits<double>::quiet_NaN())),
      second_(MatrixXd::Constant(3 * n_sites, 3 * n_sites, std::numeric_limits<double>::quiet_NaN())) {
    if (n_atoms < 1 || n_sites < 1) throw DomainError("MomentTable: N and M must be positive");
}

void MomentTable::set_second(int i, Axis a, int j, Axis b, double v) {
    second_(index(i, a), index(j, b)) = v;
    second_(index(j, b), index(i, a)) = v;
}

namespace {
std::string label(int flat) {
    std::ostringstream os;
    os << "J" << axis_name(kAxes[flat % 3]) << "_" << flat / 3;
    return os.str();
}
}  // namespace

void MomentTable::require_complete() const {
    for (int p = 0; p < first_.size(); ++p)
        if (std::isnan(first_[p])) throw IncompleteMomentTable("missing first moment <" + label(p) + ">");
    for (int p = 0; p < second_.rows(); ++p)
        for (int q = 0; q <= p; ++q)
            if (std::isnan(second_(p, q)))
                throw IncompleteMomentTable("missing second moment <" + label(p) + " " + label(q) + ">");
}

double MomentTable::max_abs_diff(const MomentTable& other) const {
    if (other.m_ != m_) throw DomainError("MomentTable: site count mismatch");
    return std::max((first_ - other.first_).cwiseAbs().maxCoeff(),
                    (second_ - other.second_).cwiseAbs().maxCoeff());
}

}  // namespace becnet
