#pragma once

#include "becnet/core.hpp"

namespace becnet {

struct Couplings {
    double chi_cont = 0.0;
    double chi_loc = 0.0;
    double chi_nloc = 1.0;
    bool dimensionless = true;

    double local() const { return chi_cont + chi_loc; }
};

// First moments <J^a_i> and symmetrized second moments <{J^a_i, J^b_j}>/2 of
// an M-site network at one time point. Flat index 3*site + axis. Entries
// start as NaN so that gaps are detectable.
class MomentTable {
public:
    MomentTable(int n_atoms, int n_sites, double t);

    static int index(int site, Axis a) { return 3 * site + static_cast<int>(a); }

    int n_atoms() const { return n_; }
    int n_sites() const { return m_; }
    double t() const { return t_; }

    double mean(int site, Axis a) const { return first_[index(site, a)]; }
    double second(int i, Axis a, int j, Axis b) const { return second_(index(i, a), index(j, b)); }

    void set_mean(int site, Axis a, double v) { first_[index(site, a)] = v; }
    void set_second(int i, Axis a, int j, Axis b, double v);

    const VectorXd& first() const { return first_; }
    const MatrixXd& second() const { return second_; }

    // Throws IncompleteMomentTable naming the first missing entry.
    void require_complete() const;

    double max_abs_diff(const MomentTable& other) const;

private:
    int n_, m_;
    double t_;
    VectorXd first_;
    MatrixXd second_;
};

}  // namespace becnet
