#include "becnet/cli/runs.hpp"

#include "becnet/gid.hpp"
#include "becnet/gie.hpp"
#include "becnet/oracle.hpp"
#include "becnet/spin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace becnet::cli {

namespace {

void soft_checks(RunResult& r) {
    std::size_t diverged = 0;
    for (const Row& row : r.rows)
        if (std::isinf(row.w.xi2_col)) ++diverged;
    if (diverged)
        r.warnings.push_back(std::to_string(diverged) + " rows with vanishing mean spin; xi2 reported as inf");
    for (const Row& row : r.rows) {
        if (row.w.c1 > row.w.c2 + 1e-9) {
            std::ostringstream ss;
            ss.precision(6);
            ss << "c1 > c2 at tau=" << row.w.tau << " (c1=" << row.w.c1 << ", c2=" << row.w.c2 << ")";
            r.warnings.push_back(ss.str());
        }
    }
}

double pure_fisher_local(const LocalState& psi) {
    const MatrixXcd rho = psi * psi.adjoint();
    return fisher_local(rho);
}

// Rows where the mean spin vanishes report infinite squeezing parameters
// instead of aborting the run.
WitnessRecord evaluate_row(const MomentTable& m, std::optional<double> f_loc) {
    try {
        return evaluate_pure(m, f_loc);
    } catch (const DivergenceError&) {
    }
    const MatrixXd cov = covariance(m);
    WitnessInputs in;
    in.gamma_loc = local_gamma(cov).maxCoeff();
    in.f_col = fisher_collective_pure(collective_covariance(cov));
    in.xi2_col = std::numeric_limits<double>::infinity();
    in.n_atoms = m.n_atoms();
    in.n_sites = m.n_sites();
    in.f_loc = f_loc;
    WitnessRecord r = witnesses(in);
    r.tau = m.t();
    try {
        r.xi2_loc = local_squeezing(m, 0).xi2;
    } catch (const DivergenceError&) {
        r.xi2_loc = std::numeric_limits<double>::infinity();
    }
    return r;
}

Minimum min_of(const RunResult& r, double WitnessRecord::*field) {
    Minimum best{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
    for (const Row& row : r.rows) {
        const double v = row.w.*field;
        if (std::isfinite(v) && v < best.value) best = {row.w.tau, v};
    }
    return best;
}

}  // namespace

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

RunResult run_gie(const RunConfig& c, int threads) {
    const EnsembleDim d(c.n);
    const std::vector<double> taus = c.tau.values();
    RunResult r{Protocol::gie, c.n, c.m, {}, 0.0, 0, {}};
    r.rows = parallel_map<Row>(taus.size(), threads, [&](std::size_t i) {
        const double tau = taus[i];
        const MomentTable m = gie_moments(d, c.m, c.couplings, tau);
        std::optional<double> f_loc;
        if (c.compute_tilde) f_loc = fisher_local(gie_reduced_state(d, c.m, c.couplings, tau));
        return Row{evaluate_row(m, f_loc), std::nullopt};
    });
    soft_checks(r);
    return r;
}

RunResult run_gid(const RunConfig& c, int threads) {
    const EnsembleDim d(c.n);
    const double tau_rot = c.gid.tau_rot_for(c.n);
    const GidSchedule schedule{tau_rot, c.gid.theta, c.gid.beta};
    const GidEngine engine(d, c.m, schedule);
    const GidAngles& ang = engine.angles();
    const bool with_purity = c.n <= c.purity_cap;

    std::vector<double> pre;
    if (tau_rot > 0.0)
        for (int k = 0; k < c.gid.pre_count; ++k) pre.push_back(tau_rot * k / c.gid.pre_count);
    std::vector<double> post = c.tau.values();
    if (post.front() > 0.0) post.insert(post.begin(), 0.0);

    RunResult r{Protocol::gid, c.n, c.m, {}, tau_rot, pre.size(), {}};
    const std::size_t total = pre.size() + post.size();
    r.rows = parallel_map<Row>(total, threads, [&](std::size_t i) {
        GidColumns cols{ang.beta, ang.theta, ang.theta0, std::nullopt};
        if (i < pre.size()) {
            // Before the rotation each site carries the OAT state alone.
            const GidEngine local(d, c.m, GidSchedule{pre[i], 0.0, std::nullopt});
            std::optional<double> f_loc;
            if (c.compute_tilde) f_loc = pure_fisher_local(local.prepared());
            WitnessRecord w = evaluate_row(local.moments(0.0), f_loc);
            w.tau = pre[i];
            if (with_purity) cols.purity = 1.0;
            return Row{w, cols};
        }
        const double tp = post[i - pre.size()];
        std::optional<double> f_loc;
        if (c.compute_tilde) f_loc = fisher_local(engine.reduced_state(tp));
        WitnessRecord w = evaluate_row(engine.moments(tp), f_loc);
        w.tau = tau_rot + tp;
        if (with_purity) cols.purity = engine.purity(tp);
        return Row{w, cols};
    });
    soft_checks(r);
    return r;
}

RunResult run(const RunConfig& c, int threads) {
    return c.kind == Protocol::gie ? run_gie(c, threads) : run_gid(c, threads);
}

std::optional<double> dephasing_time(const RunResult& r) {
    if (r.kind != Protocol::gid) return std::nullopt;
    for (std::size_t i = r.post_begin; i < r.rows.size(); ++i) {
        const WitnessRecord& w = r.rows[i].w;
        if (w.xi2_loc < 1.0) continue;
        if (i == r.post_begin) return 0.0;
        const WitnessRecord& p = r.rows[i - 1].w;
        const double f = (1.0 - p.xi2_loc) / (w.xi2_loc - p.xi2_loc);
        return p.tau + f * (w.tau - p.tau) - r.tau_rot;
    }
    return std::nullopt;
}

Minimum min_c1(const RunResult& r) { return min_of(r, &WitnessRecord::c1); }
Minimum min_c2(const RunResult& r) { return min_of(r, &WitnessRecord::c2); }

Minimum gie_min_c1(int n, int m, const Couplings& c, double lo, double hi) {
    const EnsembleDim d(n);
    auto f = [&](double log_tau) { return evaluate_row(gie_moments(d, m, c, std::exp(log_tau)), std::nullopt).c1; };
    const int nodes = 400;
    const double a = std::log(lo), b = std::log(hi);
    const double step = (b - a) / (nodes - 1);
    int best = 0;
    double best_v = f(a);
    for (int i = 1; i < nodes; ++i) {
        const double v = f(a + i * step);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    double x0 = a + std::max(0, best - 1) * step;
    double x3 = a + std::min(nodes - 1, best + 1) * step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = x3 - g * (x3 - x0), x2 = x0 + g * (x3 - x0);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - g * (x3 - x0);
            f1 = f(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + g * (x3 - x0);
            f2 = f(x2);
        }
    }
    const double x = f1 < f2 ? x1 : x2;
    const double v = std::min(f1, f2);
    if (v < best_v) return {std::exp(x), v};
    return {std::exp(a + best * step), best_v};
}

OracleReport oracle_check(const RunConfig& c, double tolerance) {
    const EnsembleDim d(c.n);
    tensor_size(d, c.m);
    const std::vector<double> taus = c.tau.values();
    double worst = 0.0;
    if (c.kind == Protocol::gie) {
        const GlobalState start = GlobalState::product(css_x(d), c.m);
        for (double tau : taus) {
            const GlobalState s = evolve_diagonal(start, c.couplings, tau);
            worst = std::max(worst, gie_moments(d, c.m, c.couplings, tau).max_abs_diff(oracle_moments(s, tau)));
            if (c.m == 2) {
                const MatrixXcd diff = gie_reduced_state(d, c.m, c.couplings, tau) - reduce(s, 0);
                worst = std::max(worst, diff.cwiseAbs().maxCoeff());
            }
        }
    } else {
        const double tau_rot = c.gid.tau_rot_for(c.n);
        const GidEngine engine(d, c.m, GidSchedule{tau_rot, c.gid.theta, c.gid.beta});
        GlobalState s = GlobalState::product(css_x(d), c.m);
        s = evolve_diagonal(s, Couplings{0.0, 1.0, 0.0, true}, tau_rot);
        const MatrixXcd u = Rotation(d).matrix(Axis::x, engine.angles().theta);
        for (int i = 0; i < c.m; ++i) s = apply_local(s, i, u);
        const Couplings nonlocal{0.0, 0.0, 1.0, true};
        for (double tau : taus) {
            const GlobalState e = evolve_diagonal(s, nonlocal, tau);
            worst = std::max(worst, engine.moments(tau).max_abs_diff(oracle_moments(e, tau)));
            const MatrixXcd diff = engine.reduced_state(tau) - reduce(e, 0);
            worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        }
    }
    return {worst, taus.size(), worst <= tolerance};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw DomainError("loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

namespace {

RunConfig with_value(const RunConfig& base, const std::string& p, double v) {
    RunConfig c = base;
    c.sweep.reset();
    auto integral = [&](const char* name) {
        if (v != std::floor(v)) throw ConfigError(base.source + ": [sweep] values: " + name + " must be an integer");
        return static_cast<int>(v);
    };
    if (p == "N") {
        c.n = integral("N");
    } else if (p == "M") {
        c.m = integral("M");
    } else if (p == "beta") {
        c.gid.beta = v;
        c.gid.theta.reset();
    } else if (p == "theta") {
        c.gid.theta = v;
        c.gid.beta.reset();
    } else if (p == "tau_rot") {
        c.gid.tau_rot = v;
    } else if (p == "chi_loc") {
        c.couplings.chi_loc = v;
    } else if (p == "chi_cont") {
        c.couplings.chi_cont = v;
    }
    validate(c);
    return c;
}

}  // namespace

SweepResult run_sweep(const RunConfig& c, int threads) {
    if (!c.sweep) throw ConfigError(c.source + ": [sweep] section required");
    SweepResult out;
    out.parameter = c.sweep->parameter;
    out.fit_quantity = c.kind == Protocol::gid ? "tau_deph" : "tau_c2_min";
    std::vector<double> xs, ys;
    for (double v : c.sweep->values) {
        SweepEntry e{v, std::nullopt, "ok", std::nullopt, std::nullopt, std::nullopt};
        try {
            const RunConfig one = with_value(c, c.sweep->parameter, v);
            RunResult r = run(one, threads);
            e.tau_deph = dephasing_time(r);
            e.c1_min = min_c1(r);
            e.c2_min = min_c2(r);
            const std::optional<double> y = c.kind == Protocol::gid ? e.tau_deph : std::optional<double>(e.c2_min->tau);
            if (y && *y > 0.0 && v > 0.0) {
                xs.push_back(v);
                ys.push_back(*y);
            }
            e.result = std::move(r);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            e.status = std::string("error: ") + ex.what();
        }
        out.entries.push_back(std::move(e));
    }
    if (xs.size() >= 2) out.exponent = loglog_slope(xs, ys);
    return out;
}

ParamsReport run_params(const RunConfig& c) {
    if (!c.params) throw ConfigError(c.source + ": [well] section required for params");
    const ParamsSpec& p = *c.params;
    ParamsReport rep;
    rep.modes = solve_double_well(p.well);
    rep.couplings = couplings_dw(rep.modes, rep.modes, p.offset, p.c_dd);
    for (int n : p.t_min_n) {
        const Minimum mn = gie_min_c1(n, 2, Couplings{0.0, 0.0, 1.0, true});
        TminEntry t{n, mn.tau, std::numeric_limits<double>::infinity(), std::nullopt, std::nullopt};
        if (rep.couplings.chi_nloc != 0.0) t.t_min = mn.tau / std::abs(rep.couplings.chi_nloc);
        if (p.chi_nloc_quoted && *p.chi_nloc_quoted != 0.0) {
            t.t_quoted_rad = mn.tau / std::abs(*p.chi_nloc_quoted);
            t.t_quoted_cycles = mn.tau / (2.0 * si::pi * std::abs(*p.chi_nloc_quoted));
        }
        rep.t_min.push_back(t);
    }
    if (p.cgb_delta_e) rep.cgb = cgb_coupling(*p.cgb_delta_e, *p.cgb_d);
    if (p.bmv_mass) rep.bmv = bmv_couplings(*p.bmv_mass, *p.bmv_d, *p.bmv_d_prime);
    return rep;
}

}  // namespace becnet::cli
