#pragma once

#include "becnet/cli/config.hpp"
#include "becnet/metrology.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace becnet::cli {

struct GidColumns {
    double beta, theta, theta0;
    std::optional<double> purity;
};

struct Row {
    WitnessRecord w;
    std::optional<GidColumns> gid;
};

struct RunResult {
    Protocol kind;
    int n, m;
    std::vector<Row> rows;
    // Composite-axis offset of the post-rotation segment (GID only).
    double tau_rot = 0.0;
    // Index of the first post-rotation row (GID only).
    std::size_t post_begin = 0;
    std::vector<std::string> warnings;
};

RunResult run_gie(const RunConfig& c, int threads);
RunResult run_gid(const RunConfig& c, int threads);
RunResult run(const RunConfig& c, int threads);

// First post-rotation time (relative to tau_rot) with xi2_loc >= 1, linearly
// interpolated; nullopt when it never happens on the grid.
std::optional<double> dephasing_time(const RunResult& r);

struct Minimum {
    double tau, value;
};
Minimum min_c1(const RunResult& r);
Minimum min_c2(const RunResult& r);

// Minimum of C1 over tau for the GIE protocol on a log scan refined by golden
// section.
Minimum gie_min_c1(int n, int m, const Couplings& c, double lo = 1e-7, double hi = 1.0);

struct OracleReport {
    double max_deviation;
    std::size_t points;
    bool passed;
};
// Throws SizeCapError when (N+1)^M exceeds the cap.
OracleReport oracle_check(const RunConfig& c, double tolerance = defaults().oracle_check);

struct SweepEntry {
    double value;
    std::optional<RunResult> result;
    std::string status;
    std::optional<double> tau_deph;
    std::optional<Minimum> c1_min, c2_min;
};
struct SweepResult {
    std::string parameter;
    std::vector<SweepEntry> entries;
    // Log-log slope of fit_quantity (tau_deph for GID, tau at min C2 for GIE)
    // against the swept value.
    std::string fit_quantity;
    std::optional<double> exponent;
};
SweepResult run_sweep(const RunConfig& c, int threads);

// Ordinary least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct TminEntry {
    int n;
    double tau_min;
    double t_min;
    std::optional<double> t_quoted_rad, t_quoted_cycles;
};
struct ParamsReport {
    ModePair modes;
    CouplingResult couplings;
    std::vector<TminEntry> t_min;
    std::optional<double> cgb;
    std::optional<BmvCouplings> bmv;
};
ParamsReport run_params(const RunConfig& c);

// Results in index order whatever the completion order. The first exception
// thrown by any task is rethrown after all workers finish.
template <class T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& f) {
    std::vector<std::optional<T>> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<T> res;
    res.reserve(count);
    for (auto& o : out) res.push_back(std::move(*o));
    return res;
}

int default_threads();

}  // namespace becnet::cli
