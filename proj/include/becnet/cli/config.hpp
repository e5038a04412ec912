#pragma once

#include "becnet/core.hpp"
#include "becnet/moments.hpp"
#include "becnet/params.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace becnet::cli {

// Exit status 2.
struct ConfigError : Error {
    using Error::Error;
};
// Exit status 3.
struct ValidationFailure : Error {
    using Error::Error;
};

enum class Protocol { gie, gid };

struct TauGrid {
    double start = 1e-5, stop = 1e-1;
    int count = 200;
    bool log = true;

    std::vector<double> values() const;
};

struct GidProtocol {
    double tau_rot = 0.0;
    std::optional<double> beta, theta;
    // Samples on the pre-rotation segment of the composite axis.
    int pre_count = 20;
    // When set, tau_rot scales as tau_rot * (N / reference_n)^exponent.
    std::optional<double> tau_rot_reference_n;
    double tau_rot_exponent = -2.0 / 3.0;

    double tau_rot_for(int n) const;
};

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
};

struct ParamsSpec {
    DoubleWellSpec well;
    Eigen::Vector3d offset = Eigen::Vector3d::Zero();
    double c_dd = 0.0;
    std::vector<int> t_min_n;
    std::optional<double> chi_nloc_quoted;
    std::optional<double> cgb_delta_e, cgb_d;
    std::optional<double> bmv_mass, bmv_d, bmv_d_prime;
};

struct RunConfig {
    std::string source;
    Protocol kind = Protocol::gie;
    int n = 0, m = 2;
    // Normalized so that chi_nloc = 1; tau = chi_nloc t throughout.
    Couplings couplings;
    TauGrid tau;
    GidProtocol gid;
    bool compute_tilde = false;
    int purity_cap = 2000;
    std::string out_path;
    std::string format = "csv";
    std::optional<SweepSpec> sweep;
    std::optional<ParamsSpec> params;
};

RunConfig parse_config(std::istream& in, const std::string& source);
RunConfig load_config(const std::string& path);

// Re-check cross-field constraints after overrides (sweep values, CLI flags).
void validate(const RunConfig& c);

}  // namespace becnet::cli
