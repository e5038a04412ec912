#include "becnet/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace becnet::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kKnown = {
    {"ensemble", {"N", "M"}},
    {"couplings", {"chi_cont", "chi_loc", "chi_nloc", "dimensionless"}},
    {"protocol",
     {"kind", "tau_start", "tau_stop", "tau_count", "tau_scale", "tau_rot", "beta", "theta", "pre_count",
      "tau_rot_reference_n", "tau_rot_exponent"}},
    {"metrology", {"compute_tilde", "purity_cap"}},
    {"output", {"path", "format"}},
    {"sweep", {"parameter", "values"}},
    {"well",
     {"mass_amu", "omega_x", "omega_y", "omega_z", "barrier_height", "barrier_height_hw", "barrier_width", "x_min",
      "x_max", "n_points", "tabulated", "check_refinement"}},
    {"geometry", {"offset_x", "offset_y", "offset_z"}},
    {"dipolar", {"moment_mu_b", "c_dd"}},
    {"report", {"t_min_n", "chi_nloc_quoted"}},
    {"cgb", {"delta_e", "d"}},
    {"bmv", {"mass", "d", "d_prime"}},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError(source_ + ": [" + section_of(key) + "] " + name_of(key) + ": " + what);
    }

    std::optional<std::string> raw(const std::string& key) const {
        auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
        if (!v) return std::nullopt;
        return trim(*v);
    }

    std::optional<double> real(const std::string& key) const {
        auto v = raw(key);
        if (!v) return std::nullopt;
        return parse_real(key, *v);
    }

    double real(const std::string& key, double fallback) const { return real(key).value_or(fallback); }

    std::optional<long> integer(const std::string& key) const {
        auto v = raw(key);
        if (!v) return std::nullopt;
        std::size_t pos = 0;
        long out = 0;
        try {
            out = std::stol(*v, &pos);
        } catch (const std::exception&) {
            fail(key, "expected an integer, got '" + *v + "'");
        }
        if (pos != v->size()) fail(key, "expected an integer, got '" + *v + "'");
        return out;
    }

    bool flag(const std::string& key, bool fallback) const {
        auto v = raw(key);
        if (!v) return fallback;
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), ::tolower);
        if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
        if (s == "false" || s == "no" || s == "0" || s == "off") return false;
        fail(key, "expected a boolean, got '" + *v + "'");
    }

    std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        auto v = raw(key);
        if (!v) return out;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) fail(key, "empty list element");
            out.push_back(parse_real(key, item));
        }
        return out;
    }

    // Accepts plain numbers and multiples of pi such as "pi/24" or "3*pi/4".
    double parse_real(const std::string& key, const std::string& text) const {
        const auto at = text.find("pi");
        try {
            if (at == std::string::npos) {
                std::size_t pos = 0;
                const double v = std::stod(text, &pos);
                if (pos != text.size()) throw std::invalid_argument(text);
                return v;
            }
            double factor = 1.0;
            std::string head = trim(text.substr(0, at));
            if (!head.empty()) {
                if (head == "-") {
                    factor = -1.0;
                } else {
                    if (head.back() != '*') throw std::invalid_argument(text);
                    head.pop_back();
                    std::size_t pos = 0;
                    factor = std::stod(head, &pos);
                    if (pos != trim(head).size()) throw std::invalid_argument(text);
                }
            }
            std::string tail = trim(text.substr(at + 2));
            double divisor = 1.0;
            if (!tail.empty()) {
                if (tail.front() != '/') throw std::invalid_argument(text);
                std::size_t pos = 0;
                const std::string den = trim(tail.substr(1));
                divisor = std::stod(den, &pos);
                if (pos != den.size()) throw std::invalid_argument(text);
            }
            return factor * si::pi / divisor;
        } catch (const std::invalid_argument&) {
            fail(key, "expected a number, got '" + text + "'");
        } catch (const std::out_of_range&) {
            fail(key, "number out of range: '" + text + "'");
        }
    }

    bool has_section(const std::string& s) const { return tree_.get_child_optional(s).has_value(); }

private:
    static std::string section_of(const std::string& key) { return key.substr(0, key.find('.')); }
    static std::string name_of(const std::string& key) { return key.substr(key.find('.') + 1); }

    const pt::ptree& tree_;
    std::string source_;
};

std::vector<std::pair<double, double>> read_table(const std::string& path, const Reader& r) {
    std::ifstream in(path);
    if (!in) r.fail("well.tabulated", "cannot open '" + path + "'");
    std::vector<std::pair<double, double>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x = 0.0, v = 0.0;
        if (!(ls >> x >> v)) {
            if (out.empty()) continue;  // header line
            r.fail("well.tabulated", path + ":" + std::to_string(lineno) + ": expected two numbers");
        }
        out.emplace_back(x, v);
    }
    if (out.size() < 2) r.fail("well.tabulated", "table needs at least two rows");
    return out;
}

}  // namespace

std::vector<double> TauGrid::values() const {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        out[i] = log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start))) : start + f * (stop - start);
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

double GidProtocol::tau_rot_for(int n) const {
    if (!tau_rot_reference_n) return tau_rot;
    return tau_rot * std::pow(n / *tau_rot_reference_n, tau_rot_exponent);
}

void validate(const RunConfig& c) {
    auto bad = [&](const std::string& where, const std::string& what) {
        throw ConfigError(c.source + ": " + where + ": " + what);
    };
    if (c.params) return;
    if (c.n < 1) bad("[ensemble] N", "must be at least 1");
    if (c.m < 2) bad("[ensemble] M", "must be at least 2");
    if (c.tau.count < 1) bad("[protocol] tau_count", "must be at least 1");
    if (c.tau.count > 1 && !(c.tau.stop > c.tau.start)) bad("[protocol] tau_stop", "must exceed tau_start");
    if (c.tau.log && !(c.tau.start > 0.0)) bad("[protocol] tau_start", "must be positive on a log grid");
    if (c.tau.start < 0.0) bad("[protocol] tau_start", "must be non-negative");
    if (c.format != "csv" && c.format != "json") bad("[output] format", "must be csv or json");
    if (c.purity_cap < 0) bad("[metrology] purity_cap", "must be non-negative");
    if (c.kind == Protocol::gid) {
        if (c.gid.beta.has_value() == c.gid.theta.has_value())
            bad("[protocol] beta/theta", "exactly one of beta and theta is required for gid");
        if (c.gid.tau_rot < 0.0) bad("[protocol] tau_rot", "must be non-negative");
        if (c.gid.pre_count < 0) bad("[protocol] pre_count", "must be non-negative");
        if (c.gid.tau_rot_reference_n && !(*c.gid.tau_rot_reference_n > 0.0))
            bad("[protocol] tau_rot_reference_n", "must be positive");
    } else if (c.gid.beta || c.gid.theta) {
        bad("[protocol] beta/theta", "only valid for gid");
    }
    if (c.sweep) {
        static const std::set<std::string> allowed = {"N", "M", "beta", "theta", "tau_rot", "chi_loc", "chi_cont"};
        if (!allowed.count(c.sweep->parameter)) bad("[sweep] parameter", "unsupported parameter '" + c.sweep->parameter + "'");
        if (c.sweep->values.empty()) bad("[sweep] values", "sweep list is empty");
    }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [section, body] : tree) {
        auto it = kKnown.find(section);
        if (it == kKnown.end()) {
            if (body.empty()) throw ConfigError(source + ": key '" + section + "' outside any section");
            throw ConfigError(source + ": unknown section [" + section + "]");
        }
        for (const auto& kv : body)
            if (!it->second.count(kv.first))
                throw ConfigError(source + ": [" + section + "] " + kv.first + ": unknown key");
    }

    Reader r(tree, source);
    RunConfig c;
    c.source = source;

    if (r.has_section("well")) {
        ParamsSpec p;
        DoubleWellSpec& w = p.well;
        w.mass = r.real("well.mass_amu", 39.0) * si::amu;
        w.omega_x = r.real("well.omega_x", 0.0);
        w.omega_y = r.real("well.omega_y").value_or(0.0);
        w.omega_z = r.real("well.omega_z").value_or(0.0);
        if (!(w.mass > 0.0)) r.fail("well.mass_amu", "must be positive");
        if (!(w.omega_y > 0.0)) r.fail("well.omega_y", "required and positive");
        if (!(w.omega_z > 0.0)) r.fail("well.omega_z", "required and positive");
        if (w.omega_x < 0.0) r.fail("well.omega_x", "must be non-negative");
        const auto height = r.real("well.barrier_height");
        const auto height_hw = r.real("well.barrier_height_hw");
        if (height && height_hw) r.fail("well.barrier_height", "give barrier_height or barrier_height_hw, not both");
        if (height_hw) w.barrier_height = *height_hw * si::hbar * w.omega_x;
        if (height) w.barrier_height = *height;
        w.barrier_width = r.real("well.barrier_width", 1e-6);
        if (!(w.barrier_width > 0.0)) r.fail("well.barrier_width", "must be positive");
        const auto x_min = r.real("well.x_min");
        const auto x_max = r.real("well.x_max");
        if (!x_min) r.fail("well.x_min", "required");
        if (!x_max) r.fail("well.x_max", "required");
        if (!(*x_max > *x_min)) r.fail("well.x_max", "must exceed x_min");
        w.x_min = *x_min;
        w.x_max = *x_max;
        w.n_points = static_cast<int>(r.integer("well.n_points").value_or(512));
        if (w.n_points < 256) r.fail("well.n_points", "must be at least 256");
        w.check_refinement = r.flag("well.check_refinement", true);
        if (auto tab = r.raw("well.tabulated")) {
            std::filesystem::path path(*tab);
            if (path.is_relative()) path = std::filesystem::path(source).parent_path() / path;
            w.tabulated = read_table(path.string(), r);
        }
        p.offset = {r.real("geometry.offset_x", 0.0), r.real("geometry.offset_y", 0.0), r.real("geometry.offset_z", 0.0)};
        const auto cdd = r.real("dipolar.c_dd");
        const auto moment = r.real("dipolar.moment_mu_b");
        if (cdd && moment) r.fail("dipolar.c_dd", "give c_dd or moment_mu_b, not both");
        p.c_dd = cdd ? *cdd : magnetic_cdd(moment.value_or(1.0) * si::mu_B);
        for (double v : r.reals("report.t_min_n")) {
            if (v < 1.0 || v != std::floor(v)) r.fail("report.t_min_n", "entries must be positive integers");
            p.t_min_n.push_back(static_cast<int>(v));
        }
        p.chi_nloc_quoted = r.real("report.chi_nloc_quoted");
        p.cgb_delta_e = r.real("cgb.delta_e");
        p.cgb_d = r.real("cgb.d");
        if (p.cgb_delta_e.has_value() != p.cgb_d.has_value()) r.fail("cgb.d", "delta_e and d go together");
        if (p.cgb_d && !(*p.cgb_d > 0.0)) r.fail("cgb.d", "must be positive");
        p.bmv_mass = r.real("bmv.mass");
        p.bmv_d = r.real("bmv.d");
        p.bmv_d_prime = r.real("bmv.d_prime");
        const int bmv_given = p.bmv_mass.has_value() + p.bmv_d.has_value() + p.bmv_d_prime.has_value();
        if (bmv_given != 0 && bmv_given != 3) r.fail("bmv.mass", "mass, d and d_prime go together");
        if (bmv_given == 3 && !(*p.bmv_mass > 0.0 && *p.bmv_d > 0.0 && *p.bmv_d_prime > 0.0))
            r.fail("bmv.d", "mass, d and d_prime must be positive");
        c.params = std::move(p);
        c.out_path = r.raw("output.path").value_or("");
        c.format = "json";
        return c;
    }

    const auto n = r.integer("ensemble.N");
    if (!n) r.fail("ensemble.N", "required");
    if (*n < 1) r.fail("ensemble.N", "must be at least 1");
    c.n = static_cast<int>(*n);
    c.m = static_cast<int>(r.integer("ensemble.M").value_or(2));

    const double cont = r.real("couplings.chi_cont", 0.0);
    const double loc = r.real("couplings.chi_loc", 0.0);
    const double nloc = r.real("couplings.chi_nloc", 1.0);
    const bool dimensionless = r.flag("couplings.dimensionless", true);
    if (nloc == 0.0) r.fail("couplings.chi_nloc", "must be nonzero");
    if (dimensionless && nloc != 1.0) r.fail("couplings.chi_nloc", "must be 1 in dimensionless mode");
    c.couplings = Couplings{cont / nloc, loc / nloc, 1.0, true};

    const std::string kind = r.raw("protocol.kind").value_or("gie");
    if (kind == "gie") {
        c.kind = Protocol::gie;
    } else if (kind == "gid") {
        c.kind = Protocol::gid;
    } else {
        r.fail("protocol.kind", "expected gie or gid, got '" + kind + "'");
    }
    c.tau.start = r.real("protocol.tau_start", c.tau.start);
    c.tau.stop = r.real("protocol.tau_stop", c.tau.stop);
    c.tau.count = static_cast<int>(r.integer("protocol.tau_count").value_or(c.tau.count));
    const std::string scale = r.raw("protocol.tau_scale").value_or("log");
    if (scale != "log" && scale != "linear") r.fail("protocol.tau_scale", "expected log or linear");
    c.tau.log = scale == "log";
    c.gid.tau_rot = r.real("protocol.tau_rot", 0.0);
    c.gid.beta = r.real("protocol.beta");
    c.gid.theta = r.real("protocol.theta");
    c.gid.pre_count = static_cast<int>(r.integer("protocol.pre_count").value_or(c.gid.pre_count));
    c.gid.tau_rot_reference_n = r.real("protocol.tau_rot_reference_n");
    c.gid.tau_rot_exponent = r.real("protocol.tau_rot_exponent", c.gid.tau_rot_exponent);

    c.compute_tilde = r.flag("metrology.compute_tilde", false);
    c.purity_cap = static_cast<int>(r.integer("metrology.purity_cap").value_or(c.purity_cap));
    c.out_path = r.raw("output.path").value_or("");
    c.format = r.raw("output.format").value_or("csv");

    if (r.has_section("sweep")) {
        SweepSpec s;
        s.parameter = r.raw("sweep.parameter").value_or("");
        if (s.parameter.empty()) r.fail("sweep.parameter", "required");
        s.values = r.reals("sweep.values");
        c.sweep = std::move(s);
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config");
    return parse_config(in, path);
}

}  // namespace becnet::cli
