#include "becnet/cli/output.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace becnet::cli {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json number(const std::optional<double>& v) { return v ? number(*v) : ordered_json(nullptr); }

ordered_json rate(double rad_per_s) {
    return ordered_json{{"rad_per_s", number(rad_per_s)}, {"cycles_per_s", number(rad_per_s / (2.0 * si::pi))}};
}

bool has_tilde(const RunResult& r) { return !r.rows.empty() && r.rows.front().w.f_loc.has_value(); }

bool has_purity(const RunResult& r) {
    for (const Row& row : r.rows)
        if (row.gid && row.gid->purity) return true;
    return false;
}

const char* protocol_name(Protocol p) { return p == Protocol::gie ? "gie" : "gid"; }

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const RunResult& r) {
    const bool tilde = has_tilde(r);
    const bool gid = r.kind == Protocol::gid;
    const bool purity = has_purity(r);
    out << "tau,xi2_loc,xi2_col,gamma_loc,f_col,c1,c2";
    if (tilde) out << ",f_loc,c1_tilde,c2_tilde";
    if (gid) out << ",beta,theta,theta0";
    if (purity) out << ",purity";
    out << '\n';
    for (const Row& row : r.rows) {
        const WitnessRecord& w = row.w;
        out << format_double(w.tau) << ',' << format_double(w.xi2_loc) << ',' << format_double(w.xi2_col) << ','
            << format_double(w.gamma_loc) << ',' << format_double(w.f_col) << ',' << format_double(w.c1) << ','
            << format_double(w.c2);
        if (tilde)
            out << ',' << format_double(*w.f_loc) << ',' << format_double(*w.c1_tilde) << ','
                << format_double(*w.c2_tilde);
        if (gid)
            out << ',' << format_double(row.gid->beta) << ',' << format_double(row.gid->theta) << ','
                << format_double(row.gid->theta0);
        if (purity) out << ',' << (row.gid->purity ? format_double(*row.gid->purity) : "");
        out << '\n';
    }
}

void write_json(std::ostream& out, const RunResult& r) {
    ordered_json doc;
    doc["protocol"] = protocol_name(r.kind);
    doc["N"] = r.n;
    doc["M"] = r.m;
    if (r.kind == Protocol::gid) {
        doc["tau_rot"] = r.tau_rot;
        doc["post_begin"] = r.post_begin;
    }
    ordered_json rows = ordered_json::array();
    for (const Row& row : r.rows) {
        const WitnessRecord& w = row.w;
        ordered_json j;
        j["tau"] = number(w.tau);
        j["xi2_loc"] = number(w.xi2_loc);
        j["xi2_col"] = number(w.xi2_col);
        j["gamma_loc"] = number(w.gamma_loc);
        j["f_col"] = number(w.f_col);
        j["c1"] = number(w.c1);
        j["c2"] = number(w.c2);
        if (w.f_loc) {
            j["f_loc"] = number(w.f_loc);
            j["c1_tilde"] = number(w.c1_tilde);
            j["c2_tilde"] = number(w.c2_tilde);
        }
        if (row.gid) {
            j["beta"] = number(row.gid->beta);
            j["theta"] = number(row.gid->theta);
            j["theta0"] = number(row.gid->theta0);
            if (row.gid->purity) j["purity"] = number(row.gid->purity);
        }
        rows.push_back(std::move(j));
    }
    doc["records"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& s) {
    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    out << "value,tau_deph,c1_min,c2_min,tau_c1_min,tau_c2_min,status\n";
    for (const SweepEntry& e : s.entries) {
        out << format_double(e.value) << ',' << cell(e.tau_deph) << ','
            << cell(e.c1_min ? std::optional(e.c1_min->value) : std::nullopt) << ','
            << cell(e.c2_min ? std::optional(e.c2_min->value) : std::nullopt) << ','
            << cell(e.c1_min ? std::optional(e.c1_min->tau) : std::nullopt) << ','
            << cell(e.c2_min ? std::optional(e.c2_min->tau) : std::nullopt) << ',';
        std::string status = e.status;
        for (char& ch : status)
            if (ch == ',' || ch == '\n') ch = ';';
        out << status << '\n';
    }
}

void write_sweep_json(std::ostream& out, const SweepResult& s) {
    ordered_json doc;
    doc["parameter"] = s.parameter;
    doc["fit_quantity"] = s.fit_quantity;
    doc["exponent"] = number(s.exponent);
    ordered_json entries = ordered_json::array();
    for (const SweepEntry& e : s.entries) {
        ordered_json j;
        j["value"] = e.value;
        j["tau_deph"] = number(e.tau_deph);
        j["c1_min"] = e.c1_min ? number(e.c1_min->value) : ordered_json(nullptr);
        j["c2_min"] = e.c2_min ? number(e.c2_min->value) : ordered_json(nullptr);
        j["tau_c1_min"] = e.c1_min ? number(e.c1_min->tau) : ordered_json(nullptr);
        j["tau_c2_min"] = e.c2_min ? number(e.c2_min->tau) : ordered_json(nullptr);
        j["status"] = e.status;
        entries.push_back(std::move(j));
    }
    doc["entries"] = std::move(entries);
    out << doc.dump(2) << '\n';
}

void write_params_json(std::ostream& out, const ParamsReport& p) {
    const CouplingResult& c = p.couplings;
    ordered_json doc;
    doc["modes"] = {{"e_gs_J", p.modes.e_gs},
                    {"e_ex_J", p.modes.e_ex},
                    {"tunnel_splitting", rate((p.modes.e_ex - p.modes.e_gs) / si::hbar)},
                    {"sigma_y_m", p.modes.sigma_y},
                    {"sigma_z_m", p.modes.sigma_z},
                    {"grid_spacing_m", p.modes.h},
                    {"n_points", p.modes.psi_l.size()}};
    doc["integrals"] = {{"I", c.contact_integral},   {"D", c.d_self},         {"D_LR", c.d_lr},
                        {"D_LALB", c.d_lalb},        {"D_RARB", c.d_rarb},    {"D_RALB", c.d_ralb},
                        {"D_LARB", c.d_larb}};
    doc["couplings"] = {{"chi_cont_per_a0", rate(c.chi_cont_per_a0)},
                        {"chi_loc", rate(c.chi_loc)},
                        {"chi_nloc", rate(c.chi_nloc)},
                        {"chi_nz_ab", rate(c.chi_nz_ab)},
                        {"chi_nz_ba", rate(c.chi_nz_ba)}};
    ordered_json tmin = ordered_json::array();
    for (const TminEntry& t : p.t_min) {
        ordered_json j{{"N", t.n}, {"tau_min", t.tau_min}, {"t_min_s", number(t.t_min)}};
        if (t.t_quoted_rad) {
            j["t_min_quoted_as_rad_per_s"] = number(t.t_quoted_rad);
            j["t_min_quoted_as_cycles_per_s"] = number(t.t_quoted_cycles);
        }
        tmin.push_back(std::move(j));
    }
    doc["t_min"] = std::move(tmin);
    if (p.cgb) doc["cgb"] = {{"chi_nloc", rate(*p.cgb)}};
    if (p.bmv)
        doc["bmv"] = {{"chi_loc", rate(p.bmv->chi_loc)}, {"chi_nloc", rate(p.bmv->chi_nloc)}, {"chi_nz", rate(p.bmv->chi_nz)}};
    out << doc.dump(2) << '\n';
}

void write_oracle_json(std::ostream& out, const OracleReport& r) {
    ordered_json doc{{"max_deviation", r.max_deviation}, {"points", r.points}, {"passed", r.passed}};
    out << doc.dump(2) << '\n';
}

}  // namespace becnet::cli
