#include "becnet/cli/config.hpp"
#include "becnet/cli/output.hpp"
#include "becnet/cli/runs.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace becnet;
using namespace becnet::cli;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string format;
    int threads = 0;
    std::uint64_t seed = 0;
};

template <class F>
void emit(const std::string& path, F&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    write(out);
}

void emit_run(const RunResult& r, const std::string& path, const std::string& format) {
    for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
    emit(path, [&](std::ostream& o) {
        if (format == "json") {
            write_json(o, r);
        } else {
            write_csv(o, r);
        }
    });
}

std::string value_tag(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

int dispatch(const std::string& command, const Options& opt) {
    RunConfig c = load_config(opt.config);
    if (!opt.format.empty()) c.format = opt.format;
    if (!opt.out.empty()) c.out_path = opt.out;
    const int threads = opt.threads > 0 ? opt.threads : default_threads();

    if (command == "params") {
        const ParamsReport rep = run_params(c);
        emit(c.out_path, [&](std::ostream& o) { write_params_json(o, rep); });
        return 0;
    }
    if (c.params) throw ConfigError(c.source + ": [well] section is only valid for params");
    validate(c);

    if (command == "gie" && c.kind != Protocol::gie) throw ConfigError(c.source + ": [protocol] kind: gie expected");
    if (command == "gid" && c.kind != Protocol::gid) throw ConfigError(c.source + ": [protocol] kind: gid expected");

    if (command == "oracle-check") {
        const OracleReport rep = oracle_check(c);
        emit(c.out_path, [&](std::ostream& o) { write_oracle_json(o, rep); });
        return rep.passed ? 0 : 3;
    }
    if (command == "sweep") {
        const SweepResult s = run_sweep(c, threads);
        if (!c.out_path.empty()) {
            const std::filesystem::path base(c.out_path);
            const std::string ext = c.format == "json" ? ".json" : ".csv";
            for (const SweepEntry& e : s.entries) {
                if (!e.result) continue;
                const std::filesystem::path one =
                    base.parent_path() / (base.stem().string() + "_" + s.parameter + "_" + value_tag(e.value) + ext);
                emit_run(*e.result, one.string(), c.format);
            }
        }
        for (const SweepEntry& e : s.entries)
            if (e.status != "ok") std::cerr << "sweep " << s.parameter << "=" << e.value << ": " << e.status << '\n';
        emit(c.out_path, [&](std::ostream& o) {
            if (c.format == "json") {
                write_sweep_json(o, s);
            } else {
                write_sweep_csv(o, s);
            }
        });
        if (s.exponent)
            std::cerr << "fitted exponent of " << s.fit_quantity << " vs " << s.parameter << ": "
                      << format_double(*s.exponent) << '\n';
        return 0;
    }
    if (c.sweep) throw ConfigError(c.source + ": [sweep] section requires the sweep subcommand");
    emit_run(run(c, threads), c.out_path, c.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement witnesses and couplings for networks of spin ensembles"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config, "Config file (INI)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", opt.out, "Output path; stdout when omitted");
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", opt.threads, "Worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", opt.seed, "Reserved; all engines are deterministic");
    app.add_subcommand("gie", "Global interaction evolution");
    app.add_subcommand("gid", "Gravitationally induced dephasing protocol");
    app.add_subcommand("network", "GIE or GID run for M >= 2 ensembles");
    app.add_subcommand("params", "Double-well modes and coupling constants");
    app.add_subcommand("oracle-check", "Compare fast engines with the exact tensor-product oracle");
    app.add_subcommand("sweep", "Run a config over a list of parameter values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(command, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const SizeCapError& e) {
        std::cerr << "size cap: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
