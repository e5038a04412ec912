#pragma once

#include "becnet/cli/runs.hpp"

#include <iosfwd>
#include <string>

namespace becnet::cli {

std::string format_double(double v);

void write_csv(std::ostream& out, const RunResult& r);
void write_json(std::ostream& out, const RunResult& r);
void write_sweep_csv(std::ostream& out, const SweepResult& s);
void write_sweep_json(std::ostream& out, const SweepResult& s);
void write_params_json(std::ostream& out, const ParamsReport& p);
void write_oracle_json(std::ostream& out, const OracleReport& r);

}  // namespace becnet::cli
