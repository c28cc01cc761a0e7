#pragma once

#include <string>
#include <vector>

#include "clad/config.hpp"

namespace clad::harness {

// Executes every (sweep value x seed) run of a parsed config: writes one
// result-rows csv and one metadata sidecar per run plus a summary csv with
// mean and sample std across seeds. Returns the rows-file paths in run order.
std::vector<std::string> run_config(const ExperimentConfig& config);

// Materializes the config's synthetic devices as csv files under out_dir.
std::vector<std::string> write_synthetic_devices(const ExperimentConfig& config,
                                                 const std::string& out_dir);

struct Budget {
    enum class Kind { Bytes, Flops } kind = Kind::Bytes;
    double amount = 0.0;  // bytes or flops
    std::string label;    // as given on the command line
};

Budget parse_budget(const std::string& text);  // "13MB", "26MB", "20GFLOP"

// Reads rows_*.csv files from results_dir and emits per-group curve files
// (metric vs round / bytes / flops) and, when budgets are given, a budget
// snapshot table with relative-gain columns against the best baseline.
std::vector<std::string> write_report(const std::string& results_dir,
                                      const std::vector<Budget>& budgets);

// CLI entry points; return process exit codes and print to stdout/stderr.
int cli_run(const std::string& config_path);
int cli_validate(const std::string& config_path);
int cli_report(const std::string& results_dir, const std::vector<std::string>& budget_args);
int cli_synth(const std::string& config_path, const std::string& out_dir);

}  // namespace clad::harness
