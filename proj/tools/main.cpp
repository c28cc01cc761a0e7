#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clad/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cladsim - clustered federated learning simulator for joint "
                 "network anomaly detection and attack classification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string results_dir;
    std::string out_dir;
    std::vector<std::string> budgets;

    CLI::App* run = app.add_subcommand("run", "execute every run of an experiment config");
    run->add_option("config", config_path, "experiment config file")->required();

    CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "experiment config file")->required();

    CLI::App* report =
        app.add_subcommand("report", "emit curve files and budget tables from result rows");
    report->add_option("results_dir", results_dir, "directory with rows_*.csv files")->required();
    report->add_option("--budget", budgets,
                       "budget snapshot, e.g. 13MB or 20GFLOP (repeatable)");

    CLI::App* synth =
        app.add_subcommand("synth", "materialize the config's synthetic device csv files");
    synth->add_option("config", config_path, "experiment config file")->required();
    synth->add_option("out_dir", out_dir, "directory for device_<k>.csv files")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return clad::harness::cli_run(config_path);
    if (validate->parsed()) return clad::harness::cli_validate(config_path);
    if (report->parsed()) return clad::harness::cli_report(results_dir, budgets);
    if (synth->parsed()) return clad::harness::cli_synth(config_path, out_dir);
    return 1;
}
