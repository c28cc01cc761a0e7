#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clad/algorithm.hpp"
#include "clad/dm2a.hpp"
#include "clad/fl.hpp"
#include "clad/partition.hpp"
#include "clad/synth.hpp"

namespace clad::harness {

enum class DataSource { Synthetic, Csv };

// Parsed form of the experiment config file: a plain text file of
// `[section]` headers and `key = value` lines (see README for the schema).
struct ExperimentConfig {
    // [experiment]
    Algorithm algorithm = Algorithm::Clad;
    std::vector<std::uint64_t> seeds;
    int rounds = 100;
    int clusters = 1;
    std::string output_dir;
    std::string run_id;  // defaults to the algorithm name
    bool save_models = false;

    // [model]
    std::vector<std::size_t> encoder_widths;
    double dropout = 0.2;
    double alpha = 0.8;

    // [data]
    DataSource source = DataSource::Synthetic;
    bool scale = false;  // per-device min-max scaling (defaults true for csv)
    std::vector<std::string> csv_files;
    std::string label_column = "label";
    std::string benign_label = "benign";
    data::SyntheticSpec synth;

    // [partition]
    partition::PartitionSpec partition;

    // [train]
    fl::TrainHyper hyper;

    // [sweep]
    std::string sweep_axis = "none";
    std::vector<double> sweep_values;

    std::string effective_run_id() const { return run_id.empty() ? to_string(algorithm) : run_id; }
};

// Parses and type-checks a config file. On problems, `errors` holds one
// "section.key: message" entry per offending field and the returned config is
// unusable.
ExperimentConfig load_config(const std::string& path, std::vector<std::string>& errors);

// Cross-field validation (model vs data dimensions are checked at run time
// when the data is materialized).
void validate_config(const ExperimentConfig& config, std::vector<std::string>& errors);

// Returns a copy with the sweep axis applied at `value`.
ExperimentConfig apply_sweep_value(const ExperimentConfig& config, double value);

// Tag such as "benign_fraction=0.2" ("" when no sweep axis is set).
std::string sweep_tag(const ExperimentConfig& config, double value);

}  // namespace clad::harness
