#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clad/matrix.hpp"
#include "clad/rng.hpp"

namespace clad::data {

struct Sample {
    std::vector<double> features;
    int label = 0;  // 0 is always benign; attacks are 1..class_count-1
};

struct Dataset {
    std::vector<Sample> samples;
    std::size_t feature_dim = 0;
    std::size_t class_count = 0;
    std::vector<std::string> class_names;  // index-aligned; may be empty

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }

    Dataset benign_subset() const;
    std::vector<std::size_t> label_histogram() const;
    nn::Matrix features_matrix() const;
    std::vector<int> labels() const;
    std::vector<double> feature_mean() const;
};

struct ScalerParams {
    std::vector<double> min;
    std::vector<double> max;
};

// per-feature min/max over the dataset
ScalerParams fit_scaler(const Dataset& ds);
// (x - min) / (max - min); constant features map to 0
Dataset apply_scaler(const Dataset& ds, const ScalerParams& params);

// Seeded stratified split: per class, shuffle then cut at round(ratio * n).
// Classes with fewer than two samples cannot be represented on both sides and
// are rejected.
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double ratio, std::uint64_t seed);

// CSV ingestion: UTF-8, comma separated, one header row, one label column,
// every other column numeric. Benign maps to class 0, the remaining label
// values are sorted lexicographically onto 1..C-1.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& benign_label);

// same schema as load_csv expects; feature columns named f0..f{d-1} when the
// dataset has no recorded names
void save_csv(const std::string& path, const Dataset& ds, const std::string& label_column = "label");

}  // namespace clad::data
