#include "clad/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace clad::harness {

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) items.push_back(t);
    }
    return items;
}

// raw parsed file: section -> key -> value
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig parse_raw(const std::string& path, std::vector<std::string>& errors) {
    RawConfig raw;
    std::ifstream is(path);
    if (!is) {
        errors.push_back("config: cannot open file '" + path + "'");
        return raw;
    }
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("config line " + std::to_string(line_no) +
                                 ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            raw[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("config line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        if (section.empty()) {
            errors.push_back("config line " + std::to_string(line_no) + ": key outside a section");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (raw[section].count(key)) {
            errors.push_back(section + "." + key + ": duplicate key");
        }
        raw[section][key] = value;
    }
    return raw;
}

// typed field extraction with per-field error reporting
struct Fields {
    const std::string section;
    std::map<std::string, std::string> values;
    std::set<std::string> consumed;
    std::vector<std::string>& errors;

    bool has(const std::string& key) {
        consumed.insert(key);
        const auto it = values.find(key);
        return it != values.end() && !it->second.empty();
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        return values.at(key);
    }

    double get_double(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const std::string& v = values.at(key);
        char* end = nullptr;
        const double parsed = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size() || !std::isfinite(parsed)) {
            errors.push_back(section + "." + key + ": not a number: '" + v + "'");
            return fallback;
        }
        return parsed;
    }

    long get_int(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        const double v = get_double(key, static_cast<double>(fallback));
        if (v != std::floor(v)) {
            errors.push_back(section + "." + key + ": expected an integer");
            return fallback;
        }
        return static_cast<long>(v);
    }

    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = values.at(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        errors.push_back(section + "." + key + ": expected true/false");
        return fallback;
    }

    std::vector<double> get_double_list(const std::string& key) {
        std::vector<double> out;
        if (!has(key)) return out;
        for (const std::string& item : split_list(values.at(key))) {
            char* end = nullptr;
            const double parsed = std::strtod(item.c_str(), &end);
            if (end != item.c_str() + item.size() || !std::isfinite(parsed)) {
                errors.push_back(section + "." + key + ": not a number: '" + item + "'");
                continue;
            }
            out.push_back(parsed);
        }
        return out;
    }

    void finish() {
        for (const auto& [key, value] : values) {
            if (!consumed.count(key)) errors.push_back(section + "." + key + ": unknown key");
        }
    }
};

Fields fields_for(RawConfig& raw, const std::string& section, std::vector<std::string>& errors) {
    return Fields{section, raw.count(section) ? raw.at(section) : std::map<std::string, std::string>{},
                  {}, errors};
}

}  // namespace

ExperimentConfig load_config(const std::string& path, std::vector<std::string>& errors) {
    ExperimentConfig config;
    RawConfig raw = parse_raw(path, errors);
    if (!errors.empty() && raw.empty()) return config;

    const std::set<std::string> known_sections = {"experiment", "model", "data",
                                                  "partition", "train", "sweep"};
    for (const auto& [section, _] : raw) {
        if (!known_sections.count(section)) errors.push_back(section + ": unknown section");
    }

    {
        Fields f = fields_for(raw, "experiment", errors);
        const std::string alg = f.get_string("algorithm", "clad");
        try {
            config.algorithm = algorithm_from_string(alg);
        } catch (const std::exception&) {
            errors.push_back("experiment.algorithm: unknown algorithm '" + alg + "'");
        }
        for (const double s : f.get_double_list("seeds")) {
            config.seeds.push_back(static_cast<std::uint64_t>(s));
        }
        config.rounds = static_cast<int>(f.get_int("rounds", 100));
        config.clusters = static_cast<int>(f.get_int("clusters", 1));
        config.output_dir = f.get_string("output", "");
        config.run_id = f.get_string("run_id", "");
        config.save_models = f.get_bool("save_models", false);
        f.finish();
    }
    {
        Fields f = fields_for(raw, "model", errors);
        for (const double w : f.get_double_list("encoder_widths")) {
            config.encoder_widths.push_back(static_cast<std::size_t>(w));
        }
        config.dropout = f.get_double("dropout", 0.2);
        config.alpha = f.get_double("alpha", 0.8);
        f.finish();
    }
    {
        Fields f = fields_for(raw, "data", errors);
        const std::string source = f.get_string("source", "synthetic");
        if (source == "synthetic") {
            config.source = DataSource::Synthetic;
        } else if (source == "csv") {
            config.source = DataSource::Csv;
        } else {
            errors.push_back("data.source: expected synthetic or csv, got '" + source + "'");
        }
        config.scale = f.get_bool("scale", config.source == DataSource::Csv);
        config.csv_files = split_list(f.get_string("files", ""));
        config.label_column = f.get_string("label_column", "label");
        config.benign_label = f.get_string("benign_label", "benign");
        config.synth.num_clusters = static_cast<int>(f.get_int("device_types", 1));
        config.synth.feature_dim = static_cast<std::size_t>(f.get_int("feature_dim", 8));
        config.synth.attack_classes = static_cast<int>(f.get_int("attack_classes", 1));
        config.synth.cluster_separation = f.get_double("separation", 0.5);
        config.synth.intra_noise = f.get_double("noise", 0.05);
        config.synth.attack_shift = f.get_double("attack_shift", 0.3);
        config.synth.benign_count = static_cast<std::size_t>(f.get_int("benign_per_device", 1000));
        config.synth.attack_count_per_class =
            static_cast<std::size_t>(f.get_int("attack_per_class_per_device", 500));
        config.synth.conflicting_shifts = f.get_bool("conflicting_shifts", false);
        config.synth.manifold_rank = static_cast<int>(f.get_int("manifold_rank", 0));
        config.synth.manifold_scale = f.get_double("manifold_scale", 4.0);
        config.synth.seed = static_cast<std::uint64_t>(f.get_int("seed", 0));
        f.finish();
    }
    {
        Fields f = fields_for(raw, "partition", errors);
        config.partition.clients_per_device = static_cast<int>(f.get_int("clients_per_device", 5));
        config.partition.samples_per_client =
            static_cast<std::size_t>(f.get_int("samples_per_client", 1000));
        config.partition.benign_fraction = f.get_double("benign_fraction", 0.5);
        if (f.has("dirichlet_beta")) {
            config.partition.dirichlet_beta = f.get_double("dirichlet_beta", 0.0);
        }
        config.partition.unlabeled_fraction = f.get_double("unlabeled_fraction", 0.0);
        config.partition.train_ratio = f.get_double("train_ratio", 0.5);
        config.partition.seed = static_cast<std::uint64_t>(f.get_int("seed", 0));
        f.finish();
    }
    {
        Fields f = fields_for(raw, "train", errors);
        config.hyper.local_epochs = static_cast<int>(f.get_int("local_epochs", 5));
        config.hyper.batch_size = static_cast<int>(f.get_int("batch_size", 32));
        config.hyper.learning_rate = f.get_double("learning_rate", 0.01);
        config.hyper.weight_decay = f.get_double("weight_decay", 1e-4);
        config.hyper.stabilization_patience = static_cast<int>(f.get_int("patience", 3));
        f.finish();
    }
    {
        Fields f = fields_for(raw, "sweep", errors);
        config.sweep_axis = f.get_string("axis", "none");
        config.sweep_values = f.get_double_list("values");
        f.finish();
    }
    config.hyper.max_rounds = config.rounds;
    config.partition.alpha_default = config.alpha;
    // the one permitted environment override
    if (const char* out = std::getenv("CLADSIM_OUTPUT"); out && *out) {
        config.output_dir = out;
    }
    return config;
}

void validate_config(const ExperimentConfig& config, std::vector<std::string>& errors) {
    if (config.seeds.empty()) errors.push_back("experiment.seeds: at least one seed required");
    if (config.rounds < 1) errors.push_back("experiment.rounds: must be >= 1");
    if (config.clusters < 1) errors.push_back("experiment.clusters: must be >= 1");
    if (config.output_dir.empty()) errors.push_back("experiment.output: output directory required");
    if (config.encoder_widths.empty()) {
        errors.push_back("model.encoder_widths: required (last entry is the latent dim)");
    }
    if (config.dropout < 0.0 || config.dropout >= 1.0) {
        errors.push_back("model.dropout: must be in [0, 1)");
    }
    if (config.alpha < 0.0 || config.alpha > 1.0) errors.push_back("model.alpha: must be in [0, 1]");
    if (config.source == DataSource::Csv) {
        if (config.csv_files.empty()) {
            errors.push_back("data.files: at least one device csv required for source = csv");
        }
    } else {
        try {
            config.synth.validate();
        } catch (const std::exception& e) {
            errors.push_back(std::string("data: ") + e.what());
        }
    }
    try {
        config.partition.validate();
    } catch (const std::exception& e) {
        errors.push_back(std::string("partition: ") + e.what());
    }
    try {
        config.hyper.validate();
    } catch (const std::exception& e) {
        errors.push_back(std::string("train: ") + e.what());
    }
    const std::set<std::string> axes = {"none", "benign_fraction", "dirichlet_beta",
                                        "unlabeled_fraction", "samples_per_client",
                                        "clients_per_device"};
    if (!axes.count(config.sweep_axis)) {
        errors.push_back("sweep.axis: unknown axis '" + config.sweep_axis + "'");
    } else if (config.sweep_axis == "none" && !config.sweep_values.empty()) {
        errors.push_back("sweep.values: values given but axis is none");
    } else if (config.sweep_axis != "none" && config.sweep_values.empty()) {
        errors.push_back("sweep.values: at least one value required for axis " + config.sweep_axis);
    }
    if (config.source == DataSource::Synthetic && !config.encoder_widths.empty() &&
        !config.encoder_widths.empty() && config.synth.feature_dim <= config.encoder_widths.back()) {
        errors.push_back("model.encoder_widths: latent dim must be smaller than data.feature_dim");
    }
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& config, double value) {
    ExperimentConfig out = config;
    if (config.sweep_axis == "benign_fraction") {
        out.partition.benign_fraction = value;
    } else if (config.sweep_axis == "dirichlet_beta") {
        out.partition.dirichlet_beta = value;
    } else if (config.sweep_axis == "unlabeled_fraction") {
        out.partition.unlabeled_fraction = value;
    } else if (config.sweep_axis == "samples_per_client") {
        out.partition.samples_per_client = static_cast<std::size_t>(std::llround(value));
    } else if (config.sweep_axis == "clients_per_device") {
        out.partition.clients_per_device = static_cast<int>(std::llround(value));
    } else if (config.sweep_axis != "none") {
        throw std::invalid_argument("apply_sweep_value: unknown axis " + config.sweep_axis);
    }
    return out;
}

std::string sweep_tag(const ExperimentConfig& config, double value) {
    if (config.sweep_axis == "none") return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s=%g", config.sweep_axis.c_str(), value);
    return buf;
}

}  // namespace clad::harness
