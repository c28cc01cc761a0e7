#include "clad/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace clad::data {

Dataset Dataset::benign_subset() const {
    Dataset out;
    out.feature_dim = feature_dim;
    out.class_count = class_count;
    out.class_names = class_names;
    for (const Sample& s : samples) {
        if (s.label == 0) out.samples.push_back(s);
    }
    return out;
}

std::vector<std::size_t> Dataset::label_histogram() const {
    std::vector<std::size_t> hist(class_count, 0);
    for (const Sample& s : samples) {
        if (s.label >= 0 && static_cast<std::size_t>(s.label) < class_count) ++hist[s.label];
    }
    return hist;
}

nn::Matrix Dataset::features_matrix() const {
    nn::Matrix m(samples.size(), feature_dim);
    for (std::size_t r = 0; r < samples.size(); ++r) {
        std::copy(samples[r].features.begin(), samples[r].features.end(), &m.data[r * feature_dim]);
    }
    return m;
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out(samples.size(), 0);
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].label;
    return out;
}

std::vector<double> Dataset::feature_mean() const {
    std::vector<double> mean(feature_dim, 0.0);
    if (samples.empty()) return mean;
    for (const Sample& s : samples) {
        for (std::size_t f = 0; f < feature_dim; ++f) mean[f] += s.features[f];
    }
    for (double& v : mean) v /= static_cast<double>(samples.size());
    return mean;
}

ScalerParams fit_scaler(const Dataset& ds) {
    if (ds.empty()) throw std::invalid_argument("fit_scaler: empty dataset");
    ScalerParams p;
    p.min.assign(ds.feature_dim, 0.0);
    p.max.assign(ds.feature_dim, 0.0);
    for (std::size_t f = 0; f < ds.feature_dim; ++f) {
        double lo = ds.samples[0].features[f];
        double hi = lo;
        for (const Sample& s : ds.samples) {
            lo = std::min(lo, s.features[f]);
            hi = std::max(hi, s.features[f]);
        }
        p.min[f] = lo;
        p.max[f] = hi;
    }
    return p;
}

Dataset apply_scaler(const Dataset& ds, const ScalerParams& params) {
    if (params.min.size() != ds.feature_dim || params.max.size() != ds.feature_dim) {
        throw std::invalid_argument("apply_scaler: scaler dimension mismatch");
    }
    Dataset out = ds;
    for (Sample& s : out.samples) {
        for (std::size_t f = 0; f < ds.feature_dim; ++f) {
            const double range = params.max[f] - params.min[f];
            s.features[f] = range > 0.0 ? (s.features[f] - params.min[f]) / range : 0.0;
        }
    }
    return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double ratio, std::uint64_t seed) {
    if (ratio <= 0.0 || ratio >= 1.0) {
        throw std::invalid_argument("split_train_test: ratio must be in (0, 1)");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) by_class[ds.samples[i].label].push_back(i);
    for (const auto& [label, idx] : by_class) {
        if (idx.size() < 2) {
            throw std::runtime_error("split_train_test: class " + std::to_string(label) +
                                     " has fewer than 2 samples");
        }
    }
    Rng rng(seed);
    Dataset train, test;
    for (Dataset* part : {&train, &test}) {
        part->feature_dim = ds.feature_dim;
        part->class_count = ds.class_count;
        part->class_names = ds.class_names;
    }
    for (auto& [label, idx] : by_class) {
        rng.shuffle(idx);
        std::size_t n_train = static_cast<std::size_t>(
            std::floor(ratio * static_cast<double>(idx.size()) + 0.5));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_train ? train : test).samples.push_back(ds.samples[idx[i]]);
        }
    }
    return {std::move(train), std::move(test)};
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& benign_label) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_csv: cannot open file '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("load_csv: '" + path + "' is empty");

    const std::vector<std::string> header = split_line(line);
    std::size_t label_idx = header.size();
    std::vector<std::string> feature_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == label_column) {
            label_idx = i;
        } else {
            feature_names.push_back(trim(header[i]));
        }
    }
    if (label_idx == header.size()) {
        throw std::runtime_error("load_csv: '" + path + "' has no label column named '" +
                                 label_column + "'");
    }

    struct RawRow {
        std::vector<double> features;
        std::string label;
    };
    std::vector<RawRow> rows;
    std::vector<std::size_t> bad_rows;
    std::set<std::string> label_values;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            bad_rows.push_back(line_no);
            continue;
        }
        RawRow row;
        row.features.reserve(header.size() - 1);
        bool ok = true;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == label_idx) {
                row.label = trim(cells[i]);
                continue;
            }
            const std::string cell = trim(cells[i]);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
                ok = false;
                break;
            }
            row.features.push_back(v);
        }
        if (!ok) {
            bad_rows.push_back(line_no);
            continue;
        }
        label_values.insert(row.label);
        rows.push_back(std::move(row));
    }
    if (!bad_rows.empty()) {
        std::string msg = "load_csv: '" + path + "' has non-numeric or malformed cells at row";
        msg += bad_rows.size() > 1 ? "s" : "";
        for (std::size_t i = 0; i < bad_rows.size() && i < 10; ++i) {
            msg += (i ? ", " : " ") + std::to_string(bad_rows[i]);
        }
        if (bad_rows.size() > 10) msg += ", ...";
        throw std::runtime_error(msg);
    }
    if (rows.empty()) throw std::runtime_error("load_csv: '" + path + "' has zero usable rows");

    // benign first, remaining labels in lexicographic order
    std::map<std::string, int> label_map;
    label_map[benign_label] = 0;
    int next = 1;
    for (const std::string& lv : label_values) {
        if (lv != benign_label) label_map[lv] = next++;
    }

    Dataset ds;
    ds.feature_dim = header.size() - 1;
    ds.class_count = static_cast<std::size_t>(next);
    ds.class_names.resize(ds.class_count);
    for (const auto& [name, idx] : label_map) ds.class_names[idx] = name;
    ds.samples.reserve(rows.size());
    for (RawRow& row : rows) {
        ds.samples.push_back(Sample{std::move(row.features), label_map.at(row.label)});
    }
    return ds;
}

void save_csv(const std::string& path, const Dataset& ds, const std::string& label_column) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_csv: cannot open '" + path + "' for writing");
    for (std::size_t f = 0; f < ds.feature_dim; ++f) os << 'f' << f << ',';
    os << label_column << '\n';
    char buf[40];
    for (const Sample& s : ds.samples) {
        for (const double v : s.features) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            os << buf << ',';
        }
        if (static_cast<std::size_t>(s.label) < ds.class_names.size()) {
            os << ds.class_names[s.label];
        } else {
            os << s.label;
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("save_csv: write failed for '" + path + "'");
}

}  // namespace clad::data
