#include "clad/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;

namespace clad::harness {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt_metric(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt_count(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    if (v == std::floor(v) && std::abs(v) < 9.0e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    } else {
        std::snprintf(buf, sizeof(buf), "%.3f", v);
    }
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        os << content;
        if (!os) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

double parse_double_or_nan(const std::string& s) {
    if (s == "nan" || s.empty()) return kNan;
    return std::strtod(s.c_str(), nullptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

std::vector<data::Dataset> build_devices(const ExperimentConfig& config) {
    std::vector<data::Dataset> devices;
    if (config.source == DataSource::Synthetic) {
        devices = data::synth_generate(config.synth);
    } else {
        for (const std::string& file : config.csv_files) {
            devices.push_back(data::load_csv(file, config.label_column, config.benign_label));
        }
        for (std::size_t d = 1; d < devices.size(); ++d) {
            if (devices[d].feature_dim != devices[0].feature_dim) {
                throw std::runtime_error("data.files: '" + config.csv_files[d] + "' has " +
                                         std::to_string(devices[d].feature_dim) +
                                         " features, expected " +
                                         std::to_string(devices[0].feature_dim));
            }
            if (devices[d].class_names != devices[0].class_names) {
                throw std::runtime_error("data.files: '" + config.csv_files[d] +
                                         "' disagrees on class labels with '" +
                                         config.csv_files[0] + "'");
            }
        }
    }
    if (config.scale) {
        for (data::Dataset& device : devices) {
            device = data::apply_scaler(device, data::fit_scaler(device));
        }
    }
    return devices;
}

Dm2aConfig model_config_for(const ExperimentConfig& config, const data::Dataset& device) {
    Dm2aConfig mc;
    mc.input_dim = device.feature_dim;
    mc.encoder_widths = config.encoder_widths;
    mc.num_classes = device.class_count;
    mc.dropout_p = config.dropout;
    mc.alpha_default = config.alpha;
    mc.validate();
    return mc;
}

const char* kRowsHeader =
    "run_id,algorithm,seed,sweep_axis,sweep_value,round,cum_bytes,cum_flops,"
    "cls_f1,cls_acc,ad_f1,mcc,purity,stabilized\n";

struct RunOutput {
    std::string group;
    std::uint64_t seed = 0;
    fl::ExperimentResult result;
};

std::string rows_csv(const ExperimentConfig& config, const std::string& group, std::uint64_t seed,
                     double sweep_value, const fl::ExperimentResult& result) {
    std::ostringstream os;
    os << kRowsHeader;
    const std::string alg = to_string(config.algorithm);
    for (const fl::RoundLog& log : result.rounds) {
        os << group << ',' << alg << ',' << seed << ',' << config.sweep_axis << ','
           << (config.sweep_axis == "none" ? "nan" : fmt_metric(sweep_value)) << ',' << log.round
           << ',' << fmt_count(log.cum_bytes_per_client) << ','
           << fmt_count(log.cum_flops_per_client) << ',' << fmt_metric(log.cls_f1) << ','
           << fmt_metric(log.cls_acc) << ',' << fmt_metric(log.ad_f1) << ','
           << fmt_metric(log.mcc) << ',' << fmt_metric(log.purity) << ','
           << (log.stabilized ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string meta_json(const ExperimentConfig& config, const std::string& group, std::uint64_t seed,
                      double sweep_value, const std::vector<partition::ClientDataset>& clients,
                      const Dm2aConfig& mc) {
    nlohmann::json j;
    j["generated_at"] = []() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        return std::string(buf);
    }();
    j["run"] = {{"group", group},
                {"algorithm", to_string(config.algorithm)},
                {"seed", seed},
                {"sweep_axis", config.sweep_axis},
                {"sweep_value", config.sweep_axis == "none" ? nlohmann::json() : nlohmann::json(sweep_value)},
                {"rounds", config.rounds},
                {"clusters", config.clusters}};
    j["optimizer"] = {{"type", "adamw"},
                      {"learning_rate", config.hyper.learning_rate},
                      {"weight_decay", config.hyper.weight_decay},
                      {"beta1", 0.9},
                      {"beta2", 0.999},
                      {"eps", 1e-8}};
    j["model"] = {{"input_dim", mc.input_dim},
                  {"encoder_widths", mc.encoder_widths},
                  {"classifier_hidden", mc.classifier_hidden()},
                  {"num_classes", mc.num_classes},
                  {"dropout", mc.dropout_p},
                  {"param_count", param_count(mc)},
                  {"wire_bytes", accounting::model_bytes(param_count(mc))},
                  {"init", "uniform(-sqrt(1/fan_in), sqrt(1/fan_in)) on weights and biases"}};
    j["metrics_note"] = {
        {"cls", "labeled clients only, via the classifier head"},
        {"ad", "labeled clients: predicted class != benign; unlabeled clients: "
               "reconstruction error over the calibrated threshold"}};
    nlohmann::json jc = nlohmann::json::array();
    for (const partition::ClientDataset& c : clients) {
        jc.push_back({{"id", c.client_id},
                      {"device", c.device_id},
                      {"train", c.train.size()},
                      {"test", c.test.size()},
                      {"benign_val", c.benign_val.size()},
                      {"labeled", c.labeled},
                      {"alpha", c.alpha}});
    }
    j["clients"] = std::move(jc);
    return j.dump(2) + "\n";
}

struct SeriesStats {
    double mean = kNan;
    double std = kNan;
};

SeriesStats mean_std(const std::vector<double>& values) {
    std::vector<double> clean;
    for (const double v : values) {
        if (!std::isnan(v)) clean.push_back(v);
    }
    if (clean.empty()) return {};
    double mean = 0.0;
    for (const double v : clean) mean += v;
    mean /= static_cast<double>(clean.size());
    if (clean.size() < 2) return {mean, kNan};
    double var = 0.0;
    for (const double v : clean) var += (v - mean) * (v - mean);
    var /= static_cast<double>(clean.size() - 1);
    return {mean, std::sqrt(var)};
}

}  // namespace

std::vector<std::string> run_config(const ExperimentConfig& config) {
    std::vector<std::string> errors;
    validate_config(config, errors);
    if (!errors.empty()) {
        std::string msg = "invalid config:";
        for (const std::string& e : errors) msg += "\n  " + e;
        throw std::runtime_error(msg);
    }
    fs::create_directories(config.output_dir);
    const std::vector<data::Dataset> devices = build_devices(config);
    const Dm2aConfig mc = model_config_for(config, devices.front());

    struct RunTask {
        ExperimentConfig cfg;
        std::string group;
        double sweep_value = kNan;
        std::uint64_t seed = 0;
        const std::vector<partition::ClientDataset>* clients = nullptr;
    };

    // one client population per sweep value, shared across seeds
    std::vector<double> values = config.sweep_values;
    if (config.sweep_axis == "none") values = {kNan};
    std::vector<std::unique_ptr<std::vector<partition::ClientDataset>>> populations;
    std::vector<RunTask> tasks;
    for (const double value : values) {
        ExperimentConfig cfg =
            config.sweep_axis == "none" ? config : apply_sweep_value(config, value);
        auto clients = std::make_unique<std::vector<partition::ClientDataset>>(
            partition::build_clients(devices, cfg.partition));
        const std::string tag = sweep_tag(config, value);
        const std::string group =
            config.effective_run_id() + (tag.empty() ? "" : "_" + tag);
        for (const std::uint64_t seed : config.seeds) {
            tasks.push_back(RunTask{cfg, group, value, seed, clients.get()});
        }
        populations.push_back(std::move(clients));
    }

    std::vector<std::string> rows_paths(tasks.size());
    std::vector<fl::ExperimentResult> results(tasks.size());
    std::vector<std::exception_ptr> failures(tasks.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>(tasks.size(), std::max(1u, std::thread::hardware_concurrency()));
    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const RunTask& task = tasks[t];
            try {
                fl::ExperimentResult result =
                    fl::run_experiment(task.cfg.algorithm, *task.clients, mc, task.cfg.hyper,
                                       task.cfg.clusters, task.seed);
                const std::string base =
                    task.group + "_seed" + std::to_string(task.seed);
                const std::string rows_path =
                    (fs::path(task.cfg.output_dir) / ("rows_" + base + ".csv")).string();
                write_atomic(rows_path,
                             rows_csv(task.cfg, task.group, task.seed, task.sweep_value, result));
                write_atomic((fs::path(task.cfg.output_dir) / ("meta_" + base + ".json")).string(),
                             meta_json(task.cfg, task.group, task.seed, task.sweep_value,
                                       *task.clients, mc));
                if (task.cfg.save_models) {
                    const fs::path dir = fs::path(task.cfg.output_dir) / ("models_" + base);
                    fs::create_directories(dir);
                    for (std::size_t m = 0; m < result.final_models.size(); ++m) {
                        save_checkpoint((dir / ("model_" + std::to_string(m) + ".ckpt")).string(),
                                        unflatten(mc, result.final_models[m]));
                    }
                }
                rows_paths[t] = rows_path;
                results[t] = std::move(result);
            } catch (...) {
                failures[t] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    // summary across seeds per group
    std::ostringstream os;
    os << "group,algorithm,sweep_axis,sweep_value,seeds,rounds,stab_round_mean,"
          "cls_f1_mean,cls_f1_std,cls_acc_mean,cls_acc_std,ad_f1_mean,ad_f1_std,"
          "mcc_mean,mcc_std,purity_mean,purity_std,cum_bytes_mean,cum_flops_mean\n";
    std::size_t t = 0;
    for (const double value : values) {
        const std::string tag = sweep_tag(config, value);
        const std::string group = config.effective_run_id() + (tag.empty() ? "" : "_" + tag);
        std::vector<double> f1, acc, ad, mcc, purity, bytes, flops, stab;
        for (std::size_t s = 0; s < config.seeds.size(); ++s, ++t) {
            const fl::ExperimentResult& r = results[t];
            const fl::RoundLog& last = r.rounds.back();
            f1.push_back(last.cls_f1);
            acc.push_back(last.cls_acc);
            ad.push_back(last.ad_f1);
            mcc.push_back(last.mcc);
            purity.push_back(last.purity);
            bytes.push_back(last.cum_bytes_per_client);
            flops.push_back(last.cum_flops_per_client);
            double stab_round = kNan;
            for (const fl::RoundLog& log : r.rounds) {
                if (log.stabilized) {
                    stab_round = log.round;
                    break;
                }
            }
            stab.push_back(stab_round);
        }
        const SeriesStats sf1 = mean_std(f1), sacc = mean_std(acc), sad = mean_std(ad),
                          smcc = mean_std(mcc), spur = mean_std(purity);
        os << group << ',' << to_string(config.algorithm) << ',' << config.sweep_axis << ','
           << (config.sweep_axis == "none" ? "nan" : fmt_metric(value)) << ','
           << config.seeds.size() << ',' << config.rounds << ','
           << fmt_metric(mean_std(stab).mean) << ',' << fmt_metric(sf1.mean) << ','
           << fmt_metric(sf1.std) << ',' << fmt_metric(sacc.mean) << ',' << fmt_metric(sacc.std)
           << ',' << fmt_metric(sad.mean) << ',' << fmt_metric(sad.std) << ','
           << fmt_metric(smcc.mean) << ',' << fmt_metric(smcc.std) << ','
           << fmt_metric(spur.mean) << ',' << fmt_metric(spur.std) << ','
           << fmt_count(mean_std(bytes).mean) << ',' << fmt_count(mean_std(flops).mean) << '\n';
    }
    write_atomic(
        (fs::path(config.output_dir) / ("summary_" + config.effective_run_id() + ".csv")).string(),
        os.str());
    return rows_paths;
}

std::vector<std::string> write_synthetic_devices(const ExperimentConfig& config,
                                                 const std::string& out_dir) {
    if (config.source != DataSource::Synthetic) {
        throw std::runtime_error("synth: config data source is not synthetic");
    }
    fs::create_directories(out_dir);
    const std::vector<data::Dataset> devices = build_devices(config);
    std::vector<std::string> paths;
    for (std::size_t d = 0; d < devices.size(); ++d) {
        const std::string path =
            (fs::path(out_dir) / ("device_" + std::to_string(d) + ".csv")).string();
        data::save_csv(path, devices[d], config.label_column);
        paths.push_back(path);
    }
    return paths;
}

Budget parse_budget(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'))
        ++i;
    if (i == 0) throw std::runtime_error("budget: cannot parse '" + text + "'");
    const double amount = std::strtod(text.substr(0, i).c_str(), nullptr);
    std::string unit = text.substr(i);
    std::transform(unit.begin(), unit.end(), unit.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    Budget b;
    b.label = text;
    if (unit == "MB" || unit == "MIB") {
        b.kind = Budget::Kind::Bytes;
        b.amount = amount * 1048576.0;
    } else if (unit == "KB" || unit == "KIB") {
        b.kind = Budget::Kind::Bytes;
        b.amount = amount * 1024.0;
    } else if (unit == "GFLOP" || unit == "GFLOPS") {
        b.kind = Budget::Kind::Flops;
        b.amount = amount * 1e9;
    } else if (unit == "MFLOP" || unit == "MFLOPS") {
        b.kind = Budget::Kind::Flops;
        b.amount = amount * 1e6;
    } else {
        throw std::runtime_error("budget: unknown unit in '" + text +
                                 "' (use MB, KB, GFLOP or MFLOP)");
    }
    return b;
}

namespace {

struct ParsedRow {
    std::string group;
    std::string algorithm;
    std::uint64_t seed = 0;
    std::string sweep_axis;
    double sweep_value = kNan;
    int round = 0;
    double cum_bytes = 0.0;
    double cum_flops = 0.0;
    double cls_f1 = kNan, cls_acc = kNan, ad_f1 = kNan, mcc = kNan, purity = kNan;
    int stabilized = 0;
};

std::vector<ParsedRow> parse_rows_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("report: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("report: '" + path + "' is empty");
    std::vector<ParsedRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != 14) {
            throw std::runtime_error("report: '" + path + "' has a malformed row");
        }
        ParsedRow r;
        r.group = cells[0];
        r.algorithm = cells[1];
        r.seed = std::strtoull(cells[2].c_str(), nullptr, 10);
        r.sweep_axis = cells[3];
        r.sweep_value = parse_double_or_nan(cells[4]);
        r.round = static_cast<int>(std::strtol(cells[5].c_str(), nullptr, 10));
        r.cum_bytes = parse_double_or_nan(cells[6]);
        r.cum_flops = parse_double_or_nan(cells[7]);
        r.cls_f1 = parse_double_or_nan(cells[8]);
        r.cls_acc = parse_double_or_nan(cells[9]);
        r.ad_f1 = parse_double_or_nan(cells[10]);
        r.mcc = parse_double_or_nan(cells[11]);
        r.purity = parse_double_or_nan(cells[12]);
        r.stabilized = static_cast<int>(std::strtol(cells[13].c_str(), nullptr, 10));
        rows.push_back(std::move(r));
    }
    return rows;
}

struct Snapshot {
    double cls_f1 = kNan, cls_acc = kNan, ad_f1 = kNan, mcc = kNan;
};

double metric_by_name(const Snapshot& s, const std::string& name) {
    if (name == "cls_f1") return s.cls_f1;
    if (name == "cls_acc") return s.cls_acc;
    if (name == "ad_f1") return s.ad_f1;
    return s.mcc;
}

}  // namespace

std::vector<std::string> write_report(const std::string& results_dir,
                                      const std::vector<Budget>& budgets) {
    std::vector<std::string> rows_files;
    for (const fs::directory_entry& entry : fs::directory_iterator(results_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("rows_", 0) == 0 && entry.path().extension() == ".csv") {
            rows_files.push_back(entry.path().string());
        }
    }
    std::sort(rows_files.begin(), rows_files.end());
    if (rows_files.empty()) throw std::runtime_error("report: no rows_*.csv in " + results_dir);

    // group -> seed -> rounds
    std::map<std::string, std::map<std::uint64_t, std::vector<ParsedRow>>> groups;
    for (const std::string& file : rows_files) {
        for (ParsedRow& row : parse_rows_file(file)) {
            groups[row.group][row.seed].push_back(std::move(row));
        }
    }
    for (auto& [group, seeds] : groups) {
        for (auto& [seed, rows] : seeds) {
            std::sort(rows.begin(), rows.end(),
                      [](const ParsedRow& a, const ParsedRow& b) { return a.round < b.round; });
        }
    }

    std::vector<std::string> outputs;
    auto emit_curves = [&](const std::string& group,
                           const std::map<std::uint64_t, std::vector<ParsedRow>>& seeds) {
        const std::size_t n_rounds = seeds.begin()->second.size();
        struct Avg {
            double bytes = 0.0, flops = 0.0, f1 = 0.0, acc = 0.0, ad = 0.0, mcc = 0.0;
        };
        std::vector<Avg> avg(n_rounds);
        for (std::size_t r = 0; r < n_rounds; ++r) {
            std::vector<double> bytes, flops, f1, acc, ad, mcc;
            for (const auto& [seed, rows] : seeds) {
                if (r >= rows.size()) continue;
                bytes.push_back(rows[r].cum_bytes);
                flops.push_back(rows[r].cum_flops);
                f1.push_back(rows[r].cls_f1);
                acc.push_back(rows[r].cls_acc);
                ad.push_back(rows[r].ad_f1);
                mcc.push_back(rows[r].mcc);
            }
            avg[r] = {mean_std(bytes).mean, mean_std(flops).mean, mean_std(f1).mean,
                      mean_std(acc).mean,   mean_std(ad).mean,    mean_std(mcc).mean};
        }
        const struct {
            const char* prefix;
            const char* x_header;
        } kinds[] = {{"curve_round_", "round"},
                     {"curve_bytes_", "cum_bytes"},
                     {"curve_flops_", "cum_flops"}};
        for (const auto& kind : kinds) {
            std::ostringstream os;
            os << kind.x_header << ",cls_f1,cls_acc,ad_f1,mcc\n";
            for (std::size_t r = 0; r < n_rounds; ++r) {
                std::string x;
                if (std::string(kind.x_header) == "round") {
                    x = std::to_string(r);
                } else if (std::string(kind.x_header) == "cum_bytes") {
                    x = fmt_count(avg[r].bytes);
                } else {
                    x = fmt_count(avg[r].flops);
                }
                os << x << ',' << fmt_metric(avg[r].f1) << ',' << fmt_metric(avg[r].acc) << ','
                   << fmt_metric(avg[r].ad) << ',' << fmt_metric(avg[r].mcc) << '\n';
            }
            const std::string path =
                (fs::path(results_dir) / (kind.prefix + group + ".csv")).string();
            write_atomic(path, os.str());
            outputs.push_back(path);
        }
    };
    for (const auto& [group, seeds] : groups) emit_curves(group, seeds);

    if (!budgets.empty()) {
        // snapshot per (group, budget): metrics of the last round within budget,
        // averaged across seeds
        std::map<std::string, std::vector<Snapshot>> snapshots;  // group -> per budget
        std::map<std::string, std::pair<std::string, std::string>> group_info;  // alg, sweep cell
        for (const auto& [group, seeds] : groups) {
            std::vector<Snapshot> per_budget;
            for (const Budget& budget : budgets) {
                std::vector<double> f1, acc, ad, mcc;
                for (const auto& [seed, rows] : seeds) {
                    const ParsedRow* chosen = nullptr;
                    for (const ParsedRow& row : rows) {
                        const double cum =
                            budget.kind == Budget::Kind::Bytes ? row.cum_bytes : row.cum_flops;
                        if (cum <= budget.amount) chosen = &row;
                    }
                    if (!chosen) continue;  // even round 0 exceeds the budget
                    f1.push_back(chosen->cls_f1);
                    acc.push_back(chosen->cls_acc);
                    ad.push_back(chosen->ad_f1);
                    mcc.push_back(chosen->mcc);
                }
                per_budget.push_back(Snapshot{mean_std(f1).mean, mean_std(acc).mean,
                                              mean_std(ad).mean, mean_std(mcc).mean});
            }
            snapshots[group] = std::move(per_budget);
            const ParsedRow& first = seeds.begin()->second.front();
            group_info[group] = {first.algorithm,
                                 first.sweep_axis == "none"
                                     ? "-"
                                     : first.sweep_axis + "=" + fmt_metric(first.sweep_value)};
        }

        // relative gains for clad groups against the best baseline in the same
        // sweep cell
        bool any_clad = false, any_baseline = false;
        for (const auto& [group, info] : group_info) {
            (info.first == "clad" ? any_clad : any_baseline) = true;
        }
        const bool with_gains = any_clad && any_baseline;
        const char* metric_names[] = {"cls_f1", "cls_acc", "ad_f1", "mcc"};

        std::ostringstream os;
        os << "group,algorithm,sweep,metric";
        for (const Budget& b : budgets) os << ",at_" << b.label;
        if (with_gains) {
            for (const Budget& b : budgets) os << ",gain_" << b.label;
        }
        os << '\n';
        for (const auto& [group, per_budget] : snapshots) {
            const auto& [alg, cell] = group_info.at(group);
            for (const char* metric : metric_names) {
                os << group << ',' << alg << ',' << cell << ',' << metric;
                for (std::size_t b = 0; b < budgets.size(); ++b) {
                    os << ',' << fmt_metric(metric_by_name(per_budget[b], metric));
                }
                if (with_gains) {
                    for (std::size_t b = 0; b < budgets.size(); ++b) {
                        std::string gain = "nan";
                        if (alg == "clad") {
                            double best = kNan;
                            for (const auto& [other, other_budget] : snapshots) {
                                const auto& [other_alg, other_cell] = group_info.at(other);
                                if (other_alg == "clad" || other_cell != cell) continue;
                                const double v = metric_by_name(other_budget[b], metric);
                                if (std::isnan(v)) continue;
                                if (std::isnan(best) || v > best) best = v;
                            }
                            const double ours = metric_by_name(per_budget[b], metric);
                            if (!std::isnan(best) && best > 0.0 && !std::isnan(ours)) {
                                char buf[32];
                                std::snprintf(buf, sizeof(buf), "%+.1f%%",
                                              100.0 * (ours - best) / best);
                                gain = buf;
                            }
                        }
                        os << ',' << gain;
                    }
                }
                os << '\n';
            }
        }
        const std::string path = (fs::path(results_dir) / "budget_table.csv").string();
        write_atomic(path, os.str());
        outputs.push_back(path);
    }
    return outputs;
}

int cli_run(const std::string& config_path) {
    std::vector<std::string> errors;
    const ExperimentConfig config = load_config(config_path, errors);
    validate_config(config, errors);
    if (!errors.empty()) {
        for (const std::string& e : errors) std::cerr << "error: " << e << '\n';
        return 2;
    }
    try {
        const std::vector<std::string> paths = run_config(config);
        for (const std::string& p : paths) std::cout << p << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int cli_validate(const std::string& config_path) {
    std::vector<std::string> errors;
    const ExperimentConfig config = load_config(config_path, errors);
    validate_config(config, errors);
    if (!errors.empty()) {
        for (const std::string& e : errors) std::cerr << "error: " << e << '\n';
        return 2;
    }
    std::cout << "ok: " << config_path << " (" << to_string(config.algorithm) << ", "
              << config.seeds.size() << " seeds, " << config.rounds << " rounds)\n";
    return 0;
}

int cli_report(const std::string& results_dir, const std::vector<std::string>& budget_args) {
    try {
        std::vector<Budget> budgets;
        for (const std::string& arg : budget_args) budgets.push_back(parse_budget(arg));
        const std::vector<std::string> outputs = write_report(results_dir, budgets);
        for (const std::string& p : outputs) std::cout << p << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int cli_synth(const std::string& config_path, const std::string& out_dir) {
    std::vector<std::string> errors;
    const ExperimentConfig config = load_config(config_path, errors);
    if (!errors.empty()) {
        for (const std::string& e : errors) std::cerr << "error: " << e << '\n';
        return 2;
    }
    try {
        const std::vector<std::string> paths = write_synthetic_devices(config, out_dir);
        for (const std::string& p : paths) std::cout << p << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace clad::harness
