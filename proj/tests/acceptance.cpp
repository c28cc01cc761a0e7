// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. `acceptance --only N` runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "clad/clustering.hpp"
#include "clad/dm2a.hpp"
#include "clad/fl.hpp"
#include "clad/harness.hpp"
#include "clad/metrics.hpp"
#include "clad/partition.hpp"
#include "clad/synth.hpp"

using namespace clad;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

// ---------------------------------------------------------------------------
// criterion 1: analytic gradients vs central finite differences on the
// cic-sized topology
// ---------------------------------------------------------------------------
Check gradient_correctness() {
    Check check;
    Dm2aConfig config;
    config.input_dim = 110;
    config.encoder_widths = {96, 48, 24};
    config.num_classes = 7;
    config.dropout_p = 0.2;  // disabled anyway: gradcheck runs in inference mode

    const double h = 1e-5;
    double worst = 0.0;
    for (int instance = 0; instance < 20; ++instance) {
        Rng rng(derive_seed(1000, "gradcheck", instance));
        Dm2aModel model = make_model(config, rng);
        nn::Matrix x(8, config.input_dim);
        for (double& v : x.data) v = rng.uniform();
        std::vector<int> y(8, 0);
        for (int& label : y) label = static_cast<int>(rng.index(config.num_classes));
        const double alpha = 0.8;

        Dm2aCaches caches;
        const DualOutput out = forward_dual(model, x, false, nullptr, &caches);
        const Dm2aGrads grads = backward_dual(model, caches, x, out, y, alpha);
        const std::vector<double> analytic = flatten_grads(model, grads);
        std::vector<double> flat = flatten(model);

        auto loss_at = [&](const std::vector<double>& params) {
            const Dm2aModel m = unflatten(config, params);
            return composite_loss(x, forward_dual(m, x, false), y, alpha);
        };
        for (int sample = 0; sample < 200; ++sample) {
            const std::size_t p = rng.index(flat.size());
            const double kept = flat[p];
            flat[p] = kept + h;
            const double up = loss_at(flat);
            flat[p] = kept - h;
            const double down = loss_at(flat);
            flat[p] = kept;
            const double fd = (up - down) / (2.0 * h);
            const double rel =
                std::abs(analytic[p] - fd) / std::max({std::abs(analytic[p]), std::abs(fd), 1e-4});
            worst = std::max(worst, rel);
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst relative error %.2e", worst);
    check.note(buf);
    check.expect(worst <= 1e-4, "relative error above 1e-4");
    return check;
}

// shared desk-scale population builder
std::vector<partition::ClientDataset> make_population(const data::SyntheticSpec& synth,
                                                      const partition::PartitionSpec& part,
                                                      bool scale_per_device = false) {
    std::vector<data::Dataset> devices = data::synth_generate(synth);
    if (scale_per_device) {
        for (data::Dataset& device : devices) {
            device = data::apply_scaler(device, data::fit_scaler(device));
        }
    }
    return partition::build_clients(devices, part);
}

// ---------------------------------------------------------------------------
// criterion 2: clad with k = 1 is bit-identical to fedavg
// ---------------------------------------------------------------------------
Check degenerate_equivalence() {
    Check check;
    data::SyntheticSpec synth;
    synth.num_clusters = 2;
    synth.feature_dim = 16;
    synth.attack_classes = 2;
    synth.benign_count = 600;
    synth.attack_count_per_class = 300;
    synth.cluster_separation = 0.8;
    synth.intra_noise = 0.05;
    synth.attack_shift = 0.3;
    synth.seed = 2;

    partition::PartitionSpec part;
    part.clients_per_device = 5;  // 10 clients total
    part.samples_per_client = 150;
    part.seed = 3;
    const auto clients = make_population(synth, part);

    Dm2aConfig config;
    config.input_dim = 16;
    config.encoder_widths = {12, 8, 4};
    config.num_classes = 3;

    fl::TrainHyper hyper;
    hyper.local_epochs = 5;
    hyper.max_rounds = 10;

    fl::ExperimentOptions opts;
    opts.keep_weight_history = true;
    const fl::ExperimentResult clad =
        fl::run_experiment(Algorithm::Clad, clients, config, hyper, 1, 77, opts);
    const fl::ExperimentResult fedavg =
        fl::run_experiment(Algorithm::FedAvg, clients, config, hyper, 1, 77, opts);

    check.expect(clad.weight_history.size() == fedavg.weight_history.size(),
                 "round counts differ");
    std::size_t identical = 0;
    for (std::size_t r = 0; r < clad.weight_history.size(); ++r) {
        if (clad.weight_history[r][0] == fedavg.weight_history[r][0]) ++identical;
    }
    check.note(std::to_string(identical) + "/" + std::to_string(clad.weight_history.size()) +
               " rounds bit-identical");
    check.expect(identical == clad.weight_history.size(), "weight trajectories diverged");
    return check;
}

// ---------------------------------------------------------------------------
// criterion 3: parameter count and byte accounting
// ---------------------------------------------------------------------------
Check parameter_and_bytes() {
    Check check;
    Dm2aConfig config;
    config.input_dim = 110;
    config.encoder_widths = {96, 48, 24};
    config.num_classes = 7;
    const std::size_t params = param_count(config);
    check.note("computed " + std::to_string(params) + " parameters");
    check.expect(std::abs(static_cast<double>(params) - 33800.0) / 33800.0 <= 0.02,
                 "parameter count deviates more than 2% from 33.8k");

    const double mib = static_cast<double>(accounting::model_bytes(33800)) / 1048576.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "33.8k at fp32 = %.4f MiB", mib);
    check.note(buf);
    check.expect(std::abs(mib - 0.129) < 0.001, "fp32 size does not reproduce 0.129 MB");

    accounting::CostLedger ledger(1, accounting::model_bytes(params));
    accounting::record_round(ledger, Algorithm::FedAvg, accounting::Phase::Initial, 1, {0});
    for (int round = 0; round < 100; ++round) {
        accounting::record_round(ledger, Algorithm::FedAvg, accounting::Phase::Clustering, 1, {0});
    }
    const double traffic = ledger.mean_bytes() / 1048576.0;
    std::snprintf(buf, sizeof(buf), "fedavg 100 rounds = %.2f MiB per client", traffic);
    check.note(buf);
    check.expect(traffic >= 25.0 && traffic <= 27.0, "fedavg traffic outside [25, 27] MB");
    return check;
}

// scenario shared by criteria 4 and 9
data::SyntheticSpec recovery_synth() {
    data::SyntheticSpec synth;
    synth.num_clusters = 5;
    synth.feature_dim = 16;
    synth.attack_classes = 2;
    synth.benign_count = 1200;
    synth.attack_count_per_class = 600;
    synth.cluster_separation = 1.0;  // 20x the intra-cluster noise
    synth.intra_noise = 0.05;
    synth.attack_shift = 0.25;  // 5x the intra-cluster noise
    synth.seed = 11;
    return synth;
}

Dm2aConfig recovery_model() {
    Dm2aConfig config;
    config.input_dim = 16;
    config.encoder_widths = {12, 8, 4};
    config.num_classes = 3;
    return config;
}

// ---------------------------------------------------------------------------
// criterion 4: cluster recovery and stabilization within 10 rounds
// ---------------------------------------------------------------------------
Check cluster_recovery() {
    Check check;
    partition::PartitionSpec part;
    part.clients_per_device = 5;
    part.samples_per_client = 200;
    part.seed = 13;
    const auto clients = make_population(recovery_synth(), part);

    fl::TrainHyper hyper;
    hyper.local_epochs = 5;
    hyper.max_rounds = 10;

    for (const std::uint64_t seed : {1, 2, 3}) {
        const fl::ExperimentResult result =
            fl::run_experiment(Algorithm::Clad, clients, recovery_model(), hyper, 5, seed);
        int stabilized_round = -1;
        double purity_at_stab = 0.0;
        for (const fl::RoundLog& log : result.rounds) {
            if (log.stabilized) {
                stabilized_round = log.round;
                purity_at_stab = log.purity;
                break;
            }
        }
        check.note("seed " + std::to_string(seed) + ": stabilized at round " +
                   std::to_string(stabilized_round) + ", purity " +
                   std::to_string(purity_at_stab));
        check.expect(stabilized_round >= 0 && stabilized_round <= 10,
                     "seed " + std::to_string(seed) + " did not stabilize within 10 rounds");
        check.expect(purity_at_stab == 1.0,
                     "seed " + std::to_string(seed) + " purity below 1.0");
    }
    return check;
}

// ---------------------------------------------------------------------------
// criterion 5: clad beats fedavg on classification under conflicting shifts
// ---------------------------------------------------------------------------
Check heterogeneity_trend() {
    Check check;
    data::SyntheticSpec synth = recovery_synth();
    synth.attack_classes = 3;
    synth.attack_count_per_class = 600;
    synth.attack_shift = 0.25;
    synth.conflicting_shifts = true;
    synth.seed = 17;

    partition::PartitionSpec part;
    part.clients_per_device = 5;
    part.samples_per_client = 200;
    part.seed = 19;
    const auto clients = make_population(synth, part);

    Dm2aConfig config = recovery_model();
    config.num_classes = 4;

    fl::TrainHyper hyper;
    hyper.local_epochs = 5;
    hyper.max_rounds = 25;

    for (const std::uint64_t seed : {1, 2, 3}) {
        const fl::ExperimentResult clad =
            fl::run_experiment(Algorithm::Clad, clients, config, hyper, 5, seed);
        const fl::ExperimentResult fedavg =
            fl::run_experiment(Algorithm::FedAvg, clients, config, hyper, 5, seed);
        const double gap = clad.rounds.back().cls_f1 - fedavg.rounds.back().cls_f1;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "seed %llu: clad %.3f vs fedavg %.3f",
                      static_cast<unsigned long long>(seed), clad.rounds.back().cls_f1,
                      fedavg.rounds.back().cls_f1);
        check.note(buf);
        check.expect(gap >= 0.05, "seed " + std::to_string(seed) + " gap below 0.05");
    }
    return check;
}

// ---------------------------------------------------------------------------
// criterion 6: 80% unlabeled clients
//
// The cls clause compares labeled-client macro f1 (the scope the simulator
// reports) and is known not to reach the +0.10 gap under this protocol: the
// cluster classifier trains at an n_labeled/n_cluster effective rate toward a
// compromise with the unlabeled majority's reconstruction objective, while an
// isolated client trains the same labels at full rate. The classification
// benefit of the protocol accrues to unlabeled clients, which inherit a
// trained classifier from their cluster; the all-client diagnostic below
// makes that visible.
// ---------------------------------------------------------------------------
Check label_availability_trend() {
    Check check;
    data::SyntheticSpec synth;
    synth.num_clusters = 5;
    synth.feature_dim = 24;
    synth.attack_classes = 6;
    synth.benign_count = 1200;
    synth.attack_count_per_class = 600;
    synth.cluster_separation = 1.2;
    synth.intra_noise = 0.1;
    synth.attack_shift = 0.5;
    synth.manifold_rank = 2;  // benign structure a lone client cannot estimate
    synth.manifold_scale = 4.0;
    synth.seed = 23;

    partition::PartitionSpec part;
    part.clients_per_device = 10;
    part.samples_per_client = 60;
    part.benign_fraction = 0.6;
    part.unlabeled_fraction = 0.8;
    part.seed = 29;
    const auto clients = make_population(synth, part);

    Dm2aConfig config;
    config.input_dim = 24;
    config.encoder_widths = {32, 16, 8};
    config.num_classes = 7;

    fl::TrainHyper hyper;
    hyper.local_epochs = 5;
    hyper.max_rounds = 120;

    // all-client classification diagnostic: unlabeled clients classified with
    // their deployed model's classifier head
    auto all_client_cls = [&](const fl::ExperimentResult& result, bool is_local) {
        std::vector<double> scores;
        for (std::size_t i = 0; i < clients.size(); ++i) {
            const std::vector<double>* weights = nullptr;
            if (is_local) {
                weights = &result.final_models[i];
            } else {
                const int a = result.final_assignment.empty()
                                  ? 0
                                  : std::max(result.final_assignment[i], 0);
                weights = &result.final_models[a];
            }
            const Dm2aModel model = unflatten(config, *weights);
            const std::vector<int> preds =
                infer_labeled(model, clients[i].test.features_matrix());
            scores.push_back(metrics::macro_f1(
                metrics::confusion(clients[i].test.labels(), preds, config.num_classes)));
        }
        return metrics::average_over_clients(scores);
    };

    for (const std::uint64_t seed : {1, 2, 3}) {
        const fl::ExperimentResult clad =
            fl::run_experiment(Algorithm::Clad, clients, config, hyper, 5, seed);
        const fl::ExperimentResult fedavg =
            fl::run_experiment(Algorithm::FedAvg, clients, config, hyper, 5, seed);
        const fl::ExperimentResult local =
            fl::run_experiment(Algorithm::Local, clients, config, hyper, 5, seed);
        const double clad_ad = clad.rounds.back().ad_f1;
        const double fedavg_ad = fedavg.rounds.back().ad_f1;
        const double local_ad = local.rounds.back().ad_f1;
        const double clad_cls = clad.rounds.back().cls_f1;
        const double local_cls = local.rounds.back().cls_f1;
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "seed %llu: ad clad %.3f fedavg %.3f local %.3f | labeled cls clad %.3f "
                      "local %.3f | all-client cls clad %.3f local %.3f",
                      static_cast<unsigned long long>(seed), clad_ad, fedavg_ad, local_ad,
                      clad_cls, local_cls, all_client_cls(clad, false),
                      all_client_cls(local, true));
        check.note(buf);
        check.expect(clad_ad > fedavg_ad, "seed " + std::to_string(seed) + ": ad not above fedavg");
        check.expect(clad_ad > local_ad, "seed " + std::to_string(seed) + ": ad not above local");
        check.expect(clad_cls - local_cls >= 0.10,
                     "seed " + std::to_string(seed) + ": labeled cls gap below 0.10");
    }
    return check;
}

// ---------------------------------------------------------------------------
// criterion 7: matching optimality against brute force
// ---------------------------------------------------------------------------
Check matching_optimality() {
    Check check;
    Rng rng(4242);
    std::size_t tested = 0;
    for (int k = 2; k <= 6; ++k) {
        for (int rep = 0; rep < 1000; ++rep) {
            std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
            for (auto& row : cost) {
                for (double& c : row) c = rng.uniform();
            }
            const std::vector<int> sigma = cluster::min_cost_matching(cost);
            double got = 0.0;
            for (int r = 0; r < k; ++r) got += cost[r][sigma[r]];

            std::vector<int> perm(k);
            std::iota(perm.begin(), perm.end(), 0);
            double best = 1e300;
            do {
                double total = 0.0;
                for (int r = 0; r < k; ++r) total += cost[r][perm[r]];
                best = std::min(best, total);
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (std::abs(got - best) > 1e-9) {
                check.expect(false, "suboptimal matching at k=" + std::to_string(k));
                return check;
            }
            ++tested;
        }
    }
    check.note(std::to_string(tested) + " matrices optimal");
    return check;
}

// ---------------------------------------------------------------------------
// criterion 8: metric oracles on fixed confusion matrices
// ---------------------------------------------------------------------------
Check metric_oracles() {
    Check check;
    auto cm_from = [](const std::vector<std::vector<std::uint64_t>>& rows) {
        metrics::ConfusionMatrix cm(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < rows.size(); ++c) {
                cm.counts[r * rows.size() + c] = rows[r][c];
            }
        }
        return cm;
    };
    struct Expected {
        std::vector<std::vector<std::uint64_t>> cm;
        double f1, acc, mcc;
    };
    // values hand-derived from the definitions
    const std::vector<Expected> cases = {
        {{{5, 0}, {0, 7}}, 1.0, 1.0, 1.0},
        {{{5, 5}, {5, 5}}, 0.5, 0.5, 0.0},
        {{{0, 5}, {5, 0}}, 0.0, 0.0, -1.0},
        {{{30, 10}, {20, 40}},
         (2.0 / 3.0 + 8.0 / 11.0) / 2.0,
         0.7,
         1000.0 / std::sqrt(50.0 * 60.0 * 40.0 * 50.0)},
        {{{12, 3, 1}, {2, 20, 4}, {0, 5, 9}},
         (4.0 / 5.0 + 20.0 / 27.0 + 9.0 / 14.0) / 3.0,
         41.0 / 56.0,
         1148.0 / std::sqrt(1960.0 * 2008.0)},
        {{{5, 0, 0}, {0, 7, 0}, {0, 0, 0}}, 1.0, 1.0, 1.0},
        {{{4, 1}, {0, 0}}, (8.0 / 9.0) / 2.0, 0.8, 0.0},
        {{{6, 2}, {3, 1}}, (12.0 / 17.0 + 2.0 / 7.0) / 2.0, 7.0 / 12.0, 0.0},
        {{{10, 0, 0, 0}, {0, 0, 10, 0}, {0, 10, 0, 0}, {0, 0, 0, 10}}, 0.5, 0.5, 1.0 / 3.0},
        {{{8, 2}, {4, 6}},
         (2.0 * 8.0 / (16.0 + 4.0 + 2.0) + 2.0 * 6.0 / (12.0 + 2.0 + 4.0)) / 2.0,
         0.7,
         (8.0 * 6.0 - 2.0 * 4.0) / std::sqrt(10.0 * 12.0 * 10.0 * 8.0)},
    };
    std::size_t index = 0;
    for (const Expected& expected : cases) {
        const metrics::ConfusionMatrix cm = cm_from(expected.cm);
        check.expect(std::abs(metrics::macro_f1(cm) - expected.f1) <= 1e-9,
                     "macro f1 mismatch on case " + std::to_string(index));
        check.expect(std::abs(metrics::accuracy(cm) - expected.acc) <= 1e-9,
                     "accuracy mismatch on case " + std::to_string(index));
        check.expect(std::abs(metrics::mcc(cm) - expected.mcc) <= 1e-9,
                     "mcc mismatch on case " + std::to_string(index));
        ++index;
    }
    // binary anomaly-detection f1: tp=8 fp=2 fn=2 -> 0.8, plus the edge cases
    std::vector<int> truth;
    std::vector<bool> pred;
    for (int i = 0; i < 8; ++i) { truth.push_back(1); pred.push_back(true); }
    for (int i = 0; i < 2; ++i) { truth.push_back(0); pred.push_back(true); }
    for (int i = 0; i < 2; ++i) { truth.push_back(1); pred.push_back(false); }
    check.expect(std::abs(metrics::ad_f1(truth, pred) - 0.8) <= 1e-9, "ad f1 mismatch");
    check.expect(metrics::ad_f1({1, 0}, {true, false}) == 1.0, "ad f1 perfect case");
    check.expect(metrics::ad_f1({1, 1}, {false, false}) == 0.0, "ad f1 no-positive case");
    check.note(std::to_string(cases.size()) + " matrices + ad f1 cases to 1e-9");
    return check;
}

// ---------------------------------------------------------------------------
// criterion 9: threshold contract on the calibration set and on shifted attacks
// ---------------------------------------------------------------------------
Check threshold_contract() {
    Check check;
    data::SyntheticSpec synth = recovery_synth();  // attack shift 5x noise
    partition::PartitionSpec part;
    part.clients_per_device = 5;
    part.samples_per_client = 200;
    part.unlabeled_fraction = 1.0;  // threshold-based inference everywhere
    part.seed = 31;
    const auto clients = make_population(synth, part);

    fl::TrainHyper hyper;
    hyper.local_epochs = 5;
    hyper.max_rounds = 20;

    const fl::ExperimentResult result =
        fl::run_experiment(Algorithm::Clad, clients, recovery_model(), hyper, 5, 37);

    std::size_t flagged = 0, attacks = 0, calibration_false_alarms = 0;
    for (std::size_t i = 0; i < clients.size(); ++i) {
        const int assigned = result.final_assignment[i];
        const Dm2aModel model = unflatten(recovery_model(), result.final_models[assigned]);
        const nn::Matrix val = clients[i].benign_val.features_matrix();
        const AnomalyThreshold tau = calibrate_threshold(model, val);
        for (const bool hit : infer_unlabeled(model, val, tau)) {
            calibration_false_alarms += hit;
        }
        const nn::Matrix test = clients[i].test.features_matrix();
        const std::vector<int> labels = clients[i].test.labels();
        const std::vector<bool> hits = infer_unlabeled(model, test, tau);
        for (std::size_t s = 0; s < labels.size(); ++s) {
            if (labels[s] != 0) {
                ++attacks;
                flagged += hits[s];
            }
        }
    }
    const double rate = static_cast<double>(flagged) / static_cast<double>(attacks);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "calibration false alarms %zu, attack flag rate %.3f",
                  calibration_false_alarms, rate);
    check.note(buf);
    check.expect(calibration_false_alarms == 0, "calibration set produced anomalies");
    check.expect(rate >= 0.90, "attack flag rate below 90%");
    return check;
}

// ---------------------------------------------------------------------------
// criterion 10: byte-identical result files across two executions
// ---------------------------------------------------------------------------
Check determinism() {
    Check check;
    const std::string config_text =
        "[experiment]\n"
        "algorithm = clad\n"
        "seeds = 1,2\n"
        "rounds = 5\n"
        "clusters = 3\n"
        "output = {OUT}\n"
        "[model]\n"
        "encoder_widths = 12,8,4\n"
        "[data]\n"
        "source = synthetic\n"
        "device_types = 3\n"
        "feature_dim = 16\n"
        "attack_classes = 2\n"
        "separation = 1.0\n"
        "noise = 0.05\n"
        "attack_shift = 0.25\n"
        "benign_per_device = 700\n"
        "attack_per_class_per_device = 350\n"
        "seed = 41\n"
        "[partition]\n"
        "clients_per_device = 3\n"
        "samples_per_client = 120\n"
        "seed = 43\n"
        "[train]\n"
        "local_epochs = 3\n"
        "[sweep]\n"
        "axis = unlabeled_fraction\n"
        "values = 0.4,0.8\n";

    const fs::path base = fs::temp_directory_path() / "cladsim_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);
    std::vector<std::vector<std::string>> produced;
    for (const char* tag : {"a", "b"}) {
        const std::string out_dir = (base / tag).string();
        std::string text = config_text;
        text.replace(text.find("{OUT}"), 5, out_dir);
        const std::string config_path = (base / (std::string("config_") + tag + ".ini")).string();
        std::ofstream(config_path) << text;
        std::vector<std::string> errors;
        const harness::ExperimentConfig config = harness::load_config(config_path, errors);
        if (!errors.empty()) {
            check.expect(false, "config failed to validate: " + errors.front());
            return check;
        }
        produced.push_back(harness::run_config(config));
    }
    check.expect(produced[0].size() == produced[1].size(), "different run counts");
    auto slurp = [](const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    std::size_t identical = 0;
    for (std::size_t i = 0; i < produced[0].size(); ++i) {
        if (slurp(produced[0][i]) == slurp(produced[1][i])) ++identical;
    }
    check.note(std::to_string(identical) + "/" + std::to_string(produced[0].size()) +
               " rows files identical");
    check.expect(identical == produced[0].size(), "result files differ between executions");

    // the cross-seed summaries as well
    const std::string sum_a = slurp((base / "a" / "summary_clad.csv").string());
    const std::string sum_b = slurp((base / "b" / "summary_clad.csv").string());
    check.expect(!sum_a.empty() && sum_a == sum_b, "summaries differ between executions");
    fs::remove_all(base);
    return check;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc == 3 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);

    struct Criterion {
        int number;
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "gradient correctness", gradient_correctness},
        {2, "degenerate equivalence (clad k=1 vs fedavg)", degenerate_equivalence},
        {3, "parameter and byte accounting", parameter_and_bytes},
        {4, "cluster recovery and stabilization", cluster_recovery},
        {5, "heterogeneity trend (clad vs fedavg)", heterogeneity_trend},
        {6, "label availability trend (80% unlabeled)", label_availability_trend},
        {7, "matching optimality vs brute force", matching_optimality},
        {8, "metric oracles", metric_oracles},
        {9, "threshold contract", threshold_contract},
        {10, "determinism of result files", determinism},
    };

    bool all_ok = true;
    for (const Criterion& criterion : criteria) {
        if (only != 0 && criterion.number != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criterion.run();
        } catch (const std::exception& e) {
            check.ok = false;
            check.note(std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %2d %s (%.1fs)%s%s\n", check.ok ? "PASS" : "FAIL", criterion.number,
                    criterion.name, seconds, check.detail.empty() ? "" : " -- ",
                    check.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && check.ok;
    }
    return all_ok ? 0 : 1;
}
