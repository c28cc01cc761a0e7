#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clad/clustering.hpp"
#include "clad/dm2a.hpp"
#include "clad/harness.hpp"
#include "clad/metrics.hpp"
#include "clad/nn.hpp"

namespace py = pybind11;

namespace {

clad::nn::Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    clad::nn::Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols) throw std::invalid_argument("ragged matrix");
        std::copy(rows[r].begin(), rows[r].end(), &m.data[r * m.cols]);
    }
    return m;
}

clad::metrics::ConfusionMatrix to_cm(const std::vector<std::vector<std::uint64_t>>& rows) {
    clad::metrics::ConfusionMatrix cm(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) throw std::invalid_argument("confusion matrix not square");
        for (std::size_t c = 0; c < rows.size(); ++c) cm.counts[r * rows.size() + c] = rows[r][c];
    }
    return cm;
}

}  // namespace

PYBIND11_MODULE(cladsim, m) {
    m.doc() = "clustered federated learning simulator for joint network anomaly "
              "detection and attack classification";

    m.def("gelu", &clad::nn::gelu, py::arg("x"), "x * Phi(x) with the exact erf-based normal CDF");

    m.def(
        "mse_loss",
        [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& x_hat) {
            return clad::nn::mse_loss(to_matrix(x), to_matrix(x_hat));
        },
        py::arg("x"), py::arg("x_hat"));

    m.def(
        "cross_entropy",
        [](const std::vector<std::vector<double>>& logits, const std::vector<int>& labels) {
            return clad::nn::cross_entropy(to_matrix(logits), labels);
        },
        py::arg("logits"), py::arg("labels"),
        "mean negative log-softmax probability of the true class");

    m.def(
        "dm2a_param_count",
        [](std::size_t input_dim, const std::vector<std::size_t>& encoder_widths,
           std::size_t num_classes) {
            clad::Dm2aConfig config;
            config.input_dim = input_dim;
            config.encoder_widths = encoder_widths;
            config.num_classes = num_classes;
            return clad::param_count(config);
        },
        py::arg("input_dim"), py::arg("encoder_widths"), py::arg("num_classes"));

    m.def("model_bytes", &clad::accounting::model_bytes, py::arg("param_count"),
          "FP32 wire size of a model in bytes");

    m.def(
        "kmeans",
        [](const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
           int max_iter) {
            const clad::cluster::KmeansResult r = clad::cluster::kmeans(points, k, seed, max_iter);
            return py::make_tuple(r.assignment, r.centroids);
        },
        py::arg("points"), py::arg("k"), py::arg("seed"), py::arg("max_iter") = 100);

    m.def("min_cost_matching", &clad::cluster::min_cost_matching, py::arg("cost"),
          "minimum-cost assignment; lexicographically smallest optimal permutation");

    m.def(
        "macro_f1",
        [](const std::vector<std::vector<std::uint64_t>>& cm) {
            return clad::metrics::macro_f1(to_cm(cm));
        },
        py::arg("confusion"));
    m.def(
        "accuracy",
        [](const std::vector<std::vector<std::uint64_t>>& cm) {
            return clad::metrics::accuracy(to_cm(cm));
        },
        py::arg("confusion"));
    m.def(
        "mcc",
        [](const std::vector<std::vector<std::uint64_t>>& cm) {
            return clad::metrics::mcc(to_cm(cm));
        },
        py::arg("confusion"));
    m.def("ad_f1", &clad::metrics::ad_f1, py::arg("true_labels"), py::arg("anomalous"));

    m.def(
        "validate_config",
        [](const std::string& path) {
            std::vector<std::string> errors;
            const clad::harness::ExperimentConfig config = clad::harness::load_config(path, errors);
            clad::harness::validate_config(config, errors);
            return errors;
        },
        py::arg("config_path"), "returns the list of config problems (empty when valid)");

    m.def(
        "run_config",
        [](const std::string& path) {
            std::vector<std::string> errors;
            const clad::harness::ExperimentConfig config = clad::harness::load_config(path, errors);
            clad::harness::validate_config(config, errors);
            if (!errors.empty()) {
                std::string msg = "invalid config:";
                for (const std::string& e : errors) msg += "\n  " + e;
                throw std::runtime_error(msg);
            }
            py::gil_scoped_release release;
            return clad::harness::run_config(config);
        },
        py::arg("config_path"), "executes every run of the config; returns the rows-file paths");

    m.def(
        "report",
        [](const std::string& results_dir, const std::vector<std::string>& budgets) {
            std::vector<clad::harness::Budget> parsed;
            for (const std::string& b : budgets) parsed.push_back(clad::harness::parse_budget(b));
            return clad::harness::write_report(results_dir, parsed);
        },
        py::arg("results_dir"), py::arg("budgets") = std::vector<std::string>{});

    m.def(
        "synth_to_csv",
        [](const std::string& config_path, const std::string& out_dir) {
            std::vector<std::string> errors;
            const clad::harness::ExperimentConfig config =
                clad::harness::load_config(config_path, errors);
            if (!errors.empty()) throw std::runtime_error("invalid config: " + errors.front());
            return clad::harness::write_synthetic_devices(config, out_dir);
        },
        py::arg("config_path"), py::arg("out_dir"));
}
