#include "clad/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clad::metrics {

void ConfusionMatrix::add(int truth, int predicted) {
    if (truth < 0 || predicted < 0 || static_cast<std::size_t>(truth) >= classes ||
        static_cast<std::size_t>(predicted) >= classes) {
        throw std::invalid_argument("confusion matrix: class index out of range");
    }
    ++counts[static_cast<std::size_t>(truth) * classes + static_cast<std::size_t>(predicted)];
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const std::uint64_t c : counts) t += c;
    return t;
}

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted,
                          std::size_t classes) {
    if (truth.size() != predicted.size()) {
        throw std::invalid_argument("confusion: truth/prediction length mismatch");
    }
    ConfusionMatrix cm(classes);
    for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
    return cm;
}

double macro_f1(const ConfusionMatrix& cm) {
    if (cm.classes == 0 || cm.total() == 0) throw std::invalid_argument("macro_f1: empty matrix");
    double sum = 0.0;
    std::size_t considered = 0;
    for (std::size_t c = 0; c < cm.classes; ++c) {
        const double tp = static_cast<double>(cm.at(c, c));
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < cm.classes; ++j) {
            row += static_cast<double>(cm.at(c, j));
            col += static_cast<double>(cm.at(j, c));
        }
        if (row == 0.0 && col == 0.0) continue;  // class absent everywhere
        const double denom = row + col;          // 2TP + FP + FN
        sum += denom > 0.0 ? 2.0 * tp / denom : 0.0;
        ++considered;
    }
    return considered ? sum / static_cast<double>(considered) : 0.0;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (cm.classes == 0 || total == 0) throw std::invalid_argument("accuracy: empty matrix");
    std::uint64_t diag = 0;
    for (std::size_t c = 0; c < cm.classes; ++c) diag += cm.at(c, c);
    return static_cast<double>(diag) / static_cast<double>(total);
}

double mcc(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (cm.classes == 0 || total == 0) throw std::invalid_argument("mcc: empty matrix");
    const double s = static_cast<double>(total);
    double c_trace = 0.0;
    for (std::size_t k = 0; k < cm.classes; ++k) c_trace += static_cast<double>(cm.at(k, k));
    double dot_pt = 0.0, p2 = 0.0, t2 = 0.0;
    for (std::size_t k = 0; k < cm.classes; ++k) {
        double pk = 0.0, tk = 0.0;
        for (std::size_t j = 0; j < cm.classes; ++j) {
            pk += static_cast<double>(cm.at(j, k));
            tk += static_cast<double>(cm.at(k, j));
        }
        dot_pt += pk * tk;
        p2 += pk * pk;
        t2 += tk * tk;
    }
    const double denom = std::sqrt((s * s - p2) * (s * s - t2));
    if (denom <= 0.0) return 0.0;
    return (c_trace * s - dot_pt) / denom;
}

double ad_f1(const std::vector<int>& true_labels, const std::vector<bool>& anomalous) {
    if (true_labels.size() != anomalous.size()) {
        throw std::invalid_argument("ad_f1: truth/prediction length mismatch");
    }
    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const bool attack = true_labels[i] != 0;
        if (anomalous[i] && attack) {
            tp += 1.0;
        } else if (anomalous[i] && !attack) {
            fp += 1.0;
        } else if (!anomalous[i] && attack) {
            fn += 1.0;
        }
    }
    const double denom = 2.0 * tp + fp + fn;
    return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

double average_over_clients(const std::vector<double>& values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    return n ? sum / static_cast<double>(n) : std::nan("");
}

}  // namespace clad::metrics
