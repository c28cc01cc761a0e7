#pragma once

#include <cstdint>
#include <vector>

namespace clad::metrics {

struct ConfusionMatrix {
    std::size_t classes = 0;
    std::vector<std::uint64_t> counts;  // classes * classes, row = true, col = predicted

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t c) : classes(c), counts(c * c, 0) {}

    void add(int truth, int predicted);
    std::uint64_t at(std::size_t truth, std::size_t predicted) const {
        return counts[truth * classes + predicted];
    }
    std::uint64_t total() const;
};

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted,
                          std::size_t classes);

// Unweighted mean of per-class F1. Classes absent from both truth and
// prediction are excluded; a class with an empty precision+recall denominator
// contributes 0.
double macro_f1(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);
// Gorodkin multiclass MCC; degenerate denominators give 0
double mcc(const ConfusionMatrix& cm);

// Binary F1 with the anomalous side positive; truth label 0 is normal,
// anything else counts as an attack.
double ad_f1(const std::vector<int>& true_labels, const std::vector<bool>& anomalous);

// Unweighted mean over the clients that produced the metric (NaN entries are
// skipped); NaN when no client produced it.
double average_over_clients(const std::vector<double>& values);

}  // namespace clad::metrics
