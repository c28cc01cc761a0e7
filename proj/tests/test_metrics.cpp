#include <cmath>
#include <stdexcept>
#include <vector>

#include "clad/metrics.hpp"
#include "doctest.h"

using namespace clad;

namespace {

metrics::ConfusionMatrix cm_from(const std::vector<std::vector<std::uint64_t>>& rows) {
    metrics::ConfusionMatrix cm(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows.size(); ++c) cm.counts[r * rows.size() + c] = rows[r][c];
    }
    return cm;
}

}  // namespace

TEST_CASE("macro f1") {
    CHECK(metrics::macro_f1(cm_from({{5, 0}, {0, 7}})) == doctest::Approx(1.0));
    CHECK(metrics::macro_f1(cm_from({{5, 5}, {5, 5}})) == doctest::Approx(0.5));
    CHECK(metrics::macro_f1(cm_from({{0, 5}, {5, 0}})) == doctest::Approx(0.0));
    // class 2 absent from truth and prediction: excluded from the mean
    CHECK(metrics::macro_f1(cm_from({{5, 0, 0}, {0, 7, 0}, {0, 0, 0}})) == doctest::Approx(1.0));
    // a predicted-only class contributes zero
    CHECK(metrics::macro_f1(cm_from({{4, 1}, {0, 0}})) ==
          doctest::Approx(0.5 * (8.0 / 9.0 + 0.0)));
    CHECK_THROWS_AS(metrics::macro_f1(metrics::ConfusionMatrix(2)), std::invalid_argument);
}

TEST_CASE("accuracy") {
    CHECK(metrics::accuracy(cm_from({{5, 0}, {0, 7}})) == doctest::Approx(1.0));
    CHECK(metrics::accuracy(cm_from({{5, 5}, {5, 5}})) == doctest::Approx(0.5));
    CHECK_THROWS_AS(metrics::accuracy(metrics::ConfusionMatrix(3)), std::invalid_argument);
}

TEST_CASE("mcc") {
    CHECK(metrics::mcc(cm_from({{5, 0}, {0, 7}})) == doctest::Approx(1.0));
    // prediction independent of the truth: zero correlation
    CHECK(metrics::mcc(cm_from({{6, 2}, {3, 1}})) == doctest::Approx(0.0));
    // binary case: TP=40 FP=10 FN=20 TN=30 with class 1 positive
    CHECK(metrics::mcc(cm_from({{30, 10}, {20, 40}})) == doctest::Approx(0.40825).epsilon(1e-5));
    // oracle value from the binary closed form
    const double oracle = (40.0 * 30.0 - 10.0 * 20.0) /
                          std::sqrt((40.0 + 10.0) * (40.0 + 20.0) * (30.0 + 10.0) * (30.0 + 20.0));
    CHECK(metrics::mcc(cm_from({{30, 10}, {20, 40}})) == doctest::Approx(oracle).epsilon(1e-12));
    // degenerate: every sample in one true class
    CHECK(metrics::mcc(cm_from({{10, 0}, {0, 0}})) == 0.0);
}

TEST_CASE("metric invariance under a consistent class permutation") {
    const std::vector<std::vector<std::uint64_t>> base{{12, 3, 1}, {2, 20, 4}, {0, 5, 9}};
    // permute classes by pi = (2, 0, 1) on both axes
    const int pi[3] = {2, 0, 1};
    std::vector<std::vector<std::uint64_t>> permuted(3, std::vector<std::uint64_t>(3, 0));
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) permuted[pi[r]][pi[c]] = base[r][c];
    }
    CHECK(metrics::macro_f1(cm_from(base)) == doctest::Approx(metrics::macro_f1(cm_from(permuted))));
    CHECK(metrics::accuracy(cm_from(base)) == doctest::Approx(metrics::accuracy(cm_from(permuted))));
    CHECK(metrics::mcc(cm_from(base)) == doctest::Approx(metrics::mcc(cm_from(permuted))));
}

TEST_CASE("anomaly detection f1") {
    // all correct
    CHECK(metrics::ad_f1({0, 1, 2, 0}, {false, true, true, false}) == doctest::Approx(1.0));
    // no positives predicted while attacks exist
    CHECK(metrics::ad_f1({0, 1, 1}, {false, false, false}) == doctest::Approx(0.0));
    // TP=8 FP=2 FN=2 -> 0.8
    std::vector<int> truth;
    std::vector<bool> pred;
    for (int i = 0; i < 8; ++i) {
        truth.push_back(1);
        pred.push_back(true);
    }
    for (int i = 0; i < 2; ++i) {
        truth.push_back(0);
        pred.push_back(true);
    }
    for (int i = 0; i < 2; ++i) {
        truth.push_back(2);
        pred.push_back(false);
    }
    CHECK(metrics::ad_f1(truth, pred) == doctest::Approx(0.8));
    CHECK_THROWS_AS(metrics::ad_f1({0}, {true, false}), std::invalid_argument);
}

TEST_CASE("ad_f1 agrees with the binary f1 of a collapsed confusion matrix") {
    // multiclass predictions collapsed to benign-vs-attack
    const std::vector<int> truth{0, 0, 1, 2, 2, 1, 0, 2};
    const std::vector<int> preds{0, 2, 1, 0, 2, 1, 1, 2};
    std::vector<bool> flagged;
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        flagged.push_back(preds[i] != 0);
        tp += (truth[i] != 0 && preds[i] != 0);
        fp += (truth[i] == 0 && preds[i] != 0);
        fn += (truth[i] != 0 && preds[i] == 0);
    }
    const double expected = 2.0 * tp / (2.0 * tp + fp + fn);
    CHECK(metrics::ad_f1(truth, flagged) == doctest::Approx(expected));
}

TEST_CASE("average over clients skips missing values") {
    const double nan = std::nan("");
    CHECK(metrics::average_over_clients({0.75}) == doctest::Approx(0.75));
    CHECK(metrics::average_over_clients({0.8, 0.9}) == doctest::Approx(0.85));
    CHECK(metrics::average_over_clients({0.8, nan, 0.9}) == doctest::Approx(0.85));
    CHECK(std::isnan(metrics::average_over_clients({nan, nan})));
    CHECK(std::isnan(metrics::average_over_clients({})));
}
