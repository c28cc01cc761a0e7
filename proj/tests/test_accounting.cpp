#include <vector>

#include "clad/accounting.hpp"
#include "doctest.h"

using namespace clad;
using accounting::CostLedger;
using accounting::Phase;

namespace {
const std::vector<int> kFive{0, 1, 2, 3, 4};
constexpr double kMiB = 1048576.0;
}  // namespace

TEST_CASE("model bytes at fp32") {
    CHECK(accounting::model_bytes(0) == 0);
    CHECK(accounting::model_bytes(33800) == 135200);
    CHECK(accounting::model_bytes(33453) == 133812);
    // the 33.8k figure lands at about 0.129 MiB on the wire
    CHECK(135200.0 / kMiB == doctest::Approx(0.129).epsilon(0.002));
}

TEST_CASE("per-round traffic rules") {
    const std::uint64_t mb = accounting::model_bytes(1000);

    SUBCASE("clad clustering vs stabilized") {
        CostLedger ledger(5, mb);
        accounting::record_round(ledger, Algorithm::Clad, Phase::Clustering, 4, kFive);
        for (const auto& c : ledger.clients) {
            CHECK(c.down == 4 * mb);
            CHECK(c.up == mb + 4 * 8);
        }
        accounting::record_round(ledger, Algorithm::Clad, Phase::Stabilized, 4, kFive);
        for (const auto& c : ledger.clients) {
            CHECK(c.down == 5 * mb);
            CHECK(c.up == 2 * mb + 4 * 8);
        }
        // per-round drop after stabilization: (K-1) model + K loss entries
        const std::uint64_t clustering_round = 5 * mb + 4 * 8;
        const std::uint64_t stabilized_round = 2 * mb;
        CHECK(clustering_round - stabilized_round == 3 * mb + 4 * 8);
    }

    SUBCASE("fedavg both directions") {
        CostLedger ledger(5, mb);
        accounting::record_round(ledger, Algorithm::FedAvg, Phase::Clustering, 1, kFive);
        for (const auto& c : ledger.clients) {
            CHECK(c.down == mb);
            CHECK(c.up == mb);
        }
    }

    SUBCASE("ifca broadcasts k models, uploads one") {
        CostLedger ledger(5, mb);
        accounting::record_round(ledger, Algorithm::Ifca, Phase::Clustering, 3, kFive);
        for (const auto& c : ledger.clients) {
            CHECK(c.down == 3 * mb);
            CHECK(c.up == mb);
        }
    }

    SUBCASE("local pays the initial download only") {
        CostLedger ledger(5, mb);
        accounting::record_round(ledger, Algorithm::Local, Phase::Initial, 1, kFive);
        accounting::record_round(ledger, Algorithm::Local, Phase::Clustering, 1, kFive);
        accounting::record_round(ledger, Algorithm::Local, Phase::Clustering, 1, kFive);
        for (const auto& c : ledger.clients) {
            CHECK(c.down == mb);
            CHECK(c.up == 0);
        }
    }
}

TEST_CASE("fedavg traffic over 100 rounds lands near 26 MB per client") {
    const std::uint64_t mb = accounting::model_bytes(33800);
    CostLedger ledger(1, mb);
    accounting::record_round(ledger, Algorithm::FedAvg, Phase::Initial, 1, {0});
    for (int round = 0; round < 100; ++round) {
        accounting::record_round(ledger, Algorithm::FedAvg, Phase::Clustering, 1, {0});
    }
    const double total_mib = ledger.mean_bytes() / kMiB;
    CHECK(total_mib == doctest::Approx(2 * 0.129 * 100).epsilon(0.01));
    CHECK(total_mib > 25.0);
    CHECK(total_mib < 27.0);
}

TEST_CASE("local total stays around the initial download") {
    const std::uint64_t mb = accounting::model_bytes(33800);
    CostLedger ledger(1, mb);
    accounting::record_round(ledger, Algorithm::Local, Phase::Initial, 1, {0});
    for (int round = 0; round < 100; ++round) {
        accounting::record_round(ledger, Algorithm::Local, Phase::Clustering, 1, {0});
    }
    CHECK(ledger.mean_bytes() / kMiB == doctest::Approx(0.129).epsilon(0.002));
}

TEST_CASE("clad pre-stabilization download exceeds fedavg, post equals it") {
    const std::uint64_t mb = accounting::model_bytes(5000);
    CostLedger clad(1, mb), fedavg(1, mb);
    accounting::record_round(clad, Algorithm::Clad, Phase::Clustering, 3, {0});
    accounting::record_round(fedavg, Algorithm::FedAvg, Phase::Clustering, 1, {0});
    CHECK(clad.clients[0].down > fedavg.clients[0].down);

    CostLedger clad_stab(1, mb);
    accounting::record_round(clad_stab, Algorithm::Clad, Phase::Stabilized, 3, {0});
    CHECK(clad_stab.clients[0].down == fedavg.clients[0].down);
}

TEST_CASE("ledger snapshots are monotone per client and resource") {
    const std::uint64_t mb = accounting::model_bytes(100);
    CostLedger ledger(3, mb);
    for (int round = 0; round < 5; ++round) {
        accounting::record_round(ledger, Algorithm::Clad,
                                 round < 3 ? Phase::Clustering : Phase::Stabilized, 2, {0, 1, 2});
        ledger.add_flops(0, 500);
        ledger.add_flops(1, 700);
        ledger.snapshot();
    }
    REQUIRE(ledger.snapshots.size() == 5);
    for (std::size_t r = 1; r < ledger.snapshots.size(); ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(ledger.snapshots[r][c].down >= ledger.snapshots[r - 1][c].down);
            CHECK(ledger.snapshots[r][c].up >= ledger.snapshots[r - 1][c].up);
            CHECK(ledger.snapshots[r][c].flops >= ledger.snapshots[r - 1][c].flops);
        }
    }
    // flop totals add over rounds and clients
    CHECK(ledger.clients[0].flops == 2500);
    CHECK(ledger.clients[1].flops == 3500);
    CHECK(ledger.clients[2].flops == 0);
    CHECK(ledger.mean_flops() == doctest::Approx(2000.0));
}
