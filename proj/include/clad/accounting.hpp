#pragma once

#include <cstdint>
#include <vector>

#include "clad/algorithm.hpp"

namespace clad::accounting {

// wire size of one model: FP32, 4 bytes per parameter
std::uint64_t model_bytes(std::size_t param_count);

enum class Phase { Initial, Clustering, Stabilized };

// Per-client cumulative byte and FLOP ledger with one snapshot per round.
struct CostLedger {
    struct Totals {
        std::uint64_t down = 0;
        std::uint64_t up = 0;
        std::uint64_t flops = 0;
    };

    std::uint64_t wire_bytes = 0;  // bytes of one model on the wire
    std::vector<Totals> clients;
    std::vector<std::vector<Totals>> snapshots;  // snapshots[round][client]

    CostLedger() = default;
    CostLedger(std::size_t n_clients, std::uint64_t model_wire_bytes)
        : wire_bytes(model_wire_bytes), clients(n_clients) {}

    void add_flops(std::size_t client, std::uint64_t flops);
    void snapshot();  // appends the current totals as the next round's snapshot

    double mean_bytes() const;  // mean over clients of down + up
    double mean_flops() const;
};

// Applies one round of the per-algorithm traffic rules to `participants`:
//   CLAD clustering phase:  down = K * model, up = model + K * 8 (loss vector)
//   CLAD stabilized, FedAvg, CFL-AD: down = up = model
//   IFCA: down = K * model, up = model
//   Local: down = model once at phase Initial, nothing afterwards
void record_round(CostLedger& ledger, Algorithm algorithm, Phase phase, int k,
                  const std::vector<int>& participants);

}  // namespace clad::accounting
