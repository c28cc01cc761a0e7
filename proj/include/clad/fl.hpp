#pragma once

#include <cstdint>
#include <vector>

#include "clad/accounting.hpp"
#include "clad/algorithm.hpp"
#include "clad/dm2a.hpp"
#include "clad/partition.hpp"

namespace clad::fl {

struct TrainHyper {
    int local_epochs = 5;
    int batch_size = 32;
    int max_rounds = 100;
    double learning_rate = 0.01;
    double weight_decay = 1e-4;
    int stabilization_patience = 3;

    void validate() const;
};

struct ClientUpdate {
    int client_id = 0;
    int model_index = 0;
    std::vector<double> weights;
    std::size_t n = 0;  // training samples backing the update
};

struct ServerState {
    std::vector<std::vector<double>> models;  // K flattened weight sets
    std::vector<int> assignment;              // client -> model, -1 before the first round
    std::vector<std::vector<int>> history;    // assignment per completed round
    int round = 0;
    bool stabilized = false;
};

// K independently seeded random models; round 0; not stabilized
ServerState init_server(const Dm2aConfig& config, int k, std::uint64_t seed);

// tau epochs of seeded mini-batch AdamW on the composite loss with the
// client's alpha; optimizer state is fresh for the round
ClientUpdate local_train(const partition::ClientDataset& client, const std::vector<double>& weights,
                         const Dm2aConfig& config, const TrainHyper& hyper, Rng rng);

// sample-count weighted mean, summed in ascending client id order
std::vector<double> aggregate_cluster(const std::vector<ClientUpdate>& updates);

// true iff the last `patience` recorded assignments are identical
bool check_stabilization(const std::vector<std::vector<int>>& history, int patience);

struct RoundLog {
    int round = 0;
    std::vector<int> assignment;  // client -> model (-1 where meaningless)
    double cls_f1 = 0.0;
    double cls_acc = 0.0;
    double ad_f1 = 0.0;
    double mcc = 0.0;
    double purity = 0.0;
    bool stabilized = false;
    double cum_bytes_per_client = 0.0;  // mean down+up so far
    double cum_flops_per_client = 0.0;
};

struct ExperimentOptions {
    bool keep_weight_history = false;  // per-round flattened model snapshots
};

struct ExperimentResult {
    std::vector<RoundLog> rounds;  // index 0 is the pre-training evaluation
    std::vector<std::vector<double>> final_models;
    std::vector<int> final_assignment;
    accounting::CostLedger ledger;
    std::vector<std::vector<std::vector<double>>> weight_history;  // [round][model][param]
};

// One CLAD clustering round: broadcast, loss-vector fingerprinting, k-means,
// minimum-cost matching of new clusters onto existing models, local training,
// per-cluster aggregation. Exposed for tests; run_experiment drives it.
void clad_round(ServerState& server, const std::vector<partition::ClientDataset>& clients,
                const Dm2aConfig& config, const TrainHyper& hyper, std::uint64_t master_seed,
                accounting::CostLedger& ledger);

// Post-stabilization round: clients only receive and train their own cluster
// model; no loss vectors, no clustering.
void stabilized_round(ServerState& server, const std::vector<partition::ClientDataset>& clients,
                      const Dm2aConfig& config, const TrainHyper& hyper, std::uint64_t master_seed,
                      accounting::CostLedger& ledger);

// Runs max_rounds rounds of the chosen algorithm with full participation,
// evaluating every client's test set after every round.
ExperimentResult run_experiment(Algorithm algorithm,
                                const std::vector<partition::ClientDataset>& clients,
                                const Dm2aConfig& config, const TrainHyper& hyper, int k,
                                std::uint64_t seed, const ExperimentOptions& options = {});

// Budget snapshot: the last round whose cumulative per-client mean cost fits
// the budget (bytes by default, FLOPs when `flops` is set); nullptr when even
// round 0 exceeds it.
const RoundLog* round_at_budget(const std::vector<RoundLog>& rounds, double budget,
                                bool flops = false);

}  // namespace clad::fl
