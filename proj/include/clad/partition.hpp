#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clad/dataset.hpp"

namespace clad::partition {

struct PartitionSpec {
    int clients_per_device = 5;
    std::size_t samples_per_client = 1000;
    double benign_fraction = 0.5;
    std::optional<double> dirichlet_beta;  // set => Dirichlet label skew instead of the fixed mix
    double unlabeled_fraction = 0.0;
    double train_ratio = 0.5;
    double benign_val_fraction = 0.2;  // share of benign training samples held out for calibration
    double alpha_default = 0.8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ClientDataset {
    int client_id = 0;
    int device_id = 0;  // ground-truth cluster label, hidden from the algorithms
    data::Dataset train;
    data::Dataset test;
    data::Dataset benign_val;
    bool labeled = true;
    double alpha = 0.8;
};

// Fixed class mix: benign_fraction benign, the rest split equally over attack
// classes; clients drawn without replacement from the device pool, then a
// stratified train/test split and a benign validation carve-out per client.
std::vector<ClientDataset> derive_clients(const data::Dataset& device, int device_id,
                                          int first_client_id, const PartitionSpec& spec);

// Per-client class proportions drawn from a symmetric Dirichlet(beta); counts
// rounded by largest remainder to sum to samples_per_client; classes exhausted
// in the device pool are redistributed proportionally.
std::vector<ClientDataset> dirichlet_partition(const data::Dataset& device, int device_id,
                                               int first_client_id, const PartitionSpec& spec);

// Marks round(fraction * N) clients, stratified across devices, as unlabeled:
// their train set shrinks to its benign subset and alpha drops to 0. Test sets
// keep full labels for evaluation.
void mark_unlabeled(std::vector<ClientDataset>& clients, double fraction, std::uint64_t seed);

// Applies the spec across all devices (IID or Dirichlet mode as configured),
// then the unlabeled marking.
std::vector<ClientDataset> build_clients(const std::vector<data::Dataset>& devices,
                                         const PartitionSpec& spec);

}  // namespace clad::partition
