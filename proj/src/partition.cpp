#include "clad/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace clad::partition {

void PartitionSpec::validate() const {
    if (clients_per_device < 1) {
        throw std::invalid_argument("partition: clients_per_device must be >= 1");
    }
    if (samples_per_client < 1) {
        throw std::invalid_argument("partition: samples_per_client must be >= 1");
    }
    if (benign_fraction <= 0.0 || benign_fraction >= 1.0) {
        throw std::invalid_argument("partition: benign_fraction must be in (0, 1)");
    }
    if (dirichlet_beta && *dirichlet_beta <= 0.0) {
        throw std::invalid_argument("partition: dirichlet_beta must be positive");
    }
    if (unlabeled_fraction < 0.0 || unlabeled_fraction > 1.0) {
        throw std::invalid_argument("partition: unlabeled_fraction must be in [0, 1]");
    }
    if (train_ratio <= 0.0 || train_ratio >= 1.0) {
        throw std::invalid_argument("partition: train_ratio must be in (0, 1)");
    }
    if (benign_val_fraction <= 0.0 || benign_val_fraction >= 1.0) {
        throw std::invalid_argument("partition: benign_val_fraction must be in (0, 1)");
    }
    if (alpha_default < 0.0 || alpha_default > 1.0) {
        throw std::invalid_argument("partition: alpha must be in [0, 1]");
    }
}

namespace {

// largest-remainder rounding of proportions to integer counts summing to n
std::vector<std::size_t> round_counts(const std::vector<double>& proportions, std::size_t n) {
    const std::size_t c = proportions.size();
    std::vector<std::size_t> counts(c, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    remainders.reserve(c);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < c; ++i) {
        const double exact = proportions[i] * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i) {
        ++counts[remainders[i % c].second];
        ++assigned;
    }
    return counts;
}

// Builds one client from its drawn samples: stratified train/test split, then
// the benign validation carve-out from the training side.
ClientDataset finish_client(data::Dataset&& pool, int client_id, int device_id,
                            const PartitionSpec& spec) {
    ClientDataset client;
    client.client_id = client_id;
    client.device_id = device_id;
    client.alpha = spec.alpha_default;
    client.labeled = true;
    auto [train, test] =
        data::split_train_test(pool, spec.train_ratio,
                               derive_seed(spec.seed, "client-split",
                                           static_cast<std::uint64_t>(client_id)));
    client.test = std::move(test);

    std::vector<std::size_t> benign_idx;
    for (std::size_t i = 0; i < train.samples.size(); ++i) {
        if (train.samples[i].label == 0) benign_idx.push_back(i);
    }
    client.benign_val.feature_dim = train.feature_dim;
    client.benign_val.class_count = train.class_count;
    client.benign_val.class_names = train.class_names;
    std::vector<bool> to_val(train.samples.size(), false);
    if (!benign_idx.empty()) {
        Rng rng(derive_seed(spec.seed, "benign-val", static_cast<std::uint64_t>(client_id)));
        rng.shuffle(benign_idx);
        std::size_t n_val = static_cast<std::size_t>(std::floor(
            spec.benign_val_fraction * static_cast<double>(benign_idx.size()) + 0.5));
        n_val = std::clamp<std::size_t>(n_val, 1, benign_idx.size());
        for (std::size_t i = 0; i < n_val; ++i) to_val[benign_idx[i]] = true;
    }
    client.train.feature_dim = train.feature_dim;
    client.train.class_count = train.class_count;
    client.train.class_names = train.class_names;
    for (std::size_t i = 0; i < train.samples.size(); ++i) {
        (to_val[i] ? client.benign_val : client.train).samples.push_back(std::move(train.samples[i]));
    }
    return client;
}

std::vector<std::vector<std::size_t>> pool_indices_by_class(const data::Dataset& device) {
    std::vector<std::vector<std::size_t>> by_class(device.class_count);
    for (std::size_t i = 0; i < device.samples.size(); ++i) {
        by_class[device.samples[i].label].push_back(i);
    }
    return by_class;
}

data::Dataset collect(const data::Dataset& device, const std::vector<std::size_t>& indices) {
    data::Dataset out;
    out.feature_dim = device.feature_dim;
    out.class_count = device.class_count;
    out.class_names = device.class_names;
    out.samples.reserve(indices.size());
    for (const std::size_t i : indices) out.samples.push_back(device.samples[i]);
    return out;
}

}  // namespace

std::vector<ClientDataset> derive_clients(const data::Dataset& device, int device_id,
                                          int first_client_id, const PartitionSpec& spec) {
    spec.validate();
    if (device.class_count < 2) {
        throw std::runtime_error("derive_clients: device " + std::to_string(device_id) +
                                 " has no attack classes");
    }
    const std::size_t n = spec.samples_per_client;
    const std::size_t attack_classes = device.class_count - 1;
    std::vector<std::size_t> per_class(device.class_count, 0);
    per_class[0] = static_cast<std::size_t>(
        std::floor(spec.benign_fraction * static_cast<double>(n) + 0.5));
    per_class[0] = std::clamp<std::size_t>(per_class[0], 1, n - 1);
    {
        std::vector<double> attack_prop(attack_classes, 1.0 / static_cast<double>(attack_classes));
        const std::vector<std::size_t> attack_counts = round_counts(attack_prop, n - per_class[0]);
        for (std::size_t a = 0; a < attack_classes; ++a) per_class[a + 1] = attack_counts[a];
    }

    auto by_class = pool_indices_by_class(device);
    const std::size_t m = static_cast<std::size_t>(spec.clients_per_device);
    for (std::size_t c = 0; c < device.class_count; ++c) {
        const std::size_t needed = per_class[c] * m;
        if (by_class[c].size() < needed) {
            throw std::runtime_error(
                "derive_clients: device " + std::to_string(device_id) + " class " +
                std::to_string(c) + " needs " + std::to_string(needed) + " samples (" +
                std::to_string(m) + " clients x " + std::to_string(per_class[c]) + "), pool has " +
                std::to_string(by_class[c].size()));
        }
    }
    Rng rng(derive_seed(spec.seed, "derive", static_cast<std::uint64_t>(device_id)));
    for (auto& idx : by_class) rng.shuffle(idx);

    std::vector<ClientDataset> clients;
    clients.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> chosen;
        chosen.reserve(n);
        for (std::size_t c = 0; c < device.class_count; ++c) {
            const std::size_t start = i * per_class[c];
            for (std::size_t j = 0; j < per_class[c]; ++j) chosen.push_back(by_class[c][start + j]);
        }
        clients.push_back(finish_client(collect(device, chosen),
                                        first_client_id + static_cast<int>(i), device_id, spec));
    }
    return clients;
}

std::vector<ClientDataset> dirichlet_partition(const data::Dataset& device, int device_id,
                                               int first_client_id, const PartitionSpec& spec) {
    spec.validate();
    if (!spec.dirichlet_beta) {
        throw std::invalid_argument("dirichlet_partition: dirichlet_beta not set");
    }
    const double beta = *spec.dirichlet_beta;
    const std::size_t n = spec.samples_per_client;
    const std::size_t m = static_cast<std::size_t>(spec.clients_per_device);
    const std::size_t classes = device.class_count;

    auto by_class = pool_indices_by_class(device);
    Rng pool_rng(derive_seed(spec.seed, "dirichlet-pool", static_cast<std::uint64_t>(device_id)));
    for (auto& idx : by_class) pool_rng.shuffle(idx);
    std::vector<std::size_t> cursor(classes, 0);
    auto remaining = [&](std::size_t c) { return by_class[c].size() - cursor[c]; };

    std::vector<ClientDataset> clients;
    clients.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rng draw_rng(derive_seed(spec.seed, "dirichlet-draw",
                                 static_cast<std::uint64_t>(device_id), i));
        std::vector<double> proportions(classes, 0.0);
        double total = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            proportions[c] = draw_rng.gamma(beta);
            total += proportions[c];
        }
        for (double& p : proportions) p /= total;
        std::vector<std::size_t> counts = round_counts(proportions, n);

        // the stratified split cannot represent singleton classes on both
        // sides; merge any single target sample into the client's largest class
        for (std::size_t c = 0; c < classes; ++c) {
            if (counts[c] == 1) {
                counts[c] = 0;
                const std::size_t largest =
                    std::max_element(counts.begin(), counts.end()) - counts.begin();
                ++counts[largest];
            }
        }

        // cap at pool availability, then redistribute the deficit proportionally
        std::size_t deficit = 0;
        for (std::size_t c = 0; c < classes; ++c) {
            if (counts[c] > remaining(c)) {
                deficit += counts[c] - remaining(c);
                counts[c] = remaining(c);
                if (counts[c] == 1) {  // keep the no-singleton rule after capping
                    counts[c] = 0;
                    ++deficit;
                }
            }
        }
        while (deficit > 0) {
            // prefer topping up classes that already have at least two samples
            std::size_t best = classes;
            std::size_t best_room = 0;
            for (std::size_t c = 0; c < classes; ++c) {
                const std::size_t room = remaining(c) - counts[c];
                if (counts[c] >= 2 && room > best_room) {
                    best = c;
                    best_room = room;
                }
            }
            if (best != classes) {
                const std::size_t take = std::min(deficit, best_room);
                counts[best] += take;
                deficit -= take;
                continue;
            }
            // otherwise open an empty class with at least two samples at once
            if (deficit >= 2) {
                for (std::size_t c = 0; c < classes && best == classes; ++c) {
                    if (counts[c] == 0 && remaining(c) >= 2) best = c;
                }
                if (best != classes) {
                    const std::size_t take = std::min(deficit, remaining(best));
                    counts[best] += take;
                    deficit -= take;
                    continue;
                }
            } else {
                // a lone leftover sample: shift one unit from a class that can
                // spare it so an empty class can open with two
                std::size_t donor = classes, target = classes;
                for (std::size_t c = 0; c < classes && donor == classes; ++c) {
                    if (counts[c] >= 3) donor = c;
                }
                for (std::size_t c = 0; c < classes && target == classes; ++c) {
                    if (counts[c] == 0 && remaining(c) >= 2) target = c;
                }
                if (donor != classes && target != classes) {
                    --counts[donor];
                    counts[target] += 2;
                    deficit = 0;
                    continue;
                }
            }
            throw std::runtime_error("dirichlet_partition: device " + std::to_string(device_id) +
                                     " pool exhausted; short " + std::to_string(deficit) +
                                     " samples for client " +
                                     std::to_string(first_client_id + static_cast<int>(i)));
        }

        std::vector<std::size_t> chosen;
        chosen.reserve(n);
        for (std::size_t c = 0; c < classes; ++c) {
            for (std::size_t j = 0; j < counts[c]; ++j) chosen.push_back(by_class[c][cursor[c]++]);
        }
        clients.push_back(finish_client(collect(device, chosen),
                                        first_client_id + static_cast<int>(i), device_id, spec));
    }
    return clients;
}

void mark_unlabeled(std::vector<ClientDataset>& clients, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw std::invalid_argument("mark_unlabeled: fraction must be in [0, 1]");
    }
    if (clients.empty() || fraction == 0.0) return;
    const std::size_t total = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(clients.size()) + 0.5));
    if (total == 0) return;

    // stratify the draw across devices by largest remainder
    std::vector<int> devices;
    for (const ClientDataset& c : clients) {
        if (std::find(devices.begin(), devices.end(), c.device_id) == devices.end()) {
            devices.push_back(c.device_id);
        }
    }
    std::sort(devices.begin(), devices.end());
    std::vector<std::vector<std::size_t>> members(devices.size());
    for (std::size_t i = 0; i < clients.size(); ++i) {
        const std::size_t d = std::find(devices.begin(), devices.end(), clients[i].device_id) -
                              devices.begin();
        members[d].push_back(i);
    }
    std::vector<double> proportions(devices.size(), 0.0);
    for (std::size_t d = 0; d < devices.size(); ++d) {
        proportions[d] = static_cast<double>(members[d].size()) /
                         static_cast<double>(clients.size());
    }
    std::vector<std::size_t> per_device = round_counts(proportions, total);
    for (std::size_t d = 0; d < devices.size(); ++d) {
        per_device[d] = std::min(per_device[d], members[d].size());
    }

    Rng rng(derive_seed(seed, "unlabeled"));
    for (std::size_t d = 0; d < devices.size(); ++d) {
        rng.shuffle(members[d]);
        for (std::size_t j = 0; j < per_device[d]; ++j) {
            ClientDataset& client = clients[members[d][j]];
            client.train = client.train.benign_subset();
            client.labeled = false;
            client.alpha = 0.0;
        }
    }
}

std::vector<ClientDataset> build_clients(const std::vector<data::Dataset>& devices,
                                         const PartitionSpec& spec) {
    spec.validate();
    if (devices.empty()) throw std::invalid_argument("build_clients: no devices");
    std::vector<ClientDataset> clients;
    clients.reserve(devices.size() * static_cast<std::size_t>(spec.clients_per_device));
    int next_id = 0;
    for (std::size_t d = 0; d < devices.size(); ++d) {
        std::vector<ClientDataset> part =
            spec.dirichlet_beta
                ? dirichlet_partition(devices[d], static_cast<int>(d), next_id, spec)
                : derive_clients(devices[d], static_cast<int>(d), next_id, spec);
        next_id += static_cast<int>(part.size());
        for (ClientDataset& c : part) clients.push_back(std::move(c));
    }
    mark_unlabeled(clients, spec.unlabeled_fraction, derive_seed(spec.seed, "mark"));
    return clients;
}

}  // namespace clad::partition
