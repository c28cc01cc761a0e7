#include "clad/fl.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "clad/clustering.hpp"
#include "clad/metrics.hpp"

namespace clad::fl {

namespace {

void log_warn(const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void TrainHyper::validate() const {
    if (local_epochs < 0) throw std::invalid_argument("train: local_epochs must be >= 0");
    if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
    if (max_rounds < 1) throw std::invalid_argument("train: max_rounds must be >= 1");
    if (learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be positive");
    if (weight_decay < 0.0) throw std::invalid_argument("train: weight_decay must be >= 0");
    if (stabilization_patience < 1) {
        throw std::invalid_argument("train: stabilization_patience must be >= 1");
    }
}

ServerState init_server(const Dm2aConfig& config, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("init_server: k must be >= 1");
    config.validate();
    ServerState server;
    server.models.reserve(k);
    for (int j = 0; j < k; ++j) {
        Rng rng(derive_seed(seed, "model", static_cast<std::uint64_t>(j)));
        server.models.push_back(flatten(make_model(config, rng)));
    }
    return server;
}

ClientUpdate local_train(const partition::ClientDataset& client, const std::vector<double>& weights,
                         const Dm2aConfig& config, const TrainHyper& hyper, Rng rng) {
    hyper.validate();
    if (client.train.empty()) throw std::invalid_argument("local_train: empty train set");
    Dm2aModel model = unflatten(config, weights);
    const nn::Matrix train_x = client.train.features_matrix();
    const std::vector<int> train_y = client.train.labels();
    const bool use_cls = client.alpha > 0.0;

    AdamwState opt = make_adamw_state(model, {hyper.learning_rate, hyper.weight_decay});
    std::vector<std::size_t> order(train_x.rows);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const std::size_t bs = static_cast<std::size_t>(hyper.batch_size);
    std::vector<int> batch_y;
    for (int epoch = 0; epoch < hyper.local_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += bs) {
            const std::size_t count = std::min(bs, order.size() - start);
            nn::Matrix bx(count, train_x.cols);
            batch_y.assign(count, 0);
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t src = order[start + r];
                std::copy(&train_x.data[src * train_x.cols],
                          &train_x.data[src * train_x.cols] + train_x.cols,
                          &bx.data[r * bx.cols]);
                batch_y[r] = train_y[src];
            }
            Dm2aCaches caches;
            const DualOutput out = forward_dual(model, bx, true, &rng, &caches, use_cls);
            const Dm2aGrads grads =
                backward_dual(model, caches, bx, out, use_cls ? batch_y : std::vector<int>{},
                              client.alpha);
            adamw_step(model, grads, opt, use_cls);
        }
    }
    return ClientUpdate{client.client_id, 0, flatten(model), client.train.size()};
}

std::vector<double> aggregate_cluster(const std::vector<ClientUpdate>& updates) {
    if (updates.empty()) throw std::invalid_argument("aggregate_cluster: no updates");
    std::vector<const ClientUpdate*> sorted;
    sorted.reserve(updates.size());
    double n_total = 0.0;
    for (const ClientUpdate& u : updates) {
        if (u.weights.size() != updates.front().weights.size()) {
            throw std::invalid_argument("aggregate_cluster: mismatched weight lengths");
        }
        sorted.push_back(&u);
        n_total += static_cast<double>(u.n);
    }
    if (n_total <= 0.0) throw std::invalid_argument("aggregate_cluster: zero total samples");
    std::sort(sorted.begin(), sorted.end(),
              [](const ClientUpdate* a, const ClientUpdate* b) { return a->client_id < b->client_id; });
    std::vector<double> out(updates.front().weights.size(), 0.0);
    for (const ClientUpdate* u : sorted) {
        const double w = static_cast<double>(u->n) / n_total;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * u->weights[i];
    }
    return out;
}

bool check_stabilization(const std::vector<std::vector<int>>& history, int patience) {
    if (patience < 1) throw std::invalid_argument("check_stabilization: patience must be >= 1");
    if (history.size() < static_cast<std::size_t>(patience)) return false;
    const std::vector<int>& last = history.back();
    for (std::size_t i = history.size() - static_cast<std::size_t>(patience); i < history.size();
         ++i) {
        if (history[i] != last) return false;
    }
    return true;
}

namespace {

// Per-client matrices reused across rounds.
struct ClientCtx {
    const partition::ClientDataset* data = nullptr;
    nn::Matrix test_x;
    std::vector<int> test_y;
    nn::Matrix benign_train_x;
    nn::Matrix benign_val_x;
    std::vector<double> train_mean;
};

std::vector<ClientCtx> build_contexts(const std::vector<partition::ClientDataset>& clients) {
    std::vector<ClientCtx> ctxs(clients.size());
    for (std::size_t i = 0; i < clients.size(); ++i) {
        ClientCtx& c = ctxs[i];
        c.data = &clients[i];
        c.test_x = clients[i].test.features_matrix();
        c.test_y = clients[i].test.labels();
        c.benign_train_x = clients[i].train.benign_subset().features_matrix();
        c.benign_val_x = clients[i].benign_val.features_matrix();
        c.train_mean = clients[i].train.feature_mean();
    }
    return ctxs;
}

struct ClientEval {
    double cls_f1 = kNan;
    double cls_acc = kNan;
    double mcc = kNan;
    double ad_f1 = kNan;
};

// Labeled clients are scored through the classifier (attack = any non-benign
// prediction); unlabeled clients calibrate a threshold on their benign
// validation split and score reconstruction errors.
ClientEval evaluate_client(const Dm2aModel& model, const ClientCtx& ctx, bool classifier_allowed) {
    ClientEval ev;
    if (ctx.test_x.rows == 0) return ev;
    if (ctx.data->labeled && classifier_allowed) {
        const std::vector<int> preds = infer_labeled(model, ctx.test_x);
        const metrics::ConfusionMatrix cm =
            metrics::confusion(ctx.test_y, preds, model.config.num_classes);
        ev.cls_f1 = metrics::macro_f1(cm);
        ev.cls_acc = metrics::accuracy(cm);
        ev.mcc = metrics::mcc(cm);
        std::vector<bool> flagged(preds.size(), false);
        for (std::size_t i = 0; i < preds.size(); ++i) flagged[i] = preds[i] != 0;
        ev.ad_f1 = metrics::ad_f1(ctx.test_y, flagged);
    } else {
        if (ctx.benign_val_x.rows == 0) return ev;  // cannot calibrate; metric not produced
        const AnomalyThreshold tau = calibrate_threshold(model, ctx.benign_val_x);
        const std::vector<bool> flagged = infer_unlabeled(model, ctx.test_x, tau);
        ev.ad_f1 = metrics::ad_f1(ctx.test_y, flagged);
    }
    return ev;
}

struct RoundEngine {
    Algorithm algorithm;
    const std::vector<partition::ClientDataset>& clients;
    const std::vector<ClientCtx>& ctxs;
    const Dm2aConfig& config;
    const TrainHyper& hyper;
    int k;
    std::uint64_t seed;
    accounting::CostLedger& ledger;

    // mutable run state
    ServerState& server;
    std::vector<std::vector<double>>& local_models;  // Local only

    // FLOP rates depend only on the model shape
    Dm2aModel shape = make_model_shape(config);
    std::uint64_t train_flops_dual = training_flops_per_sample(shape, Mode::Dual);
    std::uint64_t train_flops_recon = training_flops_per_sample(shape, Mode::ReconstructionOnly);

    std::uint64_t train_flops(const partition::ClientDataset& c) const {
        return (c.alpha > 0.0 ? train_flops_dual : train_flops_recon) * c.train.size() *
               static_cast<std::uint64_t>(hyper.local_epochs);
    }

    std::vector<Dm2aModel> unflatten_models(const std::vector<std::vector<double>>& models) const {
        std::vector<Dm2aModel> out;
        out.reserve(models.size());
        for (const auto& w : models) out.push_back(unflatten(config, w));
        return out;
    }

    // steps 2-4: fingerprints, k-means and model matching
    std::vector<int> cluster_assignments(int round) {
        const std::vector<Dm2aModel> models = unflatten_models(server.models);
        const std::uint64_t fp_flops = flops_per_sample(shape, Mode::ReconstructionOnly);
        std::vector<std::vector<double>> vectors;
        std::vector<std::size_t> owners;
        std::vector<std::size_t> orphans;
        for (std::size_t i = 0; i < ctxs.size(); ++i) {
            if (ctxs[i].benign_train_x.rows == 0) {
                orphans.push_back(i);
                continue;
            }
            std::vector<double> v(k, 0.0);
            for (int j = 0; j < k; ++j) {
                v[j] = reconstruction_fingerprint(models[j], ctxs[i].benign_train_x);
            }
            ledger.add_flops(i, static_cast<std::uint64_t>(k) * ctxs[i].benign_train_x.rows *
                                    fp_flops);
            vectors.push_back(std::move(v));
            owners.push_back(i);
        }
        std::vector<int> assignment(ctxs.size(), 0);
        if (!vectors.empty()) {
            const cluster::KmeansResult km = cluster::kmeans(
                vectors, k, derive_seed(seed, "kmeans", static_cast<std::uint64_t>(round)));
            const std::vector<std::vector<double>> cost =
                cluster::build_match_cost(km.assignment, vectors, k);
            const std::vector<int> sigma = cluster::min_cost_matching(cost);
            for (std::size_t t = 0; t < owners.size(); ++t) {
                assignment[owners[t]] = sigma[km.assignment[t]];
            }
        } else if (!orphans.empty()) {
            log_warn("no client could be fingerprinted; all assigned to model 0");
        }
        // clients with no benign data follow the nearest fingerprintable client
        for (const std::size_t o : orphans) {
            if (owners.empty()) break;
            std::size_t best = owners.front();
            double best_d = std::numeric_limits<double>::infinity();
            for (const std::size_t cand : owners) {
                double d2 = 0.0;
                for (std::size_t f = 0; f < ctxs[o].train_mean.size(); ++f) {
                    const double d = ctxs[o].train_mean[f] - ctxs[cand].train_mean[f];
                    d2 += d * d;
                }
                if (d2 < best_d) {
                    best_d = d2;
                    best = cand;
                }
            }
            assignment[o] = assignment[best];
            log_warn("client " + std::to_string(clients[o].client_id) +
                     " has no benign samples; assigned to cluster of client " +
                     std::to_string(clients[best].client_id));
        }
        return assignment;
    }

    // steps 5-6 for a fixed assignment: local training and per-cluster
    // aggregation; returns the ids of clients that trained
    std::vector<int> train_and_aggregate(const std::vector<int>& assignment, int round) {
        std::vector<int> participants;
        std::map<int, std::vector<ClientUpdate>> per_model;
        for (std::size_t i = 0; i < clients.size(); ++i) {
            if (clients[i].train.empty()) {
                log_warn("client " + std::to_string(clients[i].client_id) +
                         " skipped: empty train set");
                continue;
            }
            ClientUpdate update = local_train(
                clients[i], server.models[assignment[i]], config, hyper,
                Rng(derive_seed(seed, "train", static_cast<std::uint64_t>(clients[i].client_id),
                                static_cast<std::uint64_t>(round))));
            update.model_index = assignment[i];
            ledger.add_flops(i, train_flops(clients[i]));
            participants.push_back(clients[i].client_id);
            per_model[assignment[i]].push_back(std::move(update));
        }
        for (int j = 0; j < static_cast<int>(server.models.size()); ++j) {
            const auto it = per_model.find(j);
            if (it == per_model.end()) {
                log_warn("cluster " + std::to_string(j) +
                         " received no updates; model carried over");
                continue;
            }
            server.models[j] = aggregate_cluster(it->second);
        }
        return participants;
    }
};

}  // namespace

void clad_round(ServerState& server, const std::vector<partition::ClientDataset>& clients,
                const Dm2aConfig& config, const TrainHyper& hyper, std::uint64_t master_seed,
                accounting::CostLedger& ledger) {
    if (server.stabilized) throw std::invalid_argument("clad_round: server already stabilized");
    const std::vector<ClientCtx> ctxs = build_contexts(clients);
    std::vector<std::vector<double>> no_local;
    RoundEngine engine{Algorithm::Clad, clients, ctxs,   config,    hyper,
                       static_cast<int>(server.models.size()), master_seed, ledger,
                       server, no_local};
    server.round += 1;
    const std::vector<int> assignment = engine.cluster_assignments(server.round);
    const std::vector<int> participants = engine.train_and_aggregate(assignment, server.round);
    accounting::record_round(ledger, Algorithm::Clad, accounting::Phase::Clustering,
                             static_cast<int>(server.models.size()), participants);
    server.assignment = assignment;
    server.history.push_back(assignment);
    if (!server.stabilized) {
        server.stabilized = check_stabilization(server.history, hyper.stabilization_patience);
    }
}

void stabilized_round(ServerState& server, const std::vector<partition::ClientDataset>& clients,
                      const Dm2aConfig& config, const TrainHyper& hyper, std::uint64_t master_seed,
                      accounting::CostLedger& ledger) {
    if (!server.stabilized) throw std::invalid_argument("stabilized_round: server not stabilized");
    const std::vector<ClientCtx> ctxs = build_contexts(clients);
    std::vector<std::vector<double>> no_local;
    RoundEngine engine{Algorithm::Clad, clients, ctxs,   config,    hyper,
                       static_cast<int>(server.models.size()), master_seed, ledger,
                       server, no_local};
    server.round += 1;
    const std::vector<int> participants =
        engine.train_and_aggregate(server.assignment, server.round);
    accounting::record_round(ledger, Algorithm::Clad, accounting::Phase::Stabilized,
                             static_cast<int>(server.models.size()), participants);
    server.history.push_back(server.assignment);
}

ExperimentResult run_experiment(Algorithm algorithm,
                                const std::vector<partition::ClientDataset>& clients_in,
                                const Dm2aConfig& config, const TrainHyper& hyper, int k,
                                std::uint64_t seed, const ExperimentOptions& options) {
    config.validate();
    hyper.validate();
    if (k < 1) throw std::invalid_argument("run_experiment: k must be >= 1");
    if (clients_in.empty()) throw std::invalid_argument("run_experiment: no clients");

    // CFL-ADS trains the reconstruction path only
    std::vector<partition::ClientDataset> clients_forced;
    const bool reconstruction_only = algorithm == Algorithm::CflAds;
    if (reconstruction_only) {
        clients_forced = clients_in;
        for (partition::ClientDataset& c : clients_forced) c.alpha = 0.0;
    }
    const std::vector<partition::ClientDataset>& clients =
        reconstruction_only ? clients_forced : clients_in;

    const std::size_t n = clients.size();
    const std::vector<ClientCtx> ctxs = build_contexts(clients);
    const bool single_model = algorithm == Algorithm::FedAvg || algorithm == Algorithm::Local;
    const int server_k = single_model ? 1 : k;

    ServerState server = init_server(config, algorithm == Algorithm::CflAds ||
                                                     algorithm == Algorithm::CflAde
                                                 ? 1
                                                 : server_k,
                                     seed);
    std::vector<std::vector<double>> local_models;
    if (algorithm == Algorithm::Local) local_models.assign(n, server.models[0]);

    ExperimentResult result;
    result.ledger = accounting::CostLedger(n, accounting::model_bytes(param_count(config)));
    RoundEngine engine{algorithm, clients, ctxs,  config,          hyper,
                       k,         seed,    result.ledger, server, local_models};

    std::vector<int> all_ids(n, 0);
    for (std::size_t i = 0; i < n; ++i) all_ids[i] = static_cast<int>(i);

    auto model_for_client = [&](std::size_t i) -> const std::vector<double>& {
        if (algorithm == Algorithm::Local) return local_models[i];
        const int a = server.assignment.empty() ? 0 : std::max(server.assignment[i], 0);
        return server.models[static_cast<std::size_t>(a) < server.models.size() ? a : 0];
    };

    auto log_round = [&](int round) {
        RoundLog log;
        log.round = round;
        log.assignment.assign(n, -1);
        if (algorithm == Algorithm::Local) {
            for (std::size_t i = 0; i < n; ++i) log.assignment[i] = static_cast<int>(i);
        } else if (!server.assignment.empty()) {
            log.assignment = server.assignment;
        } else if (single_model) {
            std::fill(log.assignment.begin(), log.assignment.end(), 0);
        }

        // evaluate each client on its current model
        std::vector<double> f1s(n, kNan), accs(n, kNan), mccs(n, kNan), ads(n, kNan);
        std::map<const std::vector<double>*, Dm2aModel> by_ptr;
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double>& w = model_for_client(i);
            auto it = by_ptr.find(&w);
            if (it == by_ptr.end()) it = by_ptr.emplace(&w, unflatten(config, w)).first;
            const ClientEval ev = evaluate_client(it->second, ctxs[i], !reconstruction_only);
            f1s[i] = ev.cls_f1;
            accs[i] = ev.cls_acc;
            mccs[i] = ev.mcc;
            ads[i] = ev.ad_f1;
        }
        log.cls_f1 = metrics::average_over_clients(f1s);
        log.cls_acc = metrics::average_over_clients(accs);
        log.mcc = metrics::average_over_clients(mccs);
        log.ad_f1 = metrics::average_over_clients(ads);

        if (algorithm == Algorithm::Local || log.assignment.front() < 0) {
            log.purity = kNan;
        } else {
            std::vector<int> devices(n, 0);
            for (std::size_t i = 0; i < n; ++i) devices[i] = clients[i].device_id;
            log.purity = cluster::assignment_purity(log.assignment, devices);
        }
        log.stabilized = server.stabilized;
        log.cum_bytes_per_client = result.ledger.mean_bytes();
        log.cum_flops_per_client = result.ledger.mean_flops();
        result.rounds.push_back(std::move(log));
        if (options.keep_weight_history) {
            result.weight_history.push_back(algorithm == Algorithm::Local ? local_models
                                                                          : server.models);
        }
    };

    // round 0: pre-training evaluation (Local pays its one-time download here)
    accounting::record_round(result.ledger, algorithm, accounting::Phase::Initial, server_k,
                             all_ids);
    result.ledger.snapshot();
    log_round(0);

    for (int round = 1; round <= hyper.max_rounds; ++round) {
        server.round = round;
        std::vector<int> participants;
        switch (algorithm) {
            case Algorithm::Clad: {
                if (!server.stabilized) {
                    const std::vector<int> assignment = engine.cluster_assignments(round);
                    participants = engine.train_and_aggregate(assignment, round);
                    accounting::record_round(result.ledger, algorithm,
                                             accounting::Phase::Clustering, k, participants);
                    server.assignment = assignment;
                } else {
                    participants = engine.train_and_aggregate(server.assignment, round);
                    accounting::record_round(result.ledger, algorithm,
                                             accounting::Phase::Stabilized, k, participants);
                }
                server.history.push_back(server.assignment);
                break;
            }
            case Algorithm::FedAvg: {
                server.assignment.assign(n, 0);
                participants = engine.train_and_aggregate(server.assignment, round);
                accounting::record_round(result.ledger, algorithm, accounting::Phase::Clustering,
                                         1, participants);
                server.history.push_back(server.assignment);
                break;
            }
            case Algorithm::Local: {
                for (std::size_t i = 0; i < n; ++i) {
                    if (clients[i].train.empty()) {
                        log_warn("client " + std::to_string(clients[i].client_id) +
                                 " skipped: empty train set");
                        continue;
                    }
                    ClientUpdate update = local_train(
                        clients[i], local_models[i], config, hyper,
                        Rng(derive_seed(seed, "train",
                                        static_cast<std::uint64_t>(clients[i].client_id),
                                        static_cast<std::uint64_t>(round))));
                    result.ledger.add_flops(i, engine.train_flops(clients[i]));
                    local_models[i] = std::move(update.weights);
                    participants.push_back(clients[i].client_id);
                }
                accounting::record_round(result.ledger, algorithm, accounting::Phase::Clustering,
                                         1, participants);
                server.assignment.assign(n, 0);
                server.history.push_back(server.assignment);
                break;
            }
            case Algorithm::Ifca: {
                const std::vector<Dm2aModel> models = engine.unflatten_models(server.models);
                std::vector<int> assignment(n, 0);
                for (std::size_t i = 0; i < n; ++i) {
                    const nn::Matrix train_x = clients[i].train.features_matrix();
                    const std::vector<int> train_y = clients[i].train.labels();
                    const bool use_cls = clients[i].alpha > 0.0;
                    double best = std::numeric_limits<double>::infinity();
                    for (int j = 0; j < k; ++j) {
                        const DualOutput out =
                            forward_dual(models[j], train_x, false, nullptr, nullptr, use_cls);
                        const double loss = composite_loss(
                            train_x, out, use_cls ? train_y : std::vector<int>{},
                            clients[i].alpha);
                        if (loss < best) {
                            best = loss;
                            assignment[i] = j;
                        }
                    }
                    const Mode mode = use_cls ? Mode::Dual : Mode::ReconstructionOnly;
                    result.ledger.add_flops(i, static_cast<std::uint64_t>(k) * train_x.rows *
                                                   flops_per_sample(models[0], mode));
                }
                participants = engine.train_and_aggregate(assignment, round);
                accounting::record_round(result.ledger, algorithm, accounting::Phase::Clustering,
                                         k, participants);
                server.assignment = assignment;
                server.history.push_back(assignment);
                break;
            }
            case Algorithm::CflAds:
            case Algorithm::CflAde: {
                if (round == 1) {
                    // one-shot clustering on the weights of locally trained models
                    const std::vector<double> shared = server.models[0];
                    std::vector<ClientUpdate> updates;
                    std::vector<std::size_t> owners;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (clients[i].train.empty()) {
                            log_warn("client " + std::to_string(clients[i].client_id) +
                                     " skipped: empty train set");
                            continue;
                        }
                        ClientUpdate update = local_train(
                            clients[i], shared, config, hyper,
                            Rng(derive_seed(seed, "train",
                                            static_cast<std::uint64_t>(clients[i].client_id),
                                            static_cast<std::uint64_t>(round))));
                        result.ledger.add_flops(i, engine.train_flops(clients[i]));
                        participants.push_back(clients[i].client_id);
                        owners.push_back(i);
                        updates.push_back(std::move(update));
                    }
                    std::vector<int> assignment(n, 0);
                    if (!updates.empty()) {
                        std::vector<std::vector<double>> rows;
                        rows.reserve(updates.size());
                        for (const ClientUpdate& u : updates) rows.push_back(u.weights);
                        const std::vector<std::vector<double>> scores =
                            cluster::pca_project(rows, 8);
                        const cluster::KmeansResult km =
                            cluster::kmeans(scores, k, derive_seed(seed, "cfl-kmeans"));
                        for (std::size_t t = 0; t < owners.size(); ++t) {
                            assignment[owners[t]] = km.assignment[t];
                        }
                    }
                    server.models.assign(k, shared);
                    std::map<int, std::vector<ClientUpdate>> per_model;
                    for (std::size_t t = 0; t < updates.size(); ++t) {
                        updates[t].model_index = assignment[owners[t]];
                        per_model[updates[t].model_index].push_back(std::move(updates[t]));
                    }
                    for (auto& [j, ups] : per_model) server.models[j] = aggregate_cluster(ups);
                    server.assignment = assignment;
                } else {
                    participants = engine.train_and_aggregate(server.assignment, round);
                }
                accounting::record_round(result.ledger, algorithm, accounting::Phase::Clustering,
                                         k, participants);
                server.history.push_back(server.assignment);
                break;
            }
        }
        if (!server.stabilized) {
            server.stabilized = check_stabilization(server.history, hyper.stabilization_patience);
        }
        result.ledger.snapshot();
        log_round(round);
    }

    result.final_models = algorithm == Algorithm::Local ? local_models : server.models;
    result.final_assignment = server.assignment;
    return result;
}

const RoundLog* round_at_budget(const std::vector<RoundLog>& rounds, double budget, bool flops) {
    const RoundLog* chosen = nullptr;
    for (const RoundLog& log : rounds) {
        const double cost = flops ? log.cum_flops_per_client : log.cum_bytes_per_client;
        if (cost <= budget) chosen = &log;
    }
    return chosen;
}

}  // namespace clad::fl
