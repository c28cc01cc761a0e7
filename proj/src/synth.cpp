#include "clad/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clad::data {

void SyntheticSpec::validate() const {
    if (num_clusters < 1) throw std::invalid_argument("synthetic: num_clusters must be >= 1");
    if (feature_dim == 0) throw std::invalid_argument("synthetic: feature_dim must be positive");
    if (attack_classes < 1) throw std::invalid_argument("synthetic: attack_classes must be >= 1");
    if (cluster_separation <= 0.0) {
        throw std::invalid_argument("synthetic: cluster_separation must be positive");
    }
    if (intra_noise <= 0.0) throw std::invalid_argument("synthetic: intra_noise must be positive");
    if (attack_shift <= 0.0) throw std::invalid_argument("synthetic: attack_shift must be positive");
    if (benign_count == 0) throw std::invalid_argument("synthetic: benign_count must be positive");
    if (attack_count_per_class == 0) {
        throw std::invalid_argument("synthetic: attack_count_per_class must be positive");
    }
    if (manifold_rank < 0 || static_cast<std::size_t>(manifold_rank) >= feature_dim) {
        throw std::invalid_argument("synthetic: manifold_rank must be in [0, feature_dim)");
    }
    if (manifold_rank > 0 && manifold_scale <= 0.0) {
        throw std::invalid_argument("synthetic: manifold_scale must be positive");
    }
}

namespace {

std::vector<double> random_unit_vector(std::size_t d, Rng& rng) {
    std::vector<double> v(d, 0.0);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& x : v) {
            x = rng.normal();
            norm += x * x;
        }
        norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (double& x : v) x /= norm;
    return v;
}

std::vector<std::vector<double>> place_cluster_means(const SyntheticSpec& spec, Rng& rng) {
    // rejection sampling on [0.2, 0.8]^d with a pairwise distance check
    const double box_diag = 0.6 * std::sqrt(static_cast<double>(spec.feature_dim));
    if (spec.num_clusters > 1 && spec.cluster_separation > box_diag) {
        throw std::runtime_error("synthetic: separation " + std::to_string(spec.cluster_separation) +
                                 " infeasible in dimension " + std::to_string(spec.feature_dim));
    }
    std::vector<std::vector<double>> means;
    int attempts = 0;
    while (means.size() < static_cast<std::size_t>(spec.num_clusters)) {
        if (++attempts > 100000) {
            throw std::runtime_error("synthetic: could not place " +
                                     std::to_string(spec.num_clusters) +
                                     " cluster means at separation " +
                                     std::to_string(spec.cluster_separation));
        }
        std::vector<double> candidate(spec.feature_dim, 0.0);
        for (double& x : candidate) x = rng.uniform(0.2, 0.8);
        bool ok = true;
        for (const auto& mean : means) {
            double d2 = 0.0;
            for (std::size_t f = 0; f < spec.feature_dim; ++f) {
                const double d = candidate[f] - mean[f];
                d2 += d * d;
            }
            if (std::sqrt(d2) < spec.cluster_separation) {
                ok = false;
                break;
            }
        }
        if (ok) means.push_back(std::move(candidate));
    }
    return means;
}

}  // namespace

std::vector<Dataset> synth_generate(const SyntheticSpec& spec) {
    spec.validate();
    Rng mean_rng(derive_seed(spec.seed, "synth-means"));
    const std::vector<std::vector<double>> means = place_cluster_means(spec, mean_rng);

    // attack displacement directions
    Rng dir_rng(derive_seed(spec.seed, "synth-dirs"));
    std::vector<std::vector<std::vector<double>>> deltas(spec.num_clusters);
    if (spec.conflicting_shifts) {
        std::vector<std::vector<double>> base(spec.attack_classes);
        for (int a = 0; a < spec.attack_classes; ++a) {
            base[a] = random_unit_vector(spec.feature_dim, dir_rng);
        }
        for (int k = 0; k < spec.num_clusters; ++k) {
            deltas[k].resize(spec.attack_classes);
            for (int a = 0; a < spec.attack_classes; ++a) {
                deltas[k][a] = base[(a + k) % spec.attack_classes];
            }
        }
    } else {
        for (int k = 0; k < spec.num_clusters; ++k) {
            deltas[k].resize(spec.attack_classes);
            for (int a = 0; a < spec.attack_classes; ++a) {
                deltas[k][a] = random_unit_vector(spec.feature_dim, dir_rng);
            }
        }
    }

    std::vector<Dataset> devices;
    devices.reserve(spec.num_clusters);
    for (int k = 0; k < spec.num_clusters; ++k) {
        Rng rng(derive_seed(spec.seed, "synth-device", static_cast<std::uint64_t>(k)));

        // per-device manifold directions (orthonormalized random vectors)
        std::vector<std::vector<double>> basis;
        for (int r = 0; r < spec.manifold_rank; ++r) {
            std::vector<double> v = random_unit_vector(spec.feature_dim, rng);
            for (const auto& prev : basis) {
                double dot = 0.0;
                for (std::size_t f = 0; f < spec.feature_dim; ++f) dot += v[f] * prev[f];
                for (std::size_t f = 0; f < spec.feature_dim; ++f) v[f] -= dot * prev[f];
            }
            double norm = 0.0;
            for (const double x : v) norm += x * x;
            norm = std::sqrt(norm);
            if (norm < 1e-9) {
                --r;
                continue;
            }
            for (double& x : v) x /= norm;
            basis.push_back(std::move(v));
        }

        Dataset ds;
        ds.feature_dim = spec.feature_dim;
        ds.class_count = static_cast<std::size_t>(spec.attack_classes) + 1;
        ds.class_names.push_back("benign");
        for (int a = 1; a <= spec.attack_classes; ++a) {
            ds.class_names.push_back("attack" + std::to_string(a));
        }
        auto emit = [&](const std::vector<double>* delta, int label, std::size_t count) {
            std::vector<double> coords(basis.size(), 0.0);
            for (std::size_t i = 0; i < count; ++i) {
                Sample s;
                s.label = label;
                s.features.resize(spec.feature_dim);
                for (double& c : coords) {
                    c = spec.manifold_scale * spec.intra_noise * rng.normal();
                }
                for (std::size_t f = 0; f < spec.feature_dim; ++f) {
                    double v = means[k][f] + spec.intra_noise * rng.normal();
                    for (std::size_t r = 0; r < basis.size(); ++r) v += coords[r] * basis[r][f];
                    if (delta) v += spec.attack_shift * (*delta)[f];
                    s.features[f] = std::clamp(v, 0.0, 1.0);
                }
                ds.samples.push_back(std::move(s));
            }
        };
        emit(nullptr, 0, spec.benign_count);
        for (int a = 0; a < spec.attack_classes; ++a) {
            emit(&deltas[k][a], a + 1, spec.attack_count_per_class);
        }
        devices.push_back(std::move(ds));
    }
    return devices;
}

}  // namespace clad::data
