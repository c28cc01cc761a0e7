#pragma once

#include <cstdint>
#include <vector>

#include "clad/dataset.hpp"

namespace clad::data {

// Multi-cluster traffic generator. Each device type k gets a benign Gaussian
// blob around a mean mu_k; attack class a is the same blob displaced by a
// direction of norm attack_shift. With conflicting_shifts the displacement
// directions are shared across device types but cyclically re-assigned to
// different attack classes, so the same displacement carries different labels
// on different devices.
struct SyntheticSpec {
    int num_clusters = 1;
    std::size_t feature_dim = 8;
    int attack_classes = 1;
    double cluster_separation = 0.5;
    double intra_noise = 0.05;
    double attack_shift = 0.3;
    std::size_t benign_count = 1000;             // per device
    std::size_t attack_count_per_class = 500;    // per device, per attack class
    bool conflicting_shifts = false;
    // Optional correlated benign structure: samples spread along
    // manifold_rank random orthonormal directions per device with standard
    // deviation manifold_scale * intra_noise, on top of the isotropic noise.
    // Rank 0 keeps the plain isotropic blob.
    int manifold_rank = 0;
    double manifold_scale = 4.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// one Dataset per device type, deterministic under spec.seed
std::vector<Dataset> synth_generate(const SyntheticSpec& spec);

}  // namespace clad::data
