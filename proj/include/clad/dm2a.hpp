#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clad/nn.hpp"
#include "clad/rng.hpp"

namespace clad {

// Dual-mode model: a shared encoder feeding a reconstruction head (mirror of
// the encoder) and a classification head (one hidden layer of half the latent
// width, then the label space).
struct Dm2aConfig {
    std::size_t input_dim = 0;
    std::vector<std::size_t> encoder_widths;  // last entry is the latent dim
    std::size_t num_classes = 2;              // benign (index 0) + attack classes
    double dropout_p = 0.2;
    double alpha_default = 0.8;

    std::size_t latent_dim() const { return encoder_widths.empty() ? 0 : encoder_widths.back(); }
    std::size_t classifier_hidden() const { return latent_dim() / 2; }
    void validate() const;  // throws std::invalid_argument on a bad config
};

struct Dm2aModel {
    Dm2aConfig config;
    nn::LayerStack encoder;
    nn::LayerStack decoder;
    nn::LayerStack classifier;
};

// zero-initialized model of the configured shape
Dm2aModel make_model_shape(const Dm2aConfig& config);
// seeded uniform(-sqrt(1/fan_in), sqrt(1/fan_in)) initialization
Dm2aModel make_model(const Dm2aConfig& config, Rng& rng);

struct DualOutput {
    nn::Matrix x_hat;
    nn::Matrix logits;  // empty when the classifier branch was skipped
    nn::Matrix z;
};

struct Dm2aCaches {
    nn::ForwardCache encoder;
    nn::ForwardCache decoder;
    nn::ForwardCache classifier;
};

// Full dual forward pass. `with_classifier=false` skips the classification
// branch entirely (used for alpha = 0 training and for fingerprinting).
DualOutput forward_dual(const Dm2aModel& model, const nn::Matrix& x, bool training,
                        Rng* rng = nullptr, Dm2aCaches* caches = nullptr,
                        bool with_classifier = true);

// alpha * CE(labels, logits) + (1 - alpha) * MSE(x, x_hat). The CE term is not
// evaluated at alpha = 0, so unlabeled batches are legal there.
double composite_loss(const nn::Matrix& x, const DualOutput& out, const std::vector<int>& labels,
                      double alpha);

struct Dm2aGrads {
    nn::StackGrads encoder;
    nn::StackGrads decoder;
    nn::StackGrads classifier;
};

Dm2aGrads zero_grads(const Dm2aModel& model);

// Gradients of composite_loss w.r.t. every parameter. Requires caches from a
// forward_dual call on the same batch.
Dm2aGrads backward_dual(const Dm2aModel& model, const Dm2aCaches& caches, const nn::Matrix& x,
                        const DualOutput& out, const std::vector<int>& labels, double alpha);

// Benign-only reconstruction loss in inference mode; the classifier branch is
// neither evaluated nor updated. This is the per-model entry of a client's
// loss vector.
double reconstruction_fingerprint(const Dm2aModel& model, const nn::Matrix& benign);

struct AnomalyThreshold {
    double tau = 0.0;
};

// empirical maximum per-sample reconstruction error over a benign validation set
AnomalyThreshold calibrate_threshold(const Dm2aModel& model, const nn::Matrix& benign_val);

// argmax over classifier logits, ties broken toward the lowest class index
std::vector<int> infer_labeled(const Dm2aModel& model, const nn::Matrix& x);

// anomalous iff per-sample reconstruction error strictly exceeds the threshold
std::vector<bool> infer_unlabeled(const Dm2aModel& model, const nn::Matrix& x,
                                  const AnomalyThreshold& threshold);

// ---- parameter bookkeeping (flatten order: encoder, decoder, classifier;
//      within each layer weights row-major then bias) ----

std::size_t param_count(const Dm2aModel& model);
std::size_t param_count(const Dm2aConfig& config);
std::vector<double> flatten(const Dm2aModel& model);
Dm2aModel unflatten(const Dm2aConfig& config, std::span<const double> flat);
std::vector<double> flatten_grads(const Dm2aModel& model, const Dm2aGrads& grads);

struct AdamwState {
    nn::AdamHyper hyper;
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;
};

AdamwState make_adamw_state(const Dm2aModel& model, const nn::AdamHyper& hyper);
// `with_classifier=false` leaves the classifier stack untouched entirely (no
// gradient and no weight decay), matching a branch that is outside the
// computation graph.
void adamw_step(Dm2aModel& model, const Dm2aGrads& grads, AdamwState& state,
                bool with_classifier = true);

// ---- FLOP accounting ----

enum class Mode { ReconstructionOnly, Dual, ClassificationOnly };

std::uint64_t flops_per_sample(const Dm2aModel& model, Mode mode);
// training pass convention: forward + backward at twice forward
std::uint64_t training_flops_per_sample(const Dm2aModel& model, Mode mode);

// ---- checkpoint file: structured-text shape header, then the flattened
//      parameter vector as little-endian 64-bit floats ----

void save_checkpoint(const std::string& path, const Dm2aModel& model);
Dm2aModel load_checkpoint(const std::string& path);

}  // namespace clad
