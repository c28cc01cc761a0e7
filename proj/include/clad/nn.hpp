#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clad/matrix.hpp"
#include "clad/rng.hpp"

namespace clad::nn {

enum class Activation { Identity, Gelu };

// x * Phi(x) with the exact erf-based normal CDF (no tanh approximation)
double gelu(double x);
double gelu_derivative(double x);

struct DenseLayer {
    Matrix weights;             // out x in
    std::vector<double> bias;   // out
    Activation activation = Activation::Identity;
    bool dropout = false;       // dropout applies after this layer when training

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

using LayerStack = std::vector<DenseLayer>;

DenseLayer make_layer(std::size_t in, std::size_t out, Activation act, bool dropout);
// uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) on weights and bias
void init_layer(DenseLayer& layer, Rng& rng);

// Per-layer tensors needed to run backward. Dropout masks already carry the
// inverted 1/keep scaling, so applying a mask is a plain elementwise product.
struct ForwardCache {
    std::vector<Matrix> inputs;
    std::vector<Matrix> preact;
    std::vector<Matrix> dropmask;
};

// Runs the stack on `input` (batch x in). When `training` is set, dropout is
// sampled from `rng` after every layer flagged for it. Pass `cache` to enable
// a subsequent backward pass.
Matrix forward(const LayerStack& layers, const Matrix& input, bool training, double dropout_p,
               Rng* rng, ForwardCache* cache);

struct StackGrads {
    std::vector<Matrix> dweights;
    std::vector<std::vector<double>> dbias;
};

StackGrads zero_grads(const LayerStack& layers);

// Backpropagates `dout` (gradient w.r.t. the stack output) through the stack,
// accumulating parameter gradients into `grads` and returning the gradient
// w.r.t. the stack input.
Matrix backward(const LayerStack& layers, const ForwardCache& cache, const Matrix& dout,
                StackGrads& grads);

// ---- losses ----

// mean over all batch elements and features of squared difference
double mse_loss(const Matrix& x, const Matrix& x_hat);
// d mse / d x_hat
Matrix mse_grad(const Matrix& x, const Matrix& x_hat);
// per-row mean over features of squared difference (the per-sample score)
std::vector<double> per_sample_mse(const Matrix& x, const Matrix& x_hat);

// mean negative log-softmax probability of the true class
double cross_entropy(const Matrix& logits, const std::vector<int>& labels);
Matrix cross_entropy_grad(const Matrix& logits, const std::vector<int>& labels);

// ---- optimizer ----

struct AdamHyper {
    double lr = 0.01;
    double weight_decay = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// One decoupled-weight-decay Adam update on a flat parameter block. `step` is
// the 1-based step count used for bias correction.
void adamw_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                  std::span<double> v, long step, const AdamHyper& hyper);

// ---- shape bookkeeping ----

std::size_t param_count(const LayerStack& layers);
void flatten_into(const LayerStack& layers, std::vector<double>& out);
std::vector<double> flatten(const LayerStack& layers);
// reads values back in flatten order; offset advances past consumed values
void unflatten_from(LayerStack& layers, std::span<const double> flat, std::size_t& offset);

// ---- FLOP accounting ----
// Convention: a dense layer forward costs 2*in*out + out; an activation (when
// not identity) costs 1 per output element; backward is twice forward.
std::uint64_t layer_forward_flops(const DenseLayer& layer);
std::uint64_t stack_forward_flops(const LayerStack& layers);

// ---- little-endian byte helpers for the checkpoint format ----
void append_f64_le(std::vector<unsigned char>& out, double v);
double read_f64_le(const unsigned char* p);

}  // namespace clad::nn
