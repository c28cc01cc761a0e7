#include "clad/nn.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace clad::nn {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double gelu(double x) {
    return x * 0.5 * (1.0 + std::erf(x * kInvSqrt2));
}

double gelu_derivative(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    return cdf + x * pdf;
}

DenseLayer make_layer(std::size_t in, std::size_t out, Activation act, bool dropout) {
    DenseLayer layer;
    layer.weights = Matrix(out, in);
    layer.bias.assign(out, 0.0);
    layer.activation = act;
    layer.dropout = dropout;
    return layer;
}

void init_layer(DenseLayer& layer, Rng& rng) {
    const double bound = std::sqrt(1.0 / static_cast<double>(layer.in_dim()));
    for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
    for (double& b : layer.bias) b = rng.uniform(-bound, bound);
}

Matrix forward(const LayerStack& layers, const Matrix& input, bool training, double dropout_p,
               Rng* rng, ForwardCache* cache) {
    if (layers.empty()) throw std::invalid_argument("forward: empty layer stack");
    if (input.cols != layers.front().in_dim()) {
        throw std::invalid_argument("forward: input has " + std::to_string(input.cols) +
                                    " columns, layer expects " +
                                    std::to_string(layers.front().in_dim()));
    }
    if (cache) {
        cache->inputs.clear();
        cache->preact.clear();
        cache->dropmask.clear();
    }
    const bool drop_active = training && dropout_p > 0.0;
    if (drop_active && !rng) throw std::invalid_argument("forward: training dropout needs an rng");
    const double keep = 1.0 - dropout_p;

    Matrix act = input;
    for (const DenseLayer& layer : layers) {
        if (cache) cache->inputs.push_back(act);
        Matrix z = matmul_nt(act, layer.weights);
        for (std::size_t r = 0; r < z.rows; ++r) {
            for (std::size_t c = 0; c < z.cols; ++c) z(r, c) += layer.bias[c];
        }
        if (cache) cache->preact.push_back(z);
        if (layer.activation == Activation::Gelu) {
            for (double& v : z.data) v = gelu(v);
        }
        Matrix mask;
        if (layer.dropout && drop_active) {
            mask = Matrix(z.rows, z.cols);
            for (std::size_t i = 0; i < z.data.size(); ++i) {
                mask.data[i] = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
                z.data[i] *= mask.data[i];
            }
        }
        if (cache) cache->dropmask.push_back(std::move(mask));
        act = std::move(z);
    }
    return act;
}

StackGrads zero_grads(const LayerStack& layers) {
    StackGrads g;
    g.dweights.reserve(layers.size());
    g.dbias.reserve(layers.size());
    for (const DenseLayer& layer : layers) {
        g.dweights.emplace_back(layer.out_dim(), layer.in_dim());
        g.dbias.emplace_back(layer.out_dim(), 0.0);
    }
    return g;
}

Matrix backward(const LayerStack& layers, const ForwardCache& cache, const Matrix& dout,
                StackGrads& grads) {
    if (cache.inputs.size() != layers.size()) {
        throw std::invalid_argument("backward: cache missing or from a different forward pass");
    }
    Matrix delta = dout;
    for (std::size_t li = layers.size(); li-- > 0;) {
        const DenseLayer& layer = layers[li];
        const Matrix& mask = cache.dropmask[li];
        if (mask.rows > 0) {
            for (std::size_t i = 0; i < delta.data.size(); ++i) delta.data[i] *= mask.data[i];
        }
        if (layer.activation == Activation::Gelu) {
            const Matrix& z = cache.preact[li];
            for (std::size_t i = 0; i < delta.data.size(); ++i) {
                delta.data[i] *= gelu_derivative(z.data[i]);
            }
        }
        // dW += delta^T * input ; db += column sums ; dinput = delta * W
        const Matrix& input = cache.inputs[li];
        Matrix dw = matmul_tn(delta, input);
        for (std::size_t i = 0; i < dw.data.size(); ++i) grads.dweights[li].data[i] += dw.data[i];
        for (std::size_t r = 0; r < delta.rows; ++r) {
            for (std::size_t c = 0; c < delta.cols; ++c) grads.dbias[li][c] += delta(r, c);
        }
        delta = matmul(delta, layer.weights);
    }
    return delta;
}

double mse_loss(const Matrix& x, const Matrix& x_hat) {
    if (!x.same_shape(x_hat)) throw std::invalid_argument("mse_loss: shape mismatch");
    if (x.data.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double d = x_hat.data[i] - x.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(x.data.size());
}

Matrix mse_grad(const Matrix& x, const Matrix& x_hat) {
    if (!x.same_shape(x_hat)) throw std::invalid_argument("mse_grad: shape mismatch");
    Matrix g(x.rows, x.cols);
    const double scale = x.data.empty() ? 0.0 : 2.0 / static_cast<double>(x.data.size());
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        g.data[i] = scale * (x_hat.data[i] - x.data[i]);
    }
    return g;
}

std::vector<double> per_sample_mse(const Matrix& x, const Matrix& x_hat) {
    if (!x.same_shape(x_hat)) throw std::invalid_argument("per_sample_mse: shape mismatch");
    std::vector<double> out(x.rows, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double d = x_hat(r, c) - x(r, c);
            sum += d * d;
        }
        out[r] = sum / static_cast<double>(x.cols);
    }
    return out;
}

namespace {

// row-wise log-sum-exp with max shift
double row_lse(const Matrix& logits, std::size_t r) {
    double mx = logits(r, 0);
    for (std::size_t c = 1; c < logits.cols; ++c) mx = std::max(mx, logits(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.cols; ++c) sum += std::exp(logits(r, c) - mx);
    return mx + std::log(sum);
}

void check_labels(const Matrix& logits, const std::vector<int>& labels) {
    if (labels.size() != logits.rows) {
        throw std::invalid_argument("cross_entropy: label count does not match batch size");
    }
    for (const int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= logits.cols) {
            throw std::invalid_argument("cross_entropy: label " + std::to_string(y) +
                                        " out of range for " + std::to_string(logits.cols) +
                                        " classes");
        }
    }
}

}  // namespace

double cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
    check_labels(logits, labels);
    if (logits.rows == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t r = 0; r < logits.rows; ++r) {
        sum += row_lse(logits, r) - logits(r, static_cast<std::size_t>(labels[r]));
    }
    return sum / static_cast<double>(logits.rows);
}

Matrix cross_entropy_grad(const Matrix& logits, const std::vector<int>& labels) {
    check_labels(logits, labels);
    Matrix g(logits.rows, logits.cols);
    if (logits.rows == 0) return g;
    const double inv_batch = 1.0 / static_cast<double>(logits.rows);
    for (std::size_t r = 0; r < logits.rows; ++r) {
        const double lse = row_lse(logits, r);
        for (std::size_t c = 0; c < logits.cols; ++c) {
            g(r, c) = std::exp(logits(r, c) - lse) * inv_batch;
        }
        g(r, static_cast<std::size_t>(labels[r])) -= inv_batch;
    }
    return g;
}

void adamw_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                  std::span<double> v, long step, const AdamHyper& hyper) {
    if (params.size() != grads.size() || params.size() != m.size() || params.size() != v.size()) {
        throw std::invalid_argument("adamw_update: size mismatch");
    }
    const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * grads[i];
        v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * grads[i] * grads[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        params[i] -= hyper.lr * (mhat / (std::sqrt(vhat) + hyper.eps) + hyper.weight_decay * params[i]);
    }
}

std::size_t param_count(const LayerStack& layers) {
    std::size_t n = 0;
    for (const DenseLayer& layer : layers) n += layer.weights.data.size() + layer.bias.size();
    return n;
}

void flatten_into(const LayerStack& layers, std::vector<double>& out) {
    for (const DenseLayer& layer : layers) {
        out.insert(out.end(), layer.weights.data.begin(), layer.weights.data.end());
        out.insert(out.end(), layer.bias.begin(), layer.bias.end());
    }
}

std::vector<double> flatten(const LayerStack& layers) {
    std::vector<double> out;
    out.reserve(param_count(layers));
    flatten_into(layers, out);
    return out;
}

void unflatten_from(LayerStack& layers, std::span<const double> flat, std::size_t& offset) {
    for (DenseLayer& layer : layers) {
        const std::size_t wn = layer.weights.data.size();
        const std::size_t bn = layer.bias.size();
        if (offset + wn + bn > flat.size()) {
            throw std::invalid_argument("unflatten: vector too short for shape spec");
        }
        std::copy(flat.begin() + offset, flat.begin() + offset + wn, layer.weights.data.begin());
        offset += wn;
        std::copy(flat.begin() + offset, flat.begin() + offset + bn, layer.bias.begin());
        offset += bn;
    }
}

std::uint64_t layer_forward_flops(const DenseLayer& layer) {
    const std::uint64_t in = layer.in_dim();
    const std::uint64_t out = layer.out_dim();
    std::uint64_t f = 2 * in * out + out;
    if (layer.activation != Activation::Identity) f += out;
    return f;
}

std::uint64_t stack_forward_flops(const LayerStack& layers) {
    std::uint64_t f = 0;
    for (const DenseLayer& layer : layers) f += layer_forward_flops(layer);
    return f;
}

void append_f64_le(std::vector<unsigned char>& out, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xff));
}

double read_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

}  // namespace clad::nn
