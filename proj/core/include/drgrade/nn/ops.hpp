#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "drgrade/common/rng.hpp"
#include "drgrade/nn/tensor.hpp"

// Forward and backward passes for every layer the dual-branch model needs.
// All functions are pure given explicit inputs; reductions (batch statistics,
// softmax denominators, linear products) accumulate in double.

namespace drg::nn {

enum class Mode { train, eval };

namespace detail {

inline int64_t floor_div(int64_t a, int64_t b) {
    return (a >= 0) ? a / b : -((-a + b - 1) / b);
}

inline int64_t ceil_div(int64_t a, int64_t b) {
    return (a >= 0) ? (a + b - 1) / b : -((-a) / b);
}

} // namespace detail

// ---------------------------------------------------------------------------
// conv2d

inline std::pair<int64_t, int64_t> conv2d_output_dims(int64_t h, int64_t w, int64_t kh, int64_t kw,
                                                      int stride, int padding) {
    if (stride < 1) throw Error::validation("conv2d: stride must be >= 1");
    if (padding < 0) throw Error::validation("conv2d: padding must be >= 0");
    if (h + 2 * padding < kh || w + 2 * padding < kw)
        throw Error::validation("conv2d: kernel larger than padded input");
    return {(h + 2 * padding - kh) / stride + 1, (w + 2 * padding - kw) / stride + 1};
}

template <typename S>
TensorT<S> conv2d(const TensorT<S>& input, const TensorT<S>& weight, const TensorT<S>& bias,
                  int stride, int padding) {
    if (input.rank() != 4) throw Error::validation("conv2d: input must be [N,Cin,H,W]");
    if (weight.rank() != 4) throw Error::validation("conv2d: weight must be [Cout,Cin,kh,kw]");
    const int64_t n_batch = input.dim(0), c_in = input.dim(1), h = input.dim(2), w = input.dim(3);
    const int64_t c_out = weight.dim(0), kh = weight.dim(2), kw = weight.dim(3);
    if (weight.dim(1) != c_in) throw Error::validation("conv2d: channel mismatch between input and weight");
    if (bias.rank() != 1 || bias.dim(0) != c_out) throw Error::validation("conv2d: bias must be [Cout]");
    if (!input.all_finite()) throw Error::runtime("conv2d: non-finite input");
    auto [oh, ow] = conv2d_output_dims(h, w, kh, kw, stride, padding);

    TensorT<S> out = TensorT<S>::zeros({n_batch, c_out, oh, ow});
    const S* in_base = input.data.data();
    const S* w_base = weight.data.data();
    S* out_base = out.data.data();
    const int64_t s = stride, p = padding;

#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < n_batch; ++n) {
        for (int64_t co = 0; co < c_out; ++co) {
            S* out_plane = out_base + ((n * c_out) + co) * oh * ow;
            std::fill(out_plane, out_plane + oh * ow, bias.data[static_cast<size_t>(co)]);
            for (int64_t ci = 0; ci < c_in; ++ci) {
                const S* in_plane = in_base + ((n * c_in) + ci) * h * w;
                const S* w_plane = w_base + ((co * c_in) + ci) * kh * kw;
                for (int64_t ki = 0; ki < kh; ++ki) {
                    const int64_t oh_lo = std::max<int64_t>(0, detail::ceil_div(p - ki, s));
                    const int64_t oh_hi = std::min(oh, detail::floor_div(h - 1 + p - ki, s) + 1);
                    for (int64_t kj = 0; kj < kw; ++kj) {
                        const S wv = w_plane[ki * kw + kj];
                        const int64_t ow_lo = std::max<int64_t>(0, detail::ceil_div(p - kj, s));
                        const int64_t ow_hi = std::min(ow, detail::floor_div(w - 1 + p - kj, s) + 1);
                        for (int64_t r = oh_lo; r < oh_hi; ++r) {
                            const int64_t ih = r * s + ki - p;
                            const S* in_row = in_plane + ih * w + (ow_lo * s + kj - p);
                            S* out_row = out_plane + r * ow + ow_lo;
                            const int64_t count = ow_hi - ow_lo;
                            if (s == 1) {
                                for (int64_t i = 0; i < count; ++i) out_row[i] += wv * in_row[i];
                            } else {
                                for (int64_t i = 0; i < count; ++i) out_row[i] += wv * in_row[i * s];
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

template <typename S>
struct Conv2dGrads {
    TensorT<S> input;
    TensorT<S> weight;
    TensorT<S> bias;
};

template <typename S>
Conv2dGrads<S> conv2d_backward(const TensorT<S>& grad_out, const TensorT<S>& input,
                               const TensorT<S>& weight, int stride, int padding) {
    const int64_t n_batch = input.dim(0), c_in = input.dim(1), h = input.dim(2), w = input.dim(3);
    const int64_t c_out = weight.dim(0), kh = weight.dim(2), kw = weight.dim(3);
    auto [oh, ow] = conv2d_output_dims(h, w, kh, kw, stride, padding);
    if (grad_out.shape != std::vector<int64_t>{n_batch, c_out, oh, ow})
        throw Error::validation("conv2d_backward: grad shape mismatch");

    Conv2dGrads<S> g{TensorT<S>::zeros(input.shape), TensorT<S>::zeros(weight.shape),
                     TensorT<S>::zeros({c_out})};
    const S* in_base = input.data.data();
    const S* w_base = weight.data.data();
    const S* go_base = grad_out.data.data();
    const int64_t s = stride, p = padding;

    // grad wrt bias: plain reduction per output channel
    for (int64_t co = 0; co < c_out; ++co) {
        double acc = 0.0;
        for (int64_t n = 0; n < n_batch; ++n) {
            const S* go_plane = go_base + ((n * c_out) + co) * oh * ow;
            for (int64_t i = 0; i < oh * ow; ++i) acc += static_cast<double>(go_plane[i]);
        }
        g.bias.data[static_cast<size_t>(co)] = static_cast<S>(acc);
    }

    // grad wrt input: scatter, parallel over batch (disjoint outputs)
    S* gi_base = g.input.data.data();
#pragma omp parallel for schedule(static)
    for (int64_t n = 0; n < n_batch; ++n) {
        for (int64_t co = 0; co < c_out; ++co) {
            const S* go_plane = go_base + ((n * c_out) + co) * oh * ow;
            for (int64_t ci = 0; ci < c_in; ++ci) {
                S* gi_plane = gi_base + ((n * c_in) + ci) * h * w;
                const S* w_plane = w_base + ((co * c_in) + ci) * kh * kw;
                for (int64_t ki = 0; ki < kh; ++ki) {
                    const int64_t oh_lo = std::max<int64_t>(0, detail::ceil_div(p - ki, s));
                    const int64_t oh_hi = std::min(oh, detail::floor_div(h - 1 + p - ki, s) + 1);
                    for (int64_t kj = 0; kj < kw; ++kj) {
                        const S wv = w_plane[ki * kw + kj];
                        const int64_t ow_lo = std::max<int64_t>(0, detail::ceil_div(p - kj, s));
                        const int64_t ow_hi = std::min(ow, detail::floor_div(w - 1 + p - kj, s) + 1);
                        for (int64_t r = oh_lo; r < oh_hi; ++r) {
                            const int64_t ih = r * s + ki - p;
                            S* gi_row = gi_plane + ih * w + (ow_lo * s + kj - p);
                            const S* go_row = go_plane + r * ow + ow_lo;
                            const int64_t count = ow_hi - ow_lo;
                            if (s == 1) {
                                for (int64_t i = 0; i < count; ++i) gi_row[i] += wv * go_row[i];
                            } else {
                                for (int64_t i = 0; i < count; ++i) gi_row[i * s] += wv * go_row[i];
                            }
                        }
                    }
                }
            }
        }
    }

    // grad wrt weight: parallel over (co, ci), serial accumulation within a cell
    S* gw_base = g.weight.data.data();
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t co = 0; co < c_out; ++co) {
        for (int64_t ci = 0; ci < c_in; ++ci) {
            S* gw_plane = gw_base + ((co * c_in) + ci) * kh * kw;
            for (int64_t ki = 0; ki < kh; ++ki) {
                const int64_t oh_lo = std::max<int64_t>(0, detail::ceil_div(p - ki, s));
                const int64_t oh_hi = std::min(oh, detail::floor_div(h - 1 + p - ki, s) + 1);
                for (int64_t kj = 0; kj < kw; ++kj) {
                    const int64_t ow_lo = std::max<int64_t>(0, detail::ceil_div(p - kj, s));
                    const int64_t ow_hi = std::min(ow, detail::floor_div(w - 1 + p - kj, s) + 1);
                    double acc = 0.0;
                    for (int64_t n = 0; n < n_batch; ++n) {
                        const S* go_plane = go_base + ((n * c_out) + co) * oh * ow;
                        const S* in_plane = in_base + ((n * c_in) + ci) * h * w;
                        for (int64_t r = oh_lo; r < oh_hi; ++r) {
                            const int64_t ih = r * s + ki - p;
                            const S* in_row = in_plane + ih * w + (ow_lo * s + kj - p);
                            const S* go_row = go_plane + r * ow + ow_lo;
                            const int64_t count = ow_hi - ow_lo;
                            if (s == 1) {
                                for (int64_t i = 0; i < count; ++i)
                                    acc += static_cast<double>(go_row[i]) * static_cast<double>(in_row[i]);
                            } else {
                                for (int64_t i = 0; i < count; ++i)
                                    acc += static_cast<double>(go_row[i]) * static_cast<double>(in_row[i * s]);
                            }
                        }
                    }
                    gw_plane[ki * kw + kj] = static_cast<S>(acc);
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// maxpool2d

template <typename S>
struct MaxPool2dResult {
    TensorT<S> output;
    std::vector<int64_t> argmax; // flat input index per output cell
};

template <typename S>
MaxPool2dResult<S> maxpool2d(const TensorT<S>& input, int window, int stride) {
    if (input.rank() != 4) throw Error::validation("maxpool2d: input must be [N,C,H,W]");
    if (window < 1 || stride < 1) throw Error::validation("maxpool2d: window and stride must be >= 1");
    const int64_t n_batch = input.dim(0), c = input.dim(1), h = input.dim(2), w = input.dim(3);
    if (window > h || window > w) throw Error::validation("maxpool2d: window larger than input");
    const int64_t oh = (h - window) / stride + 1;
    const int64_t ow = (w - window) / stride + 1;

    MaxPool2dResult<S> res{TensorT<S>::zeros({n_batch, c, oh, ow}),
                           std::vector<int64_t>(static_cast<size_t>(n_batch * c * oh * ow))};
    const S* in_base = input.data.data();
    for (int64_t n = 0; n < n_batch; ++n) {
        for (int64_t ch = 0; ch < c; ++ch) {
            const int64_t plane = (n * c + ch) * h * w;
            const int64_t out_plane = (n * c + ch) * oh * ow;
            for (int64_t r = 0; r < oh; ++r) {
                for (int64_t q = 0; q < ow; ++q) {
                    // strict > keeps the first (row-major) maximum on ties
                    int64_t best_idx = plane + (r * stride) * w + (q * stride);
                    S best = in_base[best_idx];
                    for (int64_t i = 0; i < window; ++i) {
                        for (int64_t j = 0; j < window; ++j) {
                            const int64_t idx = plane + (r * stride + i) * w + (q * stride + j);
                            if (in_base[idx] > best) {
                                best = in_base[idx];
                                best_idx = idx;
                            }
                        }
                    }
                    res.output.data[static_cast<size_t>(out_plane + r * ow + q)] = best;
                    res.argmax[static_cast<size_t>(out_plane + r * ow + q)] = best_idx;
                }
            }
        }
    }
    return res;
}

template <typename S>
TensorT<S> maxpool2d_backward(const TensorT<S>& grad_out, const std::vector<int64_t>& argmax,
                              const std::vector<int64_t>& input_shape) {
    if (argmax.size() != grad_out.data.size())
        throw Error::validation("maxpool2d_backward: argmax/grad size mismatch");
    TensorT<S> g = TensorT<S>::zeros(input_shape);
    for (size_t i = 0; i < argmax.size(); ++i)
        g.data[static_cast<size_t>(argmax[i])] += grad_out.data[i];
    return g;
}

// ---------------------------------------------------------------------------
// relu

template <typename S>
TensorT<S> relu(const TensorT<S>& input) {
    TensorT<S> out = input;
    for (S& v : out.data) v = std::max(v, S(0));
    return out;
}

template <typename S>
TensorT<S> relu_backward(const TensorT<S>& grad_out, const TensorT<S>& input) {
    if (!grad_out.same_shape(input)) throw Error::validation("relu_backward: shape mismatch");
    TensorT<S> g = grad_out;
    for (size_t i = 0; i < g.data.size(); ++i)
        if (!(input.data[i] > S(0))) g.data[i] = S(0);
    return g;
}

// ---------------------------------------------------------------------------
// batchnorm
//
// Normalizes per channel over batch and spatial dims. Running variance stores
// the unbiased estimate (factor M/(M-1)); batch normalization itself uses the
// biased variance.

struct BatchNormState {
    std::vector<double> mean;
    std::vector<double> var;

    static BatchNormState init(int64_t channels) {
        return BatchNormState{std::vector<double>(static_cast<size_t>(channels), 0.0),
                              std::vector<double>(static_cast<size_t>(channels), 1.0)};
    }
};

template <typename S>
struct BatchNormCache {
    TensorT<S> x_hat;
    std::vector<double> inv_std;
};

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

template <typename S>
TensorT<S> batchnorm(const TensorT<S>& input, const TensorT<S>& gamma, const TensorT<S>& beta,
                     BatchNormState& running, Mode mode, double momentum = kBatchNormMomentum,
                     double eps = kBatchNormEps, BatchNormCache<S>* cache = nullptr) {
    if (input.rank() < 2) throw Error::validation("batchnorm: input must be [N,C,...]");
    const int64_t n_batch = input.dim(0), c = input.dim(1);
    int64_t spatial = 1;
    for (int i = 2; i < input.rank(); ++i) spatial *= input.dim(i);
    if (gamma.numel() != c || beta.numel() != c) throw Error::validation("batchnorm: gamma/beta must be [C]");
    if (running.mean.size() != static_cast<size_t>(c)) throw Error::validation("batchnorm: running stats size mismatch");
    const int64_t m = n_batch * spatial;

    TensorT<S> out = TensorT<S>::zeros(input.shape);
    const S* in = input.data.data();
    S* o = out.data.data();

    if (mode == Mode::train) {
        if (m <= 1) throw Error::runtime("batchnorm: variance undefined for a single element per channel");
        if (cache != nullptr) {
            cache->x_hat = TensorT<S>::zeros(input.shape);
            cache->inv_std.assign(static_cast<size_t>(c), 0.0);
        }
        for (int64_t ch = 0; ch < c; ++ch) {
            double sum = 0.0, sq = 0.0;
            for (int64_t n = 0; n < n_batch; ++n) {
                const S* p = in + (n * c + ch) * spatial;
                for (int64_t i = 0; i < spatial; ++i) {
                    const double v = static_cast<double>(p[i]);
                    sum += v;
                    sq += v * v;
                }
            }
            const double mean = sum / static_cast<double>(m);
            double var = sq / static_cast<double>(m) - mean * mean;
            var = std::max(var, 0.0);
            const double inv_std = 1.0 / std::sqrt(var + eps);
            const double g = static_cast<double>(gamma.data[static_cast<size_t>(ch)]);
            const double b = static_cast<double>(beta.data[static_cast<size_t>(ch)]);
            for (int64_t n = 0; n < n_batch; ++n) {
                const S* p = in + (n * c + ch) * spatial;
                S* q = o + (n * c + ch) * spatial;
                S* xh = cache ? cache->x_hat.data.data() + (n * c + ch) * spatial : nullptr;
                for (int64_t i = 0; i < spatial; ++i) {
                    const double x_hat = (static_cast<double>(p[i]) - mean) * inv_std;
                    if (xh != nullptr) xh[i] = static_cast<S>(x_hat);
                    q[i] = static_cast<S>(g * x_hat + b);
                }
            }
            if (cache != nullptr) cache->inv_std[static_cast<size_t>(ch)] = inv_std;
            const double unbiased = var * static_cast<double>(m) / static_cast<double>(m - 1);
            running.mean[static_cast<size_t>(ch)] =
                (1.0 - momentum) * running.mean[static_cast<size_t>(ch)] + momentum * mean;
            running.var[static_cast<size_t>(ch)] =
                (1.0 - momentum) * running.var[static_cast<size_t>(ch)] + momentum * unbiased;
        }
    } else {
        for (int64_t ch = 0; ch < c; ++ch) {
            const double mean = running.mean[static_cast<size_t>(ch)];
            const double inv_std = 1.0 / std::sqrt(running.var[static_cast<size_t>(ch)] + eps);
            const double g = static_cast<double>(gamma.data[static_cast<size_t>(ch)]);
            const double b = static_cast<double>(beta.data[static_cast<size_t>(ch)]);
            for (int64_t n = 0; n < n_batch; ++n) {
                const S* p = in + (n * c + ch) * spatial;
                S* q = o + (n * c + ch) * spatial;
                for (int64_t i = 0; i < spatial; ++i)
                    q[i] = static_cast<S>(g * ((static_cast<double>(p[i]) - mean) * inv_std) + b);
            }
        }
    }
    return out;
}

template <typename S>
struct BatchNormGrads {
    TensorT<S> input;
    TensorT<S> gamma;
    TensorT<S> beta;
};

template <typename S>
BatchNormGrads<S> batchnorm_backward(const TensorT<S>& grad_out, const TensorT<S>& gamma,
                                     const BatchNormCache<S>& cache) {
    const TensorT<S>& x_hat = cache.x_hat;
    if (!grad_out.same_shape(x_hat)) throw Error::validation("batchnorm_backward: shape mismatch");
    const int64_t n_batch = x_hat.dim(0), c = x_hat.dim(1);
    int64_t spatial = 1;
    for (int i = 2; i < x_hat.rank(); ++i) spatial *= x_hat.dim(i);
    const double m = static_cast<double>(n_batch * spatial);

    BatchNormGrads<S> g{TensorT<S>::zeros(x_hat.shape), TensorT<S>::zeros({c}), TensorT<S>::zeros({c})};
    const S* go = grad_out.data.data();
    const S* xh = x_hat.data.data();
    S* gi = g.input.data.data();

    for (int64_t ch = 0; ch < c; ++ch) {
        double sum_g = 0.0, sum_gx = 0.0;
        for (int64_t n = 0; n < n_batch; ++n) {
            const S* pg = go + (n * c + ch) * spatial;
            const S* px = xh + (n * c + ch) * spatial;
            for (int64_t i = 0; i < spatial; ++i) {
                sum_g += static_cast<double>(pg[i]);
                sum_gx += static_cast<double>(pg[i]) * static_cast<double>(px[i]);
            }
        }
        g.beta.data[static_cast<size_t>(ch)] = static_cast<S>(sum_g);
        g.gamma.data[static_cast<size_t>(ch)] = static_cast<S>(sum_gx);
        const double scale = static_cast<double>(gamma.data[static_cast<size_t>(ch)]) *
                             cache.inv_std[static_cast<size_t>(ch)];
        const double mean_g = sum_g / m;
        const double mean_gx = sum_gx / m;
        for (int64_t n = 0; n < n_batch; ++n) {
            const S* pg = go + (n * c + ch) * spatial;
            const S* px = xh + (n * c + ch) * spatial;
            S* pi = gi + (n * c + ch) * spatial;
            for (int64_t i = 0; i < spatial; ++i)
                pi[i] = static_cast<S>(scale * (static_cast<double>(pg[i]) - mean_g -
                                                static_cast<double>(px[i]) * mean_gx));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// linear

template <typename S>
TensorT<S> linear(const TensorT<S>& input, const TensorT<S>& weight, const TensorT<S>& bias) {
    if (input.rank() != 2) throw Error::validation("linear: input must be [N,Din]");
    if (weight.rank() != 2) throw Error::validation("linear: weight must be [Dout,Din]");
    const int64_t n_batch = input.dim(0), d_in = input.dim(1);
    const int64_t d_out = weight.dim(0);
    if (weight.dim(1) != d_in) throw Error::validation("linear: weight/input dimension mismatch");
    if (bias.rank() != 1 || bias.dim(0) != d_out) throw Error::validation("linear: bias must be [Dout]");

    TensorT<S> out = TensorT<S>::zeros({n_batch, d_out});
#pragma omp parallel for schedule(static)
    for (int64_t n = 0; n < n_batch; ++n) {
        const S* in_row = input.data.data() + n * d_in;
        S* out_row = out.data.data() + n * d_out;
        for (int64_t o = 0; o < d_out; ++o) {
            const S* w_row = weight.data.data() + o * d_in;
            double acc = static_cast<double>(bias.data[static_cast<size_t>(o)]);
            for (int64_t j = 0; j < d_in; ++j)
                acc += static_cast<double>(in_row[j]) * static_cast<double>(w_row[j]);
            out_row[o] = static_cast<S>(acc);
        }
    }
    return out;
}

template <typename S>
struct LinearGrads {
    TensorT<S> input;
    TensorT<S> weight;
    TensorT<S> bias;
};

template <typename S>
LinearGrads<S> linear_backward(const TensorT<S>& grad_out, const TensorT<S>& input,
                               const TensorT<S>& weight) {
    const int64_t n_batch = input.dim(0), d_in = input.dim(1);
    const int64_t d_out = weight.dim(0);
    if (grad_out.shape != std::vector<int64_t>{n_batch, d_out})
        throw Error::validation("linear_backward: grad shape mismatch");

    LinearGrads<S> g{TensorT<S>::zeros(input.shape), TensorT<S>::zeros(weight.shape),
                     TensorT<S>::zeros({d_out})};

#pragma omp parallel for schedule(static)
    for (int64_t n = 0; n < n_batch; ++n) {
        std::vector<double> acc(static_cast<size_t>(d_in), 0.0);
        const S* go_row = grad_out.data.data() + n * d_out;
        for (int64_t o = 0; o < d_out; ++o) {
            const double gv = static_cast<double>(go_row[o]);
            const S* w_row = weight.data.data() + o * d_in;
            for (int64_t j = 0; j < d_in; ++j) acc[static_cast<size_t>(j)] += gv * static_cast<double>(w_row[j]);
        }
        S* gi_row = g.input.data.data() + n * d_in;
        for (int64_t j = 0; j < d_in; ++j) gi_row[j] = static_cast<S>(acc[static_cast<size_t>(j)]);
    }

#pragma omp parallel for schedule(static)
    for (int64_t o = 0; o < d_out; ++o) {
        std::vector<double> acc(static_cast<size_t>(d_in), 0.0);
        double bias_acc = 0.0;
        for (int64_t n = 0; n < n_batch; ++n) {
            const double gv = static_cast<double>(grad_out.data[static_cast<size_t>(n * d_out + o)]);
            bias_acc += gv;
            const S* in_row = input.data.data() + n * d_in;
            for (int64_t j = 0; j < d_in; ++j) acc[static_cast<size_t>(j)] += gv * static_cast<double>(in_row[j]);
        }
        S* gw_row = g.weight.data.data() + o * d_in;
        for (int64_t j = 0; j < d_in; ++j) gw_row[j] = static_cast<S>(acc[static_cast<size_t>(j)]);
        g.bias.data[static_cast<size_t>(o)] = static_cast<S>(bias_acc);
    }
    return g;
}

// ---------------------------------------------------------------------------
// dropout (inverted: eval is a no-op, train scales survivors by 1/(1-rate))

template <typename S>
struct DropoutResult {
    TensorT<S> output;
    std::vector<uint8_t> mask; // empty in eval mode
};

template <typename S>
DropoutResult<S> dropout(const TensorT<S>& input, double rate, RngState& rng, Mode mode) {
    if (!(rate >= 0.0 && rate < 1.0)) throw Error::validation("dropout: rate must be in [0,1)");
    if (mode == Mode::eval) return DropoutResult<S>{input, {}};
    DropoutResult<S> res{input, std::vector<uint8_t>(input.data.size())};
    const S scale = static_cast<S>(1.0 / (1.0 - rate));
    for (size_t i = 0; i < res.output.data.size(); ++i) {
        const bool keep = rng.next_double() >= rate;
        res.mask[i] = keep ? 1 : 0;
        res.output.data[i] = keep ? res.output.data[i] * scale : S(0);
    }
    return res;
}

template <typename S>
TensorT<S> dropout_backward(const TensorT<S>& grad_out, const std::vector<uint8_t>& mask, double rate) {
    if (mask.empty()) return grad_out; // eval mode
    if (mask.size() != grad_out.data.size()) throw Error::validation("dropout_backward: mask size mismatch");
    TensorT<S> g = grad_out;
    const S scale = static_cast<S>(1.0 / (1.0 - rate));
    for (size_t i = 0; i < g.data.size(); ++i) g.data[i] = mask[i] ? g.data[i] * scale : S(0);
    return g;
}

// ---------------------------------------------------------------------------
// concat (feature axis) and softmax

template <typename S>
TensorT<S> concat(const TensorT<S>& a, const TensorT<S>& b) {
    if (a.rank() != 2 || b.rank() != 2) throw Error::validation("concat: inputs must be [N,D]");
    if (a.dim(0) != b.dim(0)) throw Error::validation("concat: batch dimension mismatch");
    const int64_t n_batch = a.dim(0), da = a.dim(1), db = b.dim(1);
    TensorT<S> out = TensorT<S>::zeros({n_batch, da + db});
    for (int64_t n = 0; n < n_batch; ++n) {
        std::copy_n(a.data.data() + n * da, da, out.data.data() + n * (da + db));
        std::copy_n(b.data.data() + n * db, db, out.data.data() + n * (da + db) + da);
    }
    return out;
}

template <typename S>
std::pair<TensorT<S>, TensorT<S>> concat_backward(const TensorT<S>& grad_out, int64_t da, int64_t db) {
    const int64_t n_batch = grad_out.dim(0);
    if (grad_out.dim(1) != da + db) throw Error::validation("concat_backward: width mismatch");
    TensorT<S> ga = TensorT<S>::zeros({n_batch, da});
    TensorT<S> gb = TensorT<S>::zeros({n_batch, db});
    for (int64_t n = 0; n < n_batch; ++n) {
        std::copy_n(grad_out.data.data() + n * (da + db), da, ga.data.data() + n * da);
        std::copy_n(grad_out.data.data() + n * (da + db) + da, db, gb.data.data() + n * db);
    }
    return {std::move(ga), std::move(gb)};
}

template <typename S>
TensorT<S> softmax(const TensorT<S>& logits) {
    if (logits.rank() != 2) throw Error::validation("softmax: input must be [N,K]");
    const int64_t n_batch = logits.dim(0), k = logits.dim(1);
    if (k < 2) throw Error::validation("softmax: need at least 2 classes");
    TensorT<S> out = TensorT<S>::zeros(logits.shape);
    for (int64_t n = 0; n < n_batch; ++n) {
        const S* row = logits.data.data() + n * k;
        S* orow = out.data.data() + n * k;
        double mx = static_cast<double>(row[0]);
        for (int64_t j = 1; j < k; ++j) mx = std::max(mx, static_cast<double>(row[j]));
        double sum = 0.0;
        for (int64_t j = 0; j < k; ++j) sum += std::exp(static_cast<double>(row[j]) - mx);
        for (int64_t j = 0; j < k; ++j)
            orow[j] = static_cast<S>(std::exp(static_cast<double>(row[j]) - mx) / sum);
    }
    return out;
}

} // namespace drg::nn
