#pragma once

#include <span>
#include <string>
#include <vector>

#include "drgrade/nn/tensor.hpp"

namespace drg::nn {

template <typename S>
struct NamedParam {
    std::string name;
    ParamT<S>* param = nullptr;
};

// buf <- momentum*buf + grad; value <- value - lr*buf; grads zeroed afterwards.
template <typename S>
void sgd_momentum_step(std::span<const NamedParam<S>> params, double lr, double momentum) {
    for (const auto& np : params) {
        ParamT<S>& p = *np.param;
        if (!p.grad.all_finite())
            throw Error::runtime("sgd: non-finite gradient for parameter '" + np.name + "'");
        for (size_t i = 0; i < p.value.data.size(); ++i) {
            p.momentum.data[i] = static_cast<S>(momentum) * p.momentum.data[i] + p.grad.data[i];
            p.value.data[i] -= static_cast<S>(lr) * p.momentum.data[i];
        }
        p.zero_grad();
    }
}

template <typename S>
void sgd_momentum_step(const std::vector<NamedParam<S>>& params, double lr, double momentum) {
    sgd_momentum_step(std::span<const NamedParam<S>>(params.data(), params.size()), lr, momentum);
}

} // namespace drg::nn
