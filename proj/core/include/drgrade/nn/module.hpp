#pragma once

#include <functional>
#include <string>

#include "drgrade/common/rng.hpp"
#include "drgrade/nn/ops.hpp"
#include "drgrade/nn/sgd.hpp"
#include "drgrade/nn/tensor.hpp"

namespace drg::nn {

// Trainable network interface consumed by the training loop: one forward that
// caches intermediates in train mode, one backward that accumulates parameter
// gradients, and named parameter enumeration for SGD and checkpointing.
template <typename S>
class ModuleT {
public:
    virtual ~ModuleT() = default;

    // rng supplies dropout masks; may be null in eval mode.
    virtual TensorT<S> forward(const TensorT<S>& input, Mode mode, RngState* rng) = 0;
    virtual TensorT<S> backward(const TensorT<S>& grad_out) = 0;
    virtual void for_each_param(const std::function<void(const std::string&, ParamT<S>&)>& fn) = 0;

    // Model configuration blob embedded in weight files; "{}" when a module
    // has no rebuildable configuration.
    virtual std::string config_json() const { return "{}"; }

    std::vector<NamedParam<S>> named_params() {
        std::vector<NamedParam<S>> out;
        for_each_param([&](const std::string& name, ParamT<S>& p) { out.push_back({name, &p}); });
        return out;
    }
};

using Module = ModuleT<float>;

} // namespace drg::nn
