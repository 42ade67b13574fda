#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "drgrade/common/error.hpp"

namespace drg::nn {

// Dense row-major N-d array. Production code uses float storage; tests
// instantiate the double variant for finite-difference gradient checks.
template <typename S>
struct TensorT {
    std::vector<int64_t> shape;
    std::vector<S> data;

    TensorT() = default;
    TensorT(std::vector<int64_t> shp, std::vector<S> values) : shape(std::move(shp)), data(std::move(values)) {
        if (numel_of(shape) != static_cast<int64_t>(data.size()))
            throw Error::validation("tensor: shape/data size mismatch");
    }

    static int64_t numel_of(const std::vector<int64_t>& shp) {
        int64_t n = 1;
        for (int64_t d : shp) {
            if (d < 0) throw Error::validation("tensor: negative extent");
            n *= d;
        }
        return n;
    }

    static TensorT zeros(std::vector<int64_t> shp) {
        int64_t n = numel_of(shp);
        return TensorT(std::move(shp), std::vector<S>(static_cast<size_t>(n), S(0)));
    }

    static TensorT full(std::vector<int64_t> shp, S value) {
        int64_t n = numel_of(shp);
        return TensorT(std::move(shp), std::vector<S>(static_cast<size_t>(n), value));
    }

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }

    int64_t dim(int i) const {
        if (i < 0 || i >= rank()) throw Error::validation("tensor: dim index out of range");
        return shape[static_cast<size_t>(i)];
    }

    bool same_shape(const TensorT& other) const { return shape == other.shape; }

    bool all_finite() const {
        for (S v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    std::string shape_str() const {
        std::ostringstream os;
        os << "[";
        for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
        os << "]";
        return os.str();
    }

    template <typename T>
    TensorT<T> cast() const {
        TensorT<T> out;
        out.shape = shape;
        out.data.resize(data.size());
        for (size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<T>(data[i]);
        return out;
    }
};

using Tensor = TensorT<float>;
using TensorD = TensorT<double>;

// Trainable tensor: value plus accumulated gradient and SGD momentum buffer,
// always shape-identical.
template <typename S>
struct ParamT {
    TensorT<S> value;
    TensorT<S> grad;
    TensorT<S> momentum;

    ParamT() = default;
    explicit ParamT(TensorT<S> v)
        : value(std::move(v)), grad(TensorT<S>::zeros(value.shape)), momentum(TensorT<S>::zeros(value.shape)) {}

    void zero_grad() { std::fill(grad.data.begin(), grad.data.end(), S(0)); }

    void accumulate_grad(const TensorT<S>& g) {
        if (!g.same_shape(value)) throw Error::validation("param: gradient shape mismatch");
        for (size_t i = 0; i < grad.data.size(); ++i) grad.data[i] += g.data[i];
    }
};

using Param = ParamT<float>;

} // namespace drg::nn
