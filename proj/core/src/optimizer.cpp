// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/optimizer.hpp>

namespace splatpose {

AdamBias
AdamBias::at(long step, const AdamHyper &hyper) {
    return {1.0 - std::pow(hyper.beta1, static_cast<double>(step)),
            std::sqrt(1.0 - std::pow(hyper.beta2, static_cast<double>(step)))};
}

void
adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m,
          std::span<double> v, double lr, long step, const AdamHyper &hyper) {
    adam_update(params, grads, m, v, lr, AdamBias::at(step, hyper), hyper);
}

void
adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
            std::span<double> v, double lr, const AdamBias &bias, const AdamHyper &hyper) {
    if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size()) {
        throw InvalidInput("adam_update: mismatched block sizes");
    }
    const double bc1 = bias.first;
    const double bc2_sqrt = bias.second_sqrt;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g;
        v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g * g;
        const double denom = std::sqrt(v[i]) / bc2_sqrt + hyper.epsilon;
        params[i] -= lr * (m[i] / bc1) / denom;
    }
}

} // namespace splatpose
