#include "vortsdf/pipeline/adam.hpp"

#include <cmath>

#include "vortsdf/core.hpp"

namespace vortsdf::pipeline {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
    const size_t n = params.size();
    if (grads.size() != n) throw InputError("adam_step: gradient shape mismatch");
    if (state.empty()) state.init(n);
    if (state.m.size() != n) throw InputError("adam_step: state shape mismatch");

    state.t += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
    for (size_t i = 0; i < n; ++i) {
        double g = grads[i];
        double m = state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
        double v = state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
        params[i] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
    }
}

}  // namespace vortsdf::pipeline
