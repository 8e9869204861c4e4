#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vortsdf::pipeline {

// First/second moment buffers for one flat parameter array.
struct AdamState {
    std::vector<double> m, v;
    long t = 0;

    void init(size_t n) {
        m.assign(n, 0.0);
        v.assign(n, 0.0);
        t = 0;
    }
    bool empty() const { return m.empty(); }
};

// Bias-corrected Adam update, in place. Throws InputError on shape mismatch.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace vortsdf::pipeline
