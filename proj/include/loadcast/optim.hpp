#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loadcast/errors.hpp"

// Nadam: Adam with Nesterov lookahead and the decaying momentum schedule
//   mu_t = beta1 * (1 - 0.5 * 0.96^(t * schedule_decay)).
// The update per element, at step t (1-based):
//   m <- beta1*m + (1-beta1)*g
//   v <- beta2*v + (1-beta2)*g^2
//   mu_prod <- mu_prod * mu_t
//   m_hat = mu_{t+1}*m / (1 - mu_prod*mu_{t+1}) + (1-mu_t)*g / (1 - mu_prod)
//   v_hat = v / (1 - beta2^t)
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps)

namespace loadcast {

struct NadamConfig {
    double lr = 0.002;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double schedule_decay = 0.004;

    void validate() const {
        if (!(lr > 0) || !(beta1 > 0 && beta1 < 1) || !(beta2 > 0 && beta2 < 1) || !(eps > 0))
            throw Error(Errc::invalid_config, "bad nadam config");
    }
};

struct NadamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;
    double mu_product = 1.0;

    explicit NadamState(std::size_t n_params) : m(n_params, 0.0), v(n_params, 0.0) {}
};

inline double nadam_mu(const NadamConfig& cfg, std::int64_t t) {
    return cfg.beta1 * (1.0 - 0.5 * std::pow(0.96, static_cast<double>(t) * cfg.schedule_decay));
}

inline void nadam_step(std::span<double> params, std::span<const double> grads, NadamState& state,
                       const NadamConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw Error(Errc::shape_mismatch, "params " + std::to_string(params.size()) + ", grads " +
                                              std::to_string(grads.size()) + ", state " +
                                              std::to_string(state.m.size()));
    for (std::size_t i = 0; i < grads.size(); ++i)
        if (!std::isfinite(grads[i]))
            throw Error(Errc::non_finite_gradient, "gradient element " + std::to_string(i));

    const std::int64_t t = state.t + 1;
    const double mu_t = nadam_mu(cfg, t);
    const double mu_next = nadam_mu(cfg, t + 1);
    const double mu_prod = state.mu_product * mu_t;
    const double v_corr = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));

    const double m_coeff = mu_next / (1.0 - mu_prod * mu_next);
    const double g_coeff = (1.0 - mu_t) / (1.0 - mu_prod);

    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        const double m = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        const double v = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        state.m[i] = m;
        state.v[i] = v;
        const double m_hat = m_coeff * m + g_coeff * g;
        const double v_hat = v / v_corr;
        params[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
    state.t = t;
    state.mu_product = mu_prod;
}

} // namespace loadcast
