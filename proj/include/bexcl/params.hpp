#pragma once

#include <cmath>
#include <cstdint>

#include "bexcl/errors.hpp"

namespace bexcl {

// Chain parameters (n, k, beta) together with every derived constant the
// formulas need.  Single source of truth: all modules take a ChainParams and
// never recompute p, q, alpha, ... from scratch.
//
//   p = (1+beta)/2, q = (1-beta)/2     jump probabilities (right / left)
//   alpha = sqrt(p/q) >= 1             log_alpha = atanh(beta), exact
//   theta = q/p = 1/alpha^2
//   delta = 1 - 2*sqrt(pq)             contraction constant, >= beta^2/2
//   gamma = (1 - 2*sqrt(pq)*cos(pi/n))/(n-1)   spectral gap
//
// delta and gamma are evaluated in cancellation-free form so they stay
// accurate for beta ~ 1e-9 and n ~ 1e6.
struct ChainParams {
    std::int64_t n = 0;  // path length (number of sites)
    std::int64_t k = 0;  // particle count
    double beta = 0.0;   // bias in [0,1)

    double p = 0.5;
    double q = 0.5;
    double alpha = 1.0;
    double log_alpha = 0.0;
    double theta = 1.0;
    double delta = 0.0;
    double gamma = 0.0;
    double rho_density = 0.0;

    static ChainParams make(std::int64_t n, std::int64_t k, double beta) {
        if (n < 2) throw invalid_input("ChainParams: n must be >= 2");
        if (k < 0 || k > n) throw invalid_input("ChainParams: k must be in [0, n]");
        if (!(beta >= 0.0) || beta >= 1.0) throw invalid_input("ChainParams: beta must be in [0, 1)");
        ChainParams c;
        c.n = n;
        c.k = k;
        c.beta = beta;
        c.p = 0.5 * (1.0 + beta);
        c.q = 0.5 * (1.0 - beta);
        c.log_alpha = std::atanh(beta);  // = 0.5*log(p/q)
        c.alpha = std::exp(c.log_alpha);
        c.theta = c.q / c.p;
        // 1 - sqrt(1-beta^2) without cancellation
        const double root = std::sqrt((1.0 - beta) * (1.0 + beta));
        c.delta = beta * beta / (1.0 + root);
        const double s = std::sin(M_PI / (2.0 * static_cast<double>(n)));
        c.gamma = (2.0 * s * s + c.delta * std::cos(M_PI / static_cast<double>(n))) /
                  static_cast<double>(n - 1);
        c.rho_density = static_cast<double>(k) / static_cast<double>(n);
        return c;
    }

    double edges() const { return static_cast<double>(n - 1); }
    bool biased() const { return beta > 0.0; }
};

}  // namespace bexcl
