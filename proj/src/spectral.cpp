#include "bexcl/spectral.hpp"

#include <cmath>

namespace bexcl {

namespace {

// log(1 + e^x), stable for any x
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sin_frac(std::int64_t x, std::int64_t n) {
    return std::sin(M_PI * static_cast<double>(x) / static_cast<double>(n));
}

void require_biased(const ChainParams& params, const char* who) {
    if (!params.biased()) throw invalid_input(std::string(who) + ": requires beta > 0 (alpha > 1)");
}

double log_a_const(const ChainParams& params) {
    const double la = params.log_alpha;
    return softplus(static_cast<double>(2 * params.k - params.n) * la) -
           softplus(-static_cast<double>(params.n) * la);
}

}  // namespace

double phi_single(std::int64_t x, const ChainParams& params) {
    if (x < 0 || x > params.n) throw invalid_input("phi_single: x out of [0, n]");
    // theta^{-x/2} = alpha^x; beta = 0 degrades to the plain sine
    return std::exp(static_cast<double>(x) * params.log_alpha) * sin_frac(x, params.n);
}

double g_star(const PathConfig& h, std::int64_t i, const ChainParams& params) {
    const std::int64_t f = h.up_count(i);
    return std::exp(-2.0 * params.log_alpha * static_cast<double>(i - f));
}

double a_const(const ChainParams& params) { return std::exp(log_a_const(params)); }

double c_const(const ChainParams& params) {
    return std::exp(log_a_const(params) - static_cast<double>(params.n) * params.log_alpha);
}

double xi_const(const ChainParams& params) {
    const double a = a_const(params);
    double s = 0.0;
    for (std::int64_t x = 1; x <= params.n - 1; ++x) {
        s += std::exp(-static_cast<double>(x) * params.log_alpha) * sin_frac(x, params.n);
    }
    return a * s;
}

double g_value(const PathConfig& h, std::int64_t i, const ChainParams& params) {
    return g_star(h, i, params) - c_const(params);
}

double eigenfunction_value(const PathConfig& h, const ChainParams& params) {
    require_biased(params, "eigenfunction_value");
    const std::int64_t n = params.n;
    const double la = params.log_alpha;
    const double a = a_const(params);
    double s = 0.0;
    for (std::int64_t x = 1; x <= n - 1; ++x) {
        const double up = std::exp(static_cast<double>(h.heights[static_cast<std::size_t>(x)]) * la);
        s += (up - a * std::exp(-static_cast<double>(x) * la)) * sin_frac(x, n);
    }
    return s;
}

double eigenfunction_value_gsum(const PathConfig& h, const ChainParams& params) {
    require_biased(params, "eigenfunction_value_gsum");
    double s = 0.0;
    for (std::int64_t x = 1; x <= params.n - 1; ++x) {
        s += g_value(h, x, params) * phi_single(x, params);
    }
    return s;
}

double second_eigenvalue(const ChainParams& params) { return 1.0 - params.gamma; }

EigenData eigen_data(const ChainParams& params, std::uint64_t state_cap) {
    require_biased(params, "eigen_data");
    SubsetRanker ranker(params.n, params.k);
    if (ranker.count() > state_cap) throw resource_limit("eigen_data: state space exceeds cap");
    EigenData d;
    d.lambda2 = second_eigenvalue(params);
    d.gap = params.gamma;
    d.a_const = a_const(params);
    d.c_const = c_const(params);
    d.xi_const = xi_const(params);
    d.phi_values.resize(static_cast<std::size_t>(ranker.count()));
    ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        const PathConfig h = path_from_particles(ParticleConfig::from_sites(params.n, pos));
        d.phi_values[static_cast<std::size_t>(r)] = eigenfunction_value(h, params);
    });
    return d;
}

namespace {

// Phi(h0) * alpha^{-k} via the pairing closed form (n even, k <= n/2); every
// exponent is <= 0, so the sum is overflow-free for any n.
double phi_h0_scaled_closed(const ChainParams& params) {
    const std::int64_t n = params.n;
    const std::int64_t k = params.k;
    const double la = params.log_alpha;
    const double one_plus_an = 1.0 + std::exp(-static_cast<double>(n) * la);
    const double a = (1.0 + std::exp(static_cast<double>(2 * k - n) * la)) / one_plus_an;
    double s = 0.0;
    for (std::int64_t x = 1; x <= k; ++x) {
        double term = a * std::exp(static_cast<double>(x - k) * la) *
                      (-std::expm1(-2.0 * static_cast<double>(x) * la)) * sin_frac(x, n);
        if (2 * x == n) term *= 0.5;
        s += term;
    }
    for (std::int64_t x = k + 1; x <= n / 2; ++x) {
        double term = (std::exp(static_cast<double>(k - x) * la) -
                       std::exp(-static_cast<double>(x + k) * la) +
                       std::exp(static_cast<double>(x + k - n) * la) -
                       std::exp(static_cast<double>(x - n - k) * la)) /
                      one_plus_an * sin_frac(x, n);
        if (2 * x == n) term *= 0.5;
        s += term;
    }
    return s;
}

// Phi(h0) * alpha^{-k} by direct summation (any 1 <= k <= n-1).
double phi_h0_scaled_direct(const ChainParams& params) {
    const std::int64_t n = params.n;
    const std::int64_t k = params.k;
    const double la = params.log_alpha;
    const double log_a = log_a_const(params);
    double s = 0.0;
    for (std::int64_t x = 1; x <= n - 1; ++x) {
        const std::int64_t h0x = x <= k ? x : 2 * k - x;
        const double up = std::exp(static_cast<double>(h0x - k) * la);
        const double down = std::exp(log_a - static_cast<double>(x + k) * la);
        s += (up - down) * sin_frac(x, n);
    }
    return s;
}

void require_closed_form_regime(const ChainParams& params) {
    if (params.n % 2 != 0)
        throw unsupported_regime("phi_h0_closed_form: pairing form needs n even; use the direct sum");
    if (params.k < 1 || 2 * params.k > params.n)
        throw unsupported_regime("phi_h0_closed_form: pairing form needs 1 <= k <= n/2");
}

}  // namespace

double phi_h0_closed_form(const ChainParams& params) {
    require_biased(params, "phi_h0_closed_form");
    require_closed_form_regime(params);
    return phi_h0_scaled_closed(params) * std::exp(static_cast<double>(params.k) * params.log_alpha);
}

double log_phi_h0_closed_form(const ChainParams& params) {
    require_biased(params, "log_phi_h0_closed_form");
    require_closed_form_regime(params);
    return std::log(phi_h0_scaled_closed(params)) + static_cast<double>(params.k) * params.log_alpha;
}

double phi_h0_direct(const ChainParams& params) {
    require_biased(params, "phi_h0_direct");
    if (params.k < 1 || params.k > params.n - 1) throw invalid_input("phi_h0_direct: requires 1 <= k <= n-1");
    return phi_h0_scaled_direct(params) * std::exp(static_cast<double>(params.k) * params.log_alpha);
}

double log_phi_h0_direct(const ChainParams& params) {
    require_biased(params, "log_phi_h0_direct");
    if (params.k < 1 || params.k > params.n - 1) throw invalid_input("log_phi_h0_direct: requires 1 <= k <= n-1");
    return std::log(phi_h0_scaled_direct(params)) + static_cast<double>(params.k) * params.log_alpha;
}

double phi_h0_lower_bound(const ChainParams& params, std::int64_t b) {
    require_biased(params, "phi_h0_lower_bound");
    if (b < 1 || b >= params.k) throw invalid_input("phi_h0_lower_bound: requires 1 <= b < k");
    const double la = params.log_alpha;
    const double log_val = std::log(0.5 * sin_frac(b, params.n)) + static_cast<double>(params.k) * la +
                           la + std::log1p(-std::exp(static_cast<double>(b - params.k - 1) * la)) +
                           std::log1p(-std::exp(-static_cast<double>(b + params.k) * la)) -
                           std::log(std::expm1(la));
    return std::exp(log_val);
}

double log_r_bound(const ChainParams& params) {
    require_biased(params, "log_r_bound");
    // sqrt(R) = 2 alpha^k (alpha - 1)
    return 2.0 * (std::log(2.0) + static_cast<double>(params.k) * params.log_alpha +
                  std::log(std::expm1(params.log_alpha)));
}

WilsonReport wilson_lower_bound(const ChainParams& params, double epsilon) {
    require_biased(params, "wilson_lower_bound");
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw invalid_input("wilson_lower_bound: epsilon must be in (0,1)");
    if (params.k < 1 || params.k > params.n - 1)
        throw invalid_input("wilson_lower_bound: requires 1 <= k <= n-1");

    WilsonReport rep;
    rep.epsilon = epsilon;
    rep.lambda2 = second_eigenvalue(params);
    rep.gap = params.gamma;
    const bool closed_ok = (params.n % 2 == 0) && (2 * params.k <= params.n);
    rep.log_phi_h0 = closed_ok ? log_phi_h0_closed_form(params) : log_phi_h0_direct(params);
    rep.phi_h0 = std::exp(rep.log_phi_h0);
    rep.log_r_bound = log_r_bound(params);
    rep.r_bound = std::exp(rep.log_r_bound);

    if (rep.lambda2 <= 0.5) {  // Wilson's lemma needs lambda > 1/2; trivial bound otherwise
        rep.lower_bound_steps = 0.0;
        return rep;
    }
    const double bracket = std::log(params.gamma) + 2.0 * rep.log_phi_h0 - std::log(2.0) - rep.log_r_bound +
                           std::log((1.0 - epsilon) / epsilon);
    const double log_inv_lambda = -std::log1p(-params.gamma);
    rep.lower_bound_steps = std::max(0.0, bracket / (2.0 * log_inv_lambda));
    return rep;
}

double regime_lower_bound(const ChainParams& params, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw invalid_input("regime_lower_bound: epsilon must be in (0,1)");
    const double n = static_cast<double>(params.n);
    const double nb = n * params.beta;
    const double log_term = std::log(n) + std::log((1.0 - epsilon) / epsilon);
    if (nb <= 1.0) {
        return n * n * n / (M_PI * M_PI + nb * nb) * log_term;
    }
    if (nb <= std::log(n)) {
        return n / (params.beta * params.beta) * log_term;
    }
    throw unsupported_regime("regime_lower_bound: n*beta > log n; use single_particle_lower_bound");
}

SingleParticleBound single_particle_lower_bound(const ChainParams& params, double b) {
    require_biased(params, "single_particle_lower_bound");
    if (!(b > 0.0) || b > 0.125) throw invalid_input("single_particle_lower_bound: b must be in (0, 1/8]");
    const double n = static_cast<double>(params.n);
    SingleParticleBound out;
    out.t_n = (1.0 - 4.0 * b) * (n - 1.0) * n / (2.0 * params.beta);
    out.ruin_bound = std::exp(-b * n * params.log_alpha);  // (q/p)^{bn/2} = alpha^{-bn}
    out.ruin_bound_exp = std::exp(-params.beta * b * n);
    out.chebyshev_tail = 4.0 * (1.0 - 4.0 * b) / (b * b * params.beta * n);
    return out;
}

}  // namespace bexcl
