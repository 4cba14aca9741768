#pragma once

#include <cstdint>
#include <vector>

#include "bexcl/configspace.hpp"
#include "bexcl/kernel.hpp"
#include "bexcl/params.hpp"

namespace bexcl {

// --- Second eigenfunction in closed form ---------------------------------------
//
// phi(x) = theta^{-x/2} sin(pi x / n): eigenfunction of the one-particle
// absorbing walk, lambda phi(x) = p phi(x-1) + q phi(x+1).
double phi_single(std::int64_t x, const ChainParams& params);

// g*_h(i) = theta^{i - f_h(i)} and g_h(i) = g*_h(i) - c(n,k,theta).
double g_star(const PathConfig& h, std::int64_t i, const ChainParams& params);
double g_value(const PathConfig& h, std::int64_t i, const ChainParams& params);

// a = (1 + alpha^{2k-n})/(1 + alpha^{-n}); c = a * theta^{n/2};
// xi = a * sum_{x=1}^{n-1} alpha^{-x} sin(pi x/n)  (the stationary mean of Psi).
double a_const(const ChainParams& params);
double c_const(const ChainParams& params);
double xi_const(const ChainParams& params);

// Phi(h) = sum_{x=1}^{n-1} (alpha^{h(x)} - alpha^{-x} a) sin(pi x/n).
// Requires beta > 0.
double eigenfunction_value(const PathConfig& h, const ChainParams& params);
// Same function assembled as sum_x g_h(x) phi(x); kept as a second route.
double eigenfunction_value_gsum(const PathConfig& h, const ChainParams& params);

// lambda_2 = 1 - (1 - 2 sqrt(pq) cos(pi/n))/(n-1), i.e. 1 - gamma.
double second_eigenvalue(const ChainParams& params);

struct EigenData {
    double lambda2 = 0.0;
    double gap = 0.0;
    std::vector<double> phi_values;  // per enumerated state (rank order)
    double a_const = 0.0;
    double c_const = 0.0;
    double xi_const = 0.0;
};

EigenData eigen_data(const ChainParams& params, std::uint64_t state_cap = kDefaultStateCap);

// --- Phi(h0) -------------------------------------------------------------------
//
// Two-sum closed form for the maximal path.  The x = n/2 term appears once in
// the raw sum but twice under the x <-> n-x pairing, so it carries weight 1/2
// here; with that weight the closed form equals the direct summation exactly.
// Requires beta > 0, n even, 1 <= k <= n/2.
double phi_h0_closed_form(const ChainParams& params);
double log_phi_h0_closed_form(const ChainParams& params);

// Direct evaluation of Phi at h0 (any 1 <= k <= n-1, beta > 0); the log
// version is overflow-safe for n up to 1e6.
double phi_h0_direct(const ChainParams& params);
double log_phi_h0_direct(const ChainParams& params);

// Product-form lower bound on Phi(h0) for integer 1 <= b < k:
//   (sin(pi b/n)/2) alpha^k (alpha - alpha^{-(k-b)}) (1 - alpha^{-(b+k)}) / (alpha - 1).
double phi_h0_lower_bound(const ChainParams& params, std::int64_t b);

// --- Wilson lower bound ----------------------------------------------------------

struct WilsonReport {
    double phi_h0 = 0.0;              // may overflow to +inf at large n; see log field
    double r_bound = 0.0;             // (2 alpha^k (alpha-1))^2
    double lower_bound_steps = 0.0;   // max(0, bound); 0 means vacuous
    double epsilon = 0.0;
    double log_phi_h0 = 0.0;
    double log_r_bound = 0.0;
    double lambda2 = 0.0;
    double gap = 0.0;
};

// t_mix(eps) >= (1/(2 log(1/lambda))) [log(gamma Phi(h0)^2 / (2R)) + log((1-eps)/eps)],
// with R the analytic step bound.  Evaluated in log space; vacuous bounds clamp to 0.
WilsonReport wilson_lower_bound(const ChainParams& params, double epsilon);

// Leading-order regime formulas (asymptotic guide, not a finite-n certificate):
//   n beta <= 1:        n^3/(pi^2 + (n beta)^2) (log n + log[(1-eps)/eps])
//   1 < n beta <= log n: (n/beta^2) (log n + log[(1-eps)/eps])
// n beta > log n -> unsupported_regime.
double regime_lower_bound(const ChainParams& params, double epsilon);

struct SingleParticleBound {
    double t_n = 0.0;             // (1-4b)(n-1)n/(2 beta)
    double ruin_bound = 0.0;      // (q/p)^{bn/2}
    double ruin_bound_exp = 0.0;  // e^{-beta b n} (exponential relaxation of the ruin bound)
    double chebyshev_tail = 0.0;  // 4(1-4b)/(b^2 beta n)
};

// Ingredients of the leftmost-particle lower bound; b in (0, 1/8].
SingleParticleBound single_particle_lower_bound(const ChainParams& params, double b);

// log and plain value of the analytic step bound sqrt(R) = 2 alpha^k (alpha-1).
double log_r_bound(const ChainParams& params);

}  // namespace bexcl
