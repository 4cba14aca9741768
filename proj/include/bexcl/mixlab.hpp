#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bexcl/kernel.hpp"
#include "bexcl/params.hpp"
#include "bexcl/rng.hpp"

namespace bexcl {

// (1/2) sum |mu - nu|
double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu);

struct MixingCurve {
    ChainParams params;
    std::vector<std::int64_t> times;
    std::vector<double> d_values;          // worst-case TV distance per time
    std::map<double, std::int64_t> tmix_eps;  // extracted crossings (strict <)
    std::uint64_t worst_start_final = 0;   // argmax start state at the last recorded time

    std::optional<std::int64_t> tmix(double eps) const;
};

struct unresolved_error : std::runtime_error {
    explicit unresolved_error(std::string msg, MixingCurve partial)
        : std::runtime_error(std::move(msg)), curve(std::move(partial)) {}
    MixingCurve curve;
};

// d(t) = max over start states of ||P^t(x, .) - pi||_TV, computed by pushing
// every start distribution through the sparse kernel.  Stops once d(t) <
// stop_eps (when positive) or at t_max.
MixingCurve exact_tv_curve(const ChainParams& params, std::int64_t t_max, double stop_eps = 0.0,
                           std::uint64_t state_cap = kDefaultStateCap);

// Per-start TV curve (diagnostics; used for symmetry checks).
std::vector<double> tv_curve_from_start(const ChainParams& params, const ParticleConfig& start,
                                        std::int64_t t_max, std::uint64_t state_cap = kDefaultStateCap);

// Smallest t with d(t) < eps (strict).  Throws unresolved_error when the
// curve has not crossed by t_max (default: derived from the coupling bound).
std::int64_t exact_tmix(const ChainParams& params, double eps, std::int64_t t_max = -1,
                        std::uint64_t state_cap = kDefaultStateCap);

// Step budget guaranteed to contain the eps-crossing (coupling bound for
// beta > 0, a generous n^3 log n multiple otherwise).
std::int64_t exact_tmix_cap(const ChainParams& params, double eps);

struct McTmixEstimate {
    std::optional<std::int64_t> t_upper;  // smallest t with UCL(P(tau > t)) < eps
    double tail_at_t = 0.0;
    double ucl_at_t = 0.0;
    std::int64_t trials = 0;
    std::int64_t timeouts = 0;
    std::int64_t t_cap = 0;
    std::vector<std::int64_t> taus;  // -1 for timeout
};

// Coupling-time estimate from the extreme-configuration pair.  Pair-specific:
// an estimated upper bound, reported as such.  With an empty grid, every
// integer time is a candidate.  z is the confidence multiplier of the
// Wilson-score upper limit.
McTmixEstimate mc_tmix_upper(const ChainParams& params, double eps, std::int64_t trials,
                             const std::vector<std::int64_t>& t_grid, Rng& rng,
                             std::int64_t t_cap, double z = 3.0);

// --- Regime sweep ---------------------------------------------------------------------

// "0" | "const:<v>" | "<c>/n" | "<c>/n2" | "<c>logn/n"
double beta_from_rule(const std::string& rule, std::int64_t n);

// (i): n beta <= 1; (ii): 1 < n beta <= log n; (iii): n beta > log n.
std::string regime_tag(std::int64_t n, double beta);

struct SweepConfig {
    std::vector<std::int64_t> ns;
    std::vector<std::string> beta_rules;
    std::optional<std::int64_t> k;  // default floor(n/2)
    double epsilon = 0.25;
    std::uint64_t exact_cap = 2000;  // exact evaluator below, MC above
    std::int64_t trials = 400;
    std::int64_t mc_t_cap_factor = 64;  // cap = factor * n^2 / max(beta, 1/n)
    double lbu_b = 0.1;
    std::uint64_t seed = 1;
};

struct SweepRecord {
    std::int64_t n = 0;
    std::int64_t k = 0;
    double beta = 0.0;
    std::string regime;
    double tmix = 0.0;
    std::string tmix_kind;  // "exact" | "mc" | "unresolved"
    double wilson_lb = 0.0;
    double pc_ub = 0.0;   // 2n/beta^2 coupling bound; 0 when beta = 0
    double lbu_lb = 0.0;  // certified value; 0 when the finite-n certificate is vacuous
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::string error;
    double regime_ratio = 0.0;  // tmix over the regime's scaling denominator
};

std::vector<SweepRecord> regime_sweep(const SweepConfig& config);

}  // namespace bexcl
