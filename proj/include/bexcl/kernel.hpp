#pragma once

#include <cstdint>
#include <vector>

#include "bexcl/configspace.hpp"
#include "bexcl/params.hpp"
#include "bexcl/rational.hpp"
#include "bexcl/rng.hpp"

namespace bexcl {

// One step of the chain: pick one of the n-1 edges uniformly; if it carries
// exactly one particle, place it on the right endpoint with probability p,
// on the left with probability q; otherwise do nothing.
void step_inplace(ParticleConfig& sigma, const ChainParams& params, Rng& rng);
ParticleConfig step(const ParticleConfig& sigma, const ChainParams& params, Rng& rng);

inline constexpr std::uint64_t kDefaultStateCap = 20000;

// Dense row-stochastic transition matrix over the enumerated state space,
// stored sparsely (each row has at most n-1 off-diagonal entries); the
// diagonal is always 1 - sum(off-diagonal).
class TransitionMatrix {
public:
    static TransitionMatrix build(const ChainParams& params, std::uint64_t state_cap = kDefaultStateCap);

    std::uint64_t dim() const { return dim_; }
    const ChainParams& params() const { return params_; }
    const SubsetRanker& ranker() const { return ranker_; }

    double at(std::uint64_t i, std::uint64_t j) const;
    double diag(std::uint64_t i) const { return diag_[static_cast<std::size_t>(i)]; }
    double row_sum(std::uint64_t i) const;
    std::uint64_t offdiag_count(std::uint64_t i) const {
        return row_ptr_[static_cast<std::size_t>(i + 1)] - row_ptr_[static_cast<std::size_t>(i)];
    }

    template <class F>
    void for_each_offdiag(std::uint64_t i, F&& f) const {
        for (std::uint64_t e = row_ptr_[static_cast<std::size_t>(i)]; e < row_ptr_[static_cast<std::size_t>(i + 1)]; ++e) {
            f(col_[static_cast<std::size_t>(e)], val_[static_cast<std::size_t>(e)]);
        }
    }

    // out = mu P (row distribution pushed one step)
    void apply_to_distribution(const std::vector<double>& mu, std::vector<double>& out) const;
    // out = P f (one-step expectation of a function)
    void apply_to_function(const std::vector<double>& f, std::vector<double>& out) const;

    std::vector<double> dense() const;  // row-major dim x dim

private:
    TransitionMatrix(const ChainParams& params, SubsetRanker ranker)
        : params_(params), ranker_(std::move(ranker)) {}

    ChainParams params_;
    SubsetRanker ranker_;
    std::uint64_t dim_ = 0;
    std::vector<std::uint64_t> row_ptr_;
    std::vector<std::uint32_t> col_;
    std::vector<double> val_;
    std::vector<double> diag_;
};

struct StationaryDist {
    std::vector<double> probs;
    double log_z = 0.0;
};

// pi(x) proportional to (p/q)^{sum of particle locations}; normalized in log
// space over the enumerated state space.
StationaryDist stationary(const ChainParams& params, std::uint64_t state_cap = kDefaultStateCap);

// log of the unnormalized stationary weight (usable at any n).
double log_stationary_weight(const ParticleConfig& sigma, const ChainParams& params);

// --- Stationary tail bounds --------------------------------------------------

// n^2 alpha^{-b n}: crude closed-form bound on pi(G), G = {x : L(x) <= (1/2-b)n}.
double tail_bound_G(const ChainParams& params, double b);

// Sharper bound from the sum over classes {L(x)=j, R(x)=l}:
//   pi(G) <= sum_{j <= (1/2-b)n} sum_{l >= n/2} alpha^{-2(l-j)},
// evaluated as exact finite geometric sums in log space.  Requires k <= n/2
// (which forces R(x) >= n/2 for every configuration).
double tail_bound_G_summed(const ChainParams& params, double b);

// Exact stationary mass of G at small n.
double exact_pi_G(const ChainParams& params, double b, std::uint64_t state_cap = kDefaultStateCap);

// Exact stationary mass grouped by (leftmost particle, rightmost hole);
// entries [j][l] for 1 <= j, l <= n (index 0 unused).
std::vector<std::vector<double>> exact_pi_by_L_R(const ChainParams& params,
                                                 std::uint64_t state_cap = kDefaultStateCap);

// --- Exact rational verification ----------------------------------------------

struct RationalBias {
    std::int64_t num = 0;  // beta = num/den, 0 <= num < den
    std::int64_t den = 1;
};

// Every row of the exact rational transition matrix sums to 1 with all
// entries nonnegative, and the double-precision matrix matches entrywise.
bool rational_row_check(std::int64_t n, std::int64_t k, RationalBias beta,
                        double entry_tol = 1e-15);

// pi(x) P(x,x') == pi(x') P(x',x) exactly, for every adjacent pair.
bool detailed_balance_exact(std::int64_t n, std::int64_t k, RationalBias beta);

}  // namespace bexcl
