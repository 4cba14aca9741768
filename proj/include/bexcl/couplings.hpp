#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bexcl/configspace.hpp"
#include "bexcl/kernel.hpp"
#include "bexcl/params.hpp"
#include "bexcl/rng.hpp"

namespace bexcl {

// --- Labelled-particle coupling -------------------------------------------------
//
// Two labelled k-particle configurations driven by one edge choice per step.
// Erasing labels, each side is the plain biased exclusion chain:
//   * a side with exactly one particle on the chosen edge places it with the
//     p-coin (one shared coin when both sides have a single particle),
//   * a side with two particles on the edge keeps its occupancy but may swap
//     the two labels: it matches any label whose position in the other side
//     lies on the edge, and tosses a fair coin otherwise.
// A label occupying the same site in both sides never decouples.
class LabelledPair {
public:
    // Labels are assigned left-to-right in each configuration.
    static LabelledPair start(const ParticleConfig& a, const ParticleConfig& b);

    std::int64_t sites() const { return n_; }
    std::int64_t particles() const { return k_; }
    std::int64_t coupled_count() const { return coupled_; }
    bool label_coupled(std::int64_t label) const {
        return pos_a_[static_cast<std::size_t>(label)] == pos_b_[static_cast<std::size_t>(label)];
    }
    // true when the label-erased configurations agree
    bool configs_equal() const { return diff_sites_ == 0; }
    std::int64_t disagreement_sites() const { return diff_sites_; }

    const std::vector<std::int64_t>& first_positions() const { return pos_a_; }
    const std::vector<std::int64_t>& second_positions() const { return pos_b_; }
    ParticleConfig first_config() const;
    ParticleConfig second_config() const;

    void step(const ChainParams& params, Rng& rng);

private:
    LabelledPair() = default;

    bool occ(bool side_b, std::int64_t site) const {
        const auto& m = side_b ? site_b_ : site_a_;
        return m[static_cast<std::size_t>(site)] != 0;
    }
    void move_single(bool side_b, std::int64_t edge, bool place_right);
    void arrange_double(bool side_b, std::int64_t edge, Rng& rng);
    void relocate(bool side_b, std::int64_t from, std::int64_t to);
    void swap_labels(bool side_b, std::int64_t edge);

    std::int64_t n_ = 0;
    std::int64_t k_ = 0;
    std::vector<std::int64_t> pos_a_, pos_b_;    // label -> site
    std::vector<std::int32_t> site_a_, site_b_;  // site -> label+1, 0 = empty
    std::int64_t coupled_ = 0;
    std::int64_t diff_sites_ = 0;
};

LabelledPair coupled_step(const LabelledPair& pair, const ChainParams& params, Rng& rng);

struct CouplingTimeResult {
    std::optional<std::int64_t> time;  // empty on timeout
    std::int64_t t_cap = 0;
};

// Steps the pair until the label-erased configurations agree (or t_cap).
CouplingTimeResult coupling_time(const ParticleConfig& a, const ParticleConfig& b,
                                 const ChainParams& params, Rng& rng, std::int64_t t_cap);

// Per-label first coupling times (-1 when past t_cap); used for the
// dominance comparison against the constant-bias walk.
std::vector<std::int64_t> label_coupling_times(const ParticleConfig& a, const ParticleConfig& b,
                                               const ChainParams& params, Rng& rng, std::int64_t t_cap);

// Hitting time of 0 for the walk with holding 1 - 1/(n-1), upward bias beta,
// started at start; -1 when past t_cap.
std::int64_t dominating_walk_time(const ChainParams& params, std::int64_t start, Rng& rng,
                                  std::int64_t t_cap);

// --- Exponential path metric ------------------------------------------------------

struct AdjacencyMove {
    std::uint64_t from_state = 0;
    std::uint64_t to_state = 0;
    std::int64_t vertex = 0;      // disagreement vertex v in {1..n-1}
    std::int64_t mid_height = 0;  // height of the flipped diamond's midpoint
    double weight = 0.0;          // alpha^{n-k+mid_height}
};

double metric_weight_from_height(std::int64_t mid_height, const ChainParams& params);

// All single-swap neighbors of a configuration (particle moved right or left).
std::vector<AdjacencyMove> adjacent_moves(const ParticleConfig& sigma, const ChainParams& params,
                                          const SubsetRanker& ranker);

inline constexpr std::uint64_t kDefaultMetricCap = 4096;

// Shortest-path distance for the swap adjacency with exponential weights
// (exact Dijkstra).  Requires beta > 0; pass unit_weights for hop counting.
double path_distance(std::uint64_t x, std::uint64_t y, const ChainParams& params,
                     std::uint64_t state_cap = kDefaultMetricCap, bool unit_weights = false);

// Dense all-pairs distance table (Floyd-Warshall), row-major dim x dim.
std::vector<double> all_pairs_distances(const ChainParams& params,
                                        std::uint64_t state_cap = kDefaultMetricCap);

// alpha (alpha^k - 1)(alpha^{n-k} - 1)/(alpha - 1)^2.
double diameter_formula(const ChainParams& params);
double log_diameter_formula(const ChainParams& params);

// --- Contraction certificate -------------------------------------------------------

struct ContractionReport {
    double target_ratio = 0.0;            // 1 - delta/(n-1)
    double max_ratio = 0.0;               // max over adjacent pairs of E[rho1]/rho
    double max_interior_deviation = 0.0;  // max |E[rho1] - rho*target| / rho, interior v
    double max_boundary_excess = 0.0;     // max (E[rho1] - rho*target)/rho, boundary v
    std::uint64_t pairs_checked = 0;
    std::uint64_t interior_pairs = 0;
};

// For every adjacent pair, the exact one-step expected distance under the
// same-vertex proposal coupling (local max with prob q, local min with prob p),
// enumerated over all n-1 vertices and both proposals.
ContractionReport contraction_check(const ChainParams& params,
                                    std::uint64_t state_cap = kDefaultMetricCap);

struct PathCouplingBound {
    double beta_form = 0.0;  // (2n/beta^2) (log(1/eps) + log diam)
    double sharp_form = 0.0;  // ((n-1)/delta) (log diam + log(1/eps))
    double log_diameter = 0.0;
};

PathCouplingBound path_coupling_upper_bound(const ChainParams& params, double epsilon);

// --- Leftmost-particle comparison walk ----------------------------------------------

enum class StartPacking {
    kBlockRightOfLeftmost,  // particles fill sites s0 .. s0+k-1
    kFarRight,              // one particle at s0, the rest packed at the right end
};

struct LeftmostTailReport {
    std::int64_t trials = 0;
    std::int64_t exceed_count = 0;  // trials with L_t > (1/2-b)n
    double fraction = 0.0;
    double std_error = 0.0;
    double threshold = 0.0;
    std::int64_t start_site = 0;
    std::int64_t steps = 0;
    double mean_final_L = 0.0;
    double mean_final_R = 0.0;  // rightmost hole, tracked alongside
};

// Runs the true chain from a configuration with L(x0) = b n / 2, tracking the
// leftmost particle and the rightmost hole; returns the empirical tail
// P(L_t > (1/2-b)n) with its binomial standard error.
LeftmostTailReport leftmost_walk_sim(const ChainParams& params, double b, std::int64_t t_steps,
                                     std::int64_t trials, Rng& rng,
                                     StartPacking packing = StartPacking::kBlockRightOfLeftmost);

}  // namespace bexcl
