#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bexcl/errors.hpp"
#include "bexcl/params.hpp"

namespace bexcl {

// Occupancy vector of k particles on n sites, bit-packed (one word per 64
// sites).  Sites are 1-based, matching the path vertices 0..n.
class ParticleConfig {
public:
    ParticleConfig() = default;
    ParticleConfig(std::int64_t n, std::int64_t k_hint = 0);

    static ParticleConfig from_sites(std::int64_t n, const std::vector<std::int64_t>& sites);
    static ParticleConfig packed_left(std::int64_t n, std::int64_t k);
    static ParticleConfig packed_right(std::int64_t n, std::int64_t k);
    // Contiguous block of k particles starting at site `start`.
    static ParticleConfig block(std::int64_t n, std::int64_t k, std::int64_t start);

    std::int64_t sites() const { return n_; }
    std::int64_t particles() const { return k_; }

    bool occupied(std::int64_t site) const {
        return (bits_[static_cast<std::size_t>((site - 1) >> 6)] >> ((site - 1) & 63)) & 1ULL;
    }
    void set(std::int64_t site);
    void clear(std::int64_t site);
    // Adjacent particle-hole swap; `from` must be occupied and `to` empty.
    void move_particle(std::int64_t from, std::int64_t to);

    std::vector<std::int64_t> positions() const;
    std::int64_t position_sum() const;    // sum of occupied sites
    std::int64_t leftmost_particle() const;   // 0 when k = 0
    std::int64_t rightmost_hole() const;      // 0 when k = n
    ParticleConfig reversed() const;          // site i -> n+1-i

    bool operator==(const ParticleConfig& o) const { return n_ == o.n_ && bits_ == o.bits_; }
    bool operator!=(const ParticleConfig& o) const { return !(*this == o); }

private:
    std::int64_t n_ = 0;
    std::int64_t k_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Lattice path h(0..n): h(0)=0, increments +1 on occupied sites, -1 on holes.
struct PathConfig {
    std::vector<std::int32_t> heights;  // size n+1

    std::int64_t sites() const { return static_cast<std::int64_t>(heights.size()) - 1; }
    std::int64_t particles() const { return (heights.back() + sites()) / 2; }
    // f_h(i): number of up-edges among the first i; h(i) = 2 f_h(i) - i.
    std::int64_t up_count(std::int64_t i) const { return (heights[static_cast<std::size_t>(i)] + i) / 2; }

    void validate() const;  // throws invalid_input on malformed paths
};

PathConfig path_from_particles(const ParticleConfig& sigma);
ParticleConfig particles_from_path(const PathConfig& h);

// Maximal path: h0(x) = x for x <= k, 2k - x for x > k.  Requires 1 <= k <= n-1.
PathConfig h0_path(std::int64_t n, std::int64_t k);
inline PathConfig h0_path(const ChainParams& c) { return h0_path(c.n, c.k); }

// (all particles leftmost, all particles rightmost)
std::pair<ParticleConfig, ParticleConfig> extreme_configs(std::int64_t n, std::int64_t k);

// Colexicographic ranking of k-subsets of n sites: state index <-> config.
// Rank order coincides with numeric order of the occupancy bitmask.
// Requires C(n,k) < 2^63.
class SubsetRanker {
public:
    SubsetRanker(std::int64_t n, std::int64_t k);

    std::int64_t n() const { return n_; }
    std::int64_t k() const { return k_; }
    std::uint64_t count() const { return count_; }

    std::uint64_t rank(const ParticleConfig& sigma) const;
    std::uint64_t rank_of_positions(const std::vector<std::int64_t>& pos) const;
    ParticleConfig unrank(std::uint64_t r) const;
    void unrank_positions(std::uint64_t r, std::vector<std::int64_t>& pos) const;

    // Enumerates configurations in rank order; f(rank, positions).
    void for_each(const std::function<void(std::uint64_t, const std::vector<std::int64_t>&)>& f) const;

private:
    std::uint64_t binom(std::int64_t m, std::int64_t j) const;

    std::int64_t n_ = 0;
    std::int64_t k_ = 0;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> table_;  // (n+1) x (k+1), saturating
};

// C(n,k) saturating at UINT64_MAX.
std::uint64_t binomial(std::int64_t n, std::int64_t k);

}  // namespace bexcl
