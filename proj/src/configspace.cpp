#include "bexcl/configspace.hpp"

#include <algorithm>
#include <bit>

namespace bexcl {

ParticleConfig::ParticleConfig(std::int64_t n, std::int64_t k_hint) : n_(n), k_(0) {
    if (n < 0) throw invalid_input("ParticleConfig: negative n");
    bits_.assign(static_cast<std::size_t>((n + 63) / 64), 0);
    (void)k_hint;
}

ParticleConfig ParticleConfig::from_sites(std::int64_t n, const std::vector<std::int64_t>& sites) {
    ParticleConfig c(n);
    for (auto s : sites) c.set(s);
    return c;
}

ParticleConfig ParticleConfig::packed_left(std::int64_t n, std::int64_t k) {
    ParticleConfig c(n);
    for (std::int64_t s = 1; s <= k; ++s) c.set(s);
    return c;
}

ParticleConfig ParticleConfig::packed_right(std::int64_t n, std::int64_t k) {
    ParticleConfig c(n);
    for (std::int64_t s = n - k + 1; s <= n; ++s) c.set(s);
    return c;
}

ParticleConfig ParticleConfig::block(std::int64_t n, std::int64_t k, std::int64_t start) {
    if (start < 1 || start + k - 1 > n) throw invalid_input("ParticleConfig::block: block out of range");
    ParticleConfig c(n);
    for (std::int64_t s = start; s < start + k; ++s) c.set(s);
    return c;
}

void ParticleConfig::set(std::int64_t site) {
    if (site < 1 || site > n_) throw invalid_input("ParticleConfig::set: site out of range");
    std::uint64_t& w = bits_[static_cast<std::size_t>((site - 1) >> 6)];
    const std::uint64_t m = 1ULL << ((site - 1) & 63);
    if (!(w & m)) {
        w |= m;
        ++k_;
    }
}

void ParticleConfig::clear(std::int64_t site) {
    if (site < 1 || site > n_) throw invalid_input("ParticleConfig::clear: site out of range");
    std::uint64_t& w = bits_[static_cast<std::size_t>((site - 1) >> 6)];
    const std::uint64_t m = 1ULL << ((site - 1) & 63);
    if (w & m) {
        w &= ~m;
        --k_;
    }
}

void ParticleConfig::move_particle(std::int64_t from, std::int64_t to) {
    clear(from);
    set(to);
}

std::vector<std::int64_t> ParticleConfig::positions() const {
    std::vector<std::int64_t> pos;
    pos.reserve(static_cast<std::size_t>(k_));
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        std::uint64_t word = bits_[w];
        while (word) {
            const int b = std::countr_zero(word);
            pos.push_back(static_cast<std::int64_t>(w) * 64 + b + 1);
            word &= word - 1;
        }
    }
    return pos;
}

std::int64_t ParticleConfig::position_sum() const {
    std::int64_t sum = 0;
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        std::uint64_t word = bits_[w];
        while (word) {
            const int b = std::countr_zero(word);
            sum += static_cast<std::int64_t>(w) * 64 + b + 1;
            word &= word - 1;
        }
    }
    return sum;
}

std::int64_t ParticleConfig::leftmost_particle() const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        if (bits_[w]) return static_cast<std::int64_t>(w) * 64 + std::countr_zero(bits_[w]) + 1;
    }
    return 0;
}

std::int64_t ParticleConfig::rightmost_hole() const {
    for (std::int64_t s = n_; s >= 1; --s) {
        if (!occupied(s)) return s;
    }
    return 0;
}

ParticleConfig ParticleConfig::reversed() const {
    ParticleConfig c(n_);
    for (std::int64_t s = 1; s <= n_; ++s) {
        if (occupied(s)) c.set(n_ + 1 - s);
    }
    return c;
}

void PathConfig::validate() const {
    if (heights.empty() || heights[0] != 0) throw invalid_input("PathConfig: h(0) must be 0");
    for (std::size_t j = 1; j < heights.size(); ++j) {
        const int d = heights[j] - heights[j - 1];
        if (d != 1 && d != -1) throw invalid_input("PathConfig: increments must be +-1");
    }
}

PathConfig path_from_particles(const ParticleConfig& sigma) {
    PathConfig h;
    const std::int64_t n = sigma.sites();
    h.heights.resize(static_cast<std::size_t>(n) + 1);
    h.heights[0] = 0;
    for (std::int64_t j = 1; j <= n; ++j) {
        h.heights[static_cast<std::size_t>(j)] =
            h.heights[static_cast<std::size_t>(j - 1)] + (sigma.occupied(j) ? 1 : -1);
    }
    return h;
}

ParticleConfig particles_from_path(const PathConfig& h) {
    h.validate();
    const std::int64_t n = h.sites();
    ParticleConfig c(n);
    for (std::int64_t j = 1; j <= n; ++j) {
        if (h.heights[static_cast<std::size_t>(j)] > h.heights[static_cast<std::size_t>(j - 1)]) c.set(j);
    }
    return c;
}

PathConfig h0_path(std::int64_t n, std::int64_t k) {
    if (k < 1 || k > n - 1) throw invalid_input("h0_path: requires 1 <= k <= n-1");
    PathConfig h;
    h.heights.resize(static_cast<std::size_t>(n) + 1);
    for (std::int64_t x = 0; x <= n; ++x) {
        h.heights[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(x <= k ? x : 2 * k - x);
    }
    return h;
}

std::pair<ParticleConfig, ParticleConfig> extreme_configs(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) throw invalid_input("extreme_configs: k out of range");
    return {ParticleConfig::packed_left(n, k), ParticleConfig::packed_right(n, k)};
}

std::uint64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
        if (r > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(r);
}

SubsetRanker::SubsetRanker(std::int64_t n, std::int64_t k) : n_(n), k_(k) {
    if (n < 0 || k < 0 || k > n) throw invalid_input("SubsetRanker: need 0 <= k <= n");
    table_.assign(static_cast<std::size_t>((n + 1) * (k + 1)), 0);
    for (std::int64_t m = 0; m <= n; ++m) {
        for (std::int64_t j = 0; j <= k; ++j) {
            std::uint64_t v;
            if (j == 0) {
                v = 1;
            } else if (j > m) {
                v = 0;
            } else {
                const std::uint64_t a = table_[static_cast<std::size_t>((m - 1) * (k_ + 1) + j)];
                const std::uint64_t b = table_[static_cast<std::size_t>((m - 1) * (k_ + 1) + (j - 1))];
                v = (a > UINT64_MAX - b) ? UINT64_MAX : a + b;
            }
            table_[static_cast<std::size_t>(m * (k_ + 1) + j)] = v;
        }
    }
    count_ = binom(n, k);
    if (count_ >= (1ULL << 63)) throw invalid_input("SubsetRanker: C(n,k) >= 2^63, exact ranking unavailable");
}

std::uint64_t SubsetRanker::binom(std::int64_t m, std::int64_t j) const {
    if (j < 0 || j > m) return 0;
    return table_[static_cast<std::size_t>(m * (k_ + 1) + j)];
}

std::uint64_t SubsetRanker::rank_of_positions(const std::vector<std::int64_t>& pos) const {
    if (static_cast<std::int64_t>(pos.size()) != k_)
        throw invalid_input("SubsetRanker::rank: wrong particle count");
    std::uint64_t r = 0;
    for (std::int64_t i = 0; i < k_; ++i) r += binom(pos[static_cast<std::size_t>(i)] - 1, i + 1);
    return r;
}

std::uint64_t SubsetRanker::rank(const ParticleConfig& sigma) const {
    if (sigma.sites() != n_ || sigma.particles() != k_)
        throw invalid_input("SubsetRanker::rank: config has wrong (n, k)");
    return rank_of_positions(sigma.positions());
}

void SubsetRanker::unrank_positions(std::uint64_t r, std::vector<std::int64_t>& pos) const {
    if (r >= count_) throw invalid_input("SubsetRanker::unrank: rank out of range");
    pos.resize(static_cast<std::size_t>(k_));
    std::int64_t m = n_;
    for (std::int64_t i = k_; i >= 1; --i) {
        while (binom(m - 1, i) > r) --m;
        pos[static_cast<std::size_t>(i - 1)] = m;
        r -= binom(m - 1, i);
        --m;
    }
}

ParticleConfig SubsetRanker::unrank(std::uint64_t r) const {
    std::vector<std::int64_t> pos;
    unrank_positions(r, pos);
    return ParticleConfig::from_sites(n_, pos);
}

void SubsetRanker::for_each(
    const std::function<void(std::uint64_t, const std::vector<std::int64_t>&)>& f) const {
    if (count_ == 0) return;
    std::vector<std::int64_t> pos(static_cast<std::size_t>(k_));
    for (std::int64_t i = 0; i < k_; ++i) pos[static_cast<std::size_t>(i)] = i + 1;
    for (std::uint64_t r = 0;; ++r) {
        f(r, pos);
        if (r + 1 == count_) break;
        // colex successor: bump the first position with room, reset the prefix
        std::int64_t i = 0;
        while (i + 1 < k_ && pos[static_cast<std::size_t>(i)] + 1 == pos[static_cast<std::size_t>(i + 1)]) ++i;
        ++pos[static_cast<std::size_t>(i)];
        for (std::int64_t j = 0; j < i; ++j) pos[static_cast<std::size_t>(j)] = j + 1;
    }
}

}  // namespace bexcl
