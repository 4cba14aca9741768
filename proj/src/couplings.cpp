#include "bexcl/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace bexcl {

// --- LabelledPair -----------------------------------------------------------------

LabelledPair LabelledPair::start(const ParticleConfig& a, const ParticleConfig& b) {
    if (a.sites() != b.sites() || a.particles() != b.particles())
        throw invalid_input("LabelledPair: configurations must share (n, k)");
    LabelledPair lp;
    lp.n_ = a.sites();
    lp.k_ = a.particles();
    lp.pos_a_ = a.positions();
    lp.pos_b_ = b.positions();
    lp.site_a_.assign(static_cast<std::size_t>(lp.n_) + 2, 0);
    lp.site_b_.assign(static_cast<std::size_t>(lp.n_) + 2, 0);
    for (std::int64_t i = 0; i < lp.k_; ++i) {
        lp.site_a_[static_cast<std::size_t>(lp.pos_a_[static_cast<std::size_t>(i)])] = static_cast<std::int32_t>(i + 1);
        lp.site_b_[static_cast<std::size_t>(lp.pos_b_[static_cast<std::size_t>(i)])] = static_cast<std::int32_t>(i + 1);
    }
    lp.coupled_ = 0;
    for (std::int64_t i = 0; i < lp.k_; ++i) {
        if (lp.pos_a_[static_cast<std::size_t>(i)] == lp.pos_b_[static_cast<std::size_t>(i)]) ++lp.coupled_;
    }
    lp.diff_sites_ = 0;
    for (std::int64_t s = 1; s <= lp.n_; ++s) {
        if ((lp.site_a_[static_cast<std::size_t>(s)] != 0) != (lp.site_b_[static_cast<std::size_t>(s)] != 0))
            ++lp.diff_sites_;
    }
    return lp;
}

ParticleConfig LabelledPair::first_config() const { return ParticleConfig::from_sites(n_, pos_a_); }
ParticleConfig LabelledPair::second_config() const { return ParticleConfig::from_sites(n_, pos_b_); }

void LabelledPair::relocate(bool side_b, std::int64_t from, std::int64_t to) {
    auto& site = side_b ? site_b_ : site_a_;
    auto& pos = side_b ? pos_b_ : pos_a_;
    const auto& other_pos = side_b ? pos_a_ : pos_b_;
    const auto& other_site = side_b ? site_a_ : site_b_;

    const std::int32_t tag = site[static_cast<std::size_t>(from)];
    const std::int64_t label = tag - 1;
    const bool was_coupled = pos[static_cast<std::size_t>(label)] == other_pos[static_cast<std::size_t>(label)];

    site[static_cast<std::size_t>(from)] = 0;
    site[static_cast<std::size_t>(to)] = tag;
    pos[static_cast<std::size_t>(label)] = to;

    const bool is_coupled = to == other_pos[static_cast<std::size_t>(label)];
    if (was_coupled != is_coupled) coupled_ += is_coupled ? 1 : -1;

    // occupancy disagreement count: only `from` and `to` changed on this side
    const bool other_from = other_site[static_cast<std::size_t>(from)] != 0;
    const bool other_to = other_site[static_cast<std::size_t>(to)] != 0;
    diff_sites_ += (other_from ? 1 : -1);  // from: occupied -> empty
    diff_sites_ += (other_to ? -1 : 1);    // to: empty -> occupied
}

void LabelledPair::move_single(bool side_b, std::int64_t edge, bool place_right) {
    const auto& site = side_b ? site_b_ : site_a_;
    const std::int64_t from = site[static_cast<std::size_t>(edge)] != 0 ? edge : edge + 1;
    const std::int64_t to = place_right ? edge + 1 : edge;
    if (from != to) relocate(side_b, from, to);
}

void LabelledPair::swap_labels(bool side_b, std::int64_t edge) {
    auto& site = side_b ? site_b_ : site_a_;
    auto& pos = side_b ? pos_b_ : pos_a_;
    const auto& other_pos = side_b ? pos_a_ : pos_b_;

    const std::int64_t la = site[static_cast<std::size_t>(edge)] - 1;
    const std::int64_t lb = site[static_cast<std::size_t>(edge + 1)] - 1;
    for (std::int64_t label : {la, lb}) {
        if (pos[static_cast<std::size_t>(label)] == other_pos[static_cast<std::size_t>(label)]) --coupled_;
    }
    std::swap(site[static_cast<std::size_t>(edge)], site[static_cast<std::size_t>(edge + 1)]);
    pos[static_cast<std::size_t>(la)] = edge + 1;
    pos[static_cast<std::size_t>(lb)] = edge;
    for (std::int64_t label : {la, lb}) {
        if (pos[static_cast<std::size_t>(label)] == other_pos[static_cast<std::size_t>(label)]) ++coupled_;
    }
}

void LabelledPair::arrange_double(bool side_b, std::int64_t edge, Rng& rng) {
    const auto& site = side_b ? site_b_ : site_a_;
    const auto& other_pos = side_b ? pos_a_ : pos_b_;
    const std::int64_t la = site[static_cast<std::size_t>(edge)] - 1;
    const std::int64_t lb = site[static_cast<std::size_t>(edge + 1)] - 1;
    // a label "demands" an endpoint when its mate in the other side sits there;
    // demands are always satisfiable (two labels cannot share a site over there)
    const std::int64_t pa = other_pos[static_cast<std::size_t>(la)];
    const std::int64_t pb = other_pos[static_cast<std::size_t>(lb)];
    const bool a_demands = pa == edge || pa == edge + 1;
    const bool b_demands = pb == edge || pb == edge + 1;
    bool do_swap;
    if (a_demands) {
        do_swap = pa == edge + 1;
    } else if (b_demands) {
        do_swap = pb == edge;
    } else {
        do_swap = rng.bernoulli(0.5);
    }
    if (do_swap) swap_labels(side_b, edge);
}

void LabelledPair::step(const ChainParams& params, Rng& rng) {
    const std::int64_t e = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n_ - 1)));
    const int ca = (occ(false, e) ? 1 : 0) + (occ(false, e + 1) ? 1 : 0);
    const int cb = (occ(true, e) ? 1 : 0) + (occ(true, e + 1) ? 1 : 0);
    if (ca == 1 || cb == 1) {
        const bool place_right = rng.bernoulli(params.p);  // one shared coin
        if (ca == 1) move_single(false, e, place_right);
        if (cb == 1) move_single(true, e, place_right);
    }
    if (ca == 2 && cb == 2) {
        if (rng.bernoulli(0.5)) swap_labels(false, e);  // free side randomizes
        arrange_double(true, e, rng);
    } else {
        if (ca == 2) arrange_double(false, e, rng);
        if (cb == 2) arrange_double(true, e, rng);
    }
}

LabelledPair coupled_step(const LabelledPair& pair, const ChainParams& params, Rng& rng) {
    LabelledPair out = pair;
    out.step(params, rng);
    return out;
}

CouplingTimeResult coupling_time(const ParticleConfig& a, const ParticleConfig& b,
                                 const ChainParams& params, Rng& rng, std::int64_t t_cap) {
    LabelledPair pair = LabelledPair::start(a, b);
    CouplingTimeResult res;
    res.t_cap = t_cap;
    if (pair.configs_equal()) {
        res.time = 0;
        return res;
    }
    for (std::int64_t t = 1; t <= t_cap; ++t) {
        pair.step(params, rng);
        if (pair.configs_equal()) {
            res.time = t;
            return res;
        }
    }
    return res;
}

std::vector<std::int64_t> label_coupling_times(const ParticleConfig& a, const ParticleConfig& b,
                                               const ChainParams& params, Rng& rng,
                                               std::int64_t t_cap) {
    LabelledPair pair = LabelledPair::start(a, b);
    const std::int64_t k = pair.particles();
    std::vector<std::int64_t> tau(static_cast<std::size_t>(k), -1);
    std::int64_t remaining = k;
    for (std::int64_t i = 0; i < k; ++i) {
        if (pair.label_coupled(i)) {
            tau[static_cast<std::size_t>(i)] = 0;
            --remaining;
        }
    }
    for (std::int64_t t = 1; t <= t_cap && remaining > 0; ++t) {
        pair.step(params, rng);
        for (std::int64_t i = 0; i < k; ++i) {
            if (tau[static_cast<std::size_t>(i)] < 0 && pair.label_coupled(i)) {
                tau[static_cast<std::size_t>(i)] = t;
                --remaining;
            }
        }
    }
    return tau;
}

std::int64_t dominating_walk_time(const ChainParams& params, std::int64_t start, Rng& rng,
                                  std::int64_t t_cap) {
    std::int64_t s = start;
    if (s <= 0) return 0;
    const double move_prob = 1.0 / params.edges();
    for (std::int64_t t = 1; t <= t_cap; ++t) {
        if (rng.uniform() < move_prob) {
            s += rng.bernoulli(params.p) ? 1 : -1;
            if (s <= 0) return t;
        }
    }
    return -1;
}

// --- Exponential path metric --------------------------------------------------------

double metric_weight_from_height(std::int64_t mid_height, const ChainParams& params) {
    if (!params.biased())
        throw invalid_input("metric_weight: requires beta > 0 (unit weights are a separate mode)");
    return std::exp(static_cast<double>(params.n - params.k + mid_height) * params.log_alpha);
}

std::vector<AdjacencyMove> adjacent_moves(const ParticleConfig& sigma, const ChainParams& params,
                                          const SubsetRanker& ranker) {
    std::vector<AdjacencyMove> moves;
    const std::int64_t n = params.n;
    const PathConfig h = path_from_particles(sigma);
    const std::uint64_t from = ranker.rank(sigma);
    ParticleConfig work = sigma;
    for (std::int64_t s = 1; s <= n - 1; ++s) {
        const bool l = sigma.occupied(s);
        const bool r = sigma.occupied(s + 1);
        if (l == r) continue;
        AdjacencyMove mv;
        mv.from_state = from;
        mv.vertex = s;
        if (l) {  // particle moves right: local max at s flips down
            mv.mid_height = h.heights[static_cast<std::size_t>(s)] - 1;
            work.move_particle(s, s + 1);
            mv.to_state = ranker.rank(work);
            work.move_particle(s + 1, s);
        } else {  // particle moves left: local min at s flips up
            mv.mid_height = h.heights[static_cast<std::size_t>(s)] + 1;
            work.move_particle(s + 1, s);
            mv.to_state = ranker.rank(work);
            work.move_particle(s, s + 1);
        }
        mv.weight = params.biased() ? metric_weight_from_height(mv.mid_height, params) : 1.0;
        moves.push_back(mv);
    }
    return moves;
}

namespace {

struct MetricSpace {
    SubsetRanker ranker;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // (neighbor, weight)

    MetricSpace(const ChainParams& params, std::uint64_t state_cap, bool unit_weights)
        : ranker(params.n, params.k) {
        if (ranker.count() > state_cap) throw resource_limit("path metric: state space exceeds cap");
        if (!unit_weights && !params.biased())
            throw invalid_input("path metric: requires beta > 0 (or unit-weight mode)");
        adj.resize(static_cast<std::size_t>(ranker.count()));
        ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
            const ParticleConfig cfg = ParticleConfig::from_sites(params.n, pos);
            for (const auto& mv : adjacent_moves(cfg, params, ranker)) {
                adj[static_cast<std::size_t>(r)].emplace_back(static_cast<std::uint32_t>(mv.to_state),
                                                              unit_weights ? 1.0 : mv.weight);
            }
        });
    }
};

}  // namespace

double path_distance(std::uint64_t x, std::uint64_t y, const ChainParams& params,
                     std::uint64_t state_cap, bool unit_weights) {
    MetricSpace space(params, state_cap, unit_weights);
    if (x >= space.ranker.count() || y >= space.ranker.count())
        throw invalid_input("path_distance: state rank out of range");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(space.ranker.count()), inf);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<std::size_t>(x)] = 0.0;
    heap.emplace(0.0, static_cast<std::uint32_t>(x));
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == y) return d;
        for (const auto& [v, w] : space.adj[u]) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                heap.emplace(dist[v], v);
            }
        }
    }
    return dist[static_cast<std::size_t>(y)];
}

std::vector<double> all_pairs_distances(const ChainParams& params, std::uint64_t state_cap) {
    MetricSpace space(params, state_cap, false);
    const std::size_t dim = static_cast<std::size_t>(space.ranker.count());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(dim * dim, inf);
    for (std::size_t i = 0; i < dim; ++i) {
        dist[i * dim + i] = 0.0;
        for (const auto& [j, w] : space.adj[i]) {
            dist[i * dim + j] = std::min(dist[i * dim + j], w);
        }
    }
    for (std::size_t m = 0; m < dim; ++m) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double dim_im = dist[i * dim + m];
            if (dim_im == inf) continue;
            const double* row_m = &dist[m * dim];
            double* row_i = &dist[i * dim];
            for (std::size_t j = 0; j < dim; ++j) {
                const double cand = dim_im + row_m[j];
                if (cand < row_i[j]) row_i[j] = cand;
            }
        }
    }
    return dist;
}

double log_diameter_formula(const ChainParams& params) {
    if (!params.biased()) throw invalid_input("diameter_formula: requires beta > 0");
    if (params.k == 0 || params.k == params.n) return -std::numeric_limits<double>::infinity();
    const double la = params.log_alpha;
    auto log_am1 = [&](std::int64_t j) {  // log(alpha^j - 1)
        return static_cast<double>(j) * la + std::log1p(-std::exp(-static_cast<double>(j) * la));
    };
    return la + log_am1(params.k) + log_am1(params.n - params.k) - 2.0 * std::log(std::expm1(la));
}

double diameter_formula(const ChainParams& params) {
    const double ld = log_diameter_formula(params);
    return std::isinf(ld) && ld < 0 ? 0.0 : std::exp(ld);
}

// --- Contraction certificate ----------------------------------------------------------

namespace {

// refresh path vertex w to a local extremum if possible; returns true when changed
bool refresh_vertex(PathConfig& h, std::int64_t w, bool to_max) {
    const std::int32_t lo = h.heights[static_cast<std::size_t>(w - 1)];
    const std::int32_t hi = h.heights[static_cast<std::size_t>(w + 1)];
    if (lo != hi) return false;
    const std::int32_t target = to_max ? lo + 1 : lo - 1;
    if (h.heights[static_cast<std::size_t>(w)] == target) return false;
    h.heights[static_cast<std::size_t>(w)] = target;
    return true;
}

}  // namespace

ContractionReport contraction_check(const ChainParams& params, std::uint64_t state_cap) {
    if (!params.biased()) throw invalid_input("contraction_check: requires beta > 0");
    const std::vector<double> dist = all_pairs_distances(params, state_cap);
    SubsetRanker ranker(params.n, params.k);
    const std::size_t dim = static_cast<std::size_t>(ranker.count());
    const std::int64_t n = params.n;

    ContractionReport rep;
    rep.target_ratio = 1.0 - params.delta / params.edges();

    std::vector<PathConfig> paths(dim);
    ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        paths[static_cast<std::size_t>(r)] = path_from_particles(ParticleConfig::from_sites(n, pos));
    });

    auto rank_of_path = [&](const PathConfig& h) {
        return ranker.rank(particles_from_path(h));
    };

    for (std::size_t x = 0; x < dim; ++x) {
        const ParticleConfig cfg = ranker.unrank(x);
        for (const auto& mv : adjacent_moves(cfg, params, ranker)) {
            if (mv.to_state < x) continue;  // each unordered pair once
            const double rho = dist[x * dim + static_cast<std::size_t>(mv.to_state)];
            const PathConfig& hx = paths[x];
            const PathConfig& hy = paths[static_cast<std::size_t>(mv.to_state)];
            double expected = 0.0;
            PathConfig ux, uy;
            for (std::int64_t w = 1; w <= n - 1; ++w) {
                for (const bool to_max : {true, false}) {
                    const double prob = (to_max ? params.q : params.p) / params.edges();
                    ux = hx;
                    uy = hy;
                    const bool cx = refresh_vertex(ux, w, to_max);
                    const bool cy = refresh_vertex(uy, w, to_max);
                    double d;
                    if (!cx && !cy) {
                        d = rho;
                    } else {
                        const std::uint64_t rx = cx ? rank_of_path(ux) : x;
                        const std::uint64_t ry = cy ? rank_of_path(uy) : mv.to_state;
                        d = dist[static_cast<std::size_t>(rx) * dim + static_cast<std::size_t>(ry)];
                    }
                    expected += prob * d;
                }
            }
            const double target = rho * rep.target_ratio;
            const bool interior = mv.vertex >= 2 && mv.vertex <= n - 2;
            rep.max_ratio = std::max(rep.max_ratio, expected / rho);
            if (interior) {
                rep.max_interior_deviation = std::max(rep.max_interior_deviation,
                                                      std::abs(expected - target) / rho);
                ++rep.interior_pairs;
            } else {
                rep.max_boundary_excess = std::max(rep.max_boundary_excess, (expected - target) / rho);
            }
            ++rep.pairs_checked;
        }
    }
    return rep;
}

PathCouplingBound path_coupling_upper_bound(const ChainParams& params, double epsilon) {
    if (!params.biased()) throw invalid_input("path_coupling_upper_bound: requires beta > 0");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw invalid_input("path_coupling_upper_bound: epsilon must be in (0,1)");
    PathCouplingBound b;
    if (params.k == 0 || params.k == params.n) {
        b.log_diameter = -std::numeric_limits<double>::infinity();
        return b;  // single state; already mixed
    }
    b.log_diameter = log_diameter_formula(params);
    const double log_eps_inv = std::log(1.0 / epsilon);
    b.beta_form = 2.0 * static_cast<double>(params.n) / (params.beta * params.beta) *
                   (log_eps_inv + b.log_diameter);
    b.sharp_form = params.edges() / params.delta * (b.log_diameter + log_eps_inv);
    return b;
}

// --- Leftmost-particle comparison walk -------------------------------------------------

LeftmostTailReport leftmost_walk_sim(const ChainParams& params, double b, std::int64_t t_steps,
                                     std::int64_t trials, Rng& rng, StartPacking packing) {
    if (!params.biased()) throw invalid_input("leftmost_walk_sim: requires beta > 0");
    if (!(b > 0.0) || b >= 0.5) throw invalid_input("leftmost_walk_sim: b must be in (0, 1/2)");
    const std::int64_t n = params.n;
    const std::int64_t k = params.k;
    const std::int64_t s0 = std::llround(b * static_cast<double>(n) / 2.0);
    if (s0 < 1) throw invalid_input("leftmost_walk_sim: b n / 2 rounds below site 1");

    ParticleConfig x0(n);
    if (packing == StartPacking::kBlockRightOfLeftmost) {
        x0 = ParticleConfig::block(n, k, s0);
    } else {
        if (k >= 1) {
            x0 = ParticleConfig::packed_right(n, k - 1);
            if (x0.occupied(s0)) throw invalid_input("leftmost_walk_sim: far-right packing collides with s0");
            x0.set(s0);
        }
    }
    if (x0.leftmost_particle() != s0) throw invalid_input("leftmost_walk_sim: start config has L != b n/2");

    LeftmostTailReport rep;
    rep.trials = trials;
    rep.steps = t_steps;
    rep.start_site = s0;
    rep.threshold = (0.5 - b) * static_cast<double>(n);

    double sum_L = 0.0, sum_R = 0.0;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        Rng stream = rng.split(static_cast<std::uint64_t>(trial));
        ParticleConfig cfg = x0;
        std::int64_t L = cfg.leftmost_particle();
        std::int64_t R = cfg.rightmost_hole();
        for (std::int64_t t = 0; t < t_steps; ++t) {
            const std::int64_t e = 1 + static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(n - 1)));
            const bool l = cfg.occupied(e);
            const bool r = cfg.occupied(e + 1);
            if (l == r) continue;
            const bool place_right = stream.bernoulli(params.p);
            if (place_right && l) {
                cfg.move_particle(e, e + 1);
                if (e == L) L = e + 1;      // leftmost particle stepped right
                if (e + 1 == R) R = e;      // rightmost hole swapped left
            } else if (!place_right && r) {
                cfg.move_particle(e + 1, e);
                if (e + 1 == L) L = e;      // leftmost particle stepped left
                if (e == R) R = e + 1;      // rightmost hole swapped right
            }
        }
        sum_L += static_cast<double>(L);
        sum_R += static_cast<double>(R);
        if (static_cast<double>(L) > rep.threshold) ++rep.exceed_count;
    }
    rep.fraction = trials > 0 ? static_cast<double>(rep.exceed_count) / static_cast<double>(trials) : 0.0;
    rep.std_error = trials > 0 ? std::sqrt(std::max(rep.fraction * (1.0 - rep.fraction), 1.0 / static_cast<double>(trials)) /
                                           static_cast<double>(trials))
                               : 0.0;
    rep.mean_final_L = trials > 0 ? sum_L / static_cast<double>(trials) : 0.0;
    rep.mean_final_R = trials > 0 ? sum_R / static_cast<double>(trials) : 0.0;
    return rep;
}

}  // namespace bexcl
