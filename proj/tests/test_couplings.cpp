#include "doctest.h"

#include <cmath>
#include <set>

#include "bexcl/couplings.hpp"
#include "bexcl/rng.hpp"

using namespace bexcl;

TEST_CASE("coupled steps keep both marginals on the exclusion law (3 SE, 2e5 samples)") {
    const ChainParams c = ChainParams::make(6, 3, 0.2);
    const TransitionMatrix P = TransitionMatrix::build(c);
    const auto [left, right] = extreme_configs(6, 3);
    const std::uint64_t row_a = P.ranker().rank(left);
    const std::uint64_t row_b = P.ranker().rank(right);
    const int samples = 200000;

    std::vector<std::int64_t> ca(static_cast<std::size_t>(P.dim()), 0), cb(ca);
    Rng rng(99);
    const LabelledPair base = LabelledPair::start(left, right);
    for (int i = 0; i < samples; ++i) {
        LabelledPair pair = base;
        pair.step(c, rng);
        ++ca[static_cast<std::size_t>(P.ranker().rank(pair.first_config()))];
        ++cb[static_cast<std::size_t>(P.ranker().rank(pair.second_config()))];
    }
    auto compare = [&](std::uint64_t row, const std::vector<std::int64_t>& counts) {
        for (std::uint64_t j = 0; j < P.dim(); ++j) {
            const double prob = P.at(row, j);
            const double freq = static_cast<double>(counts[static_cast<std::size_t>(j)]) / samples;
            if (prob == 0.0) {
                CHECK(counts[static_cast<std::size_t>(j)] == 0);
            } else {
                const double se = std::sqrt(prob * (1.0 - prob) / samples);
                CHECK(std::abs(freq - prob) <= 3.0 * se);
            }
        }
    };
    compare(row_a, ca);
    compare(row_b, cb);
}

TEST_CASE("coupled labels never decouple; the coupled count is nondecreasing") {
    const ChainParams c = ChainParams::make(20, 7, 0.15);
    Rng rng(5);
    LabelledPair pair = LabelledPair::start(ParticleConfig::packed_left(20, 7),
                                            ParticleConfig::from_sites(20, {2, 5, 6, 9, 13, 17, 20}));
    std::set<std::int64_t> coupled;
    std::int64_t prev_count = pair.coupled_count();
    for (int t = 0; t < 100000; ++t) {
        pair.step(c, rng);
        CHECK(pair.coupled_count() >= prev_count);
        prev_count = pair.coupled_count();
        for (std::int64_t i = 0; i < 7; ++i) {
            if (coupled.count(i)) {
                CHECK(pair.label_coupled(i));
            } else if (pair.label_coupled(i)) {
                coupled.insert(i);
            }
        }
    }
    CHECK(pair.coupled_count() == static_cast<std::int64_t>(coupled.size()));
}

TEST_CASE("identical labelled configurations stay identical forever") {
    const ChainParams c = ChainParams::make(12, 5, 0.3);
    Rng rng(17);
    const ParticleConfig start = ParticleConfig::from_sites(12, {1, 4, 5, 9, 12});
    LabelledPair pair = LabelledPair::start(start, start);
    for (int t = 0; t < 10000; ++t) {
        pair.step(c, rng);
        REQUIRE(pair.coupled_count() == 5);
        REQUIRE(pair.configs_equal());
    }
}

TEST_CASE("coupling_time") {
    const ChainParams c2 = ChainParams::make(2, 1, 0.3);
    SUBCASE("equal start couples at time zero") {
        Rng rng(1);
        const auto res = coupling_time(ParticleConfig::packed_left(2, 1), ParticleConfig::packed_left(2, 1), c2,
                                       rng, 100);
        CHECK(res.time == 0);
    }
    SUBCASE("n=2 opposite states: the shared coin couples in exactly one step") {
        Rng rng(2);
        for (int rep = 0; rep < 50; ++rep) {
            const auto res = coupling_time(ParticleConfig::packed_left(2, 1),
                                           ParticleConfig::packed_right(2, 1), c2, rng, 10);
            REQUIRE(res.time.has_value());
            CHECK(*res.time == 1);  // <= 2 expected trials of coin agreement; shared coin does it in 1
        }
    }
    SUBCASE("timeout is reported distinctly, not as an error") {
        const ChainParams c = ChainParams::make(16, 8, 0.1);
        Rng rng(3);
        const auto [l, r] = extreme_configs(16, 8);
        const auto res = coupling_time(l, r, c, rng, 1);
        CHECK_FALSE(res.time.has_value());
        CHECK(res.t_cap == 1);
    }
}

TEST_CASE("per-label coupling tails are dominated by the constant-bias walk (n=32, beta=1/64)") {
    const ChainParams c = ChainParams::make(32, 16, 1.0 / 64.0);
    const auto [left, right] = extreme_configs(32, 16);
    const std::int64_t t_cap = 120000;
    const int trials = 250;
    const std::vector<std::int64_t> grid = {2000, 8000, 30000, 100000};

    std::vector<std::vector<std::int64_t>> label_taus(static_cast<std::size_t>(trials));
    std::vector<std::int64_t> walk_taus(static_cast<std::size_t>(trials));
    Rng root(2024);
    for (int i = 0; i < trials; ++i) {
        Rng ra = root.split(static_cast<std::uint64_t>(2 * i));
        Rng rb = root.split(static_cast<std::uint64_t>(2 * i + 1));
        label_taus[static_cast<std::size_t>(i)] = label_coupling_times(left, right, c, ra, t_cap);
        walk_taus[static_cast<std::size_t>(i)] = dominating_walk_time(c, 32, rb, t_cap);
    }
    for (std::int64_t u : grid) {
        double walk_tail = 0.0;
        for (auto w : walk_taus) {
            if (w < 0 || w > u) walk_tail += 1.0;
        }
        walk_tail /= trials;
        const double se_walk = std::sqrt(walk_tail * (1.0 - walk_tail) / trials);
        for (std::int64_t label = 0; label < 16; ++label) {
            double tail = 0.0;
            for (const auto& taus : label_taus) {
                const auto t = taus[static_cast<std::size_t>(label)];
                if (t < 0 || t > u) tail += 1.0;
            }
            tail /= trials;
            const double se = std::sqrt(tail * (1.0 - tail) / trials) + se_walk;
            CHECK(tail <= walk_tail + 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("metric weights") {
    SUBCASE("n=2: distance between the two states is alpha") {
        const ChainParams c = ChainParams::make(2, 1, 0.4);
        SubsetRanker rk(2, 1);
        const double d = path_distance(0, 1, c);
        CHECK(d == doctest::Approx(c.alpha).epsilon(1e-12));
    }
    SUBCASE("every adjacent weight is >= 1 (exhaustive n <= 8)") {
        for (std::int64_t n = 2; n <= 8; ++n) {
            for (std::int64_t k = 1; k <= n - 1; ++k) {
                const ChainParams c = ChainParams::make(n, k, 0.3);
                SubsetRanker rk(n, k);
                rk.for_each([&](std::uint64_t, const std::vector<std::int64_t>& pos) {
                    for (const auto& mv : adjacent_moves(ParticleConfig::from_sites(n, pos), c, rk)) {
                        CHECK(mv.weight >= 1.0 - 1e-12);
                        CHECK(mv.mid_height >= -(n - k));
                    }
                });
            }
        }
    }
    SUBCASE("beta = 0 is rejected unless unit weights are requested") {
        const ChainParams c = ChainParams::make(4, 2, 0.0);
        CHECK_THROWS_AS(metric_weight_from_height(0, c), invalid_input);
        CHECK_THROWS_AS(path_distance(0, 1, c), invalid_input);
        CHECK(path_distance(0, 1, c, kDefaultMetricCap, true) >= 1.0);  // hop count mode
    }
}

TEST_CASE("diameter: Dijkstra between the extremes matches the closed form") {
    for (std::int64_t n = 2; n <= 9; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            for (double beta : {0.2, 0.5}) {
                const ChainParams c = ChainParams::make(n, k, beta);
                SubsetRanker rk(n, k);
                const auto [l, r] = extreme_configs(n, k);
                const double d = path_distance(rk.rank(l), rk.rank(r), c);
                CHECK(d == doctest::Approx(diameter_formula(c)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("distance between comparable paths is the weighted diamond count") {
    const ChainParams c = ChainParams::make(8, 4, 0.3);
    SubsetRanker rk(8, 4);
    const auto dist = all_pairs_distances(c);
    const std::size_t dim = static_cast<std::size_t>(rk.count());
    std::vector<PathConfig> paths(dim);
    rk.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        paths[static_cast<std::size_t>(r)] = path_from_particles(ParticleConfig::from_sites(8, pos));
    });
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            bool leq = true;
            for (std::size_t x = 0; x < paths[a].heights.size() && leq; ++x) {
                leq = paths[a].heights[x] <= paths[b].heights[x];
            }
            if (!leq) continue;
            double area = 0.0;
            for (std::int64_t x = 1; x <= 7; ++x) {
                for (std::int32_t m = paths[a].heights[static_cast<std::size_t>(x)] + 1;
                     m <= paths[b].heights[static_cast<std::size_t>(x)] - 1; m += 2) {
                    area += metric_weight_from_height(m, c);
                }
            }
            CHECK(dist[a * dim + b] == doctest::Approx(area).epsilon(1e-9));
        }
    }
}

TEST_CASE("triangle inequality on random triples (shortest-path sanity)") {
    const ChainParams c = ChainParams::make(7, 3, 0.4);
    const auto dist = all_pairs_distances(c);
    SubsetRanker rk(7, 3);
    const std::uint64_t dim = rk.count();
    Rng rng(31);
    for (int t = 0; t < 2000; ++t) {
        const std::uint64_t a = rng.below(dim), b = rng.below(dim), m = rng.below(dim);
        CHECK(dist[a * dim + b] <= dist[a * dim + m] + dist[m * dim + b] + 1e-9);
    }
}

TEST_CASE("contraction certificate") {
    SUBCASE("interior equality and boundary domination, n <= 8") {
        for (std::int64_t n = 2; n <= 8; ++n) {
            for (std::int64_t k = 1; k <= n - 1; ++k) {
                for (double beta : {0.2, 0.5}) {
                    const ChainParams c = ChainParams::make(n, k, beta);
                    const auto rep = contraction_check(c);
                    CHECK(rep.max_interior_deviation <= 1e-12);
                    CHECK(rep.max_boundary_excess <= 1e-12);
                    CHECK(rep.max_ratio <= rep.target_ratio + 1e-12);
                }
            }
        }
    }
    SUBCASE("n=2, k=1: the single pair couples in one step") {
        const ChainParams c = ChainParams::make(2, 1, 0.3);
        const auto rep = contraction_check(c);
        CHECK(rep.pairs_checked == 1);
        CHECK(rep.interior_pairs == 0);
        CHECK(rep.max_ratio == doctest::Approx(0.0));
    }
}

TEST_CASE("path-coupling upper bound forms") {
    SUBCASE("sharp form is dominated by the 2n/beta^2 form") {
        for (std::int64_t n : {8, 32, 128}) {
            for (double beta : {0.05, 0.3, 0.7}) {
                const ChainParams c = ChainParams::make(n, n / 2, beta);
                const auto b = path_coupling_upper_bound(c, 0.25);
                CHECK(b.sharp_form <= b.beta_form);
            }
        }
    }
    SUBCASE("beta = 1/n scales like n^3 log n") {
        for (std::int64_t n : {100, 1000, 10000, 100000}) {
            const ChainParams c = ChainParams::make(n, n / 2, 1.0 / static_cast<double>(n));
            const auto b = path_coupling_upper_bound(c, 0.25);
            const double scale = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n) *
                                 std::log(static_cast<double>(n));
            const double ratio = b.beta_form / scale;
            CHECK(ratio >= 0.1);
            CHECK(ratio <= 100.0);
        }
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(path_coupling_upper_bound(ChainParams::make(8, 4, 0.0), 0.25), invalid_input);
        CHECK_THROWS_AS(path_coupling_upper_bound(ChainParams::make(8, 4, 0.2), 0.0), invalid_input);
    }
}

TEST_CASE("leftmost-particle walk") {
    SUBCASE("degenerate threshold: tail is 1 at t = 0") {
        const ChainParams c = ChainParams::make(40, 20, 0.3);
        Rng rng(8);
        // b = 0.4: threshold (1/2-b)n = 4 < L(x0) = 8
        const auto rep = leftmost_walk_sim(c, 0.4, 0, 50, rng);
        CHECK(rep.fraction == doctest::Approx(1.0));
    }
    SUBCASE("strong bias keeps the chain inside G well before t_n") {
        const ChainParams c = ChainParams::make(100, 50, 0.8);
        const auto lbu_t = (1.0 - 0.4) * 99.0 * 100.0 / (2.0 * 0.8);
        Rng rng(9);
        const auto rep = leftmost_walk_sim(c, 0.1, static_cast<std::int64_t>(lbu_t / 4.0), 200, rng);
        CHECK(rep.fraction <= 0.05);  // P(X in G) ~ 1
        const double pi_g = tail_bound_G_summed(c, 0.1);
        CHECK(1.0 - rep.fraction - pi_g >= 0.9);
    }
    SUBCASE("far-right packing reproduces the free-walk drift") {
        const ChainParams c = ChainParams::make(200, 100, 0.2);
        Rng rng(10);
        const auto rep = leftmost_walk_sim(c, 0.1, 5000, 300, rng, StartPacking::kFarRight);
        // drift beta/(n-1) per step from site 10: mean ~ 10 + 5000*0.2/199 = 15.0
        CHECK(rep.mean_final_L == doctest::Approx(10.0 + 5000.0 * 0.2 / 199.0).epsilon(0.05));
    }
    SUBCASE("guards") {
        const ChainParams c = ChainParams::make(100, 50, 0.2);
        Rng rng(11);
        CHECK_THROWS_AS(leftmost_walk_sim(ChainParams::make(100, 50, 0.0), 0.1, 10, 5, rng), invalid_input);
        CHECK_THROWS_AS(leftmost_walk_sim(c, 0.0, 10, 5, rng), invalid_input);
    }
}
