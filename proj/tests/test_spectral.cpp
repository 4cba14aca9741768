#include "doctest.h"

#include <cmath>

#include "bexcl/couplings.hpp"
#include "bexcl/spectral.hpp"
#include "bexcl/spectrum_oracle.hpp"

using namespace bexcl;

namespace {

// refresh path vertex i to a local extremum when possible
bool refresh(PathConfig& h, std::int64_t i, bool to_max) {
    const auto lo = h.heights[static_cast<std::size_t>(i - 1)];
    const auto hi = h.heights[static_cast<std::size_t>(i + 1)];
    if (lo != hi) return false;
    h.heights[static_cast<std::size_t>(i)] = to_max ? lo + 1 : lo - 1;
    return true;
}

}  // namespace

TEST_CASE("phi_single: boundary zeros, pure sine at beta = 0") {
    for (double beta : {0.0, 0.1, 0.5}) {
        const ChainParams c = ChainParams::make(12, 6, beta);
        CHECK(phi_single(0, c) == 0.0);
        CHECK(std::abs(phi_single(12, c)) <= 1e-12 * std::exp(12 * c.log_alpha));
    }
    const ChainParams c0 = ChainParams::make(4, 2, 0.0);
    CHECK(phi_single(1, c0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK(phi_single(2, c0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(phi_single(3, c0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(phi_single(-1, c0), invalid_input);
    CHECK_THROWS_AS(phi_single(5, c0), invalid_input);
}

TEST_CASE("phi_single satisfies the absorbing-walk eigenrelation") {
    for (std::int64_t n : {10, 50, 100}) {
        for (double beta : {0.1, 0.5}) {
            const ChainParams c = ChainParams::make(n, n / 2, beta);
            const double lambda = 2.0 * std::sqrt(c.p * c.q) * std::cos(M_PI / static_cast<double>(n));
            for (std::int64_t x = 1; x <= n - 1; ++x) {
                const double lhs = lambda * phi_single(x, c);
                const double rhs = c.p * phi_single(x - 1, c) + c.q * phi_single(x + 1, c);
                const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
                CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("g* values at the path ends") {
    for (std::int64_t n : {4, 9}) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            const ChainParams c = ChainParams::make(n, k, 0.3);
            SubsetRanker rk(n, k);
            rk.for_each([&](std::uint64_t, const std::vector<std::int64_t>& pos) {
                const PathConfig h = path_from_particles(ParticleConfig::from_sites(n, pos));
                CHECK(g_star(h, 0, c) == doctest::Approx(1.0).epsilon(1e-15));
                CHECK(g_star(h, n, c) ==
                      doctest::Approx(std::pow(c.theta, static_cast<double>(n - k))).epsilon(1e-12));
            });
        }
    }
}

TEST_CASE("one-step mean identity for g*: E[g*_{h~(i)}(i)] = q g*(i-1) + p g*(i+1)") {
    for (std::int64_t n = 4; n <= 10; ++n) {
        for (std::int64_t k : {std::int64_t{1}, n / 2, n - 1}) {
            for (double beta : {0.1, 0.4}) {
                const ChainParams c = ChainParams::make(n, k, beta);
                SubsetRanker rk(n, k);
                rk.for_each([&](std::uint64_t, const std::vector<std::int64_t>& pos) {
                    const PathConfig h = path_from_particles(ParticleConfig::from_sites(n, pos));
                    for (std::int64_t i = 1; i <= n - 1; ++i) {
                        PathConfig up = h, down = h;
                        const bool cu = refresh(up, i, true);
                        const bool cd = refresh(down, i, false);
                        double lhs, lhs_g;
                        if (cu || cd) {
                            lhs = c.q * g_star(up, i, c) + c.p * g_star(down, i, c);
                            lhs_g = c.q * g_value(up, i, c) + c.p * g_value(down, i, c);
                        } else {
                            lhs = g_star(h, i, c);
                            lhs_g = g_value(h, i, c);
                        }
                        const double rhs = c.q * g_star(h, i - 1, c) + c.p * g_star(h, i + 1, c);
                        const double rhs_g = c.q * g_value(h, i - 1, c) + c.p * g_value(h, i + 1, c);
                        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
                        CHECK(lhs_g - rhs_g == doctest::Approx(0.0).epsilon(1e-12));
                    }
                });
            }
        }
    }
}

TEST_CASE("boundary identity q g(0) phi(1) + p g(n) phi(n-1) = 0 on every path") {
    for (std::int64_t n : {4, 6, 8, 10}) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            const ChainParams c = ChainParams::make(n, k, 0.35);
            SubsetRanker rk(n, k);
            rk.for_each([&](std::uint64_t, const std::vector<std::int64_t>& pos) {
                const PathConfig h = path_from_particles(ParticleConfig::from_sites(n, pos));
                const double t1 = c.q * g_value(h, 0, c) * phi_single(1, c);
                const double t2 = c.p * g_value(h, n, c) * phi_single(n - 1, c);
                CHECK(std::abs(t1 + t2) <= 1e-12 * std::max({std::abs(t1), std::abs(t2), 1.0}));
            });
        }
    }
}

TEST_CASE("Phi is an eigenvector of P with the closed-form eigenvalue") {
    for (std::int64_t n = 4; n <= 9; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            for (double beta : {0.05, 0.2, 0.5}) {
                const ChainParams c = ChainParams::make(n, k, beta);
                const TransitionMatrix P = TransitionMatrix::build(c);
                const EigenData ed = eigen_data(c);
                std::vector<double> out;
                P.apply_to_function(ed.phi_values, out);
                double norm = 0.0;
                for (double v : ed.phi_values) norm = std::max(norm, std::abs(v));
                for (std::size_t i = 0; i < out.size(); ++i) {
                    CHECK(std::abs(out[i] - ed.lambda2 * ed.phi_values[i]) <= 1e-9 * norm);
                }
            }
        }
    }
}

TEST_CASE("Phi is monotone in the path order, exhaustive n <= 10") {
    for (std::int64_t n : {6, 10}) {
        const std::int64_t k = n / 2;
        const ChainParams c = ChainParams::make(n, k, 0.3);
        SubsetRanker rk(n, k);
        std::vector<PathConfig> paths(static_cast<std::size_t>(rk.count()));
        std::vector<double> phi(static_cast<std::size_t>(rk.count()));
        rk.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
            paths[static_cast<std::size_t>(r)] = path_from_particles(ParticleConfig::from_sites(n, pos));
            phi[static_cast<std::size_t>(r)] = eigenfunction_value(paths[static_cast<std::size_t>(r)], c);
        });
        for (std::size_t a = 0; a < paths.size(); ++a) {
            for (std::size_t b = 0; b < paths.size(); ++b) {
                bool leq = true;
                for (std::int64_t x = 0; x <= n && leq; ++x) {
                    leq = paths[a].heights[static_cast<std::size_t>(x)] <= paths[b].heights[static_cast<std::size_t>(x)];
                }
                if (leq) CHECK(phi[a] <= phi[b] + 1e-12);
            }
        }
    }
}

TEST_CASE("E_pi[Phi] = 0 and xi = E_pi[Psi]") {
    for (std::int64_t n : {4, 6, 8, 10}) {
        for (std::int64_t k : {std::int64_t{1}, n / 2}) {
            const ChainParams c = ChainParams::make(n, k, 0.25);
            const EigenData ed = eigen_data(c);
            const StationaryDist pi = stationary(c);
            SubsetRanker rk(n, k);
            double mean_phi = 0.0, mean_psi = 0.0, norm = 0.0;
            rk.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
                const PathConfig h = path_from_particles(ParticleConfig::from_sites(n, pos));
                double psi = 0.0;
                for (std::int64_t x = 1; x <= n - 1; ++x) {
                    psi += std::exp(h.heights[static_cast<std::size_t>(x)] * c.log_alpha) *
                           std::sin(M_PI * static_cast<double>(x) / static_cast<double>(n));
                }
                mean_phi += pi.probs[static_cast<std::size_t>(r)] * ed.phi_values[static_cast<std::size_t>(r)];
                mean_psi += pi.probs[static_cast<std::size_t>(r)] * psi;
                norm = std::max(norm, std::abs(ed.phi_values[static_cast<std::size_t>(r)]));
            });
            CHECK(std::abs(mean_phi) <= 1e-9 * std::max(norm, 1.0));
            CHECK(mean_psi == doctest::Approx(ed.xi_const).epsilon(1e-9));
        }
    }
}

TEST_CASE("the two forms of Phi agree up to a state-independent constant") {
    for (std::int64_t n : {5, 8}) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            const ChainParams c = ChainParams::make(n, k, 0.4);
            SubsetRanker rk(n, k);
            double sum = 0.0, sum2 = 0.0;
            rk.for_each([&](std::uint64_t, const std::vector<std::int64_t>& pos) {
                const PathConfig h = path_from_particles(ParticleConfig::from_sites(n, pos));
                const double d = eigenfunction_value(h, c) - eigenfunction_value_gsum(h, c);
                sum += d;
                sum2 += d * d;
            });
            const double m = sum / static_cast<double>(rk.count());
            const double var = sum2 / static_cast<double>(rk.count()) - m * m;
            CHECK(var <= 1e-18);
        }
    }
}

TEST_CASE("second eigenvalue") {
    SUBCASE("n=2 closed form is 0; the 2x2 kernel has spectrum {1, 0}") {
        const ChainParams c = ChainParams::make(2, 1, 0.4);
        CHECK(second_eigenvalue(c) == doctest::Approx(0.0).epsilon(1e-15));
        const auto spectrum = reversible_spectrum(TransitionMatrix::build(c));
        CHECK(spectrum[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(spectrum[1] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("n=3, k=1, p=2/3: frozen value (1 + sqrt(2)/3)/2") {
        const ChainParams c = ChainParams::make(3, 1, 1.0 / 3.0);
        CHECK(second_eigenvalue(c) == doctest::Approx(0.7357022603955159).epsilon(1e-12));
        CHECK(second_eigenvalue_dense(TransitionMatrix::build(c)) ==
              doctest::Approx(0.7357022603955159).epsilon(1e-10));
    }
    SUBCASE("closed form matches the dense spectrum across the grid") {
        for (std::int64_t n = 2; n <= 8; ++n) {
            for (std::int64_t k = 1; k <= n - 1; ++k) {
                for (double beta : {0.1, 0.4}) {
                    const ChainParams c = ChainParams::make(n, k, beta);
                    const double dense = second_eigenvalue_dense(TransitionMatrix::build(c));
                    CHECK(std::abs(second_eigenvalue(c) - dense) <= 1e-9);
                }
            }
        }
    }
    SUBCASE("gap identity: gamma (n-1) = 1 - sqrt(1-beta^2) cos(pi/n)") {
        for (std::int64_t n : {2, 5, 16, 1000}) {
            for (double beta : {0.0, 0.1, 0.6}) {
                const ChainParams c = ChainParams::make(n, n / 2, beta);
                const double lhs = c.gamma * static_cast<double>(n - 1);
                const double rhs =
                    1.0 - std::sqrt(1.0 - beta * beta) * std::cos(M_PI / static_cast<double>(n));
                CHECK(std::abs(lhs - rhs) <= 1e-15);
            }
        }
    }
}

TEST_CASE("Phi(h0): closed form equals direct summation") {
    SUBCASE("canonical k = n/2 grid") {
        for (std::int64_t n : {4, 6, 8, 10, 12}) {
            for (double beta : {0.1, 0.3}) {
                const ChainParams c = ChainParams::make(n, n / 2, beta);
                const double direct = eigenfunction_value(h0_path(c), c);
                CHECK(phi_h0_closed_form(c) == doctest::Approx(direct).epsilon(1e-9));
                CHECK(phi_h0_direct(c) == doctest::Approx(direct).epsilon(1e-12));
                CHECK(std::exp(log_phi_h0_closed_form(c)) == doctest::Approx(direct).epsilon(1e-9));
            }
        }
    }
    SUBCASE("k < n/2, second sum nonempty") {
        for (std::int64_t k : {1, 2}) {
            const ChainParams c = ChainParams::make(6, k, 0.2);
            CHECK(phi_h0_closed_form(c) ==
                  doctest::Approx(eigenfunction_value(h0_path(c), c)).epsilon(1e-9));
        }
    }
    SUBCASE("unsupported shapes throw") {
        CHECK_THROWS_AS(phi_h0_closed_form(ChainParams::make(7, 3, 0.2)), unsupported_regime);
        CHECK_THROWS_AS(phi_h0_closed_form(ChainParams::make(8, 5, 0.2)), unsupported_regime);
        CHECK_THROWS_AS(phi_h0_closed_form(ChainParams::make(8, 4, 0.0)), invalid_input);
    }
}

TEST_CASE("Phi(h0) dominates the product-form lower bound at b = floor(k/2)") {
    for (std::int64_t n : {6, 8, 10, 12}) {
        const std::int64_t k = n / 2;
        for (double beta : {0.1, 0.3}) {
            const ChainParams c = ChainParams::make(n, k, beta);
            const std::int64_t b = std::max<std::int64_t>(1, k / 2);
            CHECK(phi_h0_lower_bound(c, b) <= eigenfunction_value(h0_path(c), c));
        }
    }
    CHECK_THROWS_AS(phi_h0_lower_bound(ChainParams::make(8, 4, 0.2), 4), invalid_input);
    CHECK_THROWS_AS(phi_h0_lower_bound(ChainParams::make(8, 4, 0.2), 0), invalid_input);
}

TEST_CASE("wilson lower bound") {
    SUBCASE("sandwich below the exact mixing time is covered by the acceptance suite; spot-check shape") {
        const ChainParams c = ChainParams::make(8, 4, 0.1);
        const auto rep = wilson_lower_bound(c, 0.25);
        CHECK(rep.lower_bound_steps >= 0.0);
        CHECK(rep.phi_h0 == doctest::Approx(eigenfunction_value(h0_path(c), c)).epsilon(1e-9));
        const double sqrt_r = 2.0 * std::exp(static_cast<double>(c.k) * c.log_alpha) * (c.alpha - 1.0);
        CHECK(rep.r_bound == doctest::Approx(sqrt_r * sqrt_r).epsilon(1e-12));
    }
    SUBCASE("epsilon -> 1 clamps the bound to zero") {
        const ChainParams c = ChainParams::make(8, 4, 0.1);
        CHECK(wilson_lower_bound(c, 0.999999).lower_bound_steps == 0.0);
    }
    SUBCASE("monotone nonincreasing in epsilon") {
        const ChainParams c = ChainParams::make(12, 6, 0.2);
        double prev = HUGE_VAL;
        for (double eps : {0.01, 0.05, 0.125, 0.25, 0.5, 0.9}) {
            const double v = wilson_lower_bound(c, eps).lower_bound_steps;
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
    SUBCASE("invalid epsilon and beta rejected") {
        const ChainParams c = ChainParams::make(8, 4, 0.1);
        CHECK_THROWS_AS(wilson_lower_bound(c, 0.0), invalid_input);
        CHECK_THROWS_AS(wilson_lower_bound(c, 1.0), invalid_input);
        CHECK_THROWS_AS(wilson_lower_bound(ChainParams::make(8, 4, 0.0), 0.25), invalid_input);
    }
    SUBCASE("large-n log-space evaluation stays finite") {
        const ChainParams c = ChainParams::make(1000000, 500000, 1e-5);
        const auto rep = wilson_lower_bound(c, 0.25);
        CHECK(std::isfinite(rep.log_phi_h0));
        CHECK(std::isfinite(rep.lower_bound_steps));
        CHECK(rep.lower_bound_steps > 0.0);
    }
}

TEST_CASE("max one-step change of Phi is within the analytic bound (exhaustive n <= 8)") {
    for (std::int64_t n = 3; n <= 8; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            const ChainParams c = ChainParams::make(n, k, 0.3);
            const EigenData ed = eigen_data(c);
            SubsetRanker rk(n, k);
            const double bound = 2.0 * std::exp(static_cast<double>(k) * c.log_alpha) * (c.alpha - 1.0);
            rk.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
                const ParticleConfig cfg = ParticleConfig::from_sites(n, pos);
                for (const auto& mv : adjacent_moves(cfg, c, rk)) {
                    CHECK(std::abs(ed.phi_values[static_cast<std::size_t>(mv.to_state)] -
                                   ed.phi_values[static_cast<std::size_t>(r)]) <= bound * (1.0 + 1e-12));
                }
            });
        }
    }
}

TEST_CASE("regime lower-bound formulas") {
    SUBCASE("beta = 0 recovers n^3 (log n + log 3)/pi^2 at eps = 1/4") {
        const ChainParams c = ChainParams::make(100, 50, 0.0);
        const double expected = 1e6 * (std::log(100.0) + std::log(3.0)) / (M_PI * M_PI);
        CHECK(regime_lower_bound(c, 0.25) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("boundary algebra: at beta = log n / n the (ii) coefficient is n^3/log^2 n") {
        const double n = 4096.0;
        const double beta = std::log(n) / n;
        CHECK(n / (beta * beta) == doctest::Approx(n * n * n / (std::log(n) * std::log(n))).epsilon(1e-12));
    }
    SUBCASE("agrees with the wilson bound within a factor of two deep in regime (ii)") {
        const ChainParams c = ChainParams::make(1000000, 500000, 1e-5);
        const double guide = regime_lower_bound(c, 0.25);
        const double certificate = wilson_lower_bound(c, 0.25).lower_bound_steps;
        CHECK(guide <= 2.0 * certificate);
        CHECK(guide >= 0.5 * certificate);
    }
    SUBCASE("n beta > log n is rejected") {
        CHECK_THROWS_AS(regime_lower_bound(ChainParams::make(100, 50, 0.5), 0.25), unsupported_regime);
    }
}

TEST_CASE("single-particle bound ingredients") {
    SUBCASE("pinned arithmetic: n=200, beta=0.2, b=0.1 gives t_n = 59700") {
        const auto out = single_particle_lower_bound(ChainParams::make(200, 100, 0.2), 0.1);
        CHECK(out.t_n == doctest::Approx(59700.0).epsilon(1e-12));
        CHECK(out.ruin_bound <= out.ruin_bound_exp);
    }
    SUBCASE("Chebyshev ingredient vanishes as beta n grows") {
        double prev = HUGE_VAL;
        for (std::int64_t n : {100, 1000, 10000, 100000}) {
            const auto out = single_particle_lower_bound(ChainParams::make(n, n / 2, 0.2), 0.1);
            CHECK(out.chebyshev_tail < prev);
            prev = out.chebyshev_tail;
        }
    }
    SUBCASE("b outside (0, 1/8] rejected") {
        const ChainParams c = ChainParams::make(100, 50, 0.2);
        CHECK_THROWS_AS(single_particle_lower_bound(c, 0.0), invalid_input);
        CHECK_THROWS_AS(single_particle_lower_bound(c, 0.2), invalid_input);
        CHECK_THROWS_AS(single_particle_lower_bound(ChainParams::make(100, 50, 0.0), 0.1), invalid_input);
    }
}
