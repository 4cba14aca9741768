#include "bexcl/mixlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bexcl/couplings.hpp"
#include "bexcl/parallel.hpp"
#include "bexcl/spectral.hpp"

namespace bexcl {

double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu) {
    if (mu.size() != nu.size()) throw invalid_input("tv_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += std::abs(mu[i] - nu[i]);
    return 0.5 * s;
}

std::optional<std::int64_t> MixingCurve::tmix(double eps) const {
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        if (d_values[i] < eps) return times[i];
    }
    return std::nullopt;
}

std::int64_t exact_tmix_cap(const ChainParams& params, double eps) {
    if (params.biased() && params.k >= 1 && params.k <= params.n - 1) {
        const auto b = path_coupling_upper_bound(params, eps);
        return static_cast<std::int64_t>(std::ceil(std::max(b.beta_form, b.sharp_form))) + 2;
    }
    // symmetric case: generous multiple of the n^3 log n scale
    const double nn = static_cast<double>(params.n);
    return static_cast<std::int64_t>(std::ceil(4.0 * nn * nn * nn * (std::log(nn) + std::log(1.0 / eps) + 1.0))) + 2;
}

MixingCurve exact_tv_curve(const ChainParams& params, std::int64_t t_max, double stop_eps,
                           std::uint64_t state_cap) {
    const TransitionMatrix P = TransitionMatrix::build(params, state_cap);
    const StationaryDist pi = stationary(params, state_cap);
    const std::size_t dim = static_cast<std::size_t>(P.dim());

    MixingCurve curve;
    curve.params = params;

    // rows[i] = distribution of X_t started from state i
    std::vector<std::vector<double>> rows(dim), next(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        rows[i].assign(dim, 0.0);
        rows[i][i] = 1.0;
        next[i].assign(dim, 0.0);
    }
    std::vector<double> tv(dim, 0.0);

    const int threads = default_threads();
    for (std::int64_t t = 0; t <= t_max; ++t) {
        if (t > 0) {
            parallel_for(
                0, static_cast<std::int64_t>(dim),
                [&](std::int64_t i) {
                    P.apply_to_distribution(rows[static_cast<std::size_t>(i)], next[static_cast<std::size_t>(i)]);
                },
                threads);
            rows.swap(next);
        }
        parallel_for(
            0, static_cast<std::int64_t>(dim),
            [&](std::int64_t i) { tv[static_cast<std::size_t>(i)] = tv_distance(rows[static_cast<std::size_t>(i)], pi.probs); },
            threads);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < dim; ++i) {
            if (tv[i] > tv[arg]) arg = i;
        }
        curve.times.push_back(t);
        curve.d_values.push_back(tv[arg]);
        curve.worst_start_final = arg;
        if (stop_eps > 0.0 && tv[arg] < stop_eps) break;
    }
    for (double eps : {0.25, 0.125}) {
        if (auto t = curve.tmix(eps)) curve.tmix_eps[eps] = *t;
    }
    return curve;
}

std::vector<double> tv_curve_from_start(const ChainParams& params, const ParticleConfig& start,
                                        std::int64_t t_max, std::uint64_t state_cap) {
    const TransitionMatrix P = TransitionMatrix::build(params, state_cap);
    const StationaryDist pi = stationary(params, state_cap);
    const std::size_t dim = static_cast<std::size_t>(P.dim());
    std::vector<double> mu(dim, 0.0), next(dim, 0.0);
    mu[static_cast<std::size_t>(P.ranker().rank(start))] = 1.0;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(t_max) + 1);
    for (std::int64_t t = 0; t <= t_max; ++t) {
        if (t > 0) {
            P.apply_to_distribution(mu, next);
            mu.swap(next);
        }
        out.push_back(tv_distance(mu, pi.probs));
    }
    return out;
}

std::int64_t exact_tmix(const ChainParams& params, double eps, std::int64_t t_max,
                        std::uint64_t state_cap) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw invalid_input("exact_tmix: epsilon must be in (0,1)");
    if (t_max < 0) t_max = exact_tmix_cap(params, eps);
    MixingCurve curve = exact_tv_curve(params, t_max, eps, state_cap);
    if (curve.d_values.back() < eps) return curve.times.back();
    throw unresolved_error("exact_tmix: d(t) did not cross epsilon by t_max", std::move(curve));
}

namespace {

double wilson_score_upper(double phat, double n, double z) {
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double rad = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    return (center + rad) / denom;
}

}  // namespace

McTmixEstimate mc_tmix_upper(const ChainParams& params, double eps, std::int64_t trials,
                             const std::vector<std::int64_t>& t_grid, Rng& rng, std::int64_t t_cap,
                             double z) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw invalid_input("mc_tmix_upper: epsilon must be in (0,1)");
    McTmixEstimate est;
    est.trials = trials;
    est.t_cap = t_cap;
    if (trials <= 0) return est;  // unresolved: no data

    auto [left, right] = extreme_configs(params.n, params.k);
    est.taus.assign(static_cast<std::size_t>(trials), -1);
    parallel_for(0, trials, [&](std::int64_t i) {
        Rng stream = rng.split(static_cast<std::uint64_t>(i));
        const auto res = coupling_time(left, right, params, stream, t_cap);
        est.taus[static_cast<std::size_t>(i)] = res.time.value_or(-1);
    });
    for (auto tau : est.taus) {
        if (tau < 0) ++est.timeouts;
    }

    std::vector<std::int64_t> candidates;
    if (t_grid.empty()) {
        candidates.reserve(est.taus.size());
        for (auto tau : est.taus) {
            if (tau >= 0) candidates.push_back(tau);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    } else {
        candidates = t_grid;
        std::sort(candidates.begin(), candidates.end());
    }
    const double nt = static_cast<double>(trials);
    for (auto t : candidates) {
        std::int64_t exceed = 0;
        for (auto tau : est.taus) {
            if (tau < 0 || tau > t) ++exceed;
        }
        const double phat = static_cast<double>(exceed) / nt;
        const double ucl = wilson_score_upper(phat, nt, z);
        if (ucl < eps) {
            est.t_upper = t;
            est.tail_at_t = phat;
            est.ucl_at_t = ucl;
            break;
        }
    }
    return est;
}

double beta_from_rule(const std::string& rule, std::int64_t n) {
    const double nn = static_cast<double>(n);
    if (rule == "0") return 0.0;
    if (rule.rfind("const:", 0) == 0) return std::stod(rule.substr(6));
    auto ends_with = [&](const std::string& suffix) {
        return rule.size() >= suffix.size() && rule.compare(rule.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    auto coeff = [&](const std::string& suffix) {
        const std::string c = rule.substr(0, rule.size() - suffix.size());
        return c.empty() ? 1.0 : std::stod(c);
    };
    if (ends_with("logn/n")) return coeff("logn/n") * std::log(nn) / nn;
    if (ends_with("/n2")) return coeff("/n2") / (nn * nn);
    if (ends_with("/n")) return coeff("/n") / nn;
    throw invalid_input("beta_from_rule: unknown rule '" + rule + "'");
}

std::string regime_tag(std::int64_t n, double beta) {
    const double nb = static_cast<double>(n) * beta;
    if (nb <= 1.0) return "i";
    if (nb <= std::log(static_cast<double>(n))) return "ii";
    return "iii";
}

std::vector<SweepRecord> regime_sweep(const SweepConfig& config) {
    std::vector<SweepRecord> records;
    Rng root(config.seed);
    std::uint64_t cell = 0;
    for (auto n : config.ns) {
        for (const auto& rule : config.beta_rules) {
            SweepRecord rec;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const double beta = beta_from_rule(rule, n);
                const std::int64_t k = config.k.value_or(n / 2);
                const ChainParams params = ChainParams::make(n, k, beta);
                rec.n = n;
                rec.k = k;
                rec.beta = beta;
                rec.regime = regime_tag(n, beta);
                Rng cell_rng = root.split(cell);
                rec.seed = cell_rng.seed();

                if (params.biased() && k >= 1 && k <= n - 1) {
                    rec.wilson_lb = wilson_lower_bound(params, config.epsilon).lower_bound_steps;
                    rec.pc_ub = path_coupling_upper_bound(params, config.epsilon).beta_form;
                    // certified leftmost-particle bound: binding only when the
                    // closed-form tail + pi(G) bound leave d(t_n) >= epsilon
                    try {
                        const auto lbu = single_particle_lower_bound(params, config.lbu_b);
                        const double tail = std::min(1.0, lbu.ruin_bound + lbu.chebyshev_tail);
                        const double pi_g = tail_bound_G_summed(params, config.lbu_b);
                        if (1.0 - tail - pi_g >= config.epsilon) rec.lbu_lb = lbu.t_n;
                    } catch (const unsupported_regime&) {
                        rec.lbu_lb = 0.0;
                    }
                }

                if (binomial(n, k) <= config.exact_cap) {
                    rec.tmix = static_cast<double>(exact_tmix(params, config.epsilon, -1, config.exact_cap));
                    rec.tmix_kind = "exact";
                } else {
                    const double scale = static_cast<double>(n) * static_cast<double>(n) /
                                         std::max(beta, 1.0 / static_cast<double>(n));
                    const std::int64_t cap = static_cast<std::int64_t>(
                        static_cast<double>(config.mc_t_cap_factor) * scale);
                    auto est = mc_tmix_upper(params, config.epsilon, config.trials, {}, cell_rng, cap);
                    if (est.t_upper) {
                        rec.tmix = static_cast<double>(*est.t_upper);
                        rec.tmix_kind = "mc";
                    } else {
                        rec.tmix_kind = "unresolved";
                    }
                }

                const double nn = static_cast<double>(n);
                if (rec.tmix > 0.0) {
                    if (rec.regime == "i") {
                        rec.regime_ratio = rec.tmix / (nn * nn * nn * std::log(nn));
                    } else if (rec.regime == "ii") {
                        rec.regime_ratio = rec.tmix * beta * beta / (nn * std::log(nn));
                    } else {
                        rec.regime_ratio = rec.tmix * beta / (nn * nn);
                    }
                }
            } catch (const std::exception& ex) {
                rec.error = ex.what();
            }
            rec.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            records.push_back(std::move(rec));
            ++cell;
        }
    }
    return records;
}

}  // namespace bexcl
