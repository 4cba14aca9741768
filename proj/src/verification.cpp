#include "bexcl/verification.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "bexcl/couplings.hpp"
#include "bexcl/kernel.hpp"
#include "bexcl/mixlab.hpp"
#include "bexcl/spectral.hpp"
#include "bexcl/spectrum_oracle.hpp"

namespace bexcl {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

CheckResult check_eigenfunction_certificate(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"eigenfunction certificate ||P Phi - lambda2 Phi||_inf <= 1e-9 ||Phi||_inf", true, "", 0.0};
    double worst = 0.0;
    for (std::int64_t n = 4; n <= n_max; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            for (double beta : {0.05, 0.2, 0.5}) {
                const ChainParams params = ChainParams::make(n, k, beta);
                const TransitionMatrix P = TransitionMatrix::build(params);
                const EigenData ed = eigen_data(params);
                std::vector<double> pphi;
                P.apply_to_function(ed.phi_values, pphi);
                double norm = 0.0, resid = 0.0;
                for (std::size_t i = 0; i < pphi.size(); ++i) {
                    norm = std::max(norm, std::abs(ed.phi_values[i]));
                    resid = std::max(resid, std::abs(pphi[i] - ed.lambda2 * ed.phi_values[i]));
                }
                const double rel = resid / norm;
                worst = std::max(worst, rel);
                if (rel > 1e-9) res.passed = false;
            }
        }
    }
    res.detail = "max relative residual " + fmt(worst);
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_eigenvalue_match(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"closed-form lambda2 matches dense eigendecomposition to 1e-9", true, "", 0.0};
    double worst = 0.0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            for (double beta : {0.1, 0.4}) {
                const ChainParams params = ChainParams::make(n, k, beta);
                const TransitionMatrix P = TransitionMatrix::build(params);
                const double dev = std::abs(second_eigenvalue(params) - second_eigenvalue_dense(P));
                worst = std::max(worst, dev);
                if (dev > 1e-9) res.passed = false;
            }
        }
    }
    res.detail = "max |closed form - spectrum| " + fmt(worst);
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_detailed_balance(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"detailed balance exact in rational arithmetic", true, "", 0.0};
    std::int64_t pairs = 0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        for (std::int64_t k = 0; k <= n; ++k) {
            for (RationalBias beta : {RationalBias{1, 3}, RationalBias{3, 5}}) {
                if (!detailed_balance_exact(n, k, beta)) res.passed = false;
                ++pairs;
            }
        }
    }
    res.detail = std::to_string(pairs) + " (n,k,beta) grids checked";
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_contraction(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"path-coupling contraction: interior equality (1e-12), boundary <=", true, "", 0.0};
    double worst_interior = 0.0, worst_boundary = 0.0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            for (double beta : {0.2, 0.5}) {
                const ChainParams params = ChainParams::make(n, k, beta);
                const ContractionReport rep = contraction_check(params);
                worst_interior = std::max(worst_interior, rep.max_interior_deviation);
                worst_boundary = std::max(worst_boundary, rep.max_boundary_excess);
                if (rep.max_interior_deviation > 1e-12) res.passed = false;
                if (rep.max_boundary_excess > 1e-12) res.passed = false;
            }
        }
    }
    res.detail = "max interior |dev| " + fmt(worst_interior) + ", max boundary excess " + fmt(worst_boundary);
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_diameter(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"Dijkstra diameter equals alpha(alpha^k-1)(alpha^{n-k}-1)/(alpha-1)^2 (rel 1e-9)", true, "", 0.0};
    double worst = 0.0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            for (double beta : {0.2, 0.5}) {
                const ChainParams params = ChainParams::make(n, k, beta);
                SubsetRanker ranker(n, k);
                const auto [left, right] = extreme_configs(n, k);
                const double measured =
                    path_distance(ranker.rank(left), ranker.rank(right), params);
                const double formula = diameter_formula(params);
                const double rel = std::abs(measured - formula) / formula;
                worst = std::max(worst, rel);
                if (rel > 1e-9) res.passed = false;
            }
        }
    }
    res.detail = "max relative deviation " + fmt(worst);
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_sandwich(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"sandwich: wilson_lb <= exact tmix <= path-coupling ub", true, "", 0.0};
    std::ostringstream detail;
    for (std::int64_t n : {std::int64_t{8}, std::int64_t{10}, std::int64_t{12}}) {
        if (n > n_max) continue;
        for (double beta : {0.1, 0.3}) {
            const ChainParams params = ChainParams::make(n, n / 2, beta);
            const MixingCurve curve = exact_tv_curve(params, exact_tmix_cap(params, 0.125), 0.125);
            for (double eps : {0.25, 0.125}) {
                const auto tm = curve.tmix(eps);
                if (!tm) {
                    res.passed = false;
                    detail << " [n=" << n << " beta=" << beta << " eps=" << eps << ": curve unresolved]";
                    continue;
                }
                const double lb = wilson_lower_bound(params, eps).lower_bound_steps;
                const double ub = path_coupling_upper_bound(params, eps).beta_form;
                if (!(lb <= static_cast<double>(*tm) && static_cast<double>(*tm) <= ub)) res.passed = false;
                detail << " [n=" << n << " b=" << beta << " e=" << eps << ": " << fmt(lb) << " <= " << *tm
                       << " <= " << fmt(ub) << "]";
            }
        }
    }
    res.detail = detail.str();
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_r_bound(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"max |Phi(h') - Phi(h)| over all transitions <= 2 alpha^k (alpha - 1)", true, "", 0.0};
    double worst_ratio = 0.0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        for (std::int64_t k = 1; k <= n - 1; ++k) {
            for (double beta : {0.05, 0.2, 0.5}) {
                const ChainParams params = ChainParams::make(n, k, beta);
                const EigenData ed = eigen_data(params);
                SubsetRanker ranker(n, k);
                const double bound = std::exp(0.5 * log_r_bound(params));  // sqrt(R)
                double max_step = 0.0;
                ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
                    const ParticleConfig cfg = ParticleConfig::from_sites(n, pos);
                    for (const auto& mv : adjacent_moves(cfg, params, ranker)) {
                        max_step = std::max(max_step,
                                            std::abs(ed.phi_values[static_cast<std::size_t>(mv.to_state)] -
                                                     ed.phi_values[static_cast<std::size_t>(r)]));
                    }
                });
                worst_ratio = std::max(worst_ratio, max_step / bound);
                if (max_step > bound * (1.0 + 1e-12)) res.passed = false;
            }
        }
    }
    res.detail = "max (observed step)/(bound) " + fmt(worst_ratio);
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_tail_bounds(std::int64_t n_max) {
    Timer timer;
    CheckResult res{"stationary tails: pi(X_{j,l}) <= alpha^{-2(l-j)} and pi(G) <= n^2 alpha^{-bn}", true, "", 0.0};
    std::ostringstream detail;
    const double b = 0.2;
    for (std::int64_t n : {std::int64_t{8}, std::int64_t{10}, std::int64_t{12}}) {
        if (n > n_max) continue;
        const ChainParams params = ChainParams::make(n, n / 2, 0.4);
        const auto mass = exact_pi_by_L_R(params);
        for (std::int64_t j = 1; j <= n; ++j) {
            for (std::int64_t l = j + 1; l <= n; ++l) {
                const double bound = std::exp(-2.0 * static_cast<double>(l - j) * params.log_alpha);
                if (mass[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] > bound + 1e-15)
                    res.passed = false;
            }
        }
        const double pi_g = exact_pi_G(params, b);
        const double bound_g = tail_bound_G(params, b);
        if (pi_g > bound_g) res.passed = false;
        detail << " [n=" << n << ": pi(G)=" << fmt(pi_g) << " <= " << fmt(bound_g) << "]";
    }
    res.detail = detail.str();
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_lbu_certificate(std::uint64_t seed) {
    Timer timer;
    CheckResult res{"leftmost-particle certificate: d(t_n) >= 0.9 at n=200, beta=0.4, b=0.1", true, "", 0.0};
    const double b = 0.1;
    const ChainParams params = ChainParams::make(200, 100, 0.4);
    const auto lbu = single_particle_lower_bound(params, b);
    Rng rng(seed);
    const auto tail = leftmost_walk_sim(params, b, static_cast<std::int64_t>(std::llround(lbu.t_n)), 2000, rng);
    const double pi_g = tail_bound_G_summed(params, b);
    const double d_lower = (1.0 - tail.fraction) - pi_g;
    res.passed = d_lower >= 0.9;
    res.detail = "empirical tail " + fmt(tail.fraction) + ", pi(G) bound " + fmt(pi_g) +
                 ", d(t_n) >= " + fmt(d_lower) + " (t_n = " + fmt(lbu.t_n) + ")";
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_regime_scaling_exact() {
    Timer timer;
    CheckResult res{"regime (i) stand-in: exact tmix ratio beta=0 vs beta=1/n in [1/4, 4]", true, "", 0.0};
    std::ostringstream detail;
    for (std::int64_t n : {std::int64_t{6}, std::int64_t{8}, std::int64_t{10}, std::int64_t{12}}) {
        const std::int64_t t0 = exact_tmix(ChainParams::make(n, n / 2, 0.0), 0.25);
        const std::int64_t t1 = exact_tmix(ChainParams::make(n, n / 2, 1.0 / static_cast<double>(n)), 0.25);
        const double ratio = static_cast<double>(t0) / static_cast<double>(t1);
        if (!(ratio >= 0.25 && ratio <= 4.0)) res.passed = false;
        detail << " [n=" << n << ": " << t0 << "/" << t1 << "=" << fmt(ratio) << "]";
    }
    res.detail = detail.str();
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_regime_scaling_mc(std::uint64_t seed) {
    Timer timer;
    CheckResult res{"regime (iii) stand-in: mc tmix * beta / n^2 within x16 across n in {64,128,256}", true, "", 0.0};
    std::ostringstream detail;
    const double beta = 0.5;
    double lo = HUGE_VAL, hi = 0.0;
    Rng root(seed);
    std::uint64_t stream = 0;
    for (std::int64_t n : {std::int64_t{64}, std::int64_t{128}, std::int64_t{256}}) {
        const ChainParams params = ChainParams::make(n, n / 2, beta);
        const std::int64_t cap = 32 * n * n * 2;  // 32 n^2 / beta
        Rng rng = root.split(stream++);
        const auto est = mc_tmix_upper(params, 0.25, 400, {}, rng, cap);
        if (!est.t_upper) {
            res.passed = false;
            detail << " [n=" << n << ": unresolved]";
            continue;
        }
        const double ratio = static_cast<double>(*est.t_upper) * beta / (static_cast<double>(n) * static_cast<double>(n));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        detail << " [n=" << n << ": t=" << *est.t_upper << " ratio=" << fmt(ratio) << "]";
    }
    if (hi > 16.0 * lo) res.passed = false;
    detail << " spread x" << fmt(hi / lo);
    res.detail = detail.str();
    res.seconds = timer.seconds();
    return res;
}

CheckResult check_marginality(std::uint64_t seed) {
    Timer timer;
    CheckResult res{"coupled_step marginals match kernel rows (chi-squared, 3 sigma, 1e6 samples)", true, "", 0.0};
    const ChainParams params = ChainParams::make(6, 3, 0.2);
    const TransitionMatrix P = TransitionMatrix::build(params);
    const auto [left, right] = extreme_configs(params.n, params.k);
    const std::uint64_t row_a = P.ranker().rank(left);
    const std::uint64_t row_b = P.ranker().rank(right);
    const std::int64_t samples = 1000000;

    std::vector<std::int64_t> count_a(static_cast<std::size_t>(P.dim()), 0);
    std::vector<std::int64_t> count_b(static_cast<std::size_t>(P.dim()), 0);
    Rng rng(seed);
    const LabelledPair base = LabelledPair::start(left, right);
    for (std::int64_t i = 0; i < samples; ++i) {
        LabelledPair pair = base;
        pair.step(params, rng);
        ++count_a[static_cast<std::size_t>(P.ranker().rank(pair.first_config()))];
        ++count_b[static_cast<std::size_t>(P.ranker().rank(pair.second_config()))];
    }

    std::ostringstream detail;
    auto chi_check = [&](std::uint64_t row, const std::vector<std::int64_t>& counts, const char* tag) {
        std::vector<double> expect(static_cast<std::size_t>(P.dim()), 0.0);
        expect[static_cast<std::size_t>(row)] = P.diag(row);
        P.for_each_offdiag(row, [&](std::uint32_t c, double v) { expect[static_cast<std::size_t>(c)] += v; });
        double chi2 = 0.0;
        std::int64_t df = -1;
        for (std::size_t s = 0; s < expect.size(); ++s) {
            if (expect[s] <= 0.0) {
                if (counts[s] > 0) res.passed = false;  // mass outside the support
                continue;
            }
            const double e = expect[s] * static_cast<double>(samples);
            const double d = static_cast<double>(counts[s]) - e;
            chi2 += d * d / e;
            ++df;
        }
        const double threshold = static_cast<double>(df) + 3.0 * std::sqrt(2.0 * static_cast<double>(df));
        if (chi2 > threshold) res.passed = false;
        detail << " [" << tag << ": chi2=" << fmt(chi2) << " df=" << df << " thr=" << fmt(threshold) << "]";
    };
    chi_check(row_a, count_a, "first marginal");
    chi_check(row_b, count_b, "second marginal");
    res.detail = detail.str();
    res.seconds = timer.seconds();
    return res;
}

std::vector<CheckResult> run_acceptance() {
    return {
        check_eigenfunction_certificate(),
        check_eigenvalue_match(),
        check_detailed_balance(),
        check_contraction(),
        check_diameter(),
        check_sandwich(),
        check_r_bound(),
        check_tail_bounds(),
        check_lbu_certificate(),
        check_regime_scaling_exact(),
        check_regime_scaling_mc(),
        check_marginality(),
    };
}

std::vector<CheckResult> run_verify(std::int64_t max_n) {
    return {
        check_detailed_balance(std::min<std::int64_t>(max_n, 8)),
        check_eigenfunction_certificate(std::min<std::int64_t>(max_n, 12)),
        check_contraction(std::min<std::int64_t>(max_n, 10)),
        check_sandwich(std::min<std::int64_t>(max_n, 12)),
    };
}

}  // namespace bexcl
