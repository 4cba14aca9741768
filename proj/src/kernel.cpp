#include "bexcl/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace bexcl {

void step_inplace(ParticleConfig& sigma, const ChainParams& params, Rng& rng) {
    const std::int64_t n = params.n;
    const std::int64_t e = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - 1)));
    const bool left = sigma.occupied(e);
    const bool right = sigma.occupied(e + 1);
    if (left == right) return;
    const bool place_right = rng.bernoulli(params.p);
    if (place_right && left) {
        sigma.move_particle(e, e + 1);
    } else if (!place_right && right) {
        sigma.move_particle(e + 1, e);
    }
}

ParticleConfig step(const ParticleConfig& sigma, const ChainParams& params, Rng& rng) {
    ParticleConfig out = sigma;
    step_inplace(out, params, rng);
    return out;
}

TransitionMatrix TransitionMatrix::build(const ChainParams& params, std::uint64_t state_cap) {
    SubsetRanker ranker(params.n, params.k);
    if (ranker.count() > state_cap) throw resource_limit("TransitionMatrix: state space exceeds cap");
    TransitionMatrix tm(params, std::move(ranker));
    tm.dim_ = tm.ranker_.count();

    const std::int64_t n = params.n;
    const double pe = params.p / params.edges();
    const double qe = params.q / params.edges();

    tm.row_ptr_.assign(static_cast<std::size_t>(tm.dim_) + 1, 0);
    tm.diag_.assign(static_cast<std::size_t>(tm.dim_), 0.0);
    tm.col_.reserve(static_cast<std::size_t>(tm.dim_) * static_cast<std::size_t>(n - 1) / 2);
    tm.val_.reserve(tm.col_.capacity());

    std::vector<std::int64_t> neighbor;
    std::vector<char> occ(static_cast<std::size_t>(n) + 2, 0);
    tm.ranker_.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        std::fill(occ.begin(), occ.end(), 0);
        for (auto s : pos) occ[static_cast<std::size_t>(s)] = 1;
        double off_sum = 0.0;
        for (std::int64_t e = 1; e <= n - 1; ++e) {
            const bool l = occ[static_cast<std::size_t>(e)];
            const bool rgt = occ[static_cast<std::size_t>(e + 1)];
            if (l == rgt) continue;
            // the placement that moves the particle; the other lands on the diagonal
            neighbor = pos;
            double mass;
            if (l) {  // particle at e, moves right with prob p/(n-1)
                *std::find(neighbor.begin(), neighbor.end(), e) = e + 1;
                mass = pe;
            } else {  // particle at e+1, moves left with prob q/(n-1)
                *std::find(neighbor.begin(), neighbor.end(), e + 1) = e;
                mass = qe;
            }
            std::sort(neighbor.begin(), neighbor.end());
            tm.col_.push_back(static_cast<std::uint32_t>(tm.ranker_.rank_of_positions(neighbor)));
            tm.val_.push_back(mass);
            off_sum += mass;
        }
        tm.diag_[static_cast<std::size_t>(r)] = 1.0 - off_sum;
        tm.row_ptr_[static_cast<std::size_t>(r) + 1] = tm.col_.size();
    });
    return tm;
}

double TransitionMatrix::at(std::uint64_t i, std::uint64_t j) const {
    double v = (i == j) ? diag_[static_cast<std::size_t>(i)] : 0.0;
    for_each_offdiag(i, [&](std::uint32_t c, double x) {
        if (c == j) v += x;
    });
    return v;
}

double TransitionMatrix::row_sum(std::uint64_t i) const {
    double s = diag_[static_cast<std::size_t>(i)];
    for_each_offdiag(i, [&](std::uint32_t, double x) { s += x; });
    return s;
}

void TransitionMatrix::apply_to_distribution(const std::vector<double>& mu, std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(dim_), 0.0);
    for (std::uint64_t i = 0; i < dim_; ++i) {
        const double m = mu[static_cast<std::size_t>(i)];
        if (m == 0.0) continue;
        out[static_cast<std::size_t>(i)] += m * diag_[static_cast<std::size_t>(i)];
        for_each_offdiag(i, [&](std::uint32_t c, double x) { out[static_cast<std::size_t>(c)] += m * x; });
    }
}

void TransitionMatrix::apply_to_function(const std::vector<double>& f, std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(dim_), 0.0);
    for (std::uint64_t i = 0; i < dim_; ++i) {
        double acc = diag_[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
        for_each_offdiag(i, [&](std::uint32_t c, double x) { acc += x * f[static_cast<std::size_t>(c)]; });
        out[static_cast<std::size_t>(i)] = acc;
    }
}

std::vector<double> TransitionMatrix::dense() const {
    std::vector<double> m(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_), 0.0);
    for (std::uint64_t i = 0; i < dim_; ++i) {
        m[static_cast<std::size_t>(i * dim_ + i)] = diag_[static_cast<std::size_t>(i)];
        for_each_offdiag(i, [&](std::uint32_t c, double x) { m[static_cast<std::size_t>(i * dim_ + c)] += x; });
    }
    return m;
}

double log_stationary_weight(const ParticleConfig& sigma, const ChainParams& params) {
    return 2.0 * params.log_alpha * static_cast<double>(sigma.position_sum());
}

StationaryDist stationary(const ChainParams& params, std::uint64_t state_cap) {
    SubsetRanker ranker(params.n, params.k);
    if (ranker.count() > state_cap) throw resource_limit("stationary: state space exceeds cap");
    const double w = 2.0 * params.log_alpha;

    StationaryDist d;
    d.probs.resize(static_cast<std::size_t>(ranker.count()));
    std::vector<double> logw(static_cast<std::size_t>(ranker.count()));
    double max_log = -HUGE_VAL;
    ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        std::int64_t s = 0;
        for (auto z : pos) s += z;
        const double lw = w * static_cast<double>(s);
        logw[static_cast<std::size_t>(r)] = lw;
        max_log = std::max(max_log, lw);
    });
    double sum = 0.0;
    for (double lw : logw) sum += std::exp(lw - max_log);
    d.log_z = max_log + std::log(sum);
    for (std::size_t i = 0; i < logw.size(); ++i) d.probs[i] = std::exp(logw[i] - d.log_z);
    return d;
}

double tail_bound_G(const ChainParams& params, double b) {
    if (!params.biased()) throw invalid_input("tail_bound_G: requires beta > 0 (alpha > 1)");
    if (!(b > 0.0) || b >= 0.5) throw invalid_input("tail_bound_G: b must be in (0, 1/2)");
    const double n = static_cast<double>(params.n);
    return n * n * std::exp(-b * n * params.log_alpha);
}

double tail_bound_G_summed(const ChainParams& params, double b) {
    if (!params.biased()) throw invalid_input("tail_bound_G_summed: requires beta > 0");
    if (!(b > 0.0) || b >= 0.5) throw invalid_input("tail_bound_G_summed: b must be in (0, 1/2)");
    const std::int64_t n = params.n;
    const std::int64_t j_max = static_cast<std::int64_t>(std::floor((0.5 - b) * static_cast<double>(n)));
    const std::int64_t l_min = (n + 1) / 2;  // ceil(n/2)
    // k <= n - l_min forces R(x) >= l_min for every configuration
    if (params.k > n - l_min)
        throw unsupported_regime("tail_bound_G_summed: requires k <= n - ceil(n/2)");
    if (j_max < 1) return 0.0;
    const double la2 = 2.0 * params.log_alpha;
    // sum_{j=1}^{J} alpha^{2j} = alpha^2 (alpha^{2J} - 1)/(alpha^2 - 1)
    const double log_s1 = la2 + la2 * static_cast<double>(j_max) + std::log1p(-std::exp(-la2 * static_cast<double>(j_max))) -
                          std::log(std::expm1(la2));
    // sum_{l=M}^{n} alpha^{-2l} = alpha^{-2M} (1 - alpha^{-2(n-M+1)})/(1 - alpha^{-2})
    const double log_s2 = -la2 * static_cast<double>(l_min) +
                          std::log1p(-std::exp(-la2 * static_cast<double>(n - l_min + 1))) -
                          std::log1p(-std::exp(-la2));
    return std::exp(log_s1 + log_s2);
}

double exact_pi_G(const ChainParams& params, double b, std::uint64_t state_cap) {
    SubsetRanker ranker(params.n, params.k);
    if (ranker.count() > state_cap) throw resource_limit("exact_pi_G: state space exceeds cap");
    const StationaryDist pi = stationary(params, state_cap);
    const double threshold = (0.5 - b) * static_cast<double>(params.n);
    double mass = 0.0;
    ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        const std::int64_t leftmost = pos.empty() ? 0 : pos.front();
        if (static_cast<double>(leftmost) <= threshold) mass += pi.probs[static_cast<std::size_t>(r)];
    });
    return mass;
}

std::vector<std::vector<double>> exact_pi_by_L_R(const ChainParams& params, std::uint64_t state_cap) {
    SubsetRanker ranker(params.n, params.k);
    if (ranker.count() > state_cap) throw resource_limit("exact_pi_by_L_R: state space exceeds cap");
    const StationaryDist pi = stationary(params, state_cap);
    std::vector<std::vector<double>> mass(static_cast<std::size_t>(params.n) + 1,
                                          std::vector<double>(static_cast<std::size_t>(params.n) + 1, 0.0));
    ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        const ParticleConfig cfg = ParticleConfig::from_sites(params.n, pos);
        const std::int64_t L = cfg.leftmost_particle();
        const std::int64_t R = cfg.rightmost_hole();
        if (L >= 1 && R >= 1) mass[static_cast<std::size_t>(L)][static_cast<std::size_t>(R)] +=
            pi.probs[static_cast<std::size_t>(r)];
    });
    return mass;
}

namespace {

struct RationalChain {
    std::int64_t n, k;
    Rational p, q, ratio;  // ratio = p/q

    RationalChain(std::int64_t n_, std::int64_t k_, RationalBias beta) : n(n_), k(k_) {
        if (beta.den <= 0 || beta.num < 0 || beta.num >= beta.den)
            throw invalid_input("RationalBias: need 0 <= num/den < 1");
        p = Rational(beta.den + beta.num, 2 * beta.den);
        q = Rational(beta.den - beta.num, 2 * beta.den);
        ratio = p / q;
    }

    Rational weight(const std::vector<std::int64_t>& pos) const {
        std::int64_t s = 0;
        for (auto z : pos) s += z;
        return ratio.pow(s);
    }
};

}  // namespace

bool rational_row_check(std::int64_t n, std::int64_t k, RationalBias beta, double entry_tol) {
    RationalChain rc(n, k, beta);
    const ChainParams params = ChainParams::make(n, k, static_cast<double>(beta.num) / static_cast<double>(beta.den));
    const TransitionMatrix tm = TransitionMatrix::build(params);
    const Rational edge_inv(1, n - 1);
    const Rational pe = rc.p * edge_inv;
    const Rational qe = rc.q * edge_inv;

    bool ok = true;
    SubsetRanker ranker(n, k);
    std::vector<char> occ(static_cast<std::size_t>(n) + 2, 0);
    ranker.for_each([&](std::uint64_t r, const std::vector<std::int64_t>& pos) {
        std::fill(occ.begin(), occ.end(), 0);
        for (auto s : pos) occ[static_cast<std::size_t>(s)] = 1;
        Rational off_sum(0);
        std::int64_t off_count = 0;
        for (std::int64_t e = 1; e <= n - 1; ++e) {
            const bool l = occ[static_cast<std::size_t>(e)];
            const bool rg = occ[static_cast<std::size_t>(e + 1)];
            if (l == rg) continue;
            const Rational mass = l ? pe : qe;
            if (!mass.is_nonnegative()) ok = false;
            off_sum = off_sum + mass;
            ++off_count;
        }
        const Rational diag = Rational(1) - off_sum;
        if (!diag.is_nonnegative()) ok = false;
        if (diag + off_sum != Rational(1)) ok = false;
        if (std::abs(tm.diag(r) - diag.to_double()) > entry_tol) ok = false;
        if (static_cast<std::int64_t>(tm.offdiag_count(r)) != off_count) ok = false;
    });
    return ok;
}

bool detailed_balance_exact(std::int64_t n, std::int64_t k, RationalBias beta) {
    RationalChain rc(n, k, beta);
    SubsetRanker ranker(n, k);
    const Rational edge_inv(1, n - 1);
    const Rational pe = rc.p * edge_inv;
    const Rational qe = rc.q * edge_inv;

    bool ok = true;
    std::vector<char> occ(static_cast<std::size_t>(n) + 2, 0);
    std::vector<std::int64_t> neighbor;
    ranker.for_each([&](std::uint64_t, const std::vector<std::int64_t>& pos) {
        std::fill(occ.begin(), occ.end(), 0);
        for (auto s : pos) occ[static_cast<std::size_t>(s)] = 1;
        const Rational w = rc.weight(pos);
        for (std::int64_t e = 1; e <= n - 1; ++e) {
            // consider right-moves only; each adjacent pair is then seen once
            if (!occ[static_cast<std::size_t>(e)] || occ[static_cast<std::size_t>(e + 1)]) continue;
            neighbor = pos;
            *std::find(neighbor.begin(), neighbor.end(), e) = e + 1;
            std::sort(neighbor.begin(), neighbor.end());
            const Rational w2 = rc.weight(neighbor);
            if (w * pe != w2 * qe) ok = false;
        }
    });
    return ok;
}

}  // namespace bexcl
