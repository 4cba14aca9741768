#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bexcl/couplings.hpp"
#include "bexcl/kernel.hpp"
#include "bexcl/mixlab.hpp"
#include "bexcl/spectral.hpp"
#include "bexcl/verification.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

using nlohmann::json;

struct CommonOpts {
    std::int64_t n = 10;
    std::int64_t k = -1;  // -1: floor(n/2)
    double beta = 0.2;
    std::string beta_rule;
    double epsilon = 0.25;
    std::int64_t trials = 1000;
    std::int64_t t_cap = -1;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    bool omit_timing = false;  // reproducible byte-identical outputs
};

std::int64_t effective_k(const CommonOpts& o) { return o.k >= 0 ? o.k : o.n / 2; }

double effective_beta(const CommonOpts& o) {
    return o.beta_rule.empty() ? o.beta : bexcl::beta_from_rule(o.beta_rule, o.n);
}

json config_echo(const CommonOpts& o, const std::string& subcommand) {
    json j;
    j["subcommand"] = subcommand;
    j["n"] = o.n;
    j["k"] = effective_k(o);
    j["beta"] = effective_beta(o);
    if (!o.beta_rule.empty()) j["beta_rule"] = o.beta_rule;
    j["epsilon"] = o.epsilon;
    j["trials"] = o.trials;
    j["t_cap"] = o.t_cap;
    j["seed"] = o.seed;
    j["format"] = o.format;
    return j;
}

json sweep_config_echo(const CommonOpts& o, const std::vector<std::int64_t>& ns,
                       const std::vector<std::string>& rules, std::uint64_t exact_cap) {
    json j;
    j["subcommand"] = "sweep";
    j["ns"] = ns;
    j["rules"] = rules;
    if (o.k >= 0) j["k"] = o.k;
    j["epsilon"] = o.epsilon;
    j["trials"] = o.trials;
    j["exact_cap"] = exact_cap;
    j["seed"] = o.seed;
    j["format"] = o.format;
    return j;
}

void write_json_report_with(const CommonOpts& o, json config, json data, double wall) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kVersion;
    j["config"] = std::move(config);
    j["seed"] = o.seed;
    if (!o.omit_timing) j["wall_seconds"] = wall;
    j["data"] = std::move(data);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::runtime_error("cannot open output file: " + o.out);
        os = &file;
    }
    *os << j.dump(2) << "\n";
}

void write_json_report(const CommonOpts& o, const std::string& subcommand, json data, double wall) {
    write_json_report_with(o, config_echo(o, subcommand), std::move(data), wall);
}

void write_csv_header_with(std::ostream& os, const CommonOpts& o, const json& config, double wall) {
    os << "# schema_version=" << kSchemaVersion << "\n";
    os << "# artifact_version=" << kVersion << "\n";
    os << "# config=" << config.dump() << "\n";
    os << "# seed=" << o.seed << "\n";
    if (!o.omit_timing) os << "# wall_seconds=" << wall << "\n";
}

void write_csv_header(std::ostream& os, const CommonOpts& o, const std::string& subcommand, double wall) {
    write_csv_header_with(os, o, config_echo(o, subcommand), wall);
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int cmd_spectral(const CommonOpts& o) {
    const double beta = effective_beta(o);
    if (!(beta > 0.0)) {
        std::cerr << "spectral: requires beta > 0 so that alpha = sqrt(p/q) > 1\n";
        return 2;
    }
    Stopwatch sw;
    const bexcl::ChainParams params = bexcl::ChainParams::make(o.n, effective_k(o), beta);
    const auto wilson = bexcl::wilson_lower_bound(params, o.epsilon);
    json data;
    data["lambda2"] = bexcl::second_eigenvalue(params);
    data["gap"] = params.gamma;
    data["phi_h0"] = wilson.phi_h0;
    data["log_phi_h0"] = wilson.log_phi_h0;
    data["R_bound"] = wilson.r_bound;
    data["log_R_bound"] = wilson.log_r_bound;
    data["wilson_lb"] = wilson.lower_bound_steps;
    try {
        data["regime_lb"] = bexcl::regime_lower_bound(params, o.epsilon);
    } catch (const bexcl::unsupported_regime&) {
        data["regime_lb"] = nullptr;
        const auto lbu = bexcl::single_particle_lower_bound(params, 0.1);
        data["lbu_t_n"] = lbu.t_n;
        data["lbu_ruin_bound"] = lbu.ruin_bound;
        data["lbu_chebyshev_tail"] = lbu.chebyshev_tail;
    }
    write_json_report(o, "spectral", std::move(data), sw.seconds());
    return 0;
}

int cmd_mix(const CommonOpts& o) {
    Stopwatch sw;
    const bexcl::ChainParams params = bexcl::ChainParams::make(o.n, effective_k(o), effective_beta(o));
    const std::int64_t cap = o.t_cap > 0 ? o.t_cap : bexcl::exact_tmix_cap(params, o.epsilon);
    const bexcl::MixingCurve curve = bexcl::exact_tv_curve(params, cap, o.epsilon);
    const auto tmix = curve.tmix(o.epsilon);

    if (o.format == "json") {
        json data;
        data["t"] = curve.times;
        data["d_tv"] = curve.d_values;
        data["tmix"] = tmix ? json(*tmix) : json(nullptr);
        write_json_report(o, "mix", std::move(data), sw.seconds());
        return 0;
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::runtime_error("cannot open output file: " + o.out);
        os = &file;
    }
    write_csv_header(*os, o, "mix", sw.seconds());
    *os << "t,d_tv\n" << std::setprecision(17);
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        *os << curve.times[i] << "," << curve.d_values[i] << "\n";
    }
    if (tmix) {
        *os << "# tmix eps=" << o.epsilon << " t=" << *tmix << "\n";
    } else {
        *os << "# tmix eps=" << o.epsilon << " unresolved (t_max=" << cap << ")\n";
    }
    return 0;
}

int cmd_couple(const CommonOpts& o) {
    Stopwatch sw;
    const bexcl::ChainParams params = bexcl::ChainParams::make(o.n, effective_k(o), effective_beta(o));
    const std::int64_t cap = o.t_cap > 0
                                 ? o.t_cap
                                 : static_cast<std::int64_t>(64.0 * static_cast<double>(o.n) * static_cast<double>(o.n) /
                                                             std::max(params.beta, 1.0 / static_cast<double>(o.n)));
    bexcl::Rng rng(o.seed);
    auto est = bexcl::mc_tmix_upper(params, o.epsilon, o.trials, {}, rng, cap);

    if (o.format == "json") {
        json data;
        data["taus"] = est.taus;
        data["timeouts"] = est.timeouts;
        data["t_cap"] = cap;
        data["tmix_upper_estimate"] = est.t_upper ? json(*est.t_upper) : json(nullptr);
        data["tail_at_estimate"] = est.tail_at_t;
        data["ucl_at_estimate"] = est.ucl_at_t;
        data["note"] = "extreme-pair coupling times; estimate is pair-specific";
        write_json_report(o, "couple", std::move(data), sw.seconds());
        return 0;
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::runtime_error("cannot open output file: " + o.out);
        os = &file;
    }
    write_csv_header(*os, o, "couple", sw.seconds());
    *os << "trial,tau\n";
    for (std::size_t i = 0; i < est.taus.size(); ++i) *os << i << "," << est.taus[i] << "\n";
    if (est.t_upper) {
        *os << "# tmix_upper_estimate eps=" << o.epsilon << " t=" << *est.t_upper
            << " tail=" << est.tail_at_t << " ucl=" << est.ucl_at_t << " (extreme pair; pair-specific)\n";
    } else {
        *os << "# tmix_upper_estimate eps=" << o.epsilon << " unresolved\n";
    }
    *os << "# timeouts=" << est.timeouts << " t_cap=" << cap << "\n";
    return 0;
}

int cmd_sweep(CommonOpts& o, std::vector<std::int64_t>& ns, std::vector<std::string>& rules,
              std::uint64_t& exact_cap, const std::string& config_path) {
    Stopwatch sw;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open sweep config: " + config_path);
        json file = json::parse(in);
        if (file.contains("ns")) ns = file["ns"].get<std::vector<std::int64_t>>();
        if (file.contains("rules")) rules = file["rules"].get<std::vector<std::string>>();
        if (file.contains("k")) o.k = file["k"].get<std::int64_t>();
        if (file.contains("epsilon")) o.epsilon = file["epsilon"].get<double>();
        if (file.contains("trials")) o.trials = file["trials"].get<std::int64_t>();
        if (file.contains("exact_cap")) exact_cap = file["exact_cap"].get<std::uint64_t>();
        if (file.contains("seed")) o.seed = file["seed"].get<std::uint64_t>();
    }
    bexcl::SweepConfig cfg;
    cfg.ns = ns;
    cfg.beta_rules = rules;
    if (o.k >= 0) cfg.k = o.k;
    cfg.epsilon = o.epsilon;
    cfg.exact_cap = exact_cap;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    const auto records = bexcl::regime_sweep(cfg);

    if (o.format == "json") {
        json arr = json::array();
        for (const auto& r : records) {
            json j;
            j["n"] = r.n;
            j["k"] = r.k;
            j["beta"] = r.beta;
            j["regime"] = r.regime;
            j["tmix"] = (r.tmix_kind == "exact" || r.tmix_kind == "mc") ? json(r.tmix) : json(nullptr);
            j["tmix_kind"] = r.error.empty() ? r.tmix_kind : "error";
            j["wilson_lb"] = r.wilson_lb;
            j["pc_ub"] = r.pc_ub;
            j["lbu_lb"] = r.lbu_lb;
            j["seed"] = r.seed;
            j["regime_ratio"] = r.regime_ratio;
            if (!r.error.empty()) j["error"] = r.error;
            if (!o.omit_timing) j["wall_seconds"] = r.wall_seconds;
            arr.push_back(std::move(j));
        }
        json data;
        data["records"] = std::move(arr);
        data["ratio_denominators"] = "i -> n^3 ln n, ii -> n ln n / beta^2, iii -> n^2/beta (natural log)";
        write_json_report_with(o, sweep_config_echo(o, ns, rules, exact_cap), std::move(data), sw.seconds());
        return 0;
    }

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::runtime_error("cannot open output file: " + o.out);
        os = &file;
    }
    write_csv_header_with(*os, o, sweep_config_echo(o, ns, rules, exact_cap), sw.seconds());
    *os << "n,k,beta,regime,tmix,tmix_kind,wilson_lb,pc_ub,lbu_lb,seed\n" << std::setprecision(17);
    for (const auto& r : records) {
        *os << r.n << "," << r.k << "," << r.beta << "," << r.regime << ",";
        if (r.tmix_kind == "exact" || r.tmix_kind == "mc") {
            *os << r.tmix;
        }
        *os << "," << (r.error.empty() ? r.tmix_kind : "error") << "," << r.wilson_lb << "," << r.pc_ub
            << "," << r.lbu_lb << "," << r.seed << "\n";
    }
    // headline regime ratios, one comment line per record
    for (const auto& r : records) {
        if (r.regime_ratio > 0.0) {
            *os << "# ratio n=" << r.n << " regime=" << r.regime << " value=" << r.regime_ratio
                << " (denominators: i -> n^3 ln n, ii -> n ln n / beta^2, iii -> n^2/beta; natural log)\n";
        }
    }
    return 0;
}

int cmd_verify(std::int64_t max_n) {
    const auto results = bexcl::run_verify(max_n);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " -- " << r.detail << "\n";
        all = all && r.passed;
    }
    std::cout << (all ? "verify: all certificates passed\n" : "verify: certificate failure\n");
    return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"biased exclusion process laboratory"};
    app.require_subcommand(1);

    CommonOpts o;
    std::vector<std::int64_t> sweep_ns{8, 12, 16};
    std::vector<std::string> sweep_rules{"0", "1/n", "logn/n", "const:0.3"};
    std::uint64_t sweep_exact_cap = 2000;
    std::string sweep_config_path;
    std::int64_t verify_max_n = 10;

    auto add_common = [&](CLI::App* sub, bool needs_chain) {
        if (needs_chain) {
            sub->add_option("--n", o.n, "path length");
            sub->add_option("--k", o.k, "particle count (default floor(n/2))");
            sub->add_option("--beta", o.beta, "bias in [0,1)");
            sub->add_option("--beta-rule", o.beta_rule, "bias rule: 0 | const:<v> | <c>/n | <c>/n2 | <c>logn/n");
        }
        sub->add_option("--epsilon", o.epsilon, "target accuracy");
        sub->add_option("--trials", o.trials, "Monte Carlo trials");
        sub->add_option("--t-cap", o.t_cap, "step cap");
        sub->add_option("--seed", o.seed, "RNG seed (echoed in outputs)");
        sub->add_option("--out", o.out, "output file (stdout when omitted)");
        sub->add_option("--format", o.format, "csv|json");
        sub->add_flag("--omit-timing", o.omit_timing, "omit wall time for byte-identical reruns");
    };

    auto* spectral = app.add_subcommand("spectral", "closed-form eigenvalue, eigenfunction and bound report");
    add_common(spectral, true);
    auto* mix = app.add_subcommand("mix", "exact worst-case TV mixing curve");
    add_common(mix, true);
    auto* couple = app.add_subcommand("couple", "coupling times from the extreme pair");
    add_common(couple, true);
    auto* sweep = app.add_subcommand("sweep", "regime sweep across n and bias rules");
    add_common(sweep, false);
    sweep->add_option("--ns", sweep_ns, "path lengths");
    sweep->add_option("--rules", sweep_rules, "bias rules");
    sweep->add_option("--exact-cap", sweep_exact_cap, "state-count cap for the exact evaluator");
    sweep->add_option("--k", o.k, "particle count (default floor(n/2))");
    sweep->add_option("--config", sweep_config_path, "JSON sweep configuration (keys: ns, rules, k, epsilon, trials, exact_cap, seed)");
    auto* verify = app.add_subcommand("verify", "run the certificate suite");
    verify->add_option("--max-n", verify_max_n, "largest path length in the grids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spectral->parsed()) return cmd_spectral(o);
        if (mix->parsed()) return cmd_mix(o);
        if (couple->parsed()) return cmd_couple(o);
        if (sweep->parsed()) return cmd_sweep(o, sweep_ns, sweep_rules, sweep_exact_cap, sweep_config_path);
        if (verify->parsed()) return cmd_verify(verify_max_n);
    } catch (const bexcl::invalid_input& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const bexcl::unsupported_regime& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
