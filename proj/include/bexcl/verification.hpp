#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bexcl {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// The certificate suite.  Each check pins its own grid and tolerances; the
// max_n arguments clip grids for the lighter CLI surface.

CheckResult check_eigenfunction_certificate(std::int64_t n_max = 12);
CheckResult check_eigenvalue_match(std::int64_t n_max = 10);
CheckResult check_detailed_balance(std::int64_t n_max = 8);
CheckResult check_contraction(std::int64_t n_max = 10);
CheckResult check_diameter(std::int64_t n_max = 10);
CheckResult check_sandwich(std::int64_t n_max = 12);
CheckResult check_r_bound(std::int64_t n_max = 10);
CheckResult check_tail_bounds(std::int64_t n_max = 12);
CheckResult check_lbu_certificate(std::uint64_t seed = 20240801);
CheckResult check_regime_scaling_exact();
CheckResult check_regime_scaling_mc(std::uint64_t seed = 20240802);
CheckResult check_marginality(std::uint64_t seed = 20240803);

// Full acceptance list in criterion order.
std::vector<CheckResult> run_acceptance();

// Lighter surface for the verify subcommand: detailed balance, eigenfunction
// residual, contraction, sandwich, with grids clipped to max_n.
std::vector<CheckResult> run_verify(std::int64_t max_n);

}  // namespace bexcl
