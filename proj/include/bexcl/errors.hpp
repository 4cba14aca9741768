#pragma once

#include <stdexcept>
#include <string>

namespace bexcl {

// Bad argument values (out-of-range rank, malformed path, eps outside (0,1), ...).
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation asked for outside the parameter region where its formula is valid.
struct unsupported_regime : std::domain_error {
    using std::domain_error::domain_error;
};

// State space (or similar) exceeds the configured cap.
struct resource_limit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bexcl
