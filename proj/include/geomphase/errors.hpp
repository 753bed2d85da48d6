#pragma once

#include <stdexcept>
#include <string>

namespace geomphase {

// Error taxonomy. The CLI maps config/validation/io errors to exit code 1
// and numeric/oracle failures to exit code 2.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration input (bad key, bad value, missing file).
struct config_error : error {
    using error::error;
};

// A precondition or type invariant was violated by the caller.
struct validation_error : error {
    using error::error;
};

// The integrator or a downstream computation produced untrustworthy numbers
// (non-finite values, norm drift, step-size failure).
struct numeric_error : error {
    using error::error;
};

// The brute-force cross-check could not certify its own validity
// (truncation too small, unsupported regime).
struct oracle_error : error {
    using error::error;
};

// File-system failure while writing results.
struct io_error : error {
    using error::error;
};

}  // namespace geomphase
