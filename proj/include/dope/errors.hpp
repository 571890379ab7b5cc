#pragma once

#include <stdexcept>
#include <string>

namespace dope {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: bad arguments, out-of-range parameters, schema violations.
// The CLI maps these to exit code 2.
struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// A numerical guarantee could not be met (non-convergence, precision loss,
// kernel validity). The CLI maps these to exit code 3.
struct numeric_error : error {
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

struct not_a_node_error : validation_error {
    explicit not_a_node_error(const std::string& msg) : validation_error(msg) {}
};

// Odd half-hexagon columns (0 would be a node) are documented but not built.
struct unsupported_variant_error : validation_error {
    explicit unsupported_variant_error(const std::string& msg) : validation_error(msg) {}
};

// Instance too large for exhaustive enumeration.
struct capacity_error : validation_error {
    explicit capacity_error(const std::string& msg) : validation_error(msg) {}
};

// Recurrence construction broke down even at the escalated precision.
struct precision_escalation_error : numeric_error {
    int degree;
    precision_escalation_error(const std::string& msg, int deg)
        : numeric_error(msg), degree(deg) {}
};

// Kernel handed to the sampler/statistics is not a valid (projection) kernel.
struct kernel_validity_error : numeric_error {
    explicit kernel_validity_error(const std::string& msg) : numeric_error(msg) {}
};

// Optimizer stopped without reaching the requested residual.
struct convergence_error : numeric_error {
    double last_residual;
    convergence_error(const std::string& msg, double res)
        : numeric_error(msg), last_residual(res) {}
};

// A computation needs upstream data (equilibrium quantities) it was not given.
struct dependency_error : validation_error {
    explicit dependency_error(const std::string& msg) : validation_error(msg) {}
};

}  // namespace dope
