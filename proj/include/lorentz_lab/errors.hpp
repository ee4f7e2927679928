#pragma once

#include <stdexcept>
#include <string>

namespace lorentz_lab {

/// Invalid numeric input: bad bounds, negative values, broken invariants.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation was requested in a setting the caller did not acknowledge,
/// e.g. a non-integrable weight head without permission to truncate.
class configuration_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters do not belong to the requested characterization regime.
class dispatch_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace lorentz_lab
