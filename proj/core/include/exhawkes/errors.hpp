#pragma once

#include <stdexcept>
#include <string>

namespace exhawkes {

/// Problem with the data itself (bad counts, gaps, supercritical blow-up).
/// The CLI maps this to exit code 1.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem with how the run was configured (missing column, unknown name).
/// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace exhawkes
