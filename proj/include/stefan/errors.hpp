#pragma once
#include <stdexcept>

namespace stefan {

// Bad run configuration / schema violation (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discrete invariant violated at runtime (CLI exit code 3).
struct stability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A level crossing requested from a profile that never attains it.
struct no_crossing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stefan
