#pragma once

#include <stdexcept>
#include <string>

namespace roomsrl {

// Bad key/value in a config file or flag override.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened, read, or parsed.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite value detected where the numerics require finiteness.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace roomsrl
