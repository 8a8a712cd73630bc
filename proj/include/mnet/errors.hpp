#pragma once

#include <stdexcept>
#include <string>

namespace mnet {

// Malformed or truncated input data (IDX files, model containers).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid experiment configuration or out-of-contract arguments.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Shape/length mismatches between tensors, datasets and models.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mnet
