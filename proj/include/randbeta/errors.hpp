#pragma once

#include <stdexcept>
#include <string>

namespace randbeta {

// Violated precondition or malformed input. CLI maps this to exit code 1.
struct ContractError : std::invalid_argument {
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured cap (point count, state count, piece count) was exceeded.
// CLI maps this to exit code 2.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace randbeta
