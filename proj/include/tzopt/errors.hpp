#pragma once

#include <stdexcept>
#include <string>

namespace tzopt {

/// Problems with inputs: malformed files, out-of-range arguments,
/// infeasible design requests. CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Problems that arise while computing on valid inputs: bandwidth too
/// small, collinear designs, non-convergence. CLI exit code 3.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tzopt
