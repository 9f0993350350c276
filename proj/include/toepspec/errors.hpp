#pragma once

#include <stdexcept>

namespace toepspec {

/// Raised when an iterative kernel fails to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace toepspec
