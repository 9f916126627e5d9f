#pragma once

#include <stdexcept>

namespace matryoshka {

// Invalid user-supplied parameters (CLI exit code 2).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Solver non-convergence or verification mismatch (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace matryoshka
