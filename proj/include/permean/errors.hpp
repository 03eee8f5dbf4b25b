#pragma once

#include <stdexcept>
#include <string>

namespace permean {

// Bad caller input: parameter or spec-document precondition violated.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two internal computation routes disagree, or a numeric adequacy
// check (truncation witness, tail certificate) failed mid-run.
class cross_check_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A hard mathematical invariant was violated.
class invariant_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace permean
