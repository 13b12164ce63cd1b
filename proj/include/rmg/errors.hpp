#pragma once

#include <stdexcept>
#include <string>

namespace rmg {

// Parameter outside an operation's documented domain.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Work would exceed an enumeration / materialization budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Search completed without a witness (e.g. no coset leader below the bound).
struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rmg
