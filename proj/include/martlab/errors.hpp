#pragma once

#include <stdexcept>
#include <string>

namespace martlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input document malformed (bad syntax, missing field, bad schema).
struct ParseError : Error {
    using Error::Error;
};

// Operation called outside its contract (t below the filling bound,
// factor outside (0,2), polynomial fails q(0) >= 2, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// An exhaustive enumeration would exceed the configured budget.
// Never truncated silently.
struct BudgetError : Error {
    using Error::Error;
};

// A descriptor could not be evaluated (stake table queried past its
// depth, predictor layout too thin, ...). Message names the node.
struct EvalError : Error {
    using Error::Error;
};

// A value does not fit the 64-bit position interface.
struct RangeError : Error {
    using Error::Error;
};

// Cap on brute-force run enumeration. Exceeding it raises BudgetError.
struct Budget {
    std::uint64_t max_runs = std::uint64_t{1} << 20;

    void require_runs(std::uint64_t needed, const std::string& what) const {
        if (needed > max_runs)
            throw BudgetError(what + ": " + std::to_string(needed) +
                              " runs exceed budget " + std::to_string(max_runs));
    }
};

}  // namespace martlab
