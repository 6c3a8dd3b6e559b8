#pragma once

#include <stdexcept>
#include <string>

namespace sll {

/// Field length does not match the grid it is used with.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition (time grids, key reuse, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid experiment configuration or parameter set.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear solve or consistency check produced an unacceptable residual.
class NumericalFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite state detected after a time step.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, const std::string& what)
        : std::runtime_error(what + " (t = " + std::to_string(t) + ")"), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace sll
