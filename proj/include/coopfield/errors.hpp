#ifndef COOPFIELD_ERRORS_HPP
#define COOPFIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coopfield {

// Invalid argument values or broken type invariants.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation requested under an incompatible risk mode (e.g. bare mode with gamma > 0).
class ModeError : public std::logic_error {
public:
    explicit ModeError(const std::string& what) : std::logic_error(what) {}
};

// Input exceeds a hard size cap (oracle enumeration, Stirling table).
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// Iterative scheme failed to converge; carries the last two iterates.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double previous, double last)
        : std::runtime_error(what), previous_iterate(previous), last_iterate(last) {}
    double previous_iterate;
    double last_iterate;
};

// A computed quantity violates a mathematical validity bound (maps to exit status 4).
class NumericalValidityError : public std::runtime_error {
public:
    explicit NumericalValidityError(const std::string& what) : std::runtime_error(what) {}
};

// Command line / config file problems (maps to exit status 2).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable/unwritable files (maps to exit status 3).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coopfield

#endif
