#pragma once

#include <stdexcept>
#include <string>

namespace effcap {

// Invalid argument or configuration (CLI exit code 1).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A bracketed search failed to bracket or to converge (CLI exit code 2).
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Too few samples in the queue-length tail to fit a decay rate.
class InsufficientTailError : public std::runtime_error {
public:
    explicit InsufficientTailError(const std::string& what) : std::runtime_error(what) {}
};

// The simulated queue is empty or non-stationary.
class DegenerateQueueError : public std::runtime_error {
public:
    explicit DegenerateQueueError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace effcap
