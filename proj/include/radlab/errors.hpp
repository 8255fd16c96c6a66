#pragma once

#include <stdexcept>
#include <string>

namespace radlab {

// Precondition / regime violation. The message names the violated condition.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure (quadrature, shooting, iteration) failed to reach its
// tolerance. Never silently degraded into a result.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Shooting bracket does not straddle the target: the terminal mismatch has the
// same sign at both bracket endpoints.
class BracketError : public NumericError {
public:
    explicit BracketError(const std::string& what) : NumericError(what) {}
};

// Boundary-value problem outside its solvability region. Carries the violated
// threshold so callers can report how far off the request was.
class ExistenceError : public DomainError {
public:
    ExistenceError(const std::string& what, double threshold)
        : DomainError(what), threshold_(threshold) {}
    double threshold() const { return threshold_; }

private:
    double threshold_;
};

}  // namespace radlab
