#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Raised when a numerical routine cannot reach the requested tolerance.
/// Carries the best estimate obtained and the error bound achieved.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_achieved)
        : std::runtime_error(what), best_estimate_(best_estimate), error_achieved_(error_achieved) {}

    double best_estimate() const { return best_estimate_; }
    double error_achieved() const { return error_achieved_; }

private:
    double best_estimate_;
    double error_achieved_;
};

/// Argument outside the mathematical domain of an operation (e.g. radius >= 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace bergman
