#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wsrk {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class UnknownName : public Error {
public:
    using Error::Error;
};

/// A family parameter hit one of its excluded values. `constraint()` is the
/// human-readable name of the failed admissibility condition, e.g. "c2 != 0".
class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(std::string constraint)
        : Error("constraint violated: " + constraint), constraint_(std::move(constraint)) {}

    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

/// A trajectory produced a non-finite state.
class DivergenceError : public Error {
public:
    DivergenceError(double t, std::vector<double> state, std::size_t count = 1)
        : Error(make_message(t, count)), t_(t), state_(std::move(state)), count_(count) {}

    double time() const noexcept { return t_; }
    const std::vector<double>& state() const noexcept { return state_; }
    std::size_t count() const noexcept { return count_; }

private:
    static std::string make_message(double t, std::size_t count) {
        return "trajectory diverged at t=" + std::to_string(t) +
               (count > 1 ? " (" + std::to_string(count) + " trajectories)" : std::string{});
    }

    double t_;
    std::vector<double> state_;
    std::size_t count_;
};

}  // namespace wsrk
