#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace safeplan {

// Root of every error the library throws. Callers that only care about
// "something was wrong with the input" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input is malformed with respect to the variable set it is checked against
// (value out of range, wrong arity, duplicate names, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// apply() on an action whose precondition does not hold.
class PreconditionViolation : public Error {
public:
    using Error::Error;
};

// A plan or trajectory names an action the model does not contain.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &where, const std::string &what)
        : Error(where + ": " + what), location_(where) {}

    const std::string &location() const {
        return location_;
    }

private:
    std::string location_;
};

// |states| != |actions| + 1 in a trajectory.
class StructureError : public Error {
public:
    using Error::Error;
};

// A trajectory step disagrees with the reference model.
class ConsistencyError : public Error {
public:
    ConsistencyError(std::size_t step, const std::string &what)
        : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const {
        return step_;
    }

private:
    std::size_t step_;
};

// Two observations of one action imply different effects on a variable.
// Cannot happen for trajectories produced by a deterministic SAS+ model.
class ModelInconsistencyError : public Error {
public:
    using Error::Error;
};

// Exhaustive enumeration requested over a state space larger than the cap.
class StateCapError : public Error {
public:
    using Error::Error;
};

class SamplingError : public Error {
public:
    using Error::Error;
};

// Mathematical domain error in the PAC calculators (e.g. mu = 0).
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace safeplan
