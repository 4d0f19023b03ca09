#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfmix {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    CapacityError(std::size_t dimension, std::size_t cap)
        : Error("dimension " + std::to_string(dimension) + " exceeds cap " + std::to_string(cap)),
          dimension_(dimension), cap_(cap) {}
    std::size_t dimension() const { return dimension_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t dimension_;
    std::size_t cap_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> best)
        : Error(what), best_(std::move(best)) {}
    const std::vector<double>& best_estimates() const { return best_; }

private:
    std::vector<double> best_;
};

class ResonanceError : public Error {
public:
    using Error::Error;
};

class DegeneracyError : public Error {
public:
    DegeneracyError(double gap) : Error("near-degenerate ground state, gap " + std::to_string(gap)), gap_(gap) {}
    double gap() const { return gap_; }

private:
    double gap_;
};

}  // namespace bfmix
