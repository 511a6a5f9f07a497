#ifndef MAGMA_ERROR_HPP
#define MAGMA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace magma {

/// Coarse classification used by front ends to pick exit codes.
enum class ErrorKind { Config, Numerical, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Bad argument or parameter outside its documented range.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class GridMismatch : public Error {
public:
    GridMismatch() : Error(ErrorKind::Config, "fields live on different grids") {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class NonFiniteValue : public NumericalError {
public:
    NonFiniteValue() : NumericalError("field contains NaN or Inf") {}
};

class NonPositiveCoefficient : public NumericalError {
public:
    explicit NonPositiveCoefficient(double min_value)
        : NumericalError("elliptic coefficient is not strictly positive (min = " +
                         std::to_string(min_value) + ")"),
          min_value(min_value) {}
    double min_value;
};

class NotConverged : public NumericalError {
public:
    NotConverged(int iterations, double residual)
        : NumericalError("conjugate gradient did not converge after " + std::to_string(iterations) +
                         " iterations (relative residual " + std::to_string(residual) + ")"),
          iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

class PositivityLost : public NumericalError {
public:
    explicit PositivityLost(double min_value)
        : NumericalError("porosity is not strictly positive (min = " + std::to_string(min_value) +
                         ")"),
          min_value(min_value) {}
    double min_value;
};

}  // namespace magma

#endif  // MAGMA_ERROR_HPP
