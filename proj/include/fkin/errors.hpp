#ifndef FKIN_ERRORS_HPP
#define FKIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fkin
{

/// Thrown when Gamma is evaluated at one of its poles (0, -1, -2, ...).
class GammaDomainError : public std::domain_error
{
public:
    explicit GammaDomainError(double argument)
        : std::domain_error("gamma: pole at non-positive integer " + std::to_string(argument)),
          argument_(argument)
    {
    }

    double argument() const noexcept { return argument_; }

private:
    double argument_;
};

/// An argument outside the operation's mathematical domain (t <= a, nu <= 0, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// A series that did not meet its stopping rule within the allowed number of terms.
class NonConvergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation requested in a regime the evaluator makes no accuracy claim for.
class UnsupportedRegimeError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

class OverflowError : public std::overflow_error
{
public:
    using std::overflow_error::overflow_error;
};

/// Grids of two operands do not describe the same mesh.
class GridMismatchError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the Volterra oracle when a step cannot be solved or an iteration blows up.
class OracleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace fkin

#endif
