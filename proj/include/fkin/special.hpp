#ifndef FKIN_SPECIAL_HPP
#define FKIN_SPECIAL_HPP

// Gamma function: Stirling series with fixed Bernoulli coefficients for
// x >= 10, upward recurrence into that range below it, exact factorials at
// small integers, and the reflection formula for x < 0.5.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "errors.hpp"

namespace fkin
{

/// Largest x with Gamma(x) representable as a double.
inline constexpr double gamma_overflow_threshold = 171.62437695630272;

struct GammaValue
{
    double value;
    bool overflow; ///< value is +inf because Gamma(x) exceeds DBL_MAX
};

namespace detail
{

inline bool is_nonpositive_integer(double x) noexcept
{
    return x <= 0.0 && std::floor(x) == x;
}

inline constexpr double stirling_min = 10.0;

// sum B_2k / (2k (2k-1) x^(2k-1)), k = 1..8; below 3e-17 for x >= 10
inline double stirling_correction(double x) noexcept
{
    constexpr std::array<double, 8> b = {
        1.0 / 12.0,   -1.0 / 360.0,        1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0, -691.0 / 360360.0,   1.0 / 156.0,  -3617.0 / 122400.0,
    };
    const double inv2 = 1.0 / (x * x);
    double sum = 0.0;
    for (std::size_t k = b.size(); k-- > 0;)
        sum = sum * inv2 + b[k];
    return sum / x;
}

// Gamma(y + d) / Gamma(y) for |d| of an ulp of y >= 0.5: y is a rounded
// argument such as fl(x + k) and d the exact rounding residual.
inline double rounding_correction(double y, double d) noexcept
{
    const double psi = std::log(y) - 0.5 / y - 1.0 / (12.0 * y * y);
    return 1.0 + psi * d;
}

// Gamma for x >= 0.5, no overflow check.
inline double gamma_right(double x) noexcept
{
    // (n-1)! is exact in double up to n = 23
    if (x <= 23.0 && std::floor(x) == x) {
        double f = 1.0;
        for (double k = 2.0; k < x; k += 1.0)
            f *= k;
        return f;
    }
    if (x < stirling_min) {
        double k = 0.0, prod = 1.0;
        while (x + k < stirling_min) {
            prod *= x + k;
            k += 1.0;
        }
        const double y = x + k;
        return gamma_right(y) * rounding_correction(y, x - (y - k)) / prod;
    }
    // split the power so x^(x - 1/2) does not overflow before e^-x shrinks it
    const double half_pow = std::pow(x, 0.5 * (x - 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-x)) *
           std::exp(stirling_correction(x));
}

// Gamma(1 - x) for x < 0.5, compensating the rounding of 1 - x.
inline double gamma_reflected(double x) noexcept
{
    const double y = 1.0 - x;
    return gamma_right(y) * rounding_correction(y, (1.0 - y) - x);
}

} // namespace detail

/// sin(pi x) with exact argument reduction; returns exact zeros at integers.
inline double sinpi(double x) noexcept
{
    if (!std::isfinite(x))
        return std::numeric_limits<double>::quiet_NaN();
    const double n = std::round(x);
    const double r = x - n; // exact, |r| <= 1/2
    const double s = std::sin(std::numbers::pi * r);
    const bool odd = std::fmod(std::fabs(n), 2.0) == 1.0;
    return odd ? -s : s;
}

/// log Gamma(x) for x > 0.
inline double log_gamma(double x)
{
    if (!(x > 0.0))
        throw DomainError("log_gamma: argument must be positive");
    if (x < 0.5)
        return std::log(std::numbers::pi / (std::sin(std::numbers::pi * x))) - log_gamma(1.0 - x);
    if (x >= detail::stirling_min)
        return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + detail::stirling_correction(x);
    return std::log(detail::gamma_right(x));
}

/// Gamma(x) with an explicit overflow flag instead of a silent infinity.
inline GammaValue gamma_checked(double x)
{
    if (std::isnan(x))
        return {x, false};
    if (detail::is_nonpositive_integer(x))
        throw GammaDomainError(x);
    if (x > gamma_overflow_threshold)
        return {std::numeric_limits<double>::infinity(), true};
    if (x >= 0.5)
        return {detail::gamma_right(x), false};
    // reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    const double g1mx = detail::gamma_reflected(x);
    return {std::numbers::pi / (sinpi(x) * g1mx), false};
}

/// Gamma(x) for real x. Throws GammaDomainError at poles; returns +inf past
/// gamma_overflow_threshold (use gamma_checked to observe the flag).
inline double gamma(double x)
{
    return gamma_checked(x).value;
}

/// 1/Gamma(x), total on the reals: exactly 0 at the poles of Gamma.
inline double reciprocal_gamma(double x) noexcept
{
    if (std::isnan(x))
        return x;
    if (detail::is_nonpositive_integer(x))
        return 0.0;
    if (x > gamma_overflow_threshold)
        return std::exp(-log_gamma(x));
    if (x >= 0.5)
        return 1.0 / detail::gamma_right(x);
    return sinpi(x) * detail::gamma_reflected(x) / std::numbers::pi;
}

} // namespace fkin

#endif
