#ifndef FKIN_FRACTIONAL_OPS_HPP
#define FKIN_FRACTIONAL_OPS_HPP

// Riemann-Liouville operators on [a, t]:
//
//     I^nu f(t) = 1/Gamma(nu) int_a^t (t - u)^(nu - 1) f(u) du,        nu > 0
//     D^mu f(t) = d/dt I^(1 - mu) f(t),                                0 < mu < 1
//
// Closed forms on power functions, and a product-trapezoidal discretization:
// f is replaced by its piecewise-linear interpolant on the grid and the kernel
// is integrated exactly against each hat function. With p = nu + 1 and
// s = h^nu / Gamma(nu + 2) the weights of row j >= 1 are
//
//     w[j][0] = s ((j-1)^p - (j-1-nu) j^nu)
//     w[j][k] = s ((j-k+1)^p - 2 (j-k)^p + (j-k-1)^p),   0 < k < j
//     w[j][j] = s
//
// and row 0 is empty. Only the first column depends on j alone; the interior
// depends on j - k, so storage is O(n).

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "special.hpp"

namespace fkin
{

inline constexpr std::size_t default_max_grid_steps = 20000;

namespace detail
{

inline void require_positive_order(double nu, const char* where)
{
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw DomainError(std::string(where) + ": order must be positive");
}

inline void require_after_start(double a, double t, const char* where)
{
    if (!(t > a))
        throw DomainError(std::string(where) + ": requires t > a");
}

// (d+1)^p - 2 d^p + (d-1)^p for integer d >= 1
inline double second_difference_pow(double p, std::size_t d)
{
    const double x = static_cast<double>(d);
    if (d < 8)
        return std::pow(x + 1.0, p) - 2.0 * std::pow(x, p) + std::pow(x - 1.0, p);
    // d^p * 2 sum_{i>=1} C(p, 2i) d^(-2i); no cancellation for large d
    const double inv2 = 1.0 / (x * x);
    double binom = 1.0; // C(p, m)
    double power = 1.0; // d^-m for even m
    double sum = 0.0;
    for (int m = 1; m < 400; ++m) {
        binom *= (p - m + 1) / m;
        if (m % 2 == 1)
            continue;
        power *= inv2;
        const double term = binom * power;
        sum += term;
        if (m > p + 2.0 && std::fabs(term) <= 1e-18 * std::fabs(sum))
            break;
    }
    return 2.0 * std::pow(x, p) * sum;
}

// (j-1)^p - (j-1-nu) j^nu for integer j >= 1, p = nu + 1
inline double first_column_weight(double nu, std::size_t j)
{
    const double x = static_cast<double>(j);
    const double p = nu + 1.0;
    if (j < 8)
        return std::pow(x - 1.0, p) - (x - 1.0 - nu) * std::pow(x, nu);
    // j^p [(1 - 1/j)^p - 1 + p/j] = j^p sum_{m>=2} C(p, m) (-1/j)^m
    const double y = -1.0 / x;
    double binom = p; // C(p, 1)
    double power = y;
    double sum = 0.0;
    for (int m = 2; m < 400; ++m) {
        binom *= (p - m + 1) / m;
        power *= y;
        const double term = binom * power;
        sum += term;
        if (m > p + 2.0 && std::fabs(term) <= 1e-18 * std::fabs(sum))
            break;
    }
    return std::pow(x, p) * sum;
}

} // namespace detail

/// (t-a)^(rho-1) integrated to order nu: Gamma(rho)/Gamma(rho+nu) (t-a)^(rho+nu-1).
inline double rl_integral_power(double a, double rho, double nu, double t)
{
    detail::require_positive_order(nu, "rl_integral_power");
    if (!(rho > 0.0))
        throw DomainError("rl_integral_power: rho must be positive");
    detail::require_after_start(a, t, "rl_integral_power");
    const double ratio = (rho + nu < 170.0) ? gamma(rho) * reciprocal_gamma(rho + nu)
                                            : std::exp(log_gamma(rho) - log_gamma(rho + nu));
    return ratio * std::pow(t - a, rho + nu - 1.0);
}

/// Order-nu derivative of (t-a)^(rho-1): Gamma(rho)/Gamma(rho-nu) (t-a)^(rho-nu-1),
/// exactly 0 when rho - nu is a non-positive integer.
inline double rl_derivative_power(double a, double rho, double nu, double t)
{
    detail::require_positive_order(nu, "rl_derivative_power");
    if (!(rho > 0.0))
        throw DomainError("rl_derivative_power: rho must be positive");
    detail::require_after_start(a, t, "rl_derivative_power");
    const double rg = reciprocal_gamma(rho - nu);
    if (rg == 0.0)
        return 0.0;
    return gamma(rho) * rg * std::pow(t - a, rho - nu - 1.0);
}

/// Order-nu derivative of the constant 1: (t-a)^-nu / Gamma(1-nu). Zero for integer nu.
inline double rl_derivative_constant(double a, double nu, double t)
{
    return rl_derivative_power(a, 1.0, nu, t);
}

/// Product-trapezoidal weights for I^nu on a uniform grid.
class QuadratureWeights
{
public:
    static QuadratureWeights build(const UniformGrid& grid, double nu,
                                   std::size_t max_steps = default_max_grid_steps)
    {
        grid.validate();
        detail::require_positive_order(nu, "build_weights");
        if (grid.n > max_steps)
            throw std::invalid_argument("build_weights: n = " + std::to_string(grid.n) +
                                        " exceeds the configured maximum " + std::to_string(max_steps));
        QuadratureWeights w;
        w.nu_ = nu;
        w.grid_ = grid;
        w.scale_ = std::pow(grid.h, nu) * reciprocal_gamma(nu + 2.0);
        w.first_.assign(grid.n + 1, 0.0);
        w.interior_.assign(grid.n, 0.0);
        for (std::size_t j = 1; j <= grid.n; ++j)
            w.first_[j] = detail::first_column_weight(nu, j);
        for (std::size_t d = 1; d < grid.n; ++d)
            w.interior_[d] = detail::second_difference_pow(nu + 1.0, d);
        return w;
    }

    double nu() const { return nu_; }
    const UniformGrid& grid() const { return grid_; }

    /// w[j][k] for 0 <= k <= j <= n; zero above the diagonal and on row 0.
    double operator()(std::size_t j, std::size_t k) const
    {
        if (j == 0 || k > j)
            return 0.0;
        if (k == j)
            return scale_;
        if (k == 0)
            return scale_ * first_[j];
        return scale_ * interior_[j - k];
    }

    double diagonal() const { return scale_; }

    double row_sum(std::size_t j) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k <= j; ++k)
            s += (*this)(j, k);
        return s;
    }

    /// sum_{k<j} w[j][k] v[k]: the part of row j that does not touch node j.
    double history(std::size_t j, std::span<const double> v) const
    {
        if (j == 0)
            return 0.0;
        double s = first_[j] * v[0];
        for (std::size_t k = 1; k < j; ++k)
            s += interior_[j - k] * v[k];
        return scale_ * s;
    }

    /// sum_{k<=j} w[j][k] v[k]
    double apply_row(std::size_t j, std::span<const double> v) const
    {
        if (j == 0)
            return 0.0;
        return history(j, v) + scale_ * v[j];
    }

private:
    double nu_ = 1.0;
    UniformGrid grid_{};
    double scale_ = 0.0;
    std::vector<double> first_;    // indexed by j
    std::vector<double> interior_; // indexed by j - k
};

inline QuadratureWeights build_weights(const UniformGrid& grid, double nu)
{
    return QuadratureWeights::build(grid, nu);
}

inline GridFunction rl_integral_numeric(const GridFunction& f, const QuadratureWeights& w)
{
    require_same_grid(f.grid(), w.grid(), "rl_integral_numeric");
    if (f.first_defined() != 0)
        throw DomainError("rl_integral_numeric: input has undefined nodes");
    std::vector<double> out(f.size());
    const auto v = f.values();
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = w.apply_row(j, v);
    return GridFunction(f.grid(), std::move(out));
}

/// I^nu f on the grid of f; output[0] = 0.
inline GridFunction rl_integral_numeric(const GridFunction& f, double nu)
{
    return rl_integral_numeric(f, QuadratureWeights::build(f.grid(), nu));
}

/// D^mu f = d/dt I^(1-mu) f for 0 < mu < 1. The derivative of the discrete
/// integral is taken with the second-order backward difference
/// (3 I_j - 4 I_{j-1} + I_{j-2}) / 2h, first-order at j = 1.
/// Node 0 is flagged undefined.
inline GridFunction rl_derivative_numeric(const GridFunction& f, double mu)
{
    if (!(mu > 0.0))
        throw DomainError("rl_derivative_numeric: order must be positive");
    if (!(mu < 1.0))
        throw UnsupportedRegimeError("rl_derivative_numeric: only orders 0 < mu < 1 are supported");
    const GridFunction integral = rl_integral_numeric(f, 1.0 - mu);
    const double h = f.grid().h;
    const auto I = integral.values();
    std::vector<double> out(f.size(), std::numeric_limits<double>::quiet_NaN());
    out[1] = (I[1] - I[0]) / h;
    for (std::size_t j = 2; j < out.size(); ++j)
        out[j] = (3.0 * I[j] - 4.0 * I[j - 1] + I[j - 2]) / (2.0 * h);
    return GridFunction(f.grid(), std::move(out), 1);
}

} // namespace fkin

#endif
