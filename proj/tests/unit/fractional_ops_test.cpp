#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <fkin/fractional_ops.hpp>

#include "unit/convergence.hpp"

using fkin::GridFunction;
using fkin::UniformGrid;

namespace
{

double rel_err(double x, double ref)
{
    return std::fabs(x - ref) / std::fabs(ref);
}

// 1/Gamma(nu) int (t_j - u)^(nu-1) phi_k(u) du, phi_k the hat function at node k.
// Each half of the hat is integrated in a local coordinate x in [0, 1] with
// s = t_j - u, so the kernel singularity, if any, sits at x = 0.
double reference_weight(const UniformGrid& g, double nu, std::size_t j, std::size_t k)
{
    boost::math::quadrature::tanh_sinh<double> q;
    const double h = g.h;
    const double d = static_cast<double>(j - k);
    double total = 0.0;
    if (k > 0)
        total += q.integrate([&](double x) { return std::pow((d + x) * h, nu - 1.0) * (1.0 - x); }, 0.0, 1.0, 1e-15);
    if (k < j)
        total += q.integrate([&](double x) { return std::pow((d - 1.0 + x) * h, nu - 1.0) * x; }, 0.0, 1.0, 1e-15);
    return total * h / std::tgamma(nu);
}

double max_error_power(double rho, double nu, std::size_t n)
{
    const UniformGrid g = UniformGrid::over(0.0, 1.0, n);
    const GridFunction f = GridFunction::sample(g, [&](double t) { return std::pow(t, rho - 1.0); });
    const GridFunction I = fkin::rl_integral_numeric(f, nu);
    double e = 0.0;
    for (std::size_t j = 1; j < g.size(); ++j)
        e = std::max(e, std::fabs(I[j] - fkin::rl_integral_power(0.0, rho, nu, g.node(j))));
    return e;
}

} // namespace

TEST(PowerRules, IntegralExamples)
{
    EXPECT_LE(rel_err(fkin::rl_integral_power(0.0, 1.0, 0.5, 1.0), 2.0 / std::sqrt(std::numbers::pi)), 1e-15);
    EXPECT_NEAR(fkin::rl_integral_power(0.0, 1.0, 0.5, 1.0), 1.1283791671, 1e-10);
    EXPECT_NEAR(fkin::rl_integral_power(0.0, 1.0, 1.0, 2.0), 2.0, 1e-15);
    EXPECT_NEAR(fkin::rl_integral_power(1.0, 2.0, 1.0, 3.0), 2.0, 1e-15);
}

TEST(PowerRules, DerivativeExamples)
{
    EXPECT_NEAR(fkin::rl_derivative_power(0.0, 1.0, 0.5, 1.0), 0.5641895835, 1e-10);
    EXPECT_EQ(fkin::rl_derivative_power(0.0, 1.0, 1.0, 1.0), 0.0);
    EXPECT_NEAR(fkin::rl_derivative_power(0.0, 3.0, 1.0, 2.0), 4.0, 1e-14);
}

TEST(PowerRules, DerivativeOfConstant)
{
    EXPECT_NEAR(fkin::rl_derivative_constant(0.0, 0.5, 1.0), 0.5641895835, 1e-10);
    EXPECT_NEAR(fkin::rl_derivative_constant(0.0, 0.5, 4.0), 0.2820947918, 1e-10);
    for (double a : {-2.0, 0.0, 3.5}) {
        EXPECT_EQ(fkin::rl_derivative_constant(a, 2.0, a + 1.0), 0.0);
        EXPECT_EQ(fkin::rl_derivative_constant(a, 1.0, a + 1.0), 0.0);
    }
}

TEST(PowerRules, IntegralThenDerivativeIsIdentity)
{
    for (double rho : {0.5, 1.0, 2.5})
        for (double nu : {0.2, 0.7}) {
            // D^nu of Gamma(rho)/Gamma(rho+nu) t^(rho+nu-1) returns t^(rho-1)
            const double t = 1.7;
            const double c = fkin::gamma(rho) / fkin::gamma(rho + nu);
            EXPECT_NEAR(c * fkin::rl_derivative_power(0.0, rho + nu, nu, t), std::pow(t, rho - 1.0), 1e-14);
        }
}

TEST(PowerRules, Preconditions)
{
    EXPECT_THROW(fkin::rl_integral_power(0.0, 1.0, 0.0, 1.0), fkin::DomainError);
    EXPECT_THROW(fkin::rl_integral_power(0.0, 0.0, 0.5, 1.0), fkin::DomainError);
    EXPECT_THROW(fkin::rl_integral_power(1.0, 1.0, 0.5, 1.0), fkin::DomainError);
    EXPECT_THROW(fkin::rl_derivative_power(0.0, 1.0, -0.5, 1.0), fkin::DomainError);
}

TEST(Weights, TrapezoidalAtNuOne)
{
    const UniformGrid g{0.0, 0.1, 10};
    const fkin::QuadratureWeights w = fkin::build_weights(g, 1.0);
    for (std::size_t j = 1; j <= g.n; ++j) {
        EXPECT_NEAR(w(j, 0), 0.05, 1e-16);
        EXPECT_NEAR(w(j, j), 0.05, 1e-16);
        for (std::size_t k = 1; k < j; ++k)
            EXPECT_NEAR(w(j, k), 0.1, 1e-16) << j << ' ' << k;
    }
}

TEST(Weights, HalfOrderFirstRow)
{
    // int_0^1 (1-u)^(-1/2) (1-u) du = 2/3, int_0^1 (1-u)^(-1/2) u du = 4/3; weights carry 1/Gamma(1/2)
    const UniformGrid g{0.0, 1.0, 2};
    const fkin::QuadratureWeights w = fkin::build_weights(g, 0.5);
    const double gh = std::sqrt(std::numbers::pi);
    EXPECT_NEAR(w(1, 0) * gh, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(w(1, 1) * gh, 4.0 / 3.0, 1e-15);
    EXPECT_EQ(w(0, 0), 0.0);
    EXPECT_EQ(w(1, 2), 0.0);
}

TEST(Weights, RowSumsSmallGrid)
{
    const UniformGrid g{0.0, 0.5, 4};
    const fkin::QuadratureWeights w = fkin::build_weights(g, 0.5);
    for (std::size_t j = 1; j <= 4; ++j)
        EXPECT_LE(rel_err(w.row_sum(j), std::sqrt(g.node(j)) / fkin::gamma(1.5)), 1e-12) << j;
}

TEST(Weights, RowSumsLargeGrid)
{
    for (double nu : {0.05, 0.3, 0.5, 0.9, 1.0, 1.7, 3.2}) {
        const UniformGrid g = UniformGrid::over(1.0, 4.0, 20000);
        const fkin::QuadratureWeights w = fkin::build_weights(g, nu);
        for (std::size_t j : {1u, 2u, 7u, 8u, 9u, 100u, 4321u, 19999u, 20000u}) {
            const double exact = std::pow(g.node(j) - g.a, nu) / fkin::gamma(nu + 1.0);
            EXPECT_LE(rel_err(w.row_sum(j), exact), 1e-12) << "nu=" << nu << " j=" << j;
        }
    }
}

TEST(Weights, MatchAdaptiveQuadrature)
{
    for (double nu : {0.1, 0.3, 0.5, 0.9, 1.5, 2.5}) {
        const UniformGrid g{0.0, 0.05, 400};
        const fkin::QuadratureWeights w = fkin::build_weights(g, nu);
        for (std::size_t j : {1u, 2u, 5u, 9u, 40u, 400u})
            for (std::size_t k : {0u, 1u, 3u, 7u, 8u, 39u, 399u, 400u}) {
                if (k > j)
                    continue;
                const double ref = reference_weight(g, nu, j, k);
                // second differences at small j - k cancel; measure those against the row scale
                EXPECT_LE(std::fabs(w(j, k) - ref), 1e-14 * std::fabs(ref) + 2e-15 * w.diagonal())
                    << "nu=" << nu << " j=" << j << " k=" << k;
            }
    }
}

TEST(Weights, RespectsGridCap)
{
    const UniformGrid g = UniformGrid::over(0.0, 1.0, 100);
    EXPECT_THROW(fkin::QuadratureWeights::build(g, 0.5, 50), std::invalid_argument);
    EXPECT_THROW(fkin::build_weights(g, 0.0), fkin::DomainError);
}

TEST(IntegralNumeric, Examples)
{
    const UniformGrid g = UniformGrid::over(0.0, 2.0, 50);
    const GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
    const GridFunction half = fkin::rl_integral_numeric(one, 0.5);
    const GridFunction full = fkin::rl_integral_numeric(one, 1.0);
    const GridFunction ramp = fkin::rl_integral_numeric(GridFunction::sample(g, [](double t) { return t; }), 1.0);
    EXPECT_EQ(half[0], 0.0);
    for (std::size_t j = 1; j < g.size(); ++j) {
        const double t = g.node(j);
        EXPECT_LE(rel_err(half[j], std::sqrt(t) / fkin::gamma(1.5)), 1e-12) << j;
        EXPECT_NEAR(full[j], t, 1e-14) << j;
        // trapezoid on a linear integrand is exact up to round-off
        EXPECT_NEAR(ramp[j], 0.5 * t * t, 1e-14) << j;
    }
}

TEST(IntegralNumeric, PowerLawOrder)
{
    const std::vector<std::size_t> ns{250, 500, 1000, 2000};
    for (double rho : {1.0, 2.0, 3.0, 4.0, 2.5})
        for (double nu : {0.3, 0.5, 0.9}) {
            std::vector<double> err;
            for (std::size_t n : ns)
                err.push_back(max_error_power(rho, nu, n));
            if (rho <= 2.0) {
                // piecewise-linear data is integrated exactly
                EXPECT_LE(err.back(), 1e-13) << rho << ' ' << nu;
                continue;
            }
            // a fractional power limits the rate to rho - 1 + nu
            const double expected = (rho == std::floor(rho)) ? 1.8 : std::min(2.0, rho - 1.0 + nu) - 0.05;
            for (double order : fkin_test::observed_orders(err))
                EXPECT_GE(order, expected) << "rho=" << rho << " nu=" << nu;
        }
}

TEST(IntegralNumeric, Semigroup)
{
    for (auto [n1, n2] : {std::pair{0.3, 0.5}, std::pair{0.5, 0.5}, std::pair{0.8, 1.1}}) {
        std::vector<double> err;
        for (std::size_t n : {100u, 200u, 400u, 800u}) {
            const UniformGrid g = UniformGrid::over(0.0, 2.0, n);
            // vanishes to second order at a, so I^n1 f is smooth enough for the outer rule
            const GridFunction f = GridFunction::sample(g, [](double t) { return t * t * std::cos(3.0 * t); });
            const GridFunction twice = fkin::rl_integral_numeric(fkin::rl_integral_numeric(f, n1), n2);
            const GridFunction once = fkin::rl_integral_numeric(f, n1 + n2);
            double e = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j)
                e = std::max(e, std::fabs(twice[j] - once[j]));
            err.push_back(e);
        }
        for (double order : fkin_test::observed_orders(err))
            EXPECT_GE(order, 1.0) << n1 << ' ' << n2;
        EXPECT_LE(err.back(), 1e-4);
    }
}

TEST(IntegralNumeric, Linear)
{
    const UniformGrid g = UniformGrid::over(0.5, 3.0, 300);
    const GridFunction f = GridFunction::sample(g, [](double t) { return std::sin(t); });
    const GridFunction h = GridFunction::sample(g, [](double t) { return std::exp(-t) * t; });
    const GridFunction combo = GridFunction::sample(g, [](double t) { return 2.5 * std::sin(t) - 4.0 * std::exp(-t) * t; });
    const fkin::QuadratureWeights w = fkin::build_weights(g, 0.37);
    const GridFunction If = fkin::rl_integral_numeric(f, w);
    const GridFunction Ih = fkin::rl_integral_numeric(h, w);
    const GridFunction Ic = fkin::rl_integral_numeric(combo, w);
    for (std::size_t j = 0; j < g.size(); ++j)
        EXPECT_NEAR(Ic[j], 2.5 * If[j] - 4.0 * Ih[j], 1e-14 * (1.0 + std::fabs(Ic[j]))) << j;
}

TEST(IntegralNumeric, RejectsMismatchedWeights)
{
    const UniformGrid g = UniformGrid::over(0.0, 1.0, 10);
    const GridFunction f = GridFunction::sample(g, [](double) { return 1.0; });
    const fkin::QuadratureWeights w = fkin::build_weights(g.refined(), 0.5);
    EXPECT_THROW(fkin::rl_integral_numeric(f, w), fkin::GridMismatchError);
    const GridFunction flagged(g, std::vector<double>(g.size(), 1.0), 1);
    EXPECT_THROW(fkin::rl_integral_numeric(flagged, 0.5), fkin::DomainError);
}

TEST(DerivativeNumeric, ConstantConvergesAtFixedTime)
{
    for (double nu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        std::vector<double> err;
        for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
            const UniformGrid g = UniformGrid::over(0.0, 2.0, n);
            const GridFunction D = fkin::rl_derivative_numeric(GridFunction::sample(g, [](double) { return 1.0; }), nu);
            const std::size_t j = n / 2; // t = 1
            err.push_back(std::fabs(D[j] - fkin::rl_derivative_constant(0.0, nu, g.node(j))));
        }
        for (double order : fkin_test::observed_orders(err))
            EXPECT_GE(order, 2.0 - nu - 0.2) << "nu=" << nu;
    }
}

TEST(DerivativeNumeric, RampMatchesPowerRule)
{
    std::vector<double> err;
    for (std::size_t n : {200u, 400u, 800u}) {
        const UniformGrid g = UniformGrid::over(0.0, 1.0, n);
        const GridFunction D = fkin::rl_derivative_numeric(GridFunction::sample(g, [](double t) { return t; }), 0.5);
        double e = 0.0;
        for (std::size_t j = n / 10; j < g.size(); ++j)
            e = std::max(e, std::fabs(D[j] - fkin::rl_derivative_power(0.0, 2.0, 0.5, g.node(j))));
        err.push_back(e);
    }
    EXPECT_LE(err.back(), 1e-4);
    for (double order : fkin_test::observed_orders(err))
        EXPECT_GE(order, 1.5);
}

TEST(DerivativeNumeric, EndpointFlaggedAndContract)
{
    const UniformGrid g = UniformGrid::over(0.0, 1.0, 20);
    const GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
    const GridFunction D = fkin::rl_derivative_numeric(one, 0.4);
    EXPECT_FALSE(D.defined(0));
    EXPECT_TRUE(std::isnan(D[0]));
    EXPECT_TRUE(D.defined(1));
    EXPECT_THROW(fkin::rl_derivative_numeric(one, 1.0), fkin::UnsupportedRegimeError);
    EXPECT_THROW(fkin::rl_derivative_numeric(one, 0.0), fkin::DomainError);
}

TEST(Grid, Invariants)
{
    EXPECT_THROW(UniformGrid::over(0.0, 1.0, 1), std::invalid_argument);
    EXPECT_THROW(UniformGrid::over(0.0, -1.0, 10), std::invalid_argument);
    const UniformGrid g = UniformGrid::over(1.0, 2.0, 4);
    EXPECT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g.node(4), 3.0);
    EXPECT_EQ(g.refined().n, 8u);
    EXPECT_THROW(GridFunction(g, std::vector<double>(4, 0.0)), std::invalid_argument);
    EXPECT_THROW(GridFunction(g, std::vector<double>{0.0, 1.0, NAN, 1.0, 1.0}), std::invalid_argument);
    const GridFunction flagged(g, std::vector<double>{NAN, 1.0, 1.0, 1.0, 1.0}, 1);
    EXPECT_FALSE(flagged.defined(0));
}
