#ifndef FKIN_KINETIC_HPP
#define FKIN_KINETIC_HPP

// Fractional kinetic equation
//
//     N(t) - F(t) = -c^nu I^nu N(t),   t > a,
//
// with F = N_a (relaxation form) or F = N_a (t-a)^(mu-1) (power-forcing form).
// Closed-form solutions:
//
//     N(t) = N_a E_nu(-c^nu (t-a)^nu)
//     N(t) = N_a Gamma(mu) (t-a)^(mu-1) E_{nu,mu}(-c^nu (t-a)^nu)
//
// and the Neumann series they sum, plus residuals of the integral form and,
// for 0 < nu < 1, of the equivalent fractional differential form
//
//     D^nu N(t) - N_a (t-a)^-nu / Gamma(1-nu) = -c^nu N(t).

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fractional_ops.hpp"
#include "grid.hpp"
#include "mittag_leffler.hpp"
#include "special.hpp"

namespace fkin
{

struct KineticProblem
{
    double nu = 1.0;
    double c = 1.0;
    double N_a = 1.0;
    double a = 0.0;
    std::optional<double> mu; ///< absent: constant initial density N_a

    void validate() const
    {
        if (!(nu > 0.0) || !std::isfinite(nu))
            throw std::invalid_argument("KineticProblem: nu must be positive");
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("KineticProblem: c must be positive");
        if (!std::isfinite(N_a))
            throw std::invalid_argument("KineticProblem: N_a must be finite");
        if (!std::isfinite(a))
            throw std::invalid_argument("KineticProblem: a must be finite");
        if (mu && (!(*mu > 0.0) || !std::isfinite(*mu)))
            throw std::invalid_argument("KineticProblem: mu must be positive");
    }

    /// mu, with the relaxation form read as mu = 1.
    double effective_mu() const { return mu.value_or(1.0); }

    /// c^nu = exp(nu ln c)
    double rate() const { return std::exp(nu * std::log(c)); }

    /// N(t) is unbounded at t = a.
    bool singular_at_start() const { return effective_mu() < 1.0; }

    /// Forcing term F(t); t > a, or t >= a when it is bounded there.
    double forcing(double t) const
    {
        if (!mu || *mu == 1.0)
            return N_a;
        return N_a * std::pow(t - a, *mu - 1.0);
    }
};

enum class SolutionMethod
{
    closed_form,
    neumann,
    oracle,
};

inline const char* to_string(SolutionMethod m)
{
    switch (m) {
    case SolutionMethod::closed_form: return "closed_form";
    case SolutionMethod::neumann: return "neumann";
    case SolutionMethod::oracle: return "oracle";
    }
    return "unknown";
}

/// N(t) sampled on a grid starting at problem.a. Node 0 is flagged when mu < 1.
struct SolutionCurve
{
    KineticProblem problem;
    GridFunction curve;
    SolutionMethod method = SolutionMethod::closed_form;

    const UniformGrid& grid() const { return curve.grid(); }
    std::span<const double> values() const { return curve.values(); }
};

namespace detail
{

inline void require_after_start_kinetic(const KineticProblem& p, double t, const char* where)
{
    if (!(t > p.a))
        throw DomainError(std::string(where) + ": requires t > a");
}

inline void require_grid_matches(const KineticProblem& p, const UniformGrid& g, const char* where)
{
    g.validate();
    if (g.a != p.a)
        throw GridMismatchError(std::string(where) + ": grid start differs from problem start a");
}

} // namespace detail

/// N_a E_nu(-c^nu (t-a)^nu)
inline double solve_theorem1(const KineticProblem& p, double t)
{
    p.validate();
    if (p.mu)
        throw std::invalid_argument("solve_theorem1: problem carries mu; use solve_theorem2");
    detail::require_after_start_kinetic(p, t, "solve_theorem1");
    const double z = -p.rate() * std::pow(t - p.a, p.nu);
    return p.N_a * ml_eval(MLParams{p.nu, 1.0}, z).value;
}

/// N_0 E_nu(-c^nu t^nu): the a = 0 case.
inline double solve_corollary11(double nu, double c, double N_0, double t)
{
    return solve_theorem1(KineticProblem{nu, c, N_0, 0.0, std::nullopt}, t);
}

/// N_a Gamma(mu) (t-a)^(mu-1) E_{nu,mu}(-c^nu (t-a)^nu)
inline double solve_theorem2(const KineticProblem& p, double t)
{
    p.validate();
    if (!p.mu)
        throw std::invalid_argument("solve_theorem2: problem has no mu");
    detail::require_after_start_kinetic(p, t, "solve_theorem2");
    const double mu = *p.mu;
    const double x = t - p.a;
    const double z = -p.rate() * std::pow(x, p.nu);
    const double prefactor = (mu == 1.0) ? 1.0 : gamma(mu) * std::pow(x, mu - 1.0);
    return p.N_a * prefactor * ml_eval(MLParams{p.nu, mu}, z).value;
}

/// N_0 Gamma(mu) t^(mu-1) E_{nu,mu}(-c^nu t^nu): the a = 0 case.
inline double solve_corollary21(double nu, double mu, double c, double N_0, double t)
{
    return solve_theorem2(KineticProblem{nu, c, N_0, 0.0, mu}, t);
}

/// Closed-form solution, dispatching on whether mu is present.
inline double solve_closed_form(const KineticProblem& p, double t)
{
    return p.mu ? solve_theorem2(p, t) : solve_theorem1(p, t);
}

/// m-th Neumann term (-c^nu)^m I^(m nu) F evaluated at t.
inline double neumann_term(const KineticProblem& p, double t, std::size_t m)
{
    const double mu = p.effective_mu();
    const double mm = static_cast<double>(m);
    const double x = t - p.a;
    const double expo = mm * p.nu + mu - 1.0;
    // (-c^nu)^m x^(m nu) combined in log space to avoid intermediate overflow
    const double log_mag = mm * p.nu * std::log(p.c) + mm * p.nu * std::log(x);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double gamma_mu = (mu == 1.0) ? 1.0 : gamma(mu);
    return sign * p.N_a * gamma_mu * std::exp(log_mag) * std::pow(x, mu - 1.0) *
           reciprocal_gamma(expo + 1.0);
}

/// sum_{m=0}^{M} of the Neumann terms.
inline double neumann_partial_sum(const KineticProblem& p, double t, std::size_t M)
{
    p.validate();
    detail::require_after_start_kinetic(p, t, "neumann_partial_sum");
    double sum = 0.0;
    for (std::size_t m = 0; m <= M; ++m)
        sum += neumann_term(p, t, m);
    return sum;
}

template <typename F>
SolutionCurve sample_solution(const KineticProblem& p, const UniformGrid& grid, SolutionMethod method, F&& at)
{
    p.validate();
    detail::require_grid_matches(p, grid, "sample_solution");
    std::vector<double> v(grid.size());
    const std::size_t first = p.singular_at_start() ? 1 : 0;
    if (first == 0)
        v[0] = p.forcing(p.a); // N(a) = F(a)
    for (std::size_t j = 1; j < v.size(); ++j)
        v[j] = at(grid.node(j));
    return SolutionCurve{p, GridFunction(grid, std::move(v), first), method};
}

inline SolutionCurve closed_form_curve(const KineticProblem& p, const UniformGrid& grid)
{
    return sample_solution(p, grid, SolutionMethod::closed_form,
                           [&](double t) { return solve_closed_form(p, t); });
}

inline SolutionCurve neumann_curve(const KineticProblem& p, const UniformGrid& grid, std::size_t M)
{
    return sample_solution(p, grid, SolutionMethod::neumann,
                           [&](double t) { return neumann_partial_sum(p, t, M); });
}

/// Default leading exponent of the remainder in SingularSplit: (t-a)^2 and
/// smoother data keep the product-trapezoidal rule second order up to t = a.
inline constexpr double default_smooth_exponent = 2.0;

/// Splits the solution into leading Neumann terms and a remainder,
///     N = sum_{m < peeled} T_m + R,   T_m = (-c^nu)^m I^(m nu) F = C_m (t-a)^(mu - 1 + m nu),
/// where R solves R = T_peeled - c^nu I^nu R. The peeled terms are pure powers
/// of (t-a) and are integrated exactly; peeling continues until the exponent
/// of T_peeled reaches min_exponent. The solution itself behaves like
/// (t-a)^(mu-1) + (t-a)^(mu-1+nu) + ... near a, which the piecewise-linear
/// interpolant underlying the quadrature resolves poorly, and for mu < 1 is
/// unbounded there.
struct SingularSplit
{
    KineticProblem problem;
    std::size_t peeled = 0;

    static SingularSplit for_problem(const KineticProblem& p, double min_exponent = default_smooth_exponent)
    {
        if (!(min_exponent >= 0.0))
            throw std::invalid_argument("SingularSplit: min_exponent must be non-negative");
        SingularSplit s{p, 0};
        while (s.exponent(s.peeled) < min_exponent && !s.is_polynomial(s.peeled))
            ++s.peeled;
        return s;
    }

    /// Exponent of (t-a) in T_m.
    double exponent(std::size_t m) const
    {
        return problem.effective_mu() + static_cast<double>(m) * problem.nu - 1.0;
    }

    /// T_m and all later terms are non-negative integer powers (nu and the
    /// exponent integral), which the quadrature handles without peeling.
    bool is_polynomial(std::size_t m) const
    {
        const double e = exponent(m);
        return e >= 0.0 && std::floor(e) == e && std::floor(problem.nu) == problem.nu;
    }

    /// sum of the peeled terms at t > a
    double peeled_sum(double t) const
    {
        double s = 0.0;
        for (std::size_t m = 0; m < peeled; ++m)
            s += neumann_term(problem, t, m);
        return s;
    }

    /// Forcing of the remainder equation, T_peeled; bounded on [a, a+T].
    double remainder_forcing(double t) const
    {
        if (t == problem.a)
            return exponent(peeled) == 0.0 ? neumann_term(problem, problem.a + 1.0, peeled) : 0.0;
        return neumann_term(problem, t, peeled);
    }

    /// D^order of the peeled sum at t > a, termwise from the power rule.
    double derivative_of_peeled(double t, double order) const
    {
        double s = 0.0;
        for (std::size_t m = 0; m < peeled; ++m) {
            const double e = exponent(m);
            const double tm = neumann_term(problem, t, m);
            s += tm * gamma(e + 1.0) * reciprocal_gamma(e + 1.0 - order) * std::pow(t - problem.a, -order);
        }
        return s;
    }

    /// c^nu I^nu of the peeled sum at t > a: the next Neumann terms, negated.
    double rate_times_integral_of_peeled(double t) const
    {
        double s = 0.0;
        for (std::size_t m = 0; m < peeled; ++m)
            s -= neumann_term(problem, t, m + 1);
        return s;
    }
};

/// c^nu I^nu s for a curve of the problem: peeled terms exactly, remainder
/// s - peeled with the quadrature. Node 0 is flagged when mu < 1.
inline GridFunction rate_times_integral(const KineticProblem& p, const GridFunction& s,
                                        const QuadratureWeights& w,
                                        double smooth_exponent = default_smooth_exponent)
{
    const UniformGrid& g = s.grid();
    const double rate = p.rate();
    const SingularSplit split = SingularSplit::for_problem(p, smooth_exponent);
    const std::size_t first = p.singular_at_start() ? 1 : 0;
    if (s.first_defined() > first)
        throw DomainError("rate_times_integral: curve has undefined nodes but the problem is regular at a");

    // remainder of s after removing the peeled terms; its value at a is the limit
    std::vector<double> rem(g.size());
    rem[0] = split.peeled == 0 ? s[0] : split.remainder_forcing(p.a);
    for (std::size_t j = 1; j < rem.size(); ++j)
        rem[j] = s[j] - split.peeled_sum(g.node(j));
    const GridFunction I = rl_integral_numeric(GridFunction(g, std::move(rem)), w);
    std::vector<double> out(g.size());
    out[0] = 0.0;
    for (std::size_t j = 1; j < out.size(); ++j)
        out[j] = split.rate_times_integral_of_peeled(g.node(j)) + rate * I[j];
    return GridFunction(g, std::move(out), first);
}

/// r = s - F + c^nu I^nu s on the curve's grid.
inline GridFunction residual_integral_eq(const KineticProblem& p, const SolutionCurve& s,
                                         double smooth_exponent = default_smooth_exponent)
{
    p.validate();
    detail::require_grid_matches(p, s.grid(), "residual_integral_eq");
    const UniformGrid& g = s.grid();
    const QuadratureWeights w = QuadratureWeights::build(g, p.nu);
    const GridFunction cI = rate_times_integral(p, s.curve, w, smooth_exponent);
    std::vector<double> r(g.size());
    const std::size_t first = cI.first_defined();
    for (std::size_t j = first; j < r.size(); ++j) {
        const double F = (j == 0) ? p.forcing(p.a) : p.forcing(g.node(j));
        r[j] = s.curve[j] - F + cI[j];
    }
    return GridFunction(g, std::move(r), first);
}

/// r = D^nu s - N_a (t-a)^-nu / Gamma(1-nu) + c^nu s, for 0 < nu < 1 and no mu.
/// D^nu is applied exactly to the peeled terms of SingularSplit and through
/// rl_derivative_numeric to the rest. Node 0 is flagged.
inline GridFunction residual_differential_eq(const KineticProblem& p, const SolutionCurve& s,
                                             double smooth_exponent = default_smooth_exponent)
{
    p.validate();
    if (p.mu)
        throw std::invalid_argument("residual_differential_eq: only the constant-N_a form is supported");
    if (!(p.nu < 1.0))
        throw UnsupportedRegimeError("residual_differential_eq: requires 0 < nu < 1");
    detail::require_grid_matches(p, s.grid(), "residual_differential_eq");
    const UniformGrid& g = s.grid();
    const SingularSplit split = SingularSplit::for_problem(p, smooth_exponent);

    std::vector<double> rem(g.size());
    rem[0] = split.peeled == 0 ? s.curve[0] : split.remainder_forcing(p.a);
    for (std::size_t j = 1; j < rem.size(); ++j)
        rem[j] = s.curve[j] - split.peeled_sum(g.node(j));
    const GridFunction D = rl_derivative_numeric(GridFunction(g, std::move(rem)), p.nu);

    const double rate = p.rate();
    std::vector<double> r(g.size());
    for (std::size_t j = 1; j < r.size(); ++j) {
        const double t = g.node(j);
        const double derivative = split.derivative_of_peeled(t, p.nu) + D[j];
        r[j] = derivative - p.N_a * rl_derivative_constant(p.a, p.nu, t) + rate * s.curve[j];
    }
    return GridFunction(g, std::move(r), 1);
}

} // namespace fkin

#endif
