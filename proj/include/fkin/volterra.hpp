#ifndef FKIN_VOLTERRA_HPP
#define FKIN_VOLTERRA_HPP

// Direct numerical solution of the kinetic integral equation
//
//     N(t) = F(t) - c^nu I^nu N(t)
//
// as a second-kind Volterra equation, without any Mittag-Leffler evaluation.
// I^nu is discretized with the product-trapezoidal weights of
// fractional_ops.hpp, so the march solves one scalar equation per node:
//
//     (1 + c^nu w[j][j]) N_j = F_j - c^nu sum_{k<j} w[j][k] N_k.
//
// The leading power terms of the solution near t = a are split off with
// SingularSplit and integrated exactly; only the remainder, which is bounded
// and (t-a)^2-smooth at a, is marched. This also covers a forcing that is
// unbounded at t = a (mu < 1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fractional_ops.hpp"
#include "grid.hpp"
#include "kinetic.hpp"

namespace fkin
{

enum class OracleScheme
{
    implicit_product_trapezoid,
    picard,
};

struct OracleConfig
{
    UniformGrid grid{};
    OracleScheme scheme = OracleScheme::implicit_product_trapezoid;
    std::size_t picard_iterations = 1; ///< used only by the picard scheme
    double divergence_factor = 1e6;    ///< picard alarm: growth of the iterate sup-norm
    double smooth_exponent = default_smooth_exponent; ///< see SingularSplit

    void validate() const
    {
        grid.validate();
        if (scheme == OracleScheme::picard && picard_iterations < 1)
            throw std::invalid_argument("OracleConfig: picard_iterations must be at least 1");
    }
};

namespace detail
{

inline std::vector<double> remainder_forcing_on(const SingularSplit& split, const UniformGrid& g)
{
    std::vector<double> G(g.size());
    G[0] = split.remainder_forcing(g.a);
    for (std::size_t j = 1; j < G.size(); ++j)
        G[j] = split.remainder_forcing(g.node(j));
    return G;
}

inline SolutionCurve assemble_from_remainder(const KineticProblem& p, const SingularSplit& split,
                                             const UniformGrid& g, std::vector<double> rem)
{
    const std::size_t first = p.singular_at_start() ? 1 : 0;
    if (first == 0)
        rem[0] = p.forcing(p.a); // I^nu N vanishes at a
    for (std::size_t j = 1; j < rem.size(); ++j)
        rem[j] += split.peeled_sum(g.node(j));
    return SolutionCurve{p, GridFunction(g, std::move(rem), first), SolutionMethod::oracle};
}

inline double sup_norm(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::fabs(x));
    return m;
}

} // namespace detail

/// Picard (successive substitution) iteration N <- F - c^nu I^nu N, starting from N = F.
inline SolutionCurve picard_iterate(const KineticProblem& p, const OracleConfig& cfg)
{
    p.validate();
    cfg.validate();
    if (cfg.scheme != OracleScheme::picard)
        throw std::invalid_argument("picard_iterate: config scheme is not picard");
    detail::require_grid_matches(p, cfg.grid, "picard_iterate");

    const UniformGrid& g = cfg.grid;
    const SingularSplit split = SingularSplit::for_problem(p, cfg.smooth_exponent);
    const QuadratureWeights w = QuadratureWeights::build(g, p.nu);
    const double rate = p.rate();
    const std::vector<double> G = detail::remainder_forcing_on(split, g);
    const double base = std::max(detail::sup_norm(G), 1e-300);

    std::vector<double> R = G;
    std::vector<double> next(g.size());
    for (std::size_t it = 0; it < cfg.picard_iterations; ++it) {
        for (std::size_t j = 0; j < next.size(); ++j)
            next[j] = G[j] - rate * w.apply_row(j, R);
        R.swap(next);
        if (!(detail::sup_norm(R) <= cfg.divergence_factor * base))
            throw OracleError("picard_iterate: iterate norm grew by more than " +
                              std::to_string(cfg.divergence_factor) + " at iteration " +
                              std::to_string(it + 1));
    }
    return detail::assemble_from_remainder(p, split, g, std::move(R));
}

/// Oracle solution of the kinetic integral equation on cfg.grid.
inline SolutionCurve solve_volterra(const KineticProblem& p, const OracleConfig& cfg)
{
    p.validate();
    cfg.validate();
    detail::require_grid_matches(p, cfg.grid, "solve_volterra");
    if (cfg.scheme == OracleScheme::picard)
        return picard_iterate(p, cfg);

    const UniformGrid& g = cfg.grid;
    const SingularSplit split = SingularSplit::for_problem(p, cfg.smooth_exponent);
    const QuadratureWeights w = QuadratureWeights::build(g, p.nu);
    const double rate = p.rate();

    std::vector<double> R = detail::remainder_forcing_on(split, g);
    const double denom = 1.0 + rate * w.diagonal();
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw OracleError("solve_volterra: singular step, 1 + c^nu w[j][j] = " + std::to_string(denom));
    // R[j] holds G_j until it is overwritten; history() only reads k < j
    for (std::size_t j = 1; j < R.size(); ++j)
        R[j] = (R[j] - rate * w.history(j, R)) / denom;
    return detail::assemble_from_remainder(p, split, g, std::move(R));
}

inline SolutionCurve solve_volterra(const KineticProblem& p, const UniformGrid& grid)
{
    return solve_volterra(p, OracleConfig{grid});
}

} // namespace fkin

#endif
