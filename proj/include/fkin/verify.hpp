#ifndef FKIN_VERIFY_HPP
#define FKIN_VERIFY_HPP

// Verification runs: closed form against the Volterra oracle and against the
// residuals of the integral and differential forms, over successively halved
// grids. Reports are plain data; csv and summary writers are separate so the
// CSV stays free of timings.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "csv.hpp"
#include "grid.hpp"
#include "kinetic.hpp"
#include "volterra.hpp"

namespace fkin
{

struct VerifyOptions
{
    KineticProblem problem{};
    double T = 5.0;        ///< interval length, grid covers [a, a+T]
    std::size_t n = 500;   ///< coarsest grid; level l uses n * 2^l
    std::size_t levels = 3;
    double tol = 1e-3;     ///< absolute bound on max errors and residuals
    std::size_t skip_nodes = 10; ///< error norms are taken on t >= a + skip_nodes*h
    double perturb = 1.0;  ///< test hook: the closed-form curve is scaled by this factor

    void validate() const
    {
        problem.validate();
        if (!(T > 0.0) || !std::isfinite(T))
            throw std::invalid_argument("verify: T must be positive");
        if (levels < 2)
            throw std::invalid_argument("verify: at least 2 grid levels are required");
        if (n < 2 * skip_nodes)
            throw std::invalid_argument("verify: n is too small for the error window");
        if (n << (levels - 1) > default_max_grid_steps)
            throw std::invalid_argument("verify: finest grid exceeds " + std::to_string(default_max_grid_steps) +
                                        " steps");
        if (!(tol > 0.0))
            throw std::invalid_argument("verify: tol must be positive");
        if (!std::isfinite(perturb))
            throw std::invalid_argument("verify: perturb must be finite");
    }
};

struct CriterionRow
{
    std::string criterion;
    std::size_t grid_n = 0;
    std::string metric;
    double value = 0.0;
    std::optional<double> threshold; ///< absent for informational rows
    bool pass = true;
};

struct StageTiming
{
    std::size_t grid_n = 0;
    std::string stage;
    double seconds = 0.0;
};

struct VerificationReport
{
    KineticProblem problem{};
    double T = 0.0;
    std::vector<CriterionRow> rows;
    std::vector<StageTiming> timings;

    bool passed() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const CriterionRow& r) { return r.pass; });
    }
};

namespace detail
{

struct ErrorNorms
{
    double max = 0.0;
    double rms = 0.0;
};

inline ErrorNorms error_norms(const GridFunction& x, const GridFunction& y, std::size_t from)
{
    ErrorNorms e;
    double sq = 0.0;
    std::size_t count = 0;
    for (std::size_t j = from; j < x.size(); ++j) {
        const double d = std::fabs(x[j] - y[j]);
        e.max = std::max(e.max, d);
        sq += d * d;
        ++count;
    }
    e.rms = count ? std::sqrt(sq / static_cast<double>(count)) : 0.0;
    return e;
}

inline double max_abs_from(const GridFunction& r, std::size_t from)
{
    double m = 0.0;
    for (std::size_t j = std::max(from, r.first_defined()); j < r.size(); ++j)
        m = std::max(m, std::fabs(r[j]));
    return m;
}

inline SolutionCurve scaled(const SolutionCurve& s, double factor)
{
    if (factor == 1.0)
        return s;
    std::vector<double> v(s.values().begin(), s.values().end());
    for (std::size_t j = s.curve.first_defined(); j < v.size(); ++j)
        v[j] *= factor;
    return SolutionCurve{s.problem, GridFunction(s.grid(), std::move(v), s.curve.first_defined()), s.method};
}

/// log2(coarse/fine); an order row passes outright once both values sit at round-off.
inline CriterionRow order_row(const std::string& criterion, std::size_t n, double coarse, double fine,
                              double min_order, double floor)
{
    const double order = (fine > 0.0 && coarse > 0.0) ? std::log2(coarse / fine) : 0.0;
    const bool at_floor = coarse <= floor && fine <= floor;
    return {criterion, n, "observed_order", order, min_order, at_floor || order >= min_order};
}

class Stopwatch
{
public:
    double lap()
    {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace detail

inline VerificationReport run_verification(const VerifyOptions& opt)
{
    opt.validate();
    const KineticProblem& p = opt.problem;
    VerificationReport rep{p, opt.T, {}, {}};
    const double floor = 1e-12 * std::max(1.0, std::fabs(p.N_a));
    const bool differential = !p.mu && p.nu < 1.0;
    const bool classical = !p.mu && p.nu == 1.0;

    std::vector<double> oracle_err, integral_res, differential_res;
    for (std::size_t level = 0; level < opt.levels; ++level) {
        const std::size_t n = opt.n << level;
        const UniformGrid g = UniformGrid::over(p.a, opt.T, n);
        detail::Stopwatch clock;

        const SolutionCurve closed = detail::scaled(closed_form_curve(p, g), opt.perturb);
        rep.timings.push_back({n, "closed_form", clock.lap()});
        const SolutionCurve oracle = solve_volterra(p, g);
        rep.timings.push_back({n, "oracle", clock.lap()});

        const detail::ErrorNorms e = detail::error_norms(closed.curve, oracle.curve, opt.skip_nodes);
        oracle_err.push_back(e.max);
        rep.rows.push_back({"oracle_agreement", n, "max_abs_error", e.max, opt.tol, e.max <= opt.tol});
        rep.rows.push_back({"oracle_agreement", n, "rms_error", e.rms, opt.tol, e.rms <= opt.tol});

        const double ri = detail::max_abs_from(residual_integral_eq(p, closed), opt.skip_nodes);
        integral_res.push_back(ri);
        rep.rows.push_back({"integral_residual", n, "max_abs", ri, opt.tol, ri <= opt.tol});
        rep.timings.push_back({n, "integral_residual", clock.lap()});

        if (differential) {
            const double rd = detail::max_abs_from(residual_differential_eq(p, closed), 1);
            differential_res.push_back(rd);
            rep.rows.push_back({"differential_residual", n, "max_abs", rd, std::nullopt, true});
            rep.timings.push_back({n, "differential_residual", clock.lap()});
        }

        if (classical && level + 1 == opt.levels) {
            double worst = 0.0;
            for (std::size_t j = 1; j < g.size(); ++j) {
                const double exact = p.N_a * std::exp(-p.c * (g.node(j) - p.a));
                worst = std::max(worst, std::fabs(closed.curve[j] - exact) / std::max(std::fabs(exact), 1e-300));
            }
            rep.rows.push_back({"classical_limit", n, "max_rel_error", worst, 1e-10, worst <= 1e-10});
        }
    }

    for (std::size_t level = 1; level < opt.levels; ++level) {
        const std::size_t n = opt.n << level;
        rep.rows.push_back(detail::order_row("oracle_agreement", n, oracle_err[level - 1], oracle_err[level], 1.0, floor));
        rep.rows.push_back(
            detail::order_row("integral_residual", n, integral_res[level - 1], integral_res[level], 1.0, floor));
        if (differential) {
            const double ratio = differential_res[level - 1] / differential_res[level];
            rep.rows.push_back({"differential_residual", n, "reduction_factor", ratio, 1.0, ratio > 1.0});
        }
    }
    return rep;
}

inline void write_report_csv(std::ostream& os, const VerificationReport& rep)
{
    os << "criterion,grid_n,metric,value,threshold,pass\n";
    for (const CriterionRow& r : rep.rows)
        os << r.criterion << ',' << r.grid_n << ',' << r.metric << ',' << csv::real(r.value) << ','
           << csv::real(r.threshold) << ',' << (r.pass ? 1 : 0) << '\n';
}

inline void write_report_summary(std::ostream& os, const VerificationReport& rep)
{
    const KineticProblem& p = rep.problem;
    os << "problem: nu=" << p.nu << " c=" << p.c << " N_a=" << p.N_a << " a=" << p.a;
    if (p.mu)
        os << " mu=" << *p.mu;
    os << " T=" << rep.T << '\n';
    for (const CriterionRow& r : rep.rows) {
        os << "  " << (r.pass ? "pass" : "FAIL") << "  " << r.criterion << " n=" << r.grid_n << ' ' << r.metric
           << " = " << r.value;
        if (r.threshold)
            os << (r.metric == "observed_order" || r.metric == "reduction_factor" ? " (min " : " (max ")
               << *r.threshold << ')';
        os << '\n';
    }
    double total = 0.0;
    for (const StageTiming& t : rep.timings) {
        os << "  time " << t.stage << " n=" << t.grid_n << ": " << t.seconds << " s\n";
        total += t.seconds;
    }
    os << "total " << total << " s; " << (rep.passed() ? "all criteria pass" : "verification FAILED") << '\n';
}

struct SweepOptions
{
    std::vector<double> nus;
    std::vector<std::optional<double>> mus{std::nullopt}; ///< nullopt: constant-N_a form
    std::vector<double> cs;
    double a = 0.0;
    double N_a = 1.0;
    std::optional<double> T; ///< default 5/c per row
    std::size_t n = 2000;
    double tol = 1e-3;
    std::size_t skip_nodes = 10;
    bool parallel = true;

    void validate() const
    {
        if (nus.empty() || mus.empty() || cs.empty())
            throw std::invalid_argument("sweep: every parameter range must be non-empty");
        for (double nu : nus)
            if (!(nu > 0.0))
                throw std::invalid_argument("sweep: nu must be positive");
        for (const auto& mu : mus)
            if (mu && !(*mu > 0.0))
                throw std::invalid_argument("sweep: mu must be positive");
        for (double c : cs)
            if (!(c > 0.0))
                throw std::invalid_argument("sweep: c must be positive");
        if (T && !(*T > 0.0))
            throw std::invalid_argument("sweep: T must be positive");
        if (n < 2 * skip_nodes || n > default_max_grid_steps)
            throw std::invalid_argument("sweep: n out of range");
        if (!(tol > 0.0))
            throw std::invalid_argument("sweep: tol must be positive");
    }
};

struct SweepRow
{
    double nu = 0.0;
    std::optional<double> mu;
    double c = 0.0;
    std::size_t n = 0;
    double T = 0.0;
    double max_error = 0.0;
    double residual_max = 0.0;
    bool pass = false;
    std::string error; ///< empty unless the row could not be computed
};

inline SweepRow run_sweep_row(const SweepOptions& opt, double nu, std::optional<double> mu, double c)
{
    SweepRow row{nu, mu, c, opt.n, opt.T.value_or(5.0 / c), 0.0, 0.0, false, {}};
    row.max_error = row.residual_max = std::numeric_limits<double>::quiet_NaN();
    try {
        const KineticProblem p{nu, c, opt.N_a, opt.a, mu};
        const UniformGrid g = UniformGrid::over(opt.a, row.T, opt.n);
        const SolutionCurve closed = closed_form_curve(p, g);
        const SolutionCurve oracle = solve_volterra(p, g);
        row.max_error = detail::error_norms(closed.curve, oracle.curve, opt.skip_nodes).max;
        row.residual_max = detail::max_abs_from(residual_integral_eq(p, closed), opt.skip_nodes);
        row.pass = row.max_error <= opt.tol && row.residual_max <= opt.tol;
    } catch (const std::exception& e) {
        row.error = e.what();
        row.pass = false;
    }
    return row;
}

/// Cartesian product, nu outer, mu middle, c inner. Rows are independent and
/// may be computed concurrently; the result order never depends on scheduling.
inline std::vector<SweepRow> run_sweep(const SweepOptions& opt)
{
    opt.validate();
    struct Combo
    {
        double nu;
        std::optional<double> mu;
        double c;
    };
    std::vector<Combo> combos;
    for (double nu : opt.nus)
        for (const auto& mu : opt.mus)
            for (double c : opt.cs)
                combos.push_back({nu, mu, c});

    std::vector<SweepRow> rows(combos.size());
    const std::size_t width = opt.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
    for (std::size_t start = 0; start < combos.size(); start += width) {
        const std::size_t stop = std::min(combos.size(), start + width);
        std::vector<std::future<SweepRow>> jobs;
        for (std::size_t i = start; i < stop; ++i)
            jobs.push_back(std::async(opt.parallel ? std::launch::async : std::launch::deferred,
                                      [&opt, k = combos[i]] { return run_sweep_row(opt, k.nu, k.mu, k.c); }));
        for (std::size_t i = start; i < stop; ++i)
            rows[i] = jobs[i - start].get();
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    os << "nu,mu,c,n,T,max_error,residual_max,pass,error\n";
    for (const SweepRow& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        os << csv::real(r.nu) << ',' << csv::real(r.mu) << ',' << csv::real(r.c) << ',' << r.n << ','
           << csv::real(r.T) << ',' << csv::real(r.max_error) << ',' << csv::real(r.residual_max) << ','
           << (r.pass ? 1 : 0) << ',' << err << '\n';
    }
}

} // namespace fkin

#endif
