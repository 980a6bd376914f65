// fkin: Mittag-Leffler evaluation, kinetic solution curves, verification runs.
//
// exit codes: 0 success, 1 verification failure, 2 usage or validation error

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fkin/fkin.hpp>

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct UsageError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

double parse_real(const std::string& s, const char* what)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw UsageError(std::string(what) + ": not a number: '" + s + "'");
    return x;
}

std::vector<double> parse_reals(const std::vector<std::string>& items, const char* what)
{
    std::vector<double> out;
    for (const std::string& s : items)
        out.push_back(parse_real(s, what));
    return out;
}

/// Output sink: the named file, or stdout when the path is empty.
class Sink
{
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw UsageError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct ProblemFlags
{
    double nu = 1.0;
    std::optional<double> mu;
    double c = 1.0;
    std::optional<double> N_a;
    std::optional<double> N_0;
    double a = 0.0;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--nu", nu, "order nu > 0")->required();
        cmd.add_option("--mu", mu, "power-forcing exponent mu > 0; omit for constant N_a");
        cmd.add_option("--c", c, "rate constant c > 0")->capture_default_str();
        auto* na = cmd.add_option("--Na", N_a, "initial density N_a at t = a (default 1)");
        auto* n0 = cmd.add_option("--N0", N_0, "initial density for a start at t = 0");
        na->excludes(n0);
        n0->excludes(na);
        cmd.add_option("--a", a, "start time a")->capture_default_str();
    }

    fkin::KineticProblem problem() const
    {
        if (N_0 && a != 0.0)
            throw UsageError("--N0 describes a start at t = 0; use --Na with --a");
        fkin::KineticProblem p{nu, c, N_0 ? *N_0 : N_a.value_or(1.0), a, mu};
        p.validate();
        return p;
    }
};

struct Method
{
    fkin::SolutionMethod kind = fkin::SolutionMethod::closed_form;
    std::size_t terms = 0;

    static Method parse(const std::string& s)
    {
        if (s == "closed")
            return {fkin::SolutionMethod::closed_form, 0};
        if (s == "oracle")
            return {fkin::SolutionMethod::oracle, 0};
        const std::string prefix = "neumann:";
        if (s.rfind(prefix, 0) == 0) {
            const std::string m = s.substr(prefix.size());
            if (!m.empty() && m.find_first_not_of("0123456789") == std::string::npos)
                return {fkin::SolutionMethod::neumann, std::stoul(m)};
        }
        throw UsageError("--method: expected closed, oracle or neumann:M, got '" + s + "'");
    }
};

int cmd_ml(double alpha, double beta, const std::vector<std::string>& zs, const std::string& out)
{
    const fkin::MLParams params{alpha, beta};
    params.validate();
    const std::vector<double> z = parse_reals(zs, "--z");
    Sink sink(out);
    std::ostream& os = sink.stream();
    os << "z,value,regime,terms\n";
    for (double x : z) {
        try {
            const fkin::MLResult r = fkin::ml_eval(params, x);
            os << fkin::csv::real(x) << ',' << fkin::csv::real(r.value) << ',' << fkin::to_string(r.regime) << ','
               << r.terms << '\n';
        } catch (const fkin::UnsupportedRegimeError& e) {
            os << fkin::csv::real(x) << ',' << fkin::csv::missing << ",unsupported," << fkin::csv::missing << '\n';
            std::cerr << "z=" << x << ": " << e.what() << '\n';
        } catch (const fkin::OverflowError& e) {
            os << fkin::csv::real(x) << ',' << fkin::csv::missing << ",overflow," << fkin::csv::missing << '\n';
            std::cerr << "z=" << x << ": " << e.what() << '\n';
        }
    }
    return exit_ok;
}

double max_gap(const fkin::SolutionCurve& x, const fkin::SolutionCurve& y, std::size_t from)
{
    double m = 0.0;
    for (std::size_t j = std::max(from, x.curve.first_defined()); j < x.curve.size(); ++j)
        m = std::max(m, std::fabs(x.curve[j] - y.curve[j]));
    return m;
}

int cmd_solve(const fkin::KineticProblem& p, double T, std::size_t n, const std::string& method,
              const std::string& out)
{
    const Method m = Method::parse(method);
    const fkin::UniformGrid g = fkin::UniformGrid::over(p.a, T, n);
    g.validate();

    fkin::SolutionCurve curve = fkin::closed_form_curve(p, g);
    if (m.kind != fkin::SolutionMethod::closed_form) {
        const fkin::SolutionCurve closed = curve;
        curve = m.kind == fkin::SolutionMethod::oracle ? fkin::solve_volterra(p, g) : fkin::neumann_curve(p, g, m.terms);
        const std::size_t skip = std::min<std::size_t>(10, n);
        std::cerr << method << " vs closed form: max gap " << max_gap(curve, closed, skip) << " on t >= "
                  << g.node(skip) << '\n';
    }
    Sink sink(out);
    fkin::csv::write_curve(sink.stream(), curve.curve);
    return exit_ok;
}

int cmd_verify(const fkin::VerifyOptions& opt, const std::string& out)
{
    opt.validate();
    const fkin::VerificationReport rep = fkin::run_verification(opt);
    Sink sink(out);
    fkin::write_report_csv(sink.stream(), rep);
    fkin::write_report_summary(sink.to_file() ? std::cout : std::cerr, rep);
    return rep.passed() ? exit_ok : exit_failed;
}

int cmd_sweep(fkin::SweepOptions opt, const std::vector<std::string>& nus, const std::vector<std::string>& mus,
              const std::vector<std::string>& cs, const std::string& out)
{
    opt.nus = parse_reals(nus, "--nu");
    opt.cs = parse_reals(cs, "--c");
    if (!mus.empty()) {
        opt.mus.clear();
        for (const std::string& s : mus)
            opt.mus.push_back(s == "none" ? std::nullopt : std::optional<double>(parse_real(s, "--mu")));
    }
    opt.validate();
    const std::vector<fkin::SweepRow> rows = fkin::run_sweep(opt);
    Sink sink(out);
    fkin::write_sweep_csv(sink.stream(), rows);
    std::size_t failed = 0;
    for (const fkin::SweepRow& r : rows)
        failed += r.pass ? 0 : 1;
    std::cerr << rows.size() - failed << " of " << rows.size() << " rows pass\n";
    return failed == rows.size() ? exit_failed : exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fractional kinetic equations: Mittag-Leffler evaluation, solution curves, verification"};
    app.require_subcommand(1);

    std::string out;
    double tol = 1e-3;

    auto* ml = app.add_subcommand("ml", "evaluate E_{alpha,beta}(z); CSV z,value,regime,terms");
    double alpha = 1.0, beta = 1.0;
    std::vector<std::string> zs;
    ml->add_option("--alpha", alpha, "alpha > 0")->required();
    ml->add_option("--beta", beta, "beta > 0")->capture_default_str();
    ml->add_option("--z", zs, "arguments, comma separated or repeated")->required()->delimiter(',')->allow_extra_args();
    ml->add_option("--out", out, "output CSV (default stdout)");

    auto* solve = app.add_subcommand("solve", "solution curve on [a, a+T]; CSV t,N");
    ProblemFlags solve_flags;
    solve_flags.add_to(*solve);
    double solve_T = 5.0;
    std::size_t solve_n = 500;
    std::string method = "closed";
    solve->add_option("--T", solve_T, "interval length")->capture_default_str();
    solve->add_option("--n", solve_n, "grid steps")->capture_default_str();
    solve->add_option("--method", method, "closed, oracle or neumann:M")->capture_default_str();
    solve->add_option("--out", out, "output CSV (default stdout)");

    auto* verify = app.add_subcommand("verify", "closed form vs oracle and residuals over halved grids");
    ProblemFlags verify_flags;
    verify_flags.add_to(*verify);
    fkin::VerifyOptions vopt;
    verify->add_option("--T", vopt.T, "interval length")->capture_default_str();
    verify->add_option("--n", vopt.n, "coarsest grid steps")->capture_default_str();
    verify->add_option("--levels", vopt.levels, "grid levels L >= 2")->capture_default_str();
    verify->add_option("--tol", tol, "bound on max errors and residuals")->capture_default_str();
    verify->add_option("--out", out, "report CSV (default stdout; summary then goes to stderr)");
    verify->add_option("--perturb", vopt.perturb, "scale the closed-form curve (failure-path check)")->group("");

    auto* sweep = app.add_subcommand("sweep", "oracle agreement over a grid of (nu, mu, c)");
    std::vector<std::string> sweep_nu, sweep_mu, sweep_c;
    fkin::SweepOptions sopt;
    std::optional<double> sweep_T;
    bool serial = false;
    sweep->add_option("--nu", sweep_nu, "nu values")->required()->delimiter(',');
    sweep->add_option("--mu", sweep_mu, "mu values, 'none' for constant N_a (default none)")->delimiter(',');
    sweep->add_option("--c", sweep_c, "c values")->required()->delimiter(',');
    sweep->add_option("--a", sopt.a, "start time a")->capture_default_str();
    sweep->add_option("--Na", sopt.N_a, "initial density N_a")->capture_default_str();
    sweep->add_option("--T", sweep_T, "interval length (default 5/c)");
    sweep->add_option("--n", sopt.n, "grid steps")->capture_default_str();
    sweep->add_option("--tol", tol, "bound on max error and residual")->capture_default_str();
    sweep->add_option("--out", out, "output CSV (default stdout)");
    sweep->add_flag("--serial", serial, "run rows one at a time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*ml)
            return cmd_ml(alpha, beta, zs, out);
        if (*solve)
            return cmd_solve(solve_flags.problem(), solve_T, solve_n, method, out);
        if (*verify) {
            vopt.problem = verify_flags.problem();
            vopt.tol = tol;
            return cmd_verify(vopt, out);
        }
        sopt.T = sweep_T;
        sopt.tol = tol;
        sopt.parallel = !serial;
        return cmd_sweep(sopt, sweep_nu, sweep_mu, sweep_c, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failed;
    }
}
