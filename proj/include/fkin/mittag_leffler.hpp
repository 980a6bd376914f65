#ifndef FKIN_MITTAG_LEFFLER_HPP
#define FKIN_MITTAG_LEFFLER_HPP

// Two-parameter Mittag-Leffler function
//
//     E_{alpha,beta}(z) = sum_{k>=0} z^k / Gamma(alpha k + beta),   alpha, beta > 0,
//
// for real z. E_alpha(z) is the beta = 1 case.
//
// Two regimes, split at |z| = asymptotic_switch:
//  - power series, accumulated in extended precision. On the negative axis the
//    terms grow to about exp(|z|^(1/alpha)) before the sum cancels down to O(1),
//    so double accumulation is useless well before the switch point.
//  - asymptotic expansion for alpha < 2:
//        E(z) ~ X(z) - sum_{k=1}^{K} z^-k / Gamma(beta - alpha k),
//    truncated at the smallest term of the reflection envelope
//    Gamma(alpha k + 1 - beta) / (pi |z|^k). X(z) is the exponential part:
//      z > 0:                (1/alpha) zeta^(1-beta) e^zeta, zeta = z^(1/alpha)
//      z < 0, 1 < alpha < 2: (2/alpha) Re[zeta^(1-beta) e^zeta], zeta = |z|^(1/alpha) e^(i pi/alpha)
//      z < 0, alpha = 1:     half of the above (the negative axis is a Stokes line)
//      z < 0, alpha < 1:     0
//    The neglected remainder is O(exp(-|z|^(1/alpha))).
//
// The default switch sits at |z|^(1/alpha) = 38, where both regimes are good
// to roughly 1e-14 relative. alpha >= 2 on the far negative axis is rejected.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/wide_float.hpp"
#include "errors.hpp"
#include "special.hpp"

namespace fkin
{

struct MLParams
{
    double alpha = 1.0;
    double beta = 1.0;

    void validate() const
    {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("Mittag-Leffler: alpha must be positive");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("Mittag-Leffler: beta must be positive");
    }
};

struct MLEvalPolicy
{
    double series_tol = 1e-16;          ///< relative term-size stopping tolerance
    std::size_t max_terms = 10000;      ///< series terms before non-convergence is reported
    double asymptotic_switch = 1.0;     ///< |z| above which the asymptotic expansion is used
    std::size_t asymptotic_terms = 5000; ///< cap on algebraic asymptotic terms

    /// |z|^(1/alpha) at the default regime switch.
    static constexpr double default_switch_scale = 38.0;
    /// alpha = beta = 1 has no algebraic tail (E = exp); switch earlier so the
    /// series never has to resolve exponentially small values.
    static constexpr double exponential_switch_scale = 20.0;

    static MLEvalPolicy defaults_for(const MLParams& p)
    {
        MLEvalPolicy policy;
        const double scale =
            (p.alpha == 1.0 && p.beta == 1.0) ? exponential_switch_scale : default_switch_scale;
        policy.asymptotic_switch = std::pow(scale, p.alpha);
        return policy;
    }

    void validate() const
    {
        if (!(series_tol > 0.0))
            throw std::invalid_argument("MLEvalPolicy: series_tol must be positive");
        if (max_terms < 1)
            throw std::invalid_argument("MLEvalPolicy: max_terms must be at least 1");
        if (!(asymptotic_switch > 0.0))
            throw std::invalid_argument("MLEvalPolicy: asymptotic_switch must be positive");
        if (asymptotic_terms < 1)
            throw std::invalid_argument("MLEvalPolicy: asymptotic_terms must be at least 1");
    }
};

enum class MLRegime
{
    series,
    asymptotic,
};

inline const char* to_string(MLRegime r)
{
    return r == MLRegime::series ? "series" : "asymptotic";
}

struct MLResult
{
    double value;
    MLRegime regime;
    std::size_t terms; ///< number of series / asymptotic terms summed
};

namespace detail
{

// Per-thread cache of 1/Gamma(beta + sign alpha k), k = 0, 1, ... in extended
// precision. Curves evaluate E_{alpha,beta} at many z with fixed parameters,
// and the gamma calls dominate the cost of a term otherwise.
class ReciprocalGammaTable
{
public:
    ReciprocalGammaTable(double alpha, double beta, int sign) : alpha_(alpha), beta_(beta), sign_(sign) {}

    bool matches(double alpha, double beta, int sign) const
    {
        return alpha == alpha_ && beta == beta_ && sign == sign_;
    }

    wide at(std::size_t k)
    {
        while (values_.size() <= k) {
            const wide arg = static_cast<wide>(beta_) +
                             static_cast<wide>(sign_) * static_cast<wide>(alpha_) *
                                 static_cast<wide>(values_.size());
            values_.push_back(wide_reciprocal_gamma(arg));
        }
        return values_[k];
    }

private:
    double alpha_;
    double beta_;
    int sign_;
    std::vector<wide> values_;
};

inline ReciprocalGammaTable& reciprocal_gamma_table(double alpha, double beta, int sign)
{
    constexpr std::size_t slots = 8;
    thread_local std::vector<ReciprocalGammaTable> tables;
    thread_local std::size_t next_victim = 0;
    tables.reserve(slots);
    for (auto& t : tables)
        if (t.matches(alpha, beta, sign))
            return t;
    if (tables.size() < slots) {
        tables.emplace_back(alpha, beta, sign);
        return tables.back();
    }
    auto& slot = tables[next_victim];
    next_victim = (next_victim + 1) % slots;
    slot = ReciprocalGammaTable(alpha, beta, sign);
    return slot;
}

// Generates z^k / Gamma(alpha k + beta), k = 0, 1, ..., in extended precision.
class SeriesTerms
{
public:
    SeriesTerms(const MLParams& p, double z)
        : table_(reciprocal_gamma_table(p.alpha, p.beta, +1)), alpha_(p.alpha), beta_(p.beta),
          abs_z_(static_cast<wide>(std::fabs(z))), negative_(z < 0.0)
    {
    }

    wide next()
    {
        const std::size_t k = k_++;
        if (k > 0)
            power_ *= abs_z_;
        const wide arg = static_cast<wide>(alpha_) * static_cast<wide>(k) + static_cast<wide>(beta_);
        wide mag;
        if (k > 0 && abs_z_ == 0)
            mag = 0;
        else if (wide_isfinite(power_) && arg < 1700)
            mag = power_ * table_.at(k);
        else
            mag = wide_exp(static_cast<wide>(k) * wide_log(abs_z_) - wide_lgamma(arg));
        return (negative_ && (k % 2 == 1)) ? -mag : mag;
    }

private:
    ReciprocalGammaTable& table_;
    double alpha_;
    double beta_;
    wide abs_z_;
    bool negative_;
    wide power_ = 1;
    std::size_t k_ = 0;
};

inline MLResult ml_series_unchecked(const MLParams& p, double z, const MLEvalPolicy& policy)
{
    if (z == 0.0)
        return {reciprocal_gamma(p.beta), MLRegime::series, 1};
    const wide tol = static_cast<wide>(policy.series_tol);
    SeriesTerms terms(p, z);

    wide sum = terms.next();
    wide prev_mag = wide_abs(sum);
    for (std::size_t k = 1; k < policy.max_terms; ++k) {
        const wide term = terms.next();
        const wide mag = wide_abs(term);
        // stop once the next term is negligible and the terms are already shrinking
        if (mag <= tol * wide_abs(sum) && mag <= prev_mag)
            return {static_cast<double>(sum), MLRegime::series, k};
        sum += term;
        prev_mag = mag;
    }
    throw NonConvergenceError("Mittag-Leffler series: no convergence within " +
                              std::to_string(policy.max_terms) + " terms (alpha=" +
                              std::to_string(p.alpha) + ", beta=" + std::to_string(p.beta) +
                              ", z=" + std::to_string(z) + ")");
}

// log of the reflection envelope of |z^-k / Gamma(beta - alpha k)|
inline double ml_asymptotic_log_envelope(const MLParams& p, double log_abs_z, std::size_t k)
{
    const double x = p.beta - p.alpha * static_cast<double>(k);
    const double kk = static_cast<double>(k);
    if (x >= 0.5)
        return std::log(std::fabs(reciprocal_gamma(x))) - kk * log_abs_z;
    return log_gamma(1.0 - x) - std::log(std::numbers::pi) - kk * log_abs_z;
}

inline double ml_exponential_part(const MLParams& p, double z)
{
    const double a = p.alpha;
    const double b = p.beta;
    if (z > 0.0) {
        const double r = std::pow(z, 1.0 / a);
        return std::pow(r, 1.0 - b) * std::exp(r) / a;
    }
    if (a < 1.0)
        return 0.0;
    const double r = std::pow(-z, 1.0 / a);
    if (a == 1.0)
        return std::pow(r, 1.0 - b) * std::exp(-r) * std::cos(std::numbers::pi * (1.0 - b));
    const double theta = std::numbers::pi / a;
    const double phase = (1.0 - b) * theta + r * std::sin(theta);
    return (2.0 / a) * std::pow(r, 1.0 - b) * std::exp(r * std::cos(theta)) * std::cos(phase);
}

} // namespace detail

/// Partial sum S_K = sum_{k=0}^{K} z^k / Gamma(alpha k + beta), no stopping rule.
inline double ml_partial_sum(const MLParams& p, double z, std::size_t last_index)
{
    p.validate();
    detail::SeriesTerms terms(p, z);
    detail::wide sum = 0;
    for (std::size_t k = 0; k <= last_index; ++k)
        sum += terms.next();
    return static_cast<double>(sum);
}

/// Power series evaluation; requires |z| <= policy.asymptotic_switch.
inline MLResult ml_series(const MLParams& p, double z, const MLEvalPolicy& policy)
{
    p.validate();
    policy.validate();
    if (!std::isfinite(z))
        throw DomainError("ml_series: z must be finite");
    if (std::fabs(z) > policy.asymptotic_switch)
        throw DomainError("ml_series: |z| exceeds the asymptotic switch");
    return detail::ml_series_unchecked(p, z, policy);
}

/// Asymptotic expansion, valid for large |z| and alpha < 2.
inline MLResult ml_asymptotic(const MLParams& p, double z, const MLEvalPolicy& policy)
{
    p.validate();
    policy.validate();
    if (!std::isfinite(z) || z == 0.0)
        throw DomainError("ml_asymptotic: z must be finite and non-zero");
    if (p.alpha >= 2.0)
        throw UnsupportedRegimeError("ml_asymptotic: alpha >= 2 is outside the supported range");

    const double exp_part = detail::ml_exponential_part(p, z);
    const double log_abs_z = std::log(std::fabs(z));
    const bool negative = z < 0.0;
    auto& table = detail::reciprocal_gamma_table(p.alpha, p.beta, -1);

    detail::wide algebraic = 0;
    double prev_env = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    for (std::size_t k = 1; k <= policy.asymptotic_terms; ++k) {
        const double env = detail::ml_asymptotic_log_envelope(p, log_abs_z, k);
        if (env > prev_env)
            break; // optimal truncation
        const double scale = std::max(std::fabs(static_cast<double>(algebraic)), std::fabs(exp_part));
        if (scale > 0.0 && env < std::log(1e-18 * scale))
            break; // remaining terms are negligible
        prev_env = env;

        // -z^-k / Gamma(beta - alpha k): sign of z^-k is (-1)^k on the negative axis
        detail::wide term = detail::wide_exp(-static_cast<detail::wide>(k) *
                                             static_cast<detail::wide>(log_abs_z)) *
                            table.at(k);
        if (negative && (k % 2 == 1))
            term = -term;
        algebraic -= term;
        used = k;
    }
    return {exp_part + static_cast<double>(algebraic), MLRegime::asymptotic, used};
}

/// Global evaluator over the real line with an explicit policy.
inline MLResult ml_eval(const MLParams& p, double z, const MLEvalPolicy& policy)
{
    p.validate();
    policy.validate();
    if (!std::isfinite(z))
        throw DomainError("ml_eval: z must be finite");

    constexpr double log_max = 709.78; // log(DBL_MAX)
    if (z > 0.0) {
        const double r = std::pow(z, 1.0 / p.alpha);
        const double log_lead = r + (1.0 - p.beta) / p.alpha * std::log(z) - std::log(p.alpha);
        if (log_lead > log_max)
            throw OverflowError("ml_eval: E_{alpha,beta}(z) overflows double at z=" + std::to_string(z));
    }

    MLResult res{};
    if (std::fabs(z) <= policy.asymptotic_switch) {
        res = detail::ml_series_unchecked(p, z, policy);
    } else if (p.alpha >= 2.0) {
        if (z < 0.0)
            throw UnsupportedRegimeError(
                "ml_eval: alpha >= 2 beyond the asymptotic switch on the negative axis is not supported");
        res = detail::ml_series_unchecked(p, z, policy);
    } else {
        res = ml_asymptotic(p, z, policy);
    }
    if (!std::isfinite(res.value))
        throw OverflowError("ml_eval: result not representable at z=" + std::to_string(z));
    return res;
}

inline MLResult ml_eval(const MLParams& p, double z)
{
    p.validate();
    return ml_eval(p, z, MLEvalPolicy::defaults_for(p));
}

/// E_{alpha,beta}(z)
inline double mittag_leffler(double alpha, double beta, double z)
{
    return ml_eval(MLParams{alpha, beta}, z).value;
}

/// E_alpha(z)
inline double mittag_leffler(double alpha, double z)
{
    return mittag_leffler(alpha, 1.0, z);
}

} // namespace fkin

#endif
