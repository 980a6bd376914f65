#ifndef FKIN_DETAIL_WIDE_FLOAT_HPP
#define FKIN_DETAIL_WIDE_FLOAT_HPP

// Extended-precision scalar used to accumulate cancelling series.
// IEEE binary128 through libquadmath where the compiler provides __float128,
// otherwise long double (binary128 on aarch64, x87 extended on other targets).

#include <cmath>

#if defined(__SIZEOF_FLOAT128__) && !defined(FKIN_NO_QUADMATH)
#define FKIN_HAVE_QUADMATH 1
extern "C" {
#include <quadmath.h>
}
#endif

namespace fkin::detail
{

#if defined(FKIN_HAVE_QUADMATH)

using wide = __float128;

inline wide wide_abs(wide x) { return fabsq(x); }
inline wide wide_log(wide x) { return logq(x); }
inline wide wide_exp(wide x) { return expq(x); }
inline wide wide_pow(wide x, wide y) { return powq(x, y); }
inline wide wide_lgamma(wide x) { return lgammaq(x); }
inline wide wide_tgamma(wide x) { return tgammaq(x); }
inline wide wide_sin(wide x) { return sinq(x); }
inline wide wide_floor(wide x) { return floorq(x); }
inline wide wide_round(wide x) { return roundq(x); }
inline bool wide_isfinite(wide x) { return finiteq(x) != 0; }
inline wide wide_pi() { return 4 * atanq(1); }

#else

using wide = long double;

inline wide wide_abs(wide x) { return std::fabs(x); }
inline wide wide_log(wide x) { return std::log(x); }
inline wide wide_exp(wide x) { return std::exp(x); }
inline wide wide_pow(wide x, wide y) { return std::pow(x, y); }
inline wide wide_lgamma(wide x) { return std::lgamma(x); }
inline wide wide_tgamma(wide x) { return std::tgamma(x); }
inline wide wide_sin(wide x) { return std::sin(x); }
inline wide wide_floor(wide x) { return std::floor(x); }
inline wide wide_round(wide x) { return std::round(x); }
inline bool wide_isfinite(wide x) { return std::isfinite(x); }
inline wide wide_pi() { return 3.141592653589793238462643383279502884L; }

#endif

/// 1/Gamma(x) in extended precision, exact 0 at the poles.
inline wide wide_reciprocal_gamma(wide x)
{
    if (x <= 0 && wide_floor(x) == x)
        return 0;
    if (x > 0) {
        // tgamma stays finite well past the double range; beyond that go through logs
        if (x < 1700)
            return 1 / wide_tgamma(x);
        return wide_exp(-wide_lgamma(x));
    }
    // reflection with exact reduction of the sine argument
    const wide n = wide_round(x);
    wide s = wide_sin(wide_pi() * (x - n));
    if (static_cast<long long>(n) % 2 != 0)
        s = -s;
    return s * wide_tgamma(1 - x) / wide_pi();
}

} // namespace fkin::detail

#endif
