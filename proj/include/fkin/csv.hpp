#ifndef FKIN_CSV_HPP
#define FKIN_CSV_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include "grid.hpp"

namespace fkin::csv
{

/// Token written for flagged or missing values.
inline constexpr const char* missing = "NA";

/// 17 significant digits, scientific notation; NA for non-finite values.
inline std::string real(double x)
{
    if (!std::isfinite(x))
        return missing;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline std::string real(std::optional<double> x)
{
    return x ? real(*x) : std::string(missing);
}

/// Curve schema: header `t,N`, one row per node, NA at flagged nodes.
inline void write_curve(std::ostream& os, const GridFunction& f)
{
    os << "t,N\n";
    const UniformGrid& g = f.grid();
    for (std::size_t j = 0; j < f.size(); ++j)
        os << real(g.node(j)) << ',' << (f.defined(j) ? real(f[j]) : std::string(missing)) << '\n';
}

} // namespace fkin::csv

#endif
