#ifndef FKIN_GRID_HPP
#define FKIN_GRID_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace fkin
{

/// Uniform mesh t_j = a + j h, j = 0..n, on [a, a + n h].
struct UniformGrid
{
    double a = 0.0;
    double h = 1.0;
    std::size_t n = 2;

    /// Grid covering [a, a + T] with n steps.
    static UniformGrid over(double a, double T, std::size_t n)
    {
        if (!(T > 0.0) || !std::isfinite(T))
            throw std::invalid_argument("UniformGrid: interval length T must be positive");
        if (n < 2)
            throw std::invalid_argument("UniformGrid: need at least 2 steps");
        UniformGrid g{a, T / static_cast<double>(n), n};
        g.validate();
        return g;
    }

    void validate() const
    {
        if (!std::isfinite(a))
            throw std::invalid_argument("UniformGrid: a must be finite");
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::invalid_argument("UniformGrid: step h must be positive");
        if (n < 2)
            throw std::invalid_argument("UniformGrid: need at least 2 steps");
    }

    double node(std::size_t j) const { return a + static_cast<double>(j) * h; }
    double length() const { return static_cast<double>(n) * h; }
    std::size_t size() const { return n + 1; }

    /// Same grid with the step halved.
    UniformGrid refined() const { return UniformGrid{a, 0.5 * h, 2 * n}; }

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;
};

/// Samples of a function on a UniformGrid. Nodes below first_defined are
/// flagged undefined (an endpoint singularity) and hold NaN.
class GridFunction
{
public:
    GridFunction() = default;

    GridFunction(UniformGrid grid, std::vector<double> values, std::size_t first_defined = 0)
        : grid_(grid), values_(std::move(values)), first_defined_(first_defined)
    {
        grid_.validate();
        if (values_.size() != grid_.size())
            throw std::invalid_argument("GridFunction: expected " + std::to_string(grid_.size()) +
                                        " values, got " + std::to_string(values_.size()));
        if (first_defined_ > grid_.n)
            throw std::invalid_argument("GridFunction: no defined nodes");
        for (std::size_t j = 0; j < first_defined_; ++j)
            values_[j] = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = first_defined_; j < values_.size(); ++j)
            if (!std::isfinite(values_[j]))
                throw std::invalid_argument("GridFunction: non-finite value at node " + std::to_string(j));
    }

    /// Sample f at every node.
    template <typename F>
    static GridFunction sample(const UniformGrid& grid, F&& f)
    {
        std::vector<double> v(grid.size());
        for (std::size_t j = 0; j < v.size(); ++j)
            v[j] = f(grid.node(j));
        return GridFunction(grid, std::move(v));
    }

    const UniformGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    std::size_t first_defined() const { return first_defined_; }
    bool defined(std::size_t j) const { return j >= first_defined_; }

    double operator[](std::size_t j) const { return values_[j]; }

private:
    UniformGrid grid_{};
    std::vector<double> values_;
    std::size_t first_defined_ = 0;
};

inline void require_same_grid(const UniformGrid& x, const UniformGrid& y, const char* where)
{
    if (!(x == y))
        throw GridMismatchError(std::string(where) + ": grids differ");
}

} // namespace fkin

#endif
