#pragma once

#include "mabhet/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

namespace mabhet::quad {

struct Result
{
    double value = 0.0;
    double error = 0.0;

    Result& operator+=(const Result& o) noexcept
    {
        value += o.value;
        error += o.error;
        return *this;
    }
};

struct Tolerance
{
    double rel = 1e-10;
    /// Error estimates below this are accepted regardless of `rel`.
    double abs = 1e-12;
    unsigned max_depth = 18;
};

namespace detail {

inline void
Check(const Result& r, double l1, const Tolerance& tol, double a, double b)
{
    const double limit = std::max(tol.abs, 1e3 * tol.rel * l1);
    if (!std::isfinite(r.value) || !(r.error <= limit))
    {
        throw QuadratureFailure("adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                                "] stopped with error " + std::to_string(r.error));
    }
}

} // namespace detail

/// Adaptive 31-point Gauss-Kronrod on a finite interval.
template <typename F>
Result
Integrate(F&& f, double a, double b, const Tolerance& tol = {})
{
    if (!(b > a))
    {
        return {};
    }
    Result r;
    double l1 = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, tol.max_depth, tol.rel,
                                                                             &r.error, &l1);
    detail::Check(r, l1, tol, a, b);
    return r;
}

/// Integral over [a, inf) by exp-sinh quadrature, which copes with the slow
/// algebraic tails of LoS interference integrands.
template <typename F>
Result
IntegrateToInfinity(F&& f, double a, const Tolerance& tol = {})
{
    thread_local boost::math::quadrature::exp_sinh<double> integrator(9);
    auto guarded = [&](double t) {
        const double v = f(t);
        return std::isfinite(v) ? v : 0.0;
    };
    Result r;
    double l1 = 0.0;
    r.value = integrator.integrate(guarded, a, std::numeric_limits<double>::infinity(), tol.rel, &r.error, &l1);
    detail::Check(r, l1, tol, a, std::numeric_limits<double>::infinity());
    return r;
}

/// Integral over [a, inf) split at the sorted interior `breaks`.
template <typename F>
Result
IntegratePiecewise(F&& f, double a, std::span<const double> breaks, const Tolerance& tol = {})
{
    Result total;
    double lo = a;
    for (double b : breaks)
    {
        if (b > lo * (1.0 + 1e-12))
        {
            total += Integrate(f, lo, b, tol);
            lo = b;
        }
    }
    total += IntegrateToInfinity(f, lo, tol);
    return total;
}

} // namespace mabhet::quad
