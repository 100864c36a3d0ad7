#pragma once

// Thin wrappers over Boost.Math tanh-sinh quadrature.
//
// Finite segments hand the integrand accurate distances to both ends of the
// segment, so densities with endpoint singularities (arcsin, beta with a
// parameter below one) and kernels singular at a segment end can be evaluated
// without cancellation in x - a.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace powermix::quad {

inline constexpr double kDefaultTolerance = 1e-11;

inline boost::math::quadrature::tanh_sinh<double>& engine() {
    thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    return ts;
}

/// Fewer refinement levels, for integrands that carry their own quadrature noise.
inline boost::math::quadrature::tanh_sinh<double>& coarse_engine() {
    thread_local boost::math::quadrature::tanh_sinh<double> ts(7);
    return ts;
}

/// ∫_a^b f(x, x - a, b - x) dx for finite a < b. Works for complex-valued f.
template <class F>
auto segment(F&& f, double a, double b, double tol = kDefaultTolerance, bool coarse = false) {
    using R = decltype(f(a, 0.0, 0.0));
    if (!(b > a)) return R{};
    const double width = b - a;
    const double half = 0.5 * width;
    // Unit-interval form: tc = sign(t) * (1 - |t|).
    auto g = [&](double t, double tc) -> R {
        if (t < 0) {
            const double u = -half * tc;
            return f(a + u, u, width - u);
        }
        const double v = half * tc;
        return f(b - v, width - v, v);
    };
    auto& ts = coarse ? coarse_engine() : engine();
    return static_cast<R>(half * ts.integrate(g, tol));
}

/// ∫_a^b f(x) dx where either bound may be infinite.
template <class F>
auto line(F&& f, double a, double b, double tol = kDefaultTolerance) {
    using R = decltype(f(a));
    if (!(b > a)) return R{};
    if (std::isfinite(a) && std::isfinite(b)) {
        return segment([&](double x, double, double) { return f(x); }, a, b, tol);
    }
    return engine().integrate(f, a, b, tol);
}

}  // namespace powermix::quad
