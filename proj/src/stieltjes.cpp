#include "powermix/stieltjes.hpp"

#include "powermix/errors.hpp"
#include "powermix/format.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace powermix {

using cplx = std::complex<double>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int integer_power_index(const MixtureSpec& spec) {
    const auto n = spec.power_index();
    if (!n || *n != std::floor(*n) || *n < 1 || *n > 64) {
        throw PreconditionError("transform identity needs an integer power(n) weight");
    }
    return static_cast<int>(*n);
}

// ∫∫_{|x2 - x1| > delta} dF1 dF2 / ((z - x1)(z - x2)(x2 - x1)^2)
cplx excised_double(const Distribution& x1, const Distribution& x2, cplx z, double delta) {
    auto inner = [&](double a) -> cplx {
        auto g = [&](double b, double, double) {
            const double d = b - a;
            return 1.0 / ((z - a) * (z - b) * (d * d));
        };
        return expect_on_complex(x2, -kInf, a - delta, g, 1e-12) +
               expect_on_complex(x2, a + delta, kInf, g, 1e-12);
    };
    return expect_complex(x1, inner, 1e-11);
}

double overlap_mass(const Distribution& x1, const Distribution& x2) {
    const Support s1 = x1.support(), s2 = x2.support();
    const double lo = std::max(s1.lo, s2.lo);
    const double hi = std::min(s1.hi, s2.hi);
    if (!(hi > lo)) return 0.0;
    return expect_on(x1, lo, hi, [&](double x, double, double) { return x2.pdf(x); }, 1e-10);
}

}  // namespace

void require_off_support(cplx z, const std::vector<Distribution>& laws) {
    for (const auto& d : laws) {
        const double dist = distance_to_support(d, z);
        if (dist < kMinSupportDistance) {
            std::ostringstream msg;
            msg << "point " << shortest(z.real()) << (z.imag() < 0 ? "" : "+") << shortest(z.imag())
                << "i is within " << kMinSupportDistance << " of the support of " << d.to_string();
            throw DomainError(msg.str());
        }
    }
}

double partial_fraction_residual(double x1d, double x2d, double zd, int n) {
    if (n < 1) throw DomainError("partial_fraction_residual: requires n >= 1");
    if (x1d == x2d || x1d == zd || x2d == zd) {
        throw DomainError("partial_fraction_residual: arguments must be pairwise distinct");
    }
    using ld = long double;
    const ld x1 = x1d, x2 = x2d, z = zd;
    const ld lhs_first = -1.0L / ((z - x1) * std::pow(x2 - x1, n));
    // d^m/dx2^m [1/((z - x2)(x1 - x2))] = m! [(z - x2)^{-m-1} - (x1 - x2)^{-m-1}] / (x1 - z)
    // times (-1)^n / (n-1)! with m = n - 1
    const ld sign = (n % 2) ? -1.0L : 1.0L;
    const ld lhs_second = sign * (std::pow(z - x2, -n) - std::pow(x1 - x2, -n)) / (x1 - z);
    const ld rhs = 1.0L / ((x1 - z) * std::pow(x2 - z, n));
    const ld resid = std::fabs(lhs_first + lhs_second - rhs);
    return static_cast<double>(resid / std::max(1.0L, std::fabs(rhs)));
}

cplx directed_transform_residual(const MixtureSpec& spec, cplx z,
                                 const std::optional<Distribution>& claimed_law) {
    if (spec.family() != Family::directed) {
        throw PreconditionError("directed_transform_residual: needs a directed mixture");
    }
    const int n = integer_power_index(spec);
    std::vector<Distribution> laws{spec.x1(), spec.x2()};
    if (claimed_law) laws.push_back(*claimed_law);
    require_off_support(z, laws);
    const cplx sz = claimed_law ? stieltjes(*claimed_law, z, n) : mixture_stieltjes(spec, z, n);
    return sz / static_cast<double>(n) + stieltjes(spec.x1(), z, 0) * stieltjes(spec.x2(), z, n - 1);
}

cplx first_order_product_residual(const Distribution& x1, const Distribution& x2,
                                  const Distribution& z_law, cplx z) {
    require_off_support(z, {x1, x2, z_law});
    const cplx s1 = stieltjes(x1, z, 0);
    const cplx s2 = stieltjes(x2, z, 0);
    const cplx dz = stieltjes(z_law, z, 1);
    return dz + s1 * s2;
}

cplx iid_square_residual(const Distribution& x, cplx z,
                         const std::optional<Distribution>& claimed_law) {
    std::vector<Distribution> laws{x};
    if (claimed_law) laws.push_back(*claimed_law);
    require_off_support(z, laws);
    const cplx dz = claimed_law ? stieltjes(*claimed_law, z, 1)
                                : mixture_stieltjes(MixtureSpec::directed(2, x, x), z, 1);
    const cplx s = stieltjes(x, z, 0);
    return -dz - s * s;
}

cplx double_stieltjes(const Distribution& x1, const Distribution& x2, cplx z) {
    require_off_support(z, {x1, x2});
    if (x1.is_atom() && x2.is_atom()) {
        const double a = x1.param(0), b = x2.param(0);
        if (a == b) {
            throw DivergenceError("double_stieltjes: components share the atom " + shortest(a));
        }
        return 1.0 / ((z - a) * (z - b) * ((b - a) * (b - a)));
    }
    if (x1.is_atom() || x2.is_atom()) {
        const Distribution& atom = x1.is_atom() ? x1 : x2;
        const Distribution& cont = x1.is_atom() ? x2 : x1;
        const double a = atom.param(0);
        const Support s = cont.support();
        if (a > s.lo && a < s.hi && cont.pdf(a) > 0) {
            throw DivergenceError("double_stieltjes: atom at " + shortest(a) +
                                  " sits where the other density is positive; the (x2-x1)^-2 "
                                  "kernel is not integrable");
        }
    } else {
        const double mass = overlap_mass(x1, x2);
        if (mass > 1e-12) {
            std::ostringstream msg;
            msg << "double_stieltjes: densities overlap (∫f1 f2 = " << mass
                << "); the diagonal strip of width delta contributes ~2∫f1 f2/(z-x)^2 / delta, "
                   "which grows without bound";
            throw DivergenceError(msg.str());
        }
    }
    // Disjoint or touching supports: shrink the excised strip until the value settles.
    cplx prev = excised_double(x1, x2, z, 1e-2);
    double last_step = kInf;
    for (double delta = 1e-3; delta >= 1e-9; delta *= 0.1) {
        const cplx cur = excised_double(x1, x2, z, delta);
        last_step = std::abs(cur - prev);
        prev = cur;
    }
    if (last_step > 1e-7 * std::max(1.0, std::abs(prev))) {
        throw DivergenceError("double_stieltjes: excised integral does not settle as the strip "
                              "shrinks (last change " + shortest(last_step) + ")");
    }
    return prev;
}

cplx ordered_pair_transform(const Distribution& x1, const Distribution& x2, cplx z) {
    require_off_support(z, {x1, x2});
    auto h = [&](double lo, double hi) {
        const cplx b = z - hi;
        return 1.0 / ((z - lo) * b * b * b);
    };
    auto inner = [&](double a) -> cplx {
        auto g = [&](double b, double, double) { return a <= b ? h(a, b) : h(b, a); };
        cplx v = expect_on_complex(x2, -kInf, a, g, 1e-12) + expect_on_complex(x2, a, kInf, g, 1e-12);
        if (x2.is_atom() && x2.param(0) == a) v -= h(a, a);
        return v;
    };
    return expect_complex(x1, inner, 1e-11);
}

namespace {

cplx tsp_third_lhs(const Distribution& x1, const Distribution& x2, cplx z) {
    return -0.5 * mixture_stieltjes(MixtureSpec::tsp(2, x1, x2), z, 3);
}

}  // namespace

cplx tsp_third_derivative_residual(const Distribution& x1, const Distribution& x2, cplx z) {
    require_off_support(z, {x1, x2});
    // the double transform first: it is the part that can diverge
    const cplx rhs = stieltjes(x1, z, 1) * stieltjes(x2, z, 1) + 2.0 * double_stieltjes(x1, x2, z);
    const cplx lhs = tsp_third_lhs(x1, x2, z);
    return lhs - rhs;
}

cplx tsp_third_derivative_residual_corrected(const Distribution& x1, const Distribution& x2,
                                             cplx z) {
    require_off_support(z, {x1, x2});
    const cplx lhs = tsp_third_lhs(x1, x2, z);
    const cplx rhs =
        stieltjes(x1, z, 1) * stieltjes(x2, z, 1) + 2.0 * ordered_pair_transform(x1, x2, z);
    return lhs - rhs;
}

}  // namespace powermix
