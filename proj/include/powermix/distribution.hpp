#pragma once

#include "powermix/rng.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace powermix {

enum class Kind {
    uniform,
    arcsin,
    semicircle,
    power_semicircle,
    beta,
    power,
    triangular,
    cauchy,
    normal,
    point_mass,
};

std::string_view kind_name(Kind kind);
/// Number of positional parameters taken by `kind` in the text grammar.
int kind_arity(Kind kind);
bool kind_from_name(std::string_view name, Kind& out);

struct Support {
    double lo;
    double hi;
    bool bounded() const noexcept;
    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Immutable description of a univariate law.
///
/// Parameters, in grammar order:
///   uniform(a,b) arcsin(a,b) semicircle(a,b) power_semicircle(a,b)
///   beta(alpha,beta) power(n) triangular(lo,mode,hi)
///   cauchy(location,scale) normal(mean,sd) point_mass(c)
class Distribution {
public:
    static Distribution uniform(double a, double b);
    static Distribution arcsin(double a, double b);
    static Distribution semicircle(double a, double b);
    static Distribution power_semicircle(double a, double b);
    static Distribution beta(double alpha, double beta);
    static Distribution power(double n);
    static Distribution triangular(double lo, double mode, double hi);
    static Distribution cauchy(double location, double scale);
    static Distribution normal(double mean, double sd);
    static Distribution point_mass(double c);
    /// Validating constructor from a kind and its positional parameters.
    static Distribution make(Kind kind, const std::vector<double>& params);

    Kind kind() const noexcept { return kind_; }
    double param(int i) const { return p_.at(static_cast<std::size_t>(i)); }
    std::vector<double> params() const;

    Support support() const noexcept;
    bool is_atom() const noexcept { return kind_ == Kind::point_mass; }
    bool has_finite_moments() const noexcept { return kind_ != Kind::cauchy; }

    double pdf(double x) const;
    /// Density at x, given u = x - support.lo and v = support.hi - x computed
    /// without cancellation by the caller. Only meaningful for bounded kinds.
    double pdf_local(double x, double u, double v) const;
    double cdf(double x) const;
    double quantile(double u) const;

    /// One inverse-transform draw. Always consumes exactly one stream value.
    double draw(Stream& stream) const;
    std::vector<double> sample(Stream& stream, std::size_t count) const;

    /// E X^j. Throws NoFiniteMomentError for cauchy.
    double raw_moment(int j) const;
    double mean() const { return raw_moment(1); }
    double variance() const;

    /// Law of X + c.
    Distribution shifted(double c) const;

    std::string to_string() const;

    bool operator==(const Distribution&) const = default;

private:
    Distribution(Kind kind, double a, double b = 0.0, double c = 0.0) : kind_(kind), p_{a, b, c} {}
    double invert_cdf(double u) const;

    Kind kind_;
    std::array<double, 3> p_;
};

/// E g(X), with atoms, bounded and unbounded supports handled.
/// For bounded continuous laws g receives (x, x - lo, hi - x).
double expect(const Distribution& d, const std::function<double(double)>& g, double tol = 1e-11);
std::complex<double> expect_complex(const Distribution& d,
                                    const std::function<std::complex<double>(double)>& g,
                                    double tol = 1e-11);

/// E[g(X); lo < X < hi] restricted to a sub-range. Atoms are counted if lo <= c <= hi.
/// `g` gets the point and its accurate distances to the range ends.
double expect_on(const Distribution& d, double lo, double hi,
                 const std::function<double(double, double, double)>& g, double tol = 1e-11);
std::complex<double> expect_on_complex(
    const Distribution& d, double lo, double hi,
    const std::function<std::complex<double>(double, double, double)>& g, double tol = 1e-11);

/// Distance from z to the support of d (0 when on it).
double distance_to_support(const Distribution& d, std::complex<double> z);

/// Highest derivative order with a closed-form Stieltjes transform, or -1.
int closed_stieltjes_order(const Distribution& d);

/// k-th derivative of S(F, z) = ∫ (z - x)^-1 dF(x). Closed form when available,
/// quadrature otherwise. Throws DomainError for z on the support.
std::complex<double> stieltjes(const Distribution& d, std::complex<double> z, int order = 0);
std::complex<double> stieltjes_closed(const Distribution& d, std::complex<double> z, int order = 0);
std::complex<double> stieltjes_quadrature(const Distribution& d, std::complex<double> z,
                                          int order = 0);

/// (-1)^k k! (z - x)^{-k-1}
std::complex<double> cauchy_kernel(std::complex<double> y, int order);

}  // namespace powermix
