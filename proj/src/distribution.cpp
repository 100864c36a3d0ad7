#include "powermix/distribution.hpp"

#include "powermix/errors.hpp"
#include "powermix/format.hpp"
#include "powermix/quadrature.hpp"
#include "powermix/specfun.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace powermix {

using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct KindInfo {
    Kind kind;
    std::string_view name;
    int arity;
};

constexpr KindInfo kKinds[] = {
    {Kind::uniform, "uniform", 2},
    {Kind::arcsin, "arcsin", 2},
    {Kind::semicircle, "semicircle", 2},
    {Kind::power_semicircle, "power_semicircle", 2},
    {Kind::beta, "beta", 2},
    {Kind::power, "power", 1},
    {Kind::triangular, "triangular", 3},
    {Kind::cauchy, "cauchy", 2},
    {Kind::normal, "normal", 2},
    {Kind::point_mass, "point_mass", 1},
};

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

void require_interval(std::string_view name, double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b,
            std::string(name) + ": requires finite bounds a < b");
}

// Standardized interval laws on [-1, 1]; k-th derivative of S at zeta.

cplx branch_root(cplx zeta) { return std::sqrt(zeta - 1.0) * std::sqrt(zeta + 1.0); }

double falling_factorial_sign(int k) {
    // (-1)^{k-1} (k-1)!
    double f = 1.0;
    for (int i = 2; i < k; ++i) f *= i;
    return (k % 2 == 1) ? f : -f;
}

cplx uniform_std(cplx zeta, int k) {
    if (std::abs(zeta) > 2.0) {
        // atanh(1/zeta); the derivative difference expanded in w = 1/zeta:
        // (zeta+1)^-k - (zeta-1)^-k = -2 zeta^-k sum_{j odd} C(k,j) w^j / (1 - w^2)^k
        const cplx w = 1.0 / zeta;
        if (k == 0) return std::atanh(w);
        cplx odd = 0.0, wp = w;
        double binom = k;
        for (int j = 1; j <= k; j += 2) {
            odd += binom * wp;
            binom *= static_cast<double>(k - j) * (k - j - 1) / ((j + 1.0) * (j + 2.0));
            wp *= w * w;
        }
        const double c = 0.5 * falling_factorial_sign(k);
        return c * -2.0 * std::pow(w, k) * odd / std::pow(1.0 - w * w, k);
    }
    if (k == 0) return 0.5 * std::log((zeta + 1.0) / (zeta - 1.0));
    const double c = 0.5 * falling_factorial_sign(k);
    return c * (std::pow(zeta + 1.0, -k) - std::pow(zeta - 1.0, -k));
}

cplx arcsin_std(cplx zeta, int k) {
    const cplx r = branch_root(zeta);
    switch (k) {
        case 0: return 1.0 / r;
        case 1: return -zeta / (r * r * r);
        case 2: return (2.0 * zeta * zeta + 1.0) / std::pow(r, 5);
        case 3: return -(6.0 * zeta * zeta * zeta + 9.0 * zeta) / std::pow(r, 7);
        default: break;
    }
    throw PreconditionError("arcsin closed form: order above 3");
}

cplx semicircle_std(cplx zeta, int k) {
    const cplx r = branch_root(zeta);
    switch (k) {
        case 0: return 2.0 / (zeta + r);
        case 1: return -2.0 / (r * (zeta + r));
        case 2: return 2.0 / (r * r * r);
        case 3: return -6.0 * zeta / std::pow(r, 5);
        default: break;
    }
    throw PreconditionError("semicircle closed form: order above 3");
}

cplx power_semicircle_std(cplx zeta, int k) {
    if (k > 3) throw PreconditionError("power_semicircle closed form: order above 3");
    if (std::abs(zeta) > 4.0) {
        // 3 * sum_i zeta^{-(2i+1)} / ((2i+1)(2i+3)), differentiated termwise
        cplx sum = 0.0;
        const cplx inv = 1.0 / zeta;
        const cplx inv2 = inv * inv;
        cplx p = std::pow(inv, 1 + k);
        for (int i = 0; i < 400; ++i) {
            double c = 1.0 / ((2.0 * i + 1.0) * (2.0 * i + 3.0));
            for (int j = 1; j <= k; ++j) c *= -(2.0 * i + j);
            const cplx term = c * p;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            p *= inv2;
        }
        return 3.0 * sum;
    }
    const cplx L = std::log((zeta + 1.0) / (zeta - 1.0));
    const cplx q = zeta * zeta - 1.0;
    const cplx L1 = -2.0 / q;
    const cplx L2 = 1.0 / ((zeta - 1.0) * (zeta - 1.0)) - 1.0 / ((zeta + 1.0) * (zeta + 1.0));
    switch (k) {
        case 0: return 0.75 * (2.0 * zeta - q * L);
        case 1: return 0.75 * (4.0 - 2.0 * zeta * L);
        case 2: return 0.75 * (-2.0 * L - 2.0 * zeta * L1);
        case 3: return 0.75 * (-4.0 * L1 - 2.0 * zeta * L2);
        default: break;
    }
    return {};
}

cplx atom_kernel(cplx z, cplx c, int k) { return cauchy_kernel(z - c, k); }

cplx interval_transform(cplx (*std_form)(cplx, int), double a, double b, cplx z, int k) {
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    return std::pow(h, -k - 1) * std_form((z - m) / h, k);
}

template <class R, class G>
R integrate_panel(const Distribution& d, double pa, double pb, double lo, double hi, const G& g,
                  double tol) {
    const Support s = d.support();
    if (!(pb > pa)) return R{};
    if (std::isfinite(pa) && std::isfinite(pb)) {
        auto f = [&](double x, double du, double dv) -> R {
            const double to_lo = (pa == lo) ? du : (pa - lo) + du;
            const double to_hi = (pb == hi) ? dv : (hi - pb) + dv;
            double dens;
            if (s.bounded()) {
                const double u = (pa == s.lo) ? du : (pa - s.lo) + du;
                const double v = (pb == s.hi) ? dv : (s.hi - pb) + dv;
                dens = d.pdf_local(x, u, v);
            } else {
                dens = d.pdf(x);
            }
            if (dens == 0.0) return R{};
            return g(x, to_lo, to_hi) * dens;
        };
        return quad::segment(f, pa, pb, tol);
    }
    auto f = [&](double x) -> R {
        const double dens = d.pdf(x);
        if (dens == 0.0) return R{};
        return g(x, x - lo, hi - x) * dens;
    };
    return quad::line(f, pa, pb, tol);
}

template <class R, class G>
R expect_on_impl(const Distribution& d, double lo, double hi, const G& g, double tol) {
    const Support s = d.support();
    if (d.is_atom()) {
        const double c = s.lo;
        if (c >= lo && c <= hi) return g(c, c - lo, hi - c);
        return R{};
    }
    const double a = std::max(lo, s.lo);
    const double b = std::min(hi, s.hi);
    if (!(b > a)) return R{};

    std::vector<double> cuts{a};
    if (d.kind() == Kind::triangular) {
        const double mode = d.param(1);
        if (mode > a && mode < b) cuts.push_back(mode);
    }
    if (!s.bounded()) {
        const double loc = d.param(0);
        const double scale = d.param(1);
        const double reach = 4.0 * scale;
        if (std::isinf(a) && std::isinf(b)) {
            cuts.push_back(loc);
        } else if (std::isinf(a)) {
            cuts.push_back(b - reach);
        } else if (std::isinf(b)) {
            cuts.push_back(a + reach);
        }
    }
    cuts.push_back(b);
    R total{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate_panel<R>(d, cuts[i], cuts[i + 1], lo, hi, g, tol);
    }
    return total;
}

}  // namespace

bool Support::bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }

std::string_view kind_name(Kind kind) {
    for (const auto& info : kKinds) {
        if (info.kind == kind) return info.name;
    }
    return "?";
}

int kind_arity(Kind kind) {
    for (const auto& info : kKinds) {
        if (info.kind == kind) return info.arity;
    }
    return 0;
}

bool kind_from_name(std::string_view name, Kind& out) {
    for (const auto& info : kKinds) {
        if (info.name == name) {
            out = info.kind;
            return true;
        }
    }
    return false;
}

Distribution Distribution::uniform(double a, double b) {
    require_interval("uniform", a, b);
    return {Kind::uniform, a, b};
}

Distribution Distribution::arcsin(double a, double b) {
    require_interval("arcsin", a, b);
    return {Kind::arcsin, a, b};
}

Distribution Distribution::semicircle(double a, double b) {
    require_interval("semicircle", a, b);
    return {Kind::semicircle, a, b};
}

Distribution Distribution::power_semicircle(double a, double b) {
    require_interval("power_semicircle", a, b);
    return {Kind::power_semicircle, a, b};
}

Distribution Distribution::beta(double alpha, double beta) {
    require(std::isfinite(alpha) && std::isfinite(beta) && alpha > 0 && beta > 0,
            "beta: shape parameters must be positive");
    return {Kind::beta, alpha, beta};
}

Distribution Distribution::power(double n) {
    require(std::isfinite(n) && n >= 1.0, "power: requires n >= 1");
    return {Kind::power, n};
}

Distribution Distribution::triangular(double lo, double mode, double hi) {
    require(std::isfinite(lo) && std::isfinite(mode) && std::isfinite(hi) && lo < hi &&
                lo <= mode && mode <= hi,
            "triangular: requires lo <= mode <= hi and lo < hi");
    return {Kind::triangular, lo, mode, hi};
}

Distribution Distribution::cauchy(double location, double scale) {
    require(std::isfinite(location) && std::isfinite(scale) && scale > 0,
            "cauchy: requires finite location and scale > 0");
    return {Kind::cauchy, location, scale};
}

Distribution Distribution::normal(double mean, double sd) {
    require(std::isfinite(mean) && std::isfinite(sd) && sd > 0,
            "normal: requires finite mean and sd > 0");
    return {Kind::normal, mean, sd};
}

Distribution Distribution::point_mass(double c) {
    require(std::isfinite(c), "point_mass: location must be finite");
    return {Kind::point_mass, c};
}

Distribution Distribution::make(Kind kind, const std::vector<double>& p) {
    if (static_cast<int>(p.size()) != kind_arity(kind)) {
        throw DomainError(std::string(kind_name(kind)) + ": expects " +
                          std::to_string(kind_arity(kind)) + " parameters");
    }
    switch (kind) {
        case Kind::uniform: return uniform(p[0], p[1]);
        case Kind::arcsin: return arcsin(p[0], p[1]);
        case Kind::semicircle: return semicircle(p[0], p[1]);
        case Kind::power_semicircle: return power_semicircle(p[0], p[1]);
        case Kind::beta: return beta(p[0], p[1]);
        case Kind::power: return power(p[0]);
        case Kind::triangular: return triangular(p[0], p[1], p[2]);
        case Kind::cauchy: return cauchy(p[0], p[1]);
        case Kind::normal: return normal(p[0], p[1]);
        case Kind::point_mass: return point_mass(p[0]);
    }
    throw DomainError("unknown distribution kind");
}

std::vector<double> Distribution::params() const {
    const int n = kind_arity(kind_);
    return {p_.begin(), p_.begin() + n};
}

Support Distribution::support() const noexcept {
    switch (kind_) {
        case Kind::uniform:
        case Kind::arcsin:
        case Kind::semicircle:
        case Kind::power_semicircle: return {p_[0], p_[1]};
        case Kind::beta:
        case Kind::power: return {0.0, 1.0};
        case Kind::triangular: return {p_[0], p_[2]};
        case Kind::cauchy:
        case Kind::normal: return {-kInf, kInf};
        case Kind::point_mass: return {p_[0], p_[0]};
    }
    return {-kInf, kInf};
}

double Distribution::pdf(double x) const {
    if (kind_ == Kind::point_mass) throw DomainError("point_mass has no density");
    const Support s = support();
    if (s.bounded()) {
        if (x < s.lo || x > s.hi) return 0.0;
        return pdf_local(x, x - s.lo, s.hi - x);
    }
    return pdf_local(x, kInf, kInf);
}

double Distribution::pdf_local(double x, double u, double v) const {
    switch (kind_) {
        case Kind::uniform: return 1.0 / (p_[1] - p_[0]);
        case Kind::arcsin: return 1.0 / (kPi * std::sqrt(u * v));
        case Kind::semicircle: {
            const double r = 0.5 * (p_[1] - p_[0]);
            return 2.0 / (kPi * r * r) * std::sqrt(u * v);
        }
        case Kind::power_semicircle: {
            const double w = p_[1] - p_[0];
            return 6.0 * u * v / (w * w * w);
        }
        case Kind::beta: {
            const double a = p_[0];
            const double b = p_[1];
            if (a == 1.0 && b == 1.0) return 1.0;
            if ((u == 0.0 && a != 1.0) || (v == 0.0 && b != 1.0)) {
                if ((u == 0.0 && a < 1.0) || (v == 0.0 && b < 1.0)) return kInf;
                return 0.0;
            }
            return std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log(v) -
                            specfun::log_beta(a, b));
        }
        case Kind::power: {
            const double n = p_[0];
            return n == 1.0 ? 1.0 : n * std::pow(u, n - 1.0);
        }
        case Kind::triangular: {
            const double lo = p_[0], mode = p_[1], hi = p_[2];
            const double w = hi - lo;
            if (x < mode || (x == mode && mode == hi)) return 2.0 * u / (w * (mode - lo));
            if (x > mode || mode == lo) return 2.0 * v / (w * (hi - mode));
            return 2.0 / w;
        }
        case Kind::cauchy: {
            const double t = (x - p_[0]) / p_[1];
            return 1.0 / (kPi * p_[1] * (1.0 + t * t));
        }
        case Kind::normal: {
            const double t = (x - p_[0]) / p_[1];
            return std::exp(-0.5 * t * t) / (p_[1] * std::sqrt(2.0 * kPi));
        }
        case Kind::point_mass: throw DomainError("point_mass has no density");
    }
    return 0.0;
}

double Distribution::cdf(double x) const {
    if (std::isnan(x)) throw DomainError("cdf: NaN argument");
    const Support s = support();
    if (kind_ == Kind::point_mass) return x >= p_[0] ? 1.0 : 0.0;
    if (s.bounded()) {
        if (x <= s.lo) return 0.0;
        if (x >= s.hi) return 1.0;
    }
    const double t = s.bounded() ? std::clamp((2.0 * x - s.lo - s.hi) / (s.hi - s.lo), -1.0, 1.0)
                                 : 0.0;
    switch (kind_) {
        case Kind::uniform: return (x - p_[0]) / (p_[1] - p_[0]);
        case Kind::arcsin: return 0.5 + std::asin(t) / kPi;
        case Kind::semicircle:
            return std::clamp(0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / kPi, 0.0, 1.0);
        case Kind::power_semicircle: return std::clamp((2.0 + 3.0 * t - t * t * t) / 4.0, 0.0, 1.0);
        case Kind::beta: return specfun::incomplete_beta(x, p_[0], p_[1]);
        case Kind::power: return std::pow(x, p_[0]);
        case Kind::triangular: {
            const double lo = p_[0], mode = p_[1], hi = p_[2];
            if (x <= mode) return (x - lo) * (x - lo) / ((hi - lo) * (mode - lo));
            return 1.0 - (hi - x) * (hi - x) / ((hi - lo) * (hi - mode));
        }
        case Kind::cauchy: return 0.5 + std::atan((x - p_[0]) / p_[1]) / kPi;
        case Kind::normal:
            return 0.5 * std::erfc(-(x - p_[0]) / (p_[1] * std::numbers::sqrt2));
        case Kind::point_mass: break;
    }
    return 0.0;
}

double Distribution::invert_cdf(double u) const {
    const Support s = support();
    auto f = [&](double x) { return cdf(x) - u; };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 200;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, s.lo, s.hi, -u, 1.0 - u, tol, iters);
    return 0.5 * (lo + hi);
}

double Distribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in (0,1)");
    switch (kind_) {
        case Kind::uniform: return p_[0] + u * (p_[1] - p_[0]);
        case Kind::arcsin: {
            const double m = 0.5 * (p_[0] + p_[1]);
            const double h = 0.5 * (p_[1] - p_[0]);
            return m - h * std::cos(kPi * u);
        }
        case Kind::power_semicircle: {
            const double m = 0.5 * (p_[0] + p_[1]);
            const double h = 0.5 * (p_[1] - p_[0]);
            const double t = 2.0 * std::cos((std::acos(1.0 - 2.0 * u) + 4.0 * kPi) / 3.0);
            return m + h * std::clamp(t, -1.0, 1.0);
        }
        case Kind::beta: {
            const double a = p_[0], b = p_[1];
            if (a == 1.0 && b == 1.0) return u;
            if (b == 1.0) return std::pow(u, 1.0 / a);
            if (a == 1.0) return -std::expm1(std::log1p(-u) / b);
            return invert_cdf(u);
        }
        case Kind::power: return p_[0] == 1.0 ? u : std::pow(u, 1.0 / p_[0]);
        case Kind::triangular: {
            const double lo = p_[0], mode = p_[1], hi = p_[2];
            const double fm = (mode - lo) / (hi - lo);
            if (u <= fm) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
            return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
        }
        case Kind::cauchy: return p_[0] + p_[1] * std::tan(kPi * (u - 0.5));
        case Kind::normal:
            return p_[0] - p_[1] * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
        case Kind::point_mass: return p_[0];
        case Kind::semicircle: return invert_cdf(u);
    }
    return invert_cdf(u);
}

double Distribution::draw(Stream& stream) const { return quantile(stream.uniform_open()); }

std::vector<double> Distribution::sample(Stream& stream, std::size_t count) const {
    std::vector<double> out(count);
    for (auto& x : out) x = draw(stream);
    return out;
}

double Distribution::raw_moment(int j) const {
    if (j < 0) throw DomainError("raw_moment: order must be nonnegative");
    if (kind_ == Kind::cauchy) throw NoFiniteMomentError("cauchy has no finite moments");
    if (j == 0) return 1.0;
    switch (kind_) {
        case Kind::uniform: {
            const double a = p_[0], b = p_[1];
            return (std::pow(b, j + 1) - std::pow(a, j + 1)) / ((j + 1) * (b - a));
        }
        case Kind::beta: {
            double m = 1.0;
            for (int r = 0; r < j; ++r) m *= (p_[0] + r) / (p_[0] + p_[1] + r);
            return m;
        }
        case Kind::power: return p_[0] / (p_[0] + j);
        case Kind::point_mass: return std::pow(p_[0], j);
        case Kind::normal: {
            // sum_m C(j,m) mu^{j-m} sd^m E N^m, E N^m = (m-1)!! for even m
            double total = 0.0;
            double binom = 1.0;
            double dfact = 1.0;
            for (int m = 0; m <= j; ++m) {
                if (m > 0) binom = binom * (j - m + 1) / m;
                if (m % 2 == 0) {
                    if (m >= 2) dfact *= (m - 1);
                    total += binom * std::pow(p_[0], j - m) * std::pow(p_[1], m) * dfact;
                }
            }
            return total;
        }
        default: break;
    }
    return expect(*this, [j](double x) { return std::pow(x, j); }, 1e-13);
}

double Distribution::variance() const {
    const double m1 = raw_moment(1);
    return raw_moment(2) - m1 * m1;
}

Distribution Distribution::shifted(double c) const {
    switch (kind_) {
        case Kind::uniform:
        case Kind::arcsin:
        case Kind::semicircle:
        case Kind::power_semicircle: return {kind_, p_[0] + c, p_[1] + c};
        case Kind::triangular: return {kind_, p_[0] + c, p_[1] + c, p_[2] + c};
        case Kind::cauchy:
        case Kind::normal: return {kind_, p_[0] + c, p_[1]};
        case Kind::point_mass: return {kind_, p_[0] + c};
        case Kind::beta:
        case Kind::power: break;
    }
    throw DomainError(std::string(kind_name(kind_)) + " has fixed support and cannot be shifted");
}

std::string Distribution::to_string() const {
    std::string out(kind_name(kind_));
    out += '(';
    const int n = kind_arity(kind_);
    for (int i = 0; i < n; ++i) {
        if (i) out += ',';
        out += shortest(p_[static_cast<std::size_t>(i)]);
    }
    out += ')';
    return out;
}

double expect(const Distribution& d, const std::function<double(double)>& g, double tol) {
    return expect_on_impl<double>(
        d, -kInf, kInf, [&](double x, double, double) { return g(x); }, tol);
}

cplx expect_complex(const Distribution& d, const std::function<cplx(double)>& g, double tol) {
    return expect_on_impl<cplx>(
        d, -kInf, kInf, [&](double x, double, double) { return g(x); }, tol);
}

double expect_on(const Distribution& d, double lo, double hi,
                 const std::function<double(double, double, double)>& g, double tol) {
    return expect_on_impl<double>(d, lo, hi, g, tol);
}

cplx expect_on_complex(const Distribution& d, double lo, double hi,
                       const std::function<cplx(double, double, double)>& g, double tol) {
    return expect_on_impl<cplx>(d, lo, hi, g, tol);
}

double distance_to_support(const Distribution& d, cplx z) {
    const Support s = d.support();
    const double re = z.real();
    double dx = 0.0;
    if (re < s.lo) dx = s.lo - re;
    if (re > s.hi) dx = re - s.hi;
    return std::hypot(dx, z.imag());
}

int closed_stieltjes_order(const Distribution& d) {
    switch (d.kind()) {
        case Kind::uniform:
        case Kind::arcsin:
        case Kind::semicircle:
        case Kind::power_semicircle: return 3;
        case Kind::cauchy:
        case Kind::point_mass: return 64;
        case Kind::power: return d.param(0) == 1.0 ? 3 : -1;
        case Kind::beta: {
            const double a = d.param(0), b = d.param(1);
            if (a != b) return -1;
            return (a == 1.0 || a == 0.5 || a == 1.5 || a == 2.0) ? 3 : -1;
        }
        case Kind::triangular:
        case Kind::normal: return -1;
    }
    return -1;
}

cplx cauchy_kernel(cplx y, int order) {
    double f = 1.0;
    for (int i = 2; i <= order; ++i) f *= i;
    if (order % 2 == 1) f = -f;
    return f / std::pow(y, order + 1);
}

cplx stieltjes_closed(const Distribution& d, cplx z, int order) {
    if (order < 0) throw DomainError("stieltjes: order must be nonnegative");
    if (order > closed_stieltjes_order(d)) {
        throw PreconditionError("stieltjes: no closed form of this order for " + d.to_string());
    }
    if (distance_to_support(d, z) == 0.0) {
        throw DomainError("stieltjes: z lies on the support of " + d.to_string());
    }
    switch (d.kind()) {
        case Kind::uniform: return interval_transform(uniform_std, d.param(0), d.param(1), z, order);
        case Kind::arcsin: return interval_transform(arcsin_std, d.param(0), d.param(1), z, order);
        case Kind::semicircle:
            return interval_transform(semicircle_std, d.param(0), d.param(1), z, order);
        case Kind::power_semicircle:
            return interval_transform(power_semicircle_std, d.param(0), d.param(1), z, order);
        case Kind::power: return interval_transform(uniform_std, 0.0, 1.0, z, order);
        case Kind::beta: {
            const double a = d.param(0);
            if (a == 1.0) return interval_transform(uniform_std, 0.0, 1.0, z, order);
            if (a == 0.5) return interval_transform(arcsin_std, 0.0, 1.0, z, order);
            if (a == 1.5) return interval_transform(semicircle_std, 0.0, 1.0, z, order);
            return interval_transform(power_semicircle_std, 0.0, 1.0, z, order);
        }
        case Kind::cauchy: {
            const double loc = d.param(0), g = d.param(1);
            const cplx pole = z.imag() > 0 ? cplx(loc, -g) : cplx(loc, g);
            return atom_kernel(z, pole, order);
        }
        case Kind::point_mass: return atom_kernel(z, d.param(0), order);
        default: break;
    }
    throw PreconditionError("stieltjes: no closed form for " + d.to_string());
}

cplx stieltjes_quadrature(const Distribution& d, cplx z, int order) {
    if (order < 0) throw DomainError("stieltjes: order must be nonnegative");
    if (distance_to_support(d, z) == 0.0) {
        throw DomainError("stieltjes: z lies on the support of " + d.to_string());
    }
    auto kernel = [&](double x, double, double) { return cauchy_kernel(z - x, order); };
    const Support s = d.support();
    const double re = z.real();
    if (!d.is_atom() && re > s.lo && re < s.hi) {
        return expect_on_complex(d, -kInf, re, kernel, 1e-12) +
               expect_on_complex(d, re, kInf, kernel, 1e-12);
    }
    return expect_on_complex(d, -kInf, kInf, kernel, 1e-12);
}

cplx stieltjes(const Distribution& d, cplx z, int order) {
    if (order >= 0 && order <= closed_stieltjes_order(d)) return stieltjes_closed(d, z, order);
    return stieltjes_quadrature(d, z, order);
}

}  // namespace powermix
