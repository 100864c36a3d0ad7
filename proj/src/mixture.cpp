#include "powermix/mixture.hpp"

#include "powermix/errors.hpp"
#include "powermix/format.hpp"
#include "powermix/quadrature.hpp"
#include "powermix/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace powermix {

using cplx = std::complex<double>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_power_index(double n) {
    if (!(std::isfinite(n) && n >= 1.0)) throw DomainError("mixture: requires n >= 1");
}

// Conditional density of W-mixing at anchor distance s and far distance t:
// f_W(s / (s + t)) / (s + t).
double weight_kernel(const Distribution& w, double s, double t) {
    const double d = s + t;
    if (!(d > 0)) return 0.0;
    const double x = s / d;
    const Support sw = w.support();
    if (x < sw.lo || x > sw.hi) return 0.0;
    const double u = sw.lo == 0.0 ? x : x - sw.lo;
    const double v = sw.hi == 1.0 ? t / d : sw.hi - x;
    return w.pdf_local(x, u, v) / d;
}

// E[g(|X - z|); X on one side of z].
double side_expect(const Distribution& d, double z, bool left,
                   const std::function<double(double)>& g, double tol) {
    if (left) {
        return expect_on(d, -kInf, z, [&](double, double, double to_z) { return g(to_z); }, tol);
    }
    return expect_on(d, z, kInf, [&](double, double to_z, double) { return g(to_z); }, tol);
}

// E[f_W(s / (s + t)) / (s + t)] over the far point at distance t on one side of z,
// for a weight law supported on all of [0,1]. Far ranges longer than s are
// integrated in the weight coordinate x = s / (s + t), where the integrand is
// f_far(z +- t) f_W(x) / x; short ones directly in t.
double far_expect(const Distribution& far, const Distribution& w, double z, bool far_left,
                  double s, double tol) {
    if (far.is_atom()) {
        const double p = far.param(0);
        const double t = far_left ? z - p : p - z;
        return t > 0 || (t == 0 && s > 0) ? weight_kernel(w, s, t) : 0.0;
    }
    if (!(s > 0)) return 0.0;
    const Support fs = far.support();
    // distances reachable on the far side
    double tlo, thi;
    if (far_left) {
        tlo = std::max(0.0, z - fs.hi);
        thi = z - fs.lo;
    } else {
        tlo = std::max(0.0, fs.lo - z);
        thi = fs.hi - z;
    }
    if (!(thi > tlo)) return 0.0;
    // far density at distance t, given the distance from t to thi
    auto far_pdf = [&](double t, double to_thi) {
        const double pos = far_left ? z - t : z + t;
        const double d_lo = far_left ? to_thi : (z - fs.lo) + t;
        const double d_hi = far_left ? (fs.hi - z) + t : to_thi;
        if (!(d_lo > 0 && d_hi > 0)) return 0.0;
        return far.pdf_local(pos, d_lo, d_hi);
    };
    if (std::isfinite(thi) && thi <= s) {
        auto f = [&](double t, double, double to_thi) {
            const double d = s + t;
            return far_pdf(t, to_thi) * w.pdf_local(s / d, s / d, t / d) / d;
        };
        return quad::segment(f, tlo, thi, tol);
    }
    const double xlo = std::isfinite(thi) ? s / (s + thi) : 0.0;
    const double xhi = s / (s + tlo);
    auto f = [&](double x, double to_lo, double to_hi) {
        if (!(x > 0)) return 0.0;
        const double one_minus_x = tlo == 0.0 ? to_hi : 1.0 - x;
        const double t = s * one_minus_x / x;
        const double to_thi = std::isfinite(thi) ? thi - t : std::numeric_limits<double>::infinity();
        (void)to_lo;
        return far_pdf(t, to_thi) * w.pdf_local(x, x, one_minus_x) / x;
    };
    return quad::segment(f, xlo, xhi, tol);
}

}  // namespace

std::string_view family_name(Family f) { return f == Family::directed ? "directed" : "tsp"; }

MixtureSpec MixtureSpec::directed(double n, Distribution x1, Distribution x2) {
    check_power_index(n);
    return {Family::directed, Distribution::power(n), false, x1, x2};
}

MixtureSpec MixtureSpec::tsp(double n, Distribution x1, Distribution x2) {
    check_power_index(n);
    return {Family::undirected, Distribution::power(n), false, x1, x2};
}

MixtureSpec MixtureSpec::tsp_weighted(Distribution weight, Distribution x1, Distribution x2) {
    const Support s = weight.support();
    if (!(s.bounded() && s.lo >= 0.0 && s.hi <= 1.0)) {
        throw DomainError("mixture: weight law must be supported in [0,1], got " +
                          weight.to_string());
    }
    return {Family::undirected, weight, true, x1, x2};
}

std::optional<double> MixtureSpec::power_index() const {
    if (weight_.kind() == Kind::power) return weight_.param(0);
    return std::nullopt;
}

MixtureSpec MixtureSpec::shifted(double c) const {
    MixtureSpec out = *this;
    out.x1_ = x1_.shifted(c);
    out.x2_ = x2_.shifted(c);
    return out;
}

std::string MixtureSpec::to_string() const {
    std::string out(family_name(family_));
    out += '(';
    if (override_) {
        out += "w=" + weight_.to_string();
    } else {
        out += "n=" + shortest(weight_.param(0));
    }
    out += ", x1=" + x1_.to_string() + ", x2=" + x2_.to_string() + ")";
    return out;
}

double conditional_cdf(const ConditionalLaw& law, double z) {
    const double n = law.n;
    if (!(n > 0)) throw DomainError("conditional_cdf: requires n > 0");
    if (law.x1 == law.x2) return z >= law.x1 ? 1.0 : 0.0;
    const double lo = std::min(law.x1, law.x2);
    const double hi = std::max(law.x1, law.x2);
    if (z <= lo) return 0.0;
    if (z >= hi) return 1.0;
    if (law.family == Family::undirected || law.x1 < law.x2) {
        return std::pow((z - lo) / (hi - lo), n);
    }
    // x2 < z < x1
    return 1.0 - std::pow((law.x1 - z) / (law.x1 - law.x2), n);
}

double tsp_from_order_stats(double x1, double x2, double w) {
    const double y1 = std::min(x1, x2);
    const double y2 = std::max(x1, x2);
    if (w == 1.0) return y2;
    return y1 + w * (y2 - y1);
}

double tsp_from_midrange(double x1, double x2, double w) {
    return 0.5 * (x1 + x2) + (w - 0.5) * std::fabs(x1 - x2);
}

double draw(const MixtureSpec& spec, Stream& stream) {
    const double x1 = spec.x1().draw(stream);
    const double x2 = spec.x2().draw(stream);
    const double w = spec.weight().draw(stream);
    if (spec.family() == Family::undirected) return tsp_from_order_stats(x1, x2, w);
    if (w == 1.0) return x2;
    return x1 + w * (x2 - x1);
}

std::vector<double> sample(const MixtureSpec& spec, Stream& stream, std::size_t count) {
    std::vector<double> out(count);
    for (auto& z : out) z = draw(spec, stream);
    return out;
}

std::vector<double> sample_tsp(const MixtureSpec& spec, Stream& stream, std::size_t count) {
    if (spec.family() != Family::undirected) throw PreconditionError("sample_tsp: directed spec");
    return sample(spec, stream, count);
}

std::vector<double> sample_directed(const MixtureSpec& spec, Stream& stream, std::size_t count) {
    if (spec.family() != Family::directed) throw PreconditionError("sample_directed: TSP spec");
    return sample(spec, stream, count);
}

double tsp_pdf_uniform(double n, double z) {
    if (!(n > 0) || !std::isfinite(n)) throw DomainError("tsp_pdf_uniform: requires n > 0");
    if (!(z > 0.0 && z < 1.0)) return 0.0;
    if (n == 1.0) return -2.0 * (1.0 - z) * std::log1p(-z) - 2.0 * z * std::log(z);
    // (1 - z^{n-1}) / (n - 1), stable near n = 1
    const double ratio = -std::expm1((n - 1.0) * std::log(z)) / (n - 1.0);
    return 2.0 * n * z * ratio + 2.0 * (1.0 - z) * std::pow(z, n) * specfun::hyp2f1_1_n(n, z);
}

double tsp_pdf_uniform_betaweight(double n, double m, double z) {
    if (!(n > 1.0 && m > 1.0)) {
        throw DomainError("tsp_pdf_uniform_betaweight: requires n > 1 and m > 1");
    }
    if (!(z > 0.0 && z < 1.0)) return 0.0;
    const double lb = specfun::log_beta(n, m);
    const double r1 = std::exp(specfun::log_beta(n - 1.0, m) - lb);
    const double r2 = std::exp(specfun::log_beta(n, m - 1.0) - lb);
    return r1 * 2.0 * z * (1.0 - specfun::incomplete_beta(z, n - 1.0, m)) +
           r2 * 2.0 * (1.0 - z) * specfun::incomplete_beta(z, n, m - 1.0);
}

double conditional_pdf_given_w(double w, double z) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("conditional_pdf_given_w: w must lie in [0,1]");
    if (!(z > 0.0 && z < 1.0)) return 0.0;
    if (z <= w) return 2.0 * z / w;
    return 2.0 * (1.0 - z) / (1.0 - w);
}

double mixture_pdf_numeric(const MixtureSpec& spec, double z) {
    const Distribution& w = spec.weight();
    if (w.is_atom()) throw DomainError("mixture_pdf_numeric: weight law has no density");
    const Distribution& a = spec.x1();
    const Distribution& b = spec.x2();
    if (a.is_atom() && b.is_atom() && a.param(0) == b.param(0)) {
        throw DomainError("mixture_pdf_numeric: Z is a point mass");
    }
    constexpr double tol = 1e-10;
    auto kernel = [&](double s, double t) { return weight_kernel(w, s, t); };

    // Anchor on one side at distance s, the other point on the opposite side at distance t.
    auto region = [&](const Distribution& anchor, bool anchor_left, const Distribution& other) {
        if (w.support().lo > 0.0 || w.support().hi < 1.0 || other.is_atom()) {
            return side_expect(
                anchor, z, anchor_left,
                [&](double s) {
                    return side_expect(other, z, !anchor_left,
                                       [&](double t) { return kernel(s, t); }, tol);
                },
                tol);
        }
        return side_expect(
            anchor, z, anchor_left,
            [&](double s) { return far_expect(other, w, z, !anchor_left, s, tol); }, tol);
    };

    if (spec.family() == Family::directed) {
        return region(a, true, b) + region(a, false, b);
    }
    // The left point anchors the undirected law.
    return region(a, true, b) + region(b, true, a);
}

Support mixture_support(const MixtureSpec& spec) {
    const Support s1 = spec.x1().support();
    const Support s2 = spec.x2().support();
    return {std::min(s1.lo, s2.lo), std::max(s1.hi, s2.hi)};
}

cplx mixture_stieltjes(const MixtureSpec& spec, cplx z, int order) {
    if (order < 0) throw DomainError("mixture_stieltjes: order must be nonnegative");
    const Support hull = mixture_support(spec);
    {
        const double re = z.real();
        double dx = 0.0;
        if (re < hull.lo) dx = hull.lo - re;
        if (re > hull.hi) dx = re - hull.hi;
        if (std::hypot(dx, z.imag()) == 0.0) {
            throw DomainError("mixture_stieltjes: z lies on the support of " + spec.to_string());
        }
    }
    const Distribution& w = spec.weight();
    const bool directed = spec.family() == Family::directed;

    auto over_w = [&](double anchor, double far) -> cplx {
        if (anchor == far) return cauchy_kernel(z - anchor, order);
        const double d = far - anchor;
        return expect_complex(
            w, [&](double u) { return cauchy_kernel(z - anchor - u * d, order); }, 1e-12);
    };
    if (directed && closed_stieltjes_order(spec.x2()) >= order) {
        // Given x1 and w, the x2-average is w^{-k-1} S^(k)(F_X2, (z - (1 - w) x1) / w).
        auto given_x1 = [&](double x1) -> cplx {
            return expect_complex(
                w,
                [&](double u) -> cplx {
                    // tiny weights: the x2-average is the point kernel up to O(u)
                    if (u < 1e-13) return cauchy_kernel(z - x1, order);
                    const cplx zeta = (z - (1.0 - u) * x1) / u;
                    return std::pow(u, -order - 1) * stieltjes_closed(spec.x2(), zeta, order);
                },
                1e-12);
        };
        return expect_complex(spec.x1(), given_x1, 1e-10);
    }
    auto given_x1 = [&](double x1) -> cplx {
        auto g = [&](double x2, double, double) {
            if (directed) return over_w(x1, x2);
            return x1 <= x2 ? over_w(x1, x2) : over_w(x2, x1);
        };
        if (directed) return expect_on_complex(spec.x2(), -kInf, kInf, g, 1e-11);
        // min/max has a kink on the diagonal
        return expect_on_complex(spec.x2(), -kInf, x1, g, 1e-11) +
               expect_on_complex(spec.x2(), x1, kInf, g, 1e-11) -
               (spec.x2().is_atom() && spec.x2().param(0) == x1 ? g(x1, 0, 0) : cplx{});
    };
    return expect_complex(spec.x1(), given_x1, 1e-10);
}

cplx mixture_stieltjes_by_density(const MixtureSpec& spec, cplx z, int order) {
    if (spec.x1().is_atom() || spec.x2().is_atom()) {
        throw DomainError("mixture_stieltjes_by_density: components must have densities");
    }
    const Support hull = mixture_support(spec);
    if (!hull.bounded()) {
        throw DomainError("mixture_stieltjes_by_density: bounded components required");
    }
    if (z.imag() == 0.0 && z.real() >= hull.lo && z.real() <= hull.hi) {
        throw DomainError("mixture_stieltjes_by_density: z lies on the support");
    }
    auto f = [&](double x, double, double) {
        return cauchy_kernel(z - x, order) * mixture_pdf_numeric(spec, x);
    };
    return quad::segment(f, hull.lo, hull.hi, 1e-9, true);
}

}  // namespace powermix
