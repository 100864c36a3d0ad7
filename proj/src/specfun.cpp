#include "powermix/specfun.hpp"

#include "powermix/errors.hpp"
#include "powermix/quadrature.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace powermix::specfun {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;

// Lentz evaluation of the incomplete beta continued fraction.
double beta_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 100000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw DomainError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
    }
    return boost::math::lgamma(x);
}

double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0) || !(b > 0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("incomplete_beta: shape parameters must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("incomplete_beta: x must lie in [0,1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_fraction(x, a, b) / a;
    }
    return 1.0 - front * beta_fraction(1.0 - x, b, a) / b;
}

double hyp2f1_1_n(double n, double z) {
    if (!(n > 0) || !std::isfinite(n)) throw DomainError("hyp2f1_1_n: n must be positive");
    if (!(z >= 0.0)) throw DomainError("hyp2f1_1_n: z must be nonnegative");
    if (!(z < 1.0)) throw DomainError("hyp2f1_1_n: diverges for z >= 1");
    if (z == 0.0) return 1.0;

    const double q = 1.0 - z;
    if (q * std::fmax(n, 1.0) >= 0.25) {
        // n * sum z^k / (n + k)
        double sum = 0.0;
        double zk = 1.0;
        for (long k = 0; k < 1000000; ++k) {
            const double term = n * zk / (n + static_cast<double>(k));
            sum += term;
            if (term < 1e-15 * sum) break;
            zk *= z;
        }
        return sum;
    }

    // F(a,b;a+b;z) expansion about z = 1 with a = 1, b = n:
    // n * sum_k (n)_k/k! [psi(k+1) - psi(n+k) - ln(1-z)] (1-z)^k
    const double log_q = std::log(q);
    double psi_k1 = -0.57721566490153286061;  // psi(1)
    double psi_nk = boost::math::digamma(n);
    double coef = 1.0;
    double sum = 0.0;
    for (long k = 0; k < 100000; ++k) {
        const double term = coef * (psi_k1 - psi_nk - log_q);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
        const double kd = static_cast<double>(k);
        coef *= (n + kd) / (kd + 1.0) * q;
        psi_k1 += 1.0 / (kd + 1.0);
        psi_nk += 1.0 / (n + kd);
    }
    return n * sum;
}

double hyp2f1_1_n_closed(int n, double z) {
    if (n < 1) throw DomainError("hyp2f1_1_n_closed: n must be a positive integer");
    if (!(z > 0.0 && z < 1.0)) throw DomainError("hyp2f1_1_n_closed: z must lie in (0,1)");
    double s = -std::log1p(-z);
    double zm = 1.0;
    for (int m = 1; m < n; ++m) {
        zm *= z;
        s -= zm / m;
    }
    return n * s / std::pow(z, n);
}

double euler_hyp2f1(const HyperParams& p) {
    if (!(p.b > 0)) throw DomainError("euler_hyp2f1: requires b > 0");
    if (!(p.c > p.b)) throw DomainError("euler_hyp2f1: requires c > b");
    if (!std::isfinite(p.a)) throw DomainError("euler_hyp2f1: a must be finite");
    if (!(p.z >= 0.0 && p.z < 1.0)) throw DomainError("euler_hyp2f1: z must lie in [0,1)");

    const double lb = log_beta(p.b, p.c - p.b);
    auto integrand = [&](double t, double u, double v) {
        // u = t, v = 1 - t, both accurate near the ends.
        const double lw = (p.b - 1.0) * std::log(u) + (p.c - p.b - 1.0) * std::log(v) - lb;
        const double one_minus_tz = v + u * (1.0 - p.z);
        (void)t;
        return std::exp(lw - p.a * std::log(one_minus_tz));
    };
    return quad::segment(integrand, 0.0, 1.0, 1e-14);
}

}  // namespace powermix::specfun
