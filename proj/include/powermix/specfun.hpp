#pragma once

namespace powermix::specfun {

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double x, double a, double b);

/// F(1, n, n+1; z) for n > 0 and 0 <= z < 1.
double hyp2f1_1_n(double n, double z);

/// Integer-n closed form n z^-n (-ln(1-z) - sum_{m<n} z^m/m).
/// Loses accuracy for small z and large n; kept as a cross-check.
double hyp2f1_1_n_closed(int n, double z);

struct HyperParams {
    double a = 0;
    double b = 0;
    double c = 0;
    double z = 0;
};

/// F(a, b, c; z) from the Euler integral, c > b > 0, 0 <= z < 1.
double euler_hyp2f1(const HyperParams& p);

}  // namespace powermix::specfun
