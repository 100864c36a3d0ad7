#pragma once

#include "powermix/distribution.hpp"
#include "powermix/mixture.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace powermix {

using ComplexPoint = std::complex<double>;

/// Minimum distance between a test point and any support involved.
inline constexpr double kMinSupportDistance = 0.1;

struct ResidualReport {
    std::string identity;
    std::vector<ComplexPoint> points;
    /// |residual| per point; +inf where the identity's right side diverges.
    std::vector<double> residuals;
    std::vector<std::string> notes;
    double max_residual = 0;
    double tolerance = 0;
    bool pass = false;
};

/// Partial-fraction identity for the kernel 1/((x1 - z)(x2 - z)^n):
///   -1/((z-x1)(x2-x1)^n) + (-1)^n/(n-1)! d^{n-1}/dx2^{n-1} [g(x2)] = 1/((x1-z)(x2-z)^n),
/// g(x2) = 1/((x2-x1)(z-x2)), the derivative taken from its partial-fraction form.
/// Returns |LHS - RHS| / max(1, |RHS|), evaluated in long double.
double partial_fraction_residual(double x1, double x2, double z, int n);

/// (1/n) S^(n)(F_Z, z) + S(F_X1, z) S^(n-1)(F_X2, z) for a directed mixture with integer n.
/// The transform of Z comes from `claimed_law` when given, otherwise from the mixture itself.
ComplexPoint directed_transform_residual(const MixtureSpec& spec, ComplexPoint z,
                                         const std::optional<Distribution>& claimed_law = {});

/// Hand-written n = 1 form: S'(F_Z, z) + S(F_X1, z) S(F_X2, z).
ComplexPoint first_order_product_residual(const Distribution& x1, const Distribution& x2,
                                          const Distribution& z_law, ComplexPoint z);

/// -S'(F_Z1, z) - S(F_X, z)^2 with Z1 the n = 2 directed mixture of iid copies of X.
ComplexPoint iid_square_residual(const Distribution& x, ComplexPoint z,
                                 const std::optional<Distribution>& claimed_law = {});

/// ∫∫ dF1(x1) dF2(x2) / ((z - x1)(z - x2)(x2 - x1)^2). Throws DivergenceError when the
/// diagonal singularity is not integrable (shared atoms, overlapping densities).
ComplexPoint double_stieltjes(const Distribution& x1, const Distribution& x2, ComplexPoint z);

/// E[1 / ((z - Y1)(z - Y2)^3)] with Y1 = min, Y2 = max.
ComplexPoint ordered_pair_transform(const Distribution& x1, const Distribution& x2,
                                    ComplexPoint z);

/// -(1/2) S'''(F_Z, z) - S'(F_X1, z) S'(F_X2, z) - 2 S(F_X1, F_X2, z) for the n = 2 TSP law.
ComplexPoint tsp_third_derivative_residual(const Distribution& x1, const Distribution& x2,
                                           ComplexPoint z);

/// Same left side against S'(F_X1) S'(F_X2) + 2 E[1/((z - Y1)(z - Y2)^3)].
ComplexPoint tsp_third_derivative_residual_corrected(const Distribution& x1,
                                                     const Distribution& x2, ComplexPoint z);

/// Throws DomainError if z is closer than kMinSupportDistance to any support.
void require_off_support(ComplexPoint z, const std::vector<Distribution>& laws);

}  // namespace powermix
