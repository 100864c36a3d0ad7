#pragma once

#include "powermix/distribution.hpp"
#include "powermix/rng.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace powermix {

enum class Family { directed, undirected };

std::string_view family_name(Family f);

/// Directed:   Z1 = X1 + W (X2 - X1), conditional CDF anchored at x1.
/// Undirected: Z2 = Y1 + W (Y2 - Y1) with Y1 = min, Y2 = max (the TSP law).
/// W ~ power(n) unless a weight law is given (undirected only).
class MixtureSpec {
public:
    static MixtureSpec directed(double n, Distribution x1, Distribution x2);
    static MixtureSpec tsp(double n, Distribution x1, Distribution x2);
    static MixtureSpec tsp_weighted(Distribution weight, Distribution x1, Distribution x2);

    Family family() const noexcept { return family_; }
    const Distribution& x1() const noexcept { return x1_; }
    const Distribution& x2() const noexcept { return x2_; }
    const Distribution& weight() const noexcept { return weight_; }
    bool has_weight_override() const noexcept { return override_; }
    /// n when W ~ power(n).
    std::optional<double> power_index() const;

    /// Same mixture with both components shifted by c.
    MixtureSpec shifted(double c) const;

    std::string to_string() const;
    bool operator==(const MixtureSpec&) const = default;

private:
    MixtureSpec(Family f, Distribution w, bool override_weight, Distribution x1, Distribution x2)
        : family_(f), weight_(w), override_(override_weight), x1_(x1), x2_(x2) {}

    Family family_;
    Distribution weight_;
    bool override_;
    Distribution x1_;
    Distribution x2_;
};

/// F(z | x1, x2) for a power(n) weight.
struct ConditionalLaw {
    double x1;
    double x2;
    Family family;
    double n;
};

double conditional_cdf(const ConditionalLaw& law, double z);

/// One draw: x1, x2, then w, in that order from the stream.
double draw(const MixtureSpec& spec, Stream& stream);
std::vector<double> sample(const MixtureSpec& spec, Stream& stream, std::size_t count);
std::vector<double> sample_tsp(const MixtureSpec& spec, Stream& stream, std::size_t count);
std::vector<double> sample_directed(const MixtureSpec& spec, Stream& stream, std::size_t count);

/// Y1 + W (Y2 - Y1)
double tsp_from_order_stats(double x1, double x2, double w);
/// (X1 + X2)/2 + (W - 1/2)|X1 - X2|
double tsp_from_midrange(double x1, double x2, double w);

/// Density of the TSP law with uniform(0,1) components and power(n) weight.
double tsp_pdf_uniform(double n, double z);
/// Same with a beta(n, m) weight, n > 1 and m > 1.
double tsp_pdf_uniform_betaweight(double n, double m, double z);
/// Density of the uniform-component TSP law given W = w (a triangular law with mode w).
double conditional_pdf_given_w(double w, double z);

/// Unconditional density by integrating the conditional density over the
/// product law of (X1, X2).
double mixture_pdf_numeric(const MixtureSpec& spec, double z);

/// Support hull of Z.
Support mixture_support(const MixtureSpec& spec);

/// order-th derivative of S(F_Z, z) by conditional expectation over (X1, X2, W).
std::complex<double> mixture_stieltjes(const MixtureSpec& spec, std::complex<double> z,
                                       int order = 0);
/// Same quantity integrated against mixture_pdf_numeric; continuous bounded components only.
std::complex<double> mixture_stieltjes_by_density(const MixtureSpec& spec,
                                                  std::complex<double> z, int order = 0);

}  // namespace powermix
