#pragma once

#include "powermix/distribution.hpp"
#include "powermix/mixture.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace powermix {

/// sup |F_n - F| over the sample. Throws PreconditionError on an empty sample.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Default KS threshold: factor * 1.36 / sqrt(n).
double ks_threshold(std::size_t n, double factor);

/// CDF built by integrating a density on a fixed panel grid (piecewise cubic Hermite).
class TabulatedCdf {
public:
    TabulatedCdf(std::function<double(double)> pdf, double lo, double hi, int panels = 4000);
    double operator()(double x) const;

private:
    double lo_, hi_, h_;
    std::vector<double> f_;
    std::vector<double> F_;
};

enum class CheckKind { ks, density_sup, moment_match, stieltjes_residual, exactness };

std::string_view check_name(CheckKind c);
bool check_from_name(std::string_view name, CheckKind& out);

/// Scenarios with a `procedure` other than "standard" run a dedicated routine:
///   "ex421"    KS of uniform-component TSP draws against the tabulated closed density, n = 1..3
///   "thm412b"  skewness at n = 1 and mean excess at n = 2, normal components
struct Scenario {
    std::string id;
    std::string claim;
    std::string procedure = "standard";
    CheckKind check = CheckKind::ks;
    std::optional<MixtureSpec> construction;
    std::optional<Distribution> claimed_law;
    std::size_t n = 1000000;
    std::uint64_t seed = 42;
    double threshold = 0;
    /// Shift used by exactness checks.
    double shift = 8.0;
    /// Power index offset applied to the ex421 reference (negative controls use 1).
    int reference_offset = 0;
};

struct VerificationReport {
    std::string id;
    CheckKind check = CheckKind::ks;
    double statistic = 0;
    double threshold = 0;
    bool pass = false;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double wall_time = 0;
    std::string detail;

    /// Ignores wall_time.
    bool operator==(const VerificationReport& o) const;
};

/// Built-in catalog: thm32a-d, ex421, ex431, ex432, thm412a, thm412b, cauchy_n1.
std::vector<Scenario> scenario_catalog(std::size_t n = 1000000, std::uint64_t seed = 42);
std::optional<Scenario> find_scenario(std::string_view id, std::size_t n = 1000000,
                                      std::uint64_t seed = 42);
std::vector<std::string> scenario_ids();

/// TSP of arcsin(-1,1) components against uniform(-1,1) at n = 1 (holds) and n = 2 (must fail).
std::vector<Scenario> arcsin_extension_scenarios(std::size_t n = 1000000, std::uint64_t seed = 42);

/// Same scenario against a deliberately wrong reference; KS scenarios only.
Scenario negative_control(const Scenario& s);

VerificationReport run_scenario(const Scenario& s);
/// Runs independently; reports come back in input order.
std::vector<VerificationReport> run_scenarios(const std::vector<Scenario>& list);

/// Draws of the mixture: 64 chunks, chunk c from stream(seed).split(salt).split(c).
std::vector<double> chunked_sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed,
                                   std::uint64_t salt);

/// Largest |shifted - (base + c)| in ulps of max(|shifted|, |base + c|, |c|), same streams.
double shift_exactness_ulps(const MixtureSpec& spec, double c, std::size_t n, std::uint64_t seed);

std::uint64_t fnv1a(std::string_view s);

}  // namespace powermix
