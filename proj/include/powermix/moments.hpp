#pragma once

#include "powermix/distribution.hpp"
#include "powermix/mixture.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace powermix {

enum class MomentMethod { thm_a, thm_b, thm_c, monte_carlo, named_closed_form };

std::string_view method_name(MomentMethod m);

struct MomentReport {
    int k = 0;
    double value = 0;
    std::optional<double> std_error;
    MomentMethod method = MomentMethod::thm_a;
};

/// Triangular table over i + j <= k_max.
class MomentTable {
public:
    explicit MomentTable(int k_max = 0);
    int k_max() const noexcept { return k_max_; }
    bool has(int i, int j) const noexcept { return i >= 0 && j >= 0 && i + j <= k_max_; }
    double& at(int i, int j);
    double at(int i, int j) const;

private:
    int k_max_;
    std::vector<double> v_;
};

/// E(Y1^i Y2^j) and E(Y1^i (Y2 - Y1)^j) with Y1 = min(X1, X2), Y2 = max(X1, X2).
struct OrderStatMoments {
    enum class Source { closed_form, monte_carlo };

    Source source = Source::closed_form;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    MomentTable product;
    MomentTable gap;
    /// Present for Monte Carlo tables.
    std::optional<MomentTable> product_se;
    std::optional<MomentTable> gap_se;

    int k_max() const noexcept { return product.k_max(); }
};

/// Exact tables: closed form for iid uniform(0,1) and iid normal, 2D quadrature otherwise.
OrderStatMoments order_stat_moments(const Distribution& x1, const Distribution& x2, int k_max);
OrderStatMoments order_stat_moments_mc(const Distribution& x1, const Distribution& x2, int k_max,
                                       std::size_t n, std::uint64_t seed);

/// E[(X1 + X2)^i |X1 - X2|^j].
struct JointMoments {
    MomentTable value;
    std::optional<MomentTable> std_error;
};

JointMoments joint_moments(const Distribution& x1, const Distribution& x2, int k_max);
JointMoments joint_moments_mc(const Distribution& x1, const Distribution& x2, int k_max,
                              std::size_t n, std::uint64_t seed);

/// E(W - 1/2)^i for a weight law on [0,1].
double centered_weight_moment(const Distribution& w, int i);

MomentReport moment_thm_a(const OrderStatMoments& os, double n, int k);
MomentReport moment_thm_b(const MixtureSpec& spec, int k, const JointMoments& joint);
MomentReport moment_thm_c(const OrderStatMoments& os, double n, int k);

/// Plain Monte Carlo of E Z^k from the sampler.
MomentReport moment_monte_carlo(const MixtureSpec& spec, int k, std::size_t n, std::uint64_t seed);
std::vector<MomentReport> moments_monte_carlo(const MixtureSpec& spec, int k_max, std::size_t n,
                                              std::uint64_t seed);

struct OrderStatSummary {
    double mu1, mu2, var1, var2, cov12;
};
OrderStatSummary summarize(const OrderStatMoments& os);

double tsp_mean(const OrderStatSummary& s, double n);
double tsp_variance(const OrderStatSummary& s, double n);
/// Uses the exact order-statistic table of the spec's components; power weights only.
double tsp_mean(const MixtureSpec& spec);
double tsp_variance(const MixtureSpec& spec);

/// E Z^k for uniform(0,1) components.
double uniform_moment_formula(double n, int k);
/// E Z^k, k = 1..3, for standard normal components.
double normal_moment_formula(double n, int k);

/// Throws NoFiniteMomentError if either component is heavy-tailed.
void require_finite_moments(const MixtureSpec& spec);

}  // namespace powermix
