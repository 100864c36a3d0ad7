#include "powermix/moments.hpp"

#include "parallel.hpp"
#include "powermix/errors.hpp"
#include "powermix/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace powermix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kOrderStatSalt = 0x6f72646572;  // "order"
constexpr std::uint64_t kJointSalt = 0x6a6f696e74;      // "joint"
constexpr std::uint64_t kDirectSalt = 0x646972656374;   // "direct"

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

void require_finite(const Distribution& d) {
    if (!d.has_finite_moments()) {
        throw NoFiniteMomentError(d.to_string() + " has no finite moments");
    }
}

bool is_std_uniform(const Distribution& d) {
    return (d.kind() == Kind::uniform && d.param(0) == 0.0 && d.param(1) == 1.0) ||
           (d.kind() == Kind::beta && d.param(0) == 1.0 && d.param(1) == 1.0) ||
           (d.kind() == Kind::power && d.param(0) == 1.0);
}

// E S^m, S ~ N(0, 2)
double sum_moment(int m) {
    if (m % 2) return 0.0;
    double r = 1.0;
    for (int i = m - 1; i > 1; i -= 2) r *= i;
    return std::pow(2.0, m / 2) * r;
}

// E D^m, D = |N(0, 2)|
double gap_moment(int m) {
    return std::exp(m * std::log(2.0) + specfun::log_gamma(0.5 * (m + 1)) -
                    0.5 * std::log(std::numbers::pi));
}

// E(Y1^i Y2^j) for iid standard normal components, Y1 = (S - D)/2, Y2 = (S + D)/2.
double std_normal_product(int i, int j) {
    double total = 0.0;
    for (int p = 0; p <= i; ++p) {
        for (int q = 0; q <= j; ++q) {
            const double sign = ((i - p) % 2) ? -1.0 : 1.0;
            total += binom(i, p) * binom(j, q) * sign * sum_moment(p + q) *
                     gap_moment(i - p + j - q);
        }
    }
    return total / ipow(2.0, i + j);
}

// E h(min, max) by nested quadrature, the inner integral split on the diagonal.
double order_stat_expect(const Distribution& x1, const Distribution& x2,
                         const std::function<double(double, double)>& h) {
    auto inner = [&](double a) {
        auto g = [&](double b, double, double) { return a <= b ? h(a, b) : h(b, a); };
        double v = expect_on(x2, -kInf, a, g, 1e-13) + expect_on(x2, a, kInf, g, 1e-13);
        if (x2.is_atom() && x2.param(0) == a) v -= h(a, a);
        return v;
    };
    return expect(x1, inner, 1e-12);
}

void fill_gap_from_product(OrderStatMoments& os) {
    const int k = os.k_max();
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; i + j <= k; ++j) {
            double total = 0.0;
            for (int q = 0; q <= j; ++q) {
                const double sign = ((j - q) % 2) ? -1.0 : 1.0;
                total += binom(j, q) * sign * os.product.at(i + j - q, q);
            }
            os.gap.at(i, j) = total;
        }
    }
}

struct Accumulator {
    MomentTable sum;
    MomentTable sum_sq;
    explicit Accumulator(int k) : sum(k), sum_sq(k) {}
};

void finish_mc(const std::vector<Accumulator>& parts, std::size_t n, MomentTable& mean,
               MomentTable& se) {
    const int k = mean.k_max();
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; i + j <= k; ++j) {
            double s = 0.0, s2 = 0.0;
            for (const auto& p : parts) {
                s += p.sum.at(i, j);
                s2 += p.sum_sq.at(i, j);
            }
            const double m = s / static_cast<double>(n);
            const double var = std::max(0.0, s2 / static_cast<double>(n) - m * m);
            mean.at(i, j) = (i == 0 && j == 0) ? 1.0 : m;
            se.at(i, j) = std::sqrt(var / static_cast<double>(n > 1 ? n - 1 : 1));
        }
    }
}

template <class Feed>
void run_table_mc(int k_max, std::size_t n, std::uint64_t seed, std::uint64_t salt,
                  std::vector<Accumulator>& a_parts, std::vector<Accumulator>& b_parts,
                  Feed feed) {
    const std::size_t chunks = detail::kMonteCarloChunks;
    a_parts.assign(chunks, Accumulator(k_max));
    b_parts.assign(chunks, Accumulator(k_max));
    const Stream root = Stream(seed).split(salt);
    detail::for_each_chunk(chunks, [&](std::size_t c) {
        Stream s = root.split(c);
        std::vector<double> pa(static_cast<std::size_t>(k_max + 1));
        std::vector<double> pb(static_cast<std::size_t>(k_max + 1));
        const std::size_t m = detail::chunk_size(n, chunks, c);
        for (std::size_t r = 0; r < m; ++r) {
            auto [a, b, a2, b2] = feed(s);
            // a, b feed table one; a2, b2 feed table two
            pa[0] = 1.0;
            pb[0] = 1.0;
            for (int i = 1; i <= k_max; ++i) {
                pa[i] = pa[i - 1] * a;
                pb[i] = pb[i - 1] * b;
            }
            for (int i = 0; i <= k_max; ++i) {
                for (int j = 0; i + j <= k_max; ++j) {
                    const double v = pa[i] * pb[j];
                    a_parts[c].sum.at(i, j) += v;
                    a_parts[c].sum_sq.at(i, j) += v * v;
                }
            }
            pa[0] = 1.0;
            pb[0] = 1.0;
            for (int i = 1; i <= k_max; ++i) {
                pa[i] = pa[i - 1] * a2;
                pb[i] = pb[i - 1] * b2;
            }
            for (int i = 0; i <= k_max; ++i) {
                for (int j = 0; i + j <= k_max; ++j) {
                    const double v = pa[i] * pb[j];
                    b_parts[c].sum.at(i, j) += v;
                    b_parts[c].sum_sq.at(i, j) += v * v;
                }
            }
        }
    });
}

double weight_raw_moment(const Distribution& w, int j) { return w.raw_moment(j); }

}  // namespace

std::string_view method_name(MomentMethod m) {
    switch (m) {
        case MomentMethod::thm_a: return "thm411a";
        case MomentMethod::thm_b: return "thm411b";
        case MomentMethod::thm_c: return "thm411c";
        case MomentMethod::monte_carlo: return "monte_carlo";
        case MomentMethod::named_closed_form: return "named_closed_form";
    }
    return "?";
}

MomentTable::MomentTable(int k_max)
    : k_max_(k_max), v_(static_cast<std::size_t>((k_max + 1) * (k_max + 1)), 0.0) {
    if (k_max < 0) throw PreconditionError("MomentTable: negative order");
}

double& MomentTable::at(int i, int j) {
    if (!has(i, j)) throw PreconditionError("moment table entry out of range");
    return v_[static_cast<std::size_t>(i * (k_max_ + 1) + j)];
}

double MomentTable::at(int i, int j) const {
    if (!has(i, j)) throw PreconditionError("moment table entry out of range");
    return v_[static_cast<std::size_t>(i * (k_max_ + 1) + j)];
}

void require_finite_moments(const MixtureSpec& spec) {
    require_finite(spec.x1());
    require_finite(spec.x2());
}

OrderStatMoments order_stat_moments(const Distribution& x1, const Distribution& x2, int k_max) {
    require_finite(x1);
    require_finite(x2);
    OrderStatMoments os;
    os.source = OrderStatMoments::Source::closed_form;
    os.product = MomentTable(k_max);
    os.gap = MomentTable(k_max);

    const bool iid = x1 == x2;
    if (iid && is_std_uniform(x1)) {
        for (int i = 0; i <= k_max; ++i) {
            for (int j = 0; i + j <= k_max; ++j) {
                os.product.at(i, j) = 2.0 / ((i + 1.0) * (i + j + 2.0));
            }
        }
        fill_gap_from_product(os);
    } else if (iid && x1.kind() == Kind::normal) {
        const double mu = x1.param(0), sd = x1.param(1);
        for (int i = 0; i <= k_max; ++i) {
            for (int j = 0; i + j <= k_max; ++j) {
                double total = 0.0;
                for (int a = 0; a <= i; ++a) {
                    for (int b = 0; b <= j; ++b) {
                        total += binom(i, a) * binom(j, b) * ipow(mu, i - a + j - b) *
                                 ipow(sd, a + b) * std_normal_product(a, b);
                    }
                }
                os.product.at(i, j) = total;
            }
        }
        // gaps scale without the location
        for (int i = 0; i <= k_max; ++i) {
            for (int j = 0; i + j <= k_max; ++j) {
                double total = 0.0;
                for (int a = 0; a <= i; ++a) {
                    // E(Y1^a D^j) for the standard law: D = gap, Y1 = (S - D)/2
                    double inner = 0.0;
                    for (int p = 0; p <= a; ++p) {
                        const double sign = ((a - p) % 2) ? -1.0 : 1.0;
                        inner += binom(a, p) * sign * sum_moment(p) * gap_moment(a - p + j);
                    }
                    inner /= ipow(2.0, a);
                    total += binom(i, a) * ipow(mu, i - a) * ipow(sd, a + j) * inner;
                }
                os.gap.at(i, j) = total;
            }
        }
    } else {
        for (int i = 0; i <= k_max; ++i) {
            for (int j = 0; i + j <= k_max; ++j) {
                if (i == 0 && j == 0) {
                    os.product.at(0, 0) = 1.0;
                    os.gap.at(0, 0) = 1.0;
                    continue;
                }
                os.product.at(i, j) = order_stat_expect(
                    x1, x2, [i, j](double a, double b) { return ipow(a, i) * ipow(b, j); });
                os.gap.at(i, j) = order_stat_expect(
                    x1, x2, [i, j](double a, double b) { return ipow(a, i) * ipow(b - a, j); });
            }
        }
    }
    os.product.at(0, 0) = 1.0;
    os.gap.at(0, 0) = 1.0;
    return os;
}

OrderStatMoments order_stat_moments_mc(const Distribution& x1, const Distribution& x2, int k_max,
                                       std::size_t n, std::uint64_t seed) {
    require_finite(x1);
    require_finite(x2);
    if (n < 2) throw PreconditionError("order_stat_moments_mc: need at least two draws");
    std::vector<Accumulator> prod_parts, gap_parts;
    run_table_mc(k_max, n, seed, kOrderStatSalt, prod_parts, gap_parts, [&](Stream& s) {
        const double a = x1.draw(s);
        const double b = x2.draw(s);
        const double y1 = std::min(a, b), y2 = std::max(a, b);
        return std::array<double, 4>{y1, y2, y1, y2 - y1};
    });
    OrderStatMoments os;
    os.source = OrderStatMoments::Source::monte_carlo;
    os.samples = n;
    os.seed = seed;
    os.product = MomentTable(k_max);
    os.gap = MomentTable(k_max);
    os.product_se = MomentTable(k_max);
    os.gap_se = MomentTable(k_max);
    finish_mc(prod_parts, n, os.product, *os.product_se);
    finish_mc(gap_parts, n, os.gap, *os.gap_se);
    return os;
}

JointMoments joint_moments(const Distribution& x1, const Distribution& x2, int k_max) {
    require_finite(x1);
    require_finite(x2);
    JointMoments jm{MomentTable(k_max), std::nullopt};
    if (x1 == x2 && x1.kind() == Kind::normal) {
        // X1 + X2 = 2 mu + sd S and |X1 - X2| = sd D are independent
        const double mu = x1.param(0), sd = x1.param(1);
        for (int i = 0; i <= k_max; ++i) {
            double sum_i = 0.0;
            for (int p = 0; p <= i; ++p) {
                sum_i += binom(i, p) * ipow(2.0 * mu, i - p) * ipow(sd, p) * sum_moment(p);
            }
            for (int j = 0; i + j <= k_max; ++j) {
                jm.value.at(i, j) = sum_i * ipow(sd, j) * gap_moment(j);
            }
        }
    } else {
        for (int i = 0; i <= k_max; ++i) {
            for (int j = 0; i + j <= k_max; ++j) {
                if (i == 0 && j == 0) continue;
                jm.value.at(i, j) = order_stat_expect(x1, x2, [i, j](double a, double b) {
                    return ipow(a + b, i) * ipow(b - a, j);
                });
            }
        }
    }
    jm.value.at(0, 0) = 1.0;
    return jm;
}

JointMoments joint_moments_mc(const Distribution& x1, const Distribution& x2, int k_max,
                              std::size_t n, std::uint64_t seed) {
    require_finite(x1);
    require_finite(x2);
    if (n < 2) throw PreconditionError("joint_moments_mc: need at least two draws");
    std::vector<Accumulator> parts, unused;
    run_table_mc(k_max, n, seed, kJointSalt, parts, unused, [&](Stream& s) {
        const double a = x1.draw(s);
        const double b = x2.draw(s);
        return std::array<double, 4>{a + b, std::fabs(a - b), 0.0, 0.0};
    });
    JointMoments jm{MomentTable(k_max), MomentTable(k_max)};
    finish_mc(parts, n, jm.value, *jm.std_error);
    return jm;
}

double centered_weight_moment(const Distribution& w, int i) {
    // sum_j C(i,j) E W^j (-1/2)^{i-j}
    double total = 0.0;
    for (int j = 0; j <= i; ++j) {
        total += binom(i, j) * weight_raw_moment(w, j) * ipow(-0.5, i - j);
    }
    return total;
}

MomentReport moment_thm_a(const OrderStatMoments& os, double n, int k) {
    if (k < 0) throw PreconditionError("moment_thm_a: negative order");
    if (k > os.k_max()) throw PreconditionError("moment_thm_a: table does not cover order k");
    if (!(n > 0)) throw DomainError("moment_thm_a: requires n > 0");
    MomentReport r{k, 1.0, std::nullopt, MomentMethod::thm_a};
    if (k == 0) return r;
    const double front = std::log(n) + specfun::log_gamma(k + 1.0) - specfun::log_gamma(k + n + 1.0);
    double total = 0.0, se = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double c =
            std::exp(front + specfun::log_gamma(k - i + n) - specfun::log_gamma(k - i + 1.0));
        total += c * os.product.at(i, k - i);
        if (os.product_se) se += std::fabs(c) * os.product_se->at(i, k - i);
    }
    r.value = total;
    if (os.product_se) r.std_error = se;
    return r;
}

MomentReport moment_thm_b(const MixtureSpec& spec, int k, const JointMoments& joint) {
    if (spec.family() != Family::undirected) {
        throw PreconditionError("moment_thm_b: applies to the undirected (TSP) family");
    }
    require_finite_moments(spec);
    if (k < 0) throw PreconditionError("moment_thm_b: negative order");
    if (k > joint.value.k_max()) throw PreconditionError("moment_thm_b: joint table too small");
    MomentReport r{k, 1.0, std::nullopt, MomentMethod::thm_b};
    if (k == 0) return r;
    double total = 0.0, se = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double c = binom(k, i) * ipow(0.5, k - i) * centered_weight_moment(spec.weight(), i);
        total += c * joint.value.at(k - i, i);
        if (joint.std_error) se += std::fabs(c) * joint.std_error->at(k - i, i);
    }
    r.value = total;
    if (joint.std_error) r.std_error = se;
    return r;
}

MomentReport moment_thm_c(const OrderStatMoments& os, double n, int k) {
    if (k < 0) throw PreconditionError("moment_thm_c: negative order");
    if (k > os.k_max()) throw PreconditionError("moment_thm_c: table does not cover order k");
    if (!(n > 0)) throw DomainError("moment_thm_c: requires n > 0");
    MomentReport r{k, 1.0, std::nullopt, MomentMethod::thm_c};
    if (k == 0) return r;
    double total = 0.0, se = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double c = binom(k, i) * n / (n + i);
        total += c * os.gap.at(k - i, i);
        if (os.gap_se) se += std::fabs(c) * os.gap_se->at(k - i, i);
    }
    r.value = total;
    if (os.gap_se) r.std_error = se;
    return r;
}

std::vector<MomentReport> moments_monte_carlo(const MixtureSpec& spec, int k_max, std::size_t n,
                                              std::uint64_t seed) {
    require_finite_moments(spec);
    if (n < 2) throw PreconditionError("moments_monte_carlo: need at least two draws");
    if (k_max < 0) throw PreconditionError("moments_monte_carlo: negative order");
    std::vector<Accumulator> parts, unused;
    run_table_mc(k_max, n, seed, kDirectSalt, parts, unused, [&](Stream& s) {
        return std::array<double, 4>{draw(spec, s), 0.0, 0.0, 0.0};
    });
    MomentTable mean(k_max), se(k_max);
    finish_mc(parts, n, mean, se);
    std::vector<MomentReport> out;
    for (int k = 0; k <= k_max; ++k) {
        MomentReport r{k, mean.at(k, 0), se.at(k, 0), MomentMethod::monte_carlo};
        if (k == 0) r.std_error = 0.0;
        out.push_back(r);
    }
    return out;
}

MomentReport moment_monte_carlo(const MixtureSpec& spec, int k, std::size_t n,
                                std::uint64_t seed) {
    return moments_monte_carlo(spec, k, n, seed).back();
}

OrderStatSummary summarize(const OrderStatMoments& os) {
    if (os.k_max() < 2) throw PreconditionError("summarize: needs second-order entries");
    const double mu1 = os.product.at(1, 0);
    const double mu2 = os.product.at(0, 1);
    return {mu1, mu2, os.product.at(2, 0) - mu1 * mu1, os.product.at(0, 2) - mu2 * mu2,
            os.product.at(1, 1) - mu1 * mu2};
}

double tsp_mean(const OrderStatSummary& s, double n) {
    if (!std::isfinite(s.mu1) || !std::isfinite(s.mu2)) throw DomainError("tsp_mean: infinite input");
    return (s.mu1 + n * s.mu2) / (n + 1.0);
}

double tsp_variance(const OrderStatSummary& s, double n) {
    for (double v : {s.mu1, s.mu2, s.var1, s.var2, s.cov12}) {
        if (!std::isfinite(v)) throw DomainError("tsp_variance: infinite input");
    }
    const double d = s.mu1 - s.mu2;
    return (n * d * d + n * (n + 1.0) * (n + 1.0) * s.var2 +
            2.0 * (n + 1.0) * (s.var1 + n * s.cov12)) /
           ((n + 1.0) * (n + 1.0) * (n + 2.0));
}

namespace {

double spec_power(const MixtureSpec& spec) {
    if (spec.family() != Family::undirected) {
        throw PreconditionError("TSP moment formulas apply to the undirected family");
    }
    const auto n = spec.power_index();
    if (!n) throw PreconditionError("TSP mean/variance formulas need a power(n) weight");
    return *n;
}

}  // namespace

double tsp_mean(const MixtureSpec& spec) {
    const double n = spec_power(spec);
    require_finite_moments(spec);
    return tsp_mean(summarize(order_stat_moments(spec.x1(), spec.x2(), 2)), n);
}

double tsp_variance(const MixtureSpec& spec) {
    const double n = spec_power(spec);
    require_finite_moments(spec);
    return tsp_variance(summarize(order_stat_moments(spec.x1(), spec.x2(), 2)), n);
}

double uniform_moment_formula(double n, int k) {
    if (!(n > 0)) throw DomainError("uniform_moment_formula: requires n > 0");
    if (k < 0) throw PreconditionError("uniform_moment_formula: negative order");
    if (k == 0) return 1.0;
    const double front = std::log(n) + specfun::log_gamma(k + 1.0) - specfun::log_gamma(n + k + 1.0);
    double total = 0.0;
    for (int i = 0; i <= k; ++i) {
        total += std::exp(front + specfun::log_gamma(k - i + n) - specfun::log_gamma(k - i + 1.0)) *
                 2.0 / ((k + 2.0) * (i + 1.0));
    }
    return total;
}

double normal_moment_formula(double n, int k) {
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    switch (k) {
        case 0: return 1.0;
        case 1: return (n - 1.0) / ((n + 1.0) * sqrt_pi);
        case 2: return (n * n + n + 2.0) / ((n + 1.0) * (n + 2.0));
        case 3:
            return (5.0 * n * n * n + 12.0 * n * n + 13.0 * n - 30.0) /
                   (2.0 * sqrt_pi * (n + 3.0) * (n + 2.0) * (n + 1.0));
        default: break;
    }
    throw PreconditionError("normal_moment_formula: available for k <= 3");
}

}  // namespace powermix
