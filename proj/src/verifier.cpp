#include "powermix/verifier.hpp"

#include "parallel.hpp"
#include "powermix/errors.hpp"
#include "powermix/format.hpp"
#include "powermix/moments.hpp"
#include "powermix/rng.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace powermix {

using cplx = std::complex<double>;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw PreconditionError("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        // below the jump: only at the first of a run of ties
        if (i == 0 || samples[i - 1] != x) {
            const double left = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
            d = std::max(d, left - static_cast<double>(i) / n);
        }
        if (i + 1 == samples.size() || samples[i + 1] != x) {
            d = std::max(d, static_cast<double>(i + 1) / n - cdf(x));
        }
    }
    return std::clamp(d, 0.0, 1.0);
}

double ks_threshold(std::size_t n, double factor) {
    return factor * 1.36 / std::sqrt(static_cast<double>(n));
}

TabulatedCdf::TabulatedCdf(std::function<double(double)> pdf, double lo, double hi, int panels)
    : lo_(lo), hi_(hi), h_((hi - lo) / panels), f_(panels + 1), F_(panels + 1) {
    if (!(hi > lo) || panels < 1) throw DomainError("TabulatedCdf: empty range");
    using boost::math::quadrature::gauss;
    for (int i = 0; i <= panels; ++i) f_[i] = pdf(lo + i * h_);
    F_[0] = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = lo + i * h_;
        F_[i + 1] = F_[i] + gauss<double, 15>::integrate(pdf, a, a + h_);
    }
    const double total = F_.back();
    for (auto& v : F_) v /= total;
    for (auto& v : f_) v /= total;
}

double TabulatedCdf::operator()(double x) const {
    if (!(x > lo_)) return 0.0;
    if (!(x < hi_)) return 1.0;
    const double s = (x - lo_) / h_;
    const std::size_t i = std::min(static_cast<std::size_t>(s), F_.size() - 2);
    const double t = s - static_cast<double>(i);
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double v = h00 * F_[i] + h10 * h_ * f_[i] + h01 * F_[i + 1] + h11 * h_ * f_[i + 1];
    return std::clamp(v, 0.0, 1.0);
}

std::string_view check_name(CheckKind c) {
    switch (c) {
        case CheckKind::ks: return "ks";
        case CheckKind::density_sup: return "density_sup";
        case CheckKind::moment_match: return "moment_match";
        case CheckKind::stieltjes_residual: return "stieltjes_residual";
        case CheckKind::exactness: return "exactness";
    }
    return "?";
}

bool check_from_name(std::string_view name, CheckKind& out) {
    for (auto c : {CheckKind::ks, CheckKind::density_sup, CheckKind::moment_match,
                   CheckKind::stieltjes_residual, CheckKind::exactness}) {
        if (check_name(c) == name) {
            out = c;
            return true;
        }
    }
    return false;
}

bool VerificationReport::operator==(const VerificationReport& o) const {
    return id == o.id && check == o.check && statistic == o.statistic &&
           threshold == o.threshold && pass == o.pass && n == o.n && seed == o.seed &&
           detail == o.detail;
}

std::vector<double> chunked_sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed,
                                   std::uint64_t salt) {
    using namespace detail;
    std::vector<double> out(n);
    std::vector<std::size_t> offset(kMonteCarloChunks + 1, 0);
    for (std::size_t c = 0; c < kMonteCarloChunks; ++c) {
        offset[c + 1] = offset[c] + chunk_size(n, kMonteCarloChunks, c);
    }
    const Stream root = Stream(seed).split(salt);
    for_each_chunk(kMonteCarloChunks, [&](std::size_t c) {
        Stream s = root.split(c);
        for (std::size_t i = offset[c]; i < offset[c + 1]; ++i) out[i] = draw(spec, s);
    });
    return out;
}

double shift_exactness_ulps(const MixtureSpec& spec, double c, std::size_t n, std::uint64_t seed) {
    const MixtureSpec moved = spec.shifted(c);
    const std::vector<double> base = chunked_sample(spec, n, seed, fnv1a("shift"));
    const std::vector<double> shifted = chunked_sample(moved, n, seed, fnv1a("shift"));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = base[i] + c;
        const double mag = std::max({std::fabs(shifted[i]), std::fabs(expect), std::fabs(c)});
        const double ulp = std::nextafter(mag, std::numeric_limits<double>::infinity()) - mag;
        worst = std::max(worst, std::fabs(shifted[i] - expect) / ulp);
    }
    return worst;
}

namespace {

double closed_ks_threshold(std::size_t n) { return ks_threshold(n, 1.5); }
double tabulated_ks_threshold(std::size_t n) { return ks_threshold(n, 2.5); }

Distribution unit_uniform() { return Distribution::uniform(0, 1); }

struct Outcome {
    double statistic;
    std::string detail;
};

Outcome run_ks(const Scenario& s) {
    if (!s.construction || !s.claimed_law) {
        throw PreconditionError("scenario " + s.id + ": ks needs a construction and a claimed law");
    }
    const auto z = chunked_sample(*s.construction, s.n, s.seed, fnv1a(s.id));
    const Distribution& ref = *s.claimed_law;
    const double d = ks_statistic(z, [&](double x) { return ref.cdf(x); });
    return {d, s.construction->to_string() + " vs " + ref.to_string()};
}

Outcome run_density_sup(const Scenario& s) {
    if (!s.construction || !s.claimed_law) {
        throw PreconditionError("scenario " + s.id + ": density_sup needs a claimed law");
    }
    const Support sup = s.claimed_law->support();
    if (!sup.bounded()) throw PreconditionError("density_sup needs a bounded claimed law");
    const int points = 201;
    const double pad = 1e-3 * (sup.hi - sup.lo);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = sup.lo + pad + (sup.hi - sup.lo - 2 * pad) * i / (points - 1);
        worst = std::max(worst, std::fabs(mixture_pdf_numeric(*s.construction, x) -
                                          s.claimed_law->pdf(x)));
    }
    return {worst, "sup |f_Z - f_claimed| over 201 points"};
}

Outcome run_moment_match(const Scenario& s) {
    if (!s.construction || !s.claimed_law) {
        throw PreconditionError("scenario " + s.id + ": moment_match needs a claimed law");
    }
    const auto mc = moments_monte_carlo(*s.construction, 4, s.n, s.seed ^ fnv1a(s.id));
    double worst = 0.0;
    std::ostringstream detail;
    detail << "max |MC - exact| / SE over k = 1..4:";
    for (const auto& r : mc) {
        const double exact = s.claimed_law->raw_moment(r.k);
        const double se = std::max(r.std_error.value_or(0.0), 1e-300);
        const double z = std::fabs(r.value - exact) / se;
        detail << " k" << r.k << '=' << shortest(z);
        worst = std::max(worst, z);
    }
    return {worst, detail.str()};
}

Outcome run_stieltjes(const Scenario& s) {
    if (!s.construction || !s.claimed_law) {
        throw PreconditionError("scenario " + s.id + ": stieltjes_residual needs a claimed law");
    }
    const Support hull = mixture_support(*s.construction);
    const Support cl = s.claimed_law->support();
    std::vector<cplx> points;
    if (hull.bounded() && cl.bounded()) {
        const double lo = std::min(hull.lo, cl.lo), hi = std::max(hull.hi, cl.hi);
        const double w = hi - lo;
        points = {cplx(hi + w, 0), cplx(lo - w, 0), cplx(0.5 * (lo + hi), w)};
    } else {
        points = {cplx(0, 2), cplx(1, 3), cplx(-2, 1.5)};
    }
    double worst = 0.0;
    for (cplx z : points) {
        worst = std::max(worst, std::abs(mixture_stieltjes(*s.construction, z) -
                                         stieltjes(*s.claimed_law, z)));
    }
    return {worst, "max |S(F_Z) - S(F_claimed)| over 3 points"};
}

Outcome run_exactness(const Scenario& s) {
    if (!s.construction) throw PreconditionError("scenario " + s.id + ": exactness needs a mixture");
    const double ulps = shift_exactness_ulps(*s.construction, s.shift, s.n, s.seed);
    return {ulps, "max |Z(c) - (Z + c)| in ulps, c = " + shortest(s.shift)};
}

Outcome run_ex421(const Scenario& s) {
    double worst = 0.0;
    std::ostringstream detail;
    detail << "KS vs closed density:";
    for (int n = 1; n <= 3; ++n) {
        const auto spec = MixtureSpec::tsp(n, unit_uniform(), unit_uniform());
        const auto z = chunked_sample(spec, s.n, s.seed, fnv1a(s.id) + n);
        const double ref_n = n + s.reference_offset;
        TabulatedCdf cdf([&](double x) { return tsp_pdf_uniform(ref_n, x); }, 0.0, 1.0);
        const double d = ks_statistic(z, cdf);
        detail << " n" << n << '=' << shortest(d);
        worst = std::max(worst, d);
    }
    if (s.reference_offset) detail << " (reference n + " << s.reference_offset << ")";
    return {worst, detail.str()};
}

struct RunningMoments {
    double mean, sd, skew, se_mean;
};

RunningMoments sample_moments(const std::vector<double>& z) {
    const double n = static_cast<double>(z.size());
    double m = 0.0;
    for (double v : z) m += v;
    m /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : z) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    return {m, std::sqrt(m2), m3 / std::pow(m2, 1.5), std::sqrt(m2 / n)};
}

Outcome run_thm412b(const Scenario& s) {
    const auto nrm = Distribution::normal(0, 1);
    const auto z1 = chunked_sample(MixtureSpec::tsp(1, nrm, nrm), s.n, s.seed, fnv1a(s.id) + 1);
    const auto z2 = chunked_sample(MixtureSpec::tsp(2, nrm, nrm), s.n, s.seed, fnv1a(s.id) + 2);
    const RunningMoments a = sample_moments(z1);
    const RunningMoments b = sample_moments(z2);
    const double mu2 = 1.0 / (3.0 * std::sqrt(std::numbers::pi));
    const double skew_ratio = std::fabs(a.skew) / 0.01;
    const double mean_ratio = std::fabs(b.mean - mu2) / (4.0 * b.se_mean);
    const double excess_ratio = b.mean > 0 ? 3.0 * b.se_mean / b.mean
                                           : std::numeric_limits<double>::infinity();
    std::ostringstream detail;
    detail << "n=1 skewness " << shortest(a.skew) << " (limit 0.01); n=2 mean " << shortest(b.mean)
           << " SE " << shortest(b.se_mean) << " (expected " << shortest(mu2)
           << ", must exceed 3 SE)";
    return {std::max({skew_ratio, mean_ratio, excess_ratio}), detail.str()};
}

}  // namespace

VerificationReport run_scenario(const Scenario& s) {
    if (!(s.threshold > 0)) throw PreconditionError("scenario " + s.id + ": threshold must be positive");
    if (s.n == 0) throw PreconditionError("scenario " + s.id + ": sample size must be positive");
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    if (s.procedure == "ex421") {
        out = run_ex421(s);
    } else if (s.procedure == "thm412b") {
        out = run_thm412b(s);
    } else if (s.procedure == "standard") {
        switch (s.check) {
            case CheckKind::ks: out = run_ks(s); break;
            case CheckKind::density_sup: out = run_density_sup(s); break;
            case CheckKind::moment_match: out = run_moment_match(s); break;
            case CheckKind::stieltjes_residual: out = run_stieltjes(s); break;
            case CheckKind::exactness: out = run_exactness(s); break;
        }
    } else {
        throw PreconditionError("scenario " + s.id + ": unknown procedure " + s.procedure);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    VerificationReport r;
    r.id = s.id;
    r.check = s.check;
    r.statistic = out.statistic;
    r.threshold = s.threshold;
    r.pass = out.statistic <= s.threshold;
    r.n = s.n;
    r.seed = s.seed;
    r.wall_time = secs;
    r.detail = std::move(out.detail);
    return r;
}

std::vector<VerificationReport> run_scenarios(const std::vector<Scenario>& list) {
    std::vector<VerificationReport> out(list.size());
    detail::for_each_chunk(list.size(), [&](std::size_t i) { out[i] = run_scenario(list[i]); });
    return out;
}

std::vector<Scenario> scenario_catalog(std::size_t n, std::uint64_t seed) {
    const auto u11 = Distribution::uniform(-1, 1);
    const auto u01 = unit_uniform();
    std::vector<Scenario> c;
    auto ks = [&](std::string id, std::string claim, MixtureSpec m, Distribution law, double thr) {
        Scenario s;
        s.id = std::move(id);
        s.claim = std::move(claim);
        s.check = CheckKind::ks;
        s.construction = m;
        s.claimed_law = law;
        s.n = n;
        s.seed = seed;
        s.threshold = thr;
        c.push_back(std::move(s));
    };
    // Theorem 3.2 laws sit in the x1 slot, the uniform in the x2 slot (the proofs' orientation).
    ks("thm32a", "arcsin X1, uniform X2, n = 2 gives the semicircle law",
       MixtureSpec::directed(2, Distribution::arcsin(-1, 1), u11), Distribution::semicircle(-1, 1),
       2.0 / std::sqrt(static_cast<double>(n)));
    ks("thm32b", "power semicircle X1, uniform X2, n = 2 gives the power semicircle law",
       MixtureSpec::directed(2, Distribution::power_semicircle(-1, 1), u11),
       Distribution::power_semicircle(-1, 1), closed_ks_threshold(n));
    ks("thm32c", "beta(1/2,1/2) X1, beta(1,1) X2, n = 2 gives beta(3/2,3/2)",
       MixtureSpec::directed(2, Distribution::beta(0.5, 0.5), Distribution::beta(1, 1)),
       Distribution::beta(1.5, 1.5), closed_ks_threshold(n));
    ks("thm32d", "beta(2,2) X1, uniform X2, n = 2 gives beta(2,2)",
       MixtureSpec::directed(2, Distribution::beta(2, 2), u01), Distribution::beta(2, 2),
       closed_ks_threshold(n));
    {
        Scenario s;
        s.id = "ex421";
        s.claim = "uniform components: closed TSP density for n = 1, 2, 3";
        s.procedure = "ex421";
        s.construction = MixtureSpec::tsp(2, u01, u01);
        s.n = n;
        s.seed = seed;
        s.threshold = tabulated_ks_threshold(n);
        c.push_back(std::move(s));
    }
    ks("ex431", "beta(1,2) components, beta(3,1) weight gives beta(2,3)",
       MixtureSpec::tsp_weighted(Distribution::beta(3, 1), Distribution::beta(1, 2),
                                 Distribution::beta(1, 2)),
       Distribution::beta(2, 3), closed_ks_threshold(n));
    ks("ex432", "uniform components, beta(2,2) weight gives the weight law",
       MixtureSpec::tsp_weighted(Distribution::beta(2, 2), u01, u01), Distribution::beta(2, 2),
       closed_ks_threshold(n));
    {
        Scenario s;
        s.id = "thm412a";
        s.claim = "TSP law is location invariant";
        s.check = CheckKind::exactness;
        const auto nrm = Distribution::normal(0, 1);
        s.construction = MixtureSpec::tsp(2, nrm, nrm);
        s.n = n;
        s.seed = seed;
        s.threshold = 4.0;
        s.shift = 8.0;
        c.push_back(std::move(s));
    }
    {
        Scenario s;
        s.id = "thm412b";
        s.claim = "symmetric inputs give a symmetric TSP law only at n = 1";
        s.procedure = "thm412b";
        s.check = CheckKind::moment_match;
        s.n = n;
        s.seed = seed;
        s.threshold = 1.0;
        c.push_back(std::move(s));
    }
    ks("cauchy_n1", "cauchy components, n = 1 gives the same cauchy law",
       MixtureSpec::tsp(1, Distribution::cauchy(0, 1), Distribution::cauchy(0, 1)),
       Distribution::cauchy(0, 1), closed_ks_threshold(n));
    return c;
}

std::vector<std::string> scenario_ids() {
    std::vector<std::string> ids;
    for (const auto& s : scenario_catalog(1, 0)) ids.push_back(s.id);
    return ids;
}

std::optional<Scenario> find_scenario(std::string_view id, std::size_t n, std::uint64_t seed) {
    for (auto& s : scenario_catalog(n, seed)) {
        if (s.id == id) return s;
    }
    return std::nullopt;
}

std::vector<Scenario> arcsin_extension_scenarios(std::size_t n, std::uint64_t seed) {
    std::vector<Scenario> out;
    for (int k : {1, 2}) {
        Scenario s;
        s.id = "arcsin_tsp_n" + std::to_string(k);
        s.claim = "arcsin components give a uniform TSP law";
        s.construction = MixtureSpec::tsp(k, Distribution::arcsin(-1, 1), Distribution::arcsin(-1, 1));
        s.claimed_law = Distribution::uniform(-1, 1);
        s.n = n;
        s.seed = seed;
        s.threshold = closed_ks_threshold(n);
        out.push_back(std::move(s));
    }
    return out;
}

Scenario negative_control(const Scenario& s) {
    Scenario neg = s;
    neg.id = s.id + "_neg";
    if (s.procedure == "ex421") {
        neg.reference_offset = 1;
        return neg;
    }
    if (s.procedure != "standard" || s.check != CheckKind::ks || !s.claimed_law) {
        throw PreconditionError("negative_control: scenario " + s.id + " is not a KS check");
    }
    const Distribution& law = *s.claimed_law;
    const Support sup = law.support();
    if (!sup.bounded()) {
        neg.claimed_law = Distribution::normal(law.param(0), law.param(1));
    } else if (law.kind() == Kind::uniform ||
               (law.kind() == Kind::beta && law.param(0) == 1.0 && law.param(1) == 1.0)) {
        neg.claimed_law = Distribution::semicircle(sup.lo, sup.hi);
    } else {
        neg.claimed_law = Distribution::uniform(sup.lo, sup.hi);
    }
    return neg;
}

}  // namespace powermix
