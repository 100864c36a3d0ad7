#include "powermix/errors.hpp"
#include "powermix/mixture.hpp"
#include "powermix/quadrature.hpp"
#include "powermix/verifier.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace powermix;
using cplx = std::complex<double>;

namespace {

double ulp_at(double x) {
    const double a = std::fabs(x);
    return std::nextafter(a, INFINITY) - a;
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const Distribution U01 = Distribution::uniform(0, 1);

}  // namespace

TEST_CASE("conditional cdf reference values") {
    CHECK(conditional_cdf({0, 1, Family::undirected, 2}, 0.5) == doctest::Approx(0.25));
    CHECK(conditional_cdf({1, 0, Family::directed, 2}, 0.5) == doctest::Approx(0.75));
    CHECK(conditional_cdf({0, 1, Family::directed, 1}, 0.3) == doctest::Approx(0.3));
    CHECK(conditional_cdf({0, 1, Family::undirected, 1}, 0.3) == doctest::Approx(0.3));
    CHECK(conditional_cdf({2, 2, Family::directed, 3}, 1.999) == 0.0);
    CHECK(conditional_cdf({2, 2, Family::directed, 3}, 2.0) == 1.0);
}

TEST_CASE("conditional cdf structure") {
    const double pts[] = {-1.3, -0.2, 0.0, 0.4, 1.7};
    for (double a : pts) {
        for (double b : pts) {
            for (double n : {1.0, 2.0, 3.5}) {
                double prev = 0.0;
                for (int i = 0; i <= 40; ++i) {
                    const double z = -2.0 + i * 0.1;
                    const double u = conditional_cdf({a, b, Family::undirected, n}, z);
                    CHECK(u == conditional_cdf({b, a, Family::undirected, n}, z));
                    const double d = conditional_cdf({a, b, Family::directed, n}, z);
                    CHECK(d >= prev);
                    prev = d;
                    if (n == 1.0) CHECK(std::fabs(u - d) <= 1e-14);
                }
                if (n >= 2 && a != b) {
                    const double mid = 0.5 * (a + b);
                    CHECK(conditional_cdf({a, b, Family::directed, n}, mid) !=
                          conditional_cdf({b, a, Family::directed, n}, mid));
                }
            }
        }
    }
}

TEST_CASE("conditional draws follow the conditional law") {
    for (auto fam : {Family::directed, Family::undirected}) {
        for (auto [x1, x2] : {std::pair{0.0, 1.0}, std::pair{1.0, -0.5}}) {
            const auto a = Distribution::point_mass(x1);
            const auto b = Distribution::point_mass(x2);
            const auto spec = fam == Family::directed ? MixtureSpec::directed(2.5, a, b)
                                                      : MixtureSpec::tsp(2.5, a, b);
            Stream s(11);
            const auto z = sample(spec, s, 100000);
            const double ks = ks_statistic(z, [&](double t) {
                return conditional_cdf({x1, x2, fam, 2.5}, t);
            });
            CHECK(ks < 0.006);
        }
    }
}

TEST_CASE("sampler corner cases") {
    Stream s(3);
    const auto lo = sample(MixtureSpec::tsp_weighted(Distribution::point_mass(0), U01, U01), s, 1000);
    Stream s2(3);
    for (double z : lo) {
        const double x1 = U01.draw(s2), x2 = U01.draw(s2);
        s2.discard(1);
        CHECK(z == std::min(x1, x2));
    }
    Stream s3(4), s4(4);
    const auto hi = sample(MixtureSpec::tsp_weighted(Distribution::point_mass(1), U01, U01), s3, 1000);
    for (double z : hi) {
        const double x1 = U01.draw(s4), x2 = U01.draw(s4);
        s4.discard(1);
        CHECK(z == std::max(x1, x2));
    }
    Stream s5(5);
    for (double z : sample(MixtureSpec::tsp(3, Distribution::point_mass(2.5),
                                           Distribution::point_mass(2.5)),
                           s5, 100)) {
        CHECK(z == 2.5);
    }
}

TEST_CASE("directed sampler with point masses") {
    Stream s(1);
    const auto up = sample(MixtureSpec::directed(2, Distribution::point_mass(0), Distribution::point_mass(1)), s, 1000000);
    CHECK(std::fabs(mean(up) - 2.0 / 3.0) < 0.001);
    Stream s2(2);
    const auto down = sample(MixtureSpec::directed(2, Distribution::point_mass(1), Distribution::point_mass(0)), s2, 1000000);
    const double below = static_cast<double>(std::count_if(down.begin(), down.end(), [](double z) { return z <= 0.5; })) / down.size();
    CHECK(std::fabs(below - 0.75) < 0.002);
}

TEST_CASE("directed and undirected agree in law at n = 1") {
    const auto a = Distribution::normal(0, 1);
    const auto b = Distribution::arcsin(-1, 2);
    Stream s1(8), s2(9);
    auto d = sample(MixtureSpec::directed(1, a, b), s1, 200000);
    auto u = sample(MixtureSpec::tsp(1, a, b), s2, 200000);
    std::sort(u.begin(), u.end());
    // two-sample KS against the empirical CDF of the other run
    const double ks = ks_statistic(d, [&](double t) {
        return static_cast<double>(std::upper_bound(u.begin(), u.end(), t) - u.begin()) / u.size();
    });
    CHECK(ks < 1.63 * std::sqrt(2.0 / 200000));
}

TEST_CASE("midrange representation agrees draw by draw") {
    Stream s(77);
    const auto w = Distribution::power(3);
    const auto x = Distribution::normal(0.5, 2);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double x1 = x.draw(s), x2 = x.draw(s), ww = w.draw(s);
        const double a = tsp_from_order_stats(x1, x2, ww);
        const double b = tsp_from_midrange(x1, x2, ww);
        const double scale = std::max({std::fabs(x1), std::fabs(x2), std::fabs(a)});
        worst = std::max(worst, std::fabs(a - b) / ulp_at(scale));
    }
    CHECK(worst <= 4.0);
}

TEST_CASE("location invariance with shared seeds") {
    const auto spec = MixtureSpec::tsp(2, Distribution::normal(0, 1), Distribution::uniform(-1, 2));
    for (double c : {8.0, -3.25, 100.0}) {
        Stream s1(123), s2(123);
        const auto z = sample(spec, s1, 100000);
        const auto zs = sample(spec.shifted(c), s2, 100000);
        double worst = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double scale = std::max({std::fabs(zs[i]), std::fabs(z[i] + c), std::fabs(c)});
            worst = std::max(worst, std::fabs(zs[i] - (z[i] + c)) / ulp_at(scale));
        }
        CAPTURE(c);
        CHECK(worst <= 4.0);
    }
}

TEST_CASE("uniform-component TSP density") {
    CHECK(tsp_pdf_uniform(1, 0.5) == doctest::Approx(1.3862943611198906188).epsilon(1e-14));
    CHECK(tsp_pdf_uniform(2, 0.5) == doctest::Approx(1.3862943611198906188).epsilon(1e-14));
    CHECK(tsp_pdf_uniform(1, 1e-12) < 1e-9);
    CHECK(tsp_pdf_uniform(2, 0.0) == 0.0);
    CHECK(tsp_pdf_uniform(2, 1.2) == 0.0);
    CHECK_THROWS_AS(tsp_pdf_uniform(0, 0.5), DomainError);
    // mpmath values
    struct Row {
        double n, z, want;
    };
    const Row rows[] = {
        {1, 0.1, 0.65016594678289647901},   {1, 0.9, 0.65016594678289647901},
        {2, 0.1, 0.37929785636817468442},   {2, 0.9, 0.92103403719761827361},
        {3, 0.1, 0.29894678455226202663},   {3, 0.5, 1.3294415416798359283},
        {3, 0.9, 1.1115510557964274104},    {5, 0.1, 0.24999464092043671105},
        {5, 0.5, 1.2261525694663932138},    {5, 0.9, 1.364335092994045684},
        {0.5, 0.1, 1.0218658024607410644},  {0.5, 0.5, 1.295587149392638074},
        {0.5, 0.9, 0.4610558879474409639},
    };
    for (const auto& r : rows) {
        CAPTURE(r.n);
        CAPTURE(r.z);
        CHECK(tsp_pdf_uniform(r.n, r.z) == doctest::Approx(r.want).epsilon(1e-12));
    }
    for (double z : {0.05, 0.3, 0.7, 0.95}) {
        const double at1 = tsp_pdf_uniform(1, z);
        CHECK(std::fabs(tsp_pdf_uniform(1 + 1e-7, z) - at1) < 1e-6);
        CHECK(std::fabs(tsp_pdf_uniform(1 - 1e-7, z) - at1) < 1e-6);
    }
    for (double n : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        const double mass = quad::segment(
            [n](double z, double, double) { return tsp_pdf_uniform(n, z); }, 0.0, 1.0, 1e-12);
        CAPTURE(n);
        CHECK(std::fabs(mass - 1.0) < 1e-8);
    }
}

TEST_CASE("beta-weight TSP density") {
    CHECK(tsp_pdf_uniform_betaweight(2, 2, 0.5) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(tsp_pdf_uniform_betaweight(3, 2, 0.5) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(tsp_pdf_uniform_betaweight(2.5, 3.5, 0.3) ==
          doctest::Approx(1.4176667202818129849).epsilon(1e-12));
    CHECK(tsp_pdf_uniform_betaweight(2, 2, 1e-12) < 1e-9);
    for (double z : {0.1, 0.35, 0.8}) {
        CHECK(tsp_pdf_uniform_betaweight(2, 2, z) ==
              doctest::Approx(Distribution::beta(2, 2).pdf(z)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(tsp_pdf_uniform_betaweight(1, 2, 0.5), DomainError);
    CHECK_THROWS_AS(tsp_pdf_uniform_betaweight(2, 0.5, 0.5), DomainError);
}

TEST_CASE("conditional density given the weight") {
    CHECK(conditional_pdf_given_w(0.5, 0.25) == doctest::Approx(1.0));
    CHECK(conditional_pdf_given_w(0.5, 0.75) == doctest::Approx(1.0));
    for (double w : {0.0, 0.3, 1.0}) {
        const double mass = quad::segment(
            [w](double z, double, double) { return conditional_pdf_given_w(w, z); }, 0.0, w, 1e-12) +
            quad::segment(
            [w](double z, double, double) { return conditional_pdf_given_w(w, z); }, w, 1.0, 1e-12);
        CHECK(std::fabs(mass - 1.0) < 1e-12);
    }
    // E_W[f(z | W)] reproduces the unconditional density
    for (double n : {1.0, 2.0, 3.0}) {
        for (double z : {0.2, 0.5, 0.8}) {
            const auto w = Distribution::power(n);
            const double v = expect_on(w, 0, z, [&](double x, double, double) {
                return conditional_pdf_given_w(x, z);
            }) + expect_on(w, z, 1, [&](double x, double, double) {
                return conditional_pdf_given_w(x, z);
            });
            CHECK(v == doctest::Approx(tsp_pdf_uniform(n, z)).epsilon(1e-9));
        }
    }
}

TEST_CASE("numeric mixture density matches closed forms") {
    for (double n : {1.0, 2.0, 3.0}) {
        const auto spec = MixtureSpec::tsp(n, U01, U01);
        for (double z : {0.01, 0.2, 0.5, 0.77, 0.99}) {
            CAPTURE(n);
            CAPTURE(z);
            CHECK(std::fabs(mixture_pdf_numeric(spec, z) - tsp_pdf_uniform(n, z)) < 1e-8);
        }
        CHECK(mixture_pdf_numeric(spec, 1.5) == 0.0);
    }
    const auto ex431 = MixtureSpec::tsp_weighted(Distribution::beta(3, 1), Distribution::beta(1, 2),
                                                 Distribution::beta(1, 2));
    CHECK(std::fabs(mixture_pdf_numeric(ex431, 0.5) - 1.5) < 1e-8);
    const auto ex432 = MixtureSpec::tsp_weighted(Distribution::beta(2, 2), U01, U01);
    for (double z : {0.1, 0.5, 0.9}) {
        CHECK(std::fabs(mixture_pdf_numeric(ex432, z) - Distribution::beta(2, 2).pdf(z)) < 1e-8);
    }
    const auto bw = MixtureSpec::tsp_weighted(Distribution::beta(2.5, 3.5), U01, U01);
    CHECK(std::fabs(mixture_pdf_numeric(bw, 0.3) - 1.4176667202818129849) < 1e-8);
    // two atoms: Z ~ power(2) on [0,1]
    const auto atoms = MixtureSpec::directed(2, Distribution::point_mass(0), Distribution::point_mass(1));
    CHECK(std::fabs(mixture_pdf_numeric(atoms, 0.3) - 0.6) < 1e-12);
}

TEST_CASE("directed characterization in the proof orientation") {
    const auto spec = MixtureSpec::directed(2, Distribution::arcsin(-1, 1), Distribution::uniform(-1, 1));
    const auto semi = Distribution::semicircle(-1, 1);
    for (double z : {-0.9, -0.3, 0.0, 0.45, 0.8}) {
        CHECK(std::fabs(mixture_pdf_numeric(spec, z) - semi.pdf(z)) < 1e-7);
    }
    // the literal slot assignment does not produce the semicircle law
    const auto literal = MixtureSpec::directed(2, Distribution::uniform(-1, 1), Distribution::arcsin(-1, 1));
    CHECK(std::fabs(mixture_pdf_numeric(literal, 0.8) - semi.pdf(0.8)) > 0.05);
}

TEST_CASE("mixture Stieltjes transform") {
    const auto spec = MixtureSpec::directed(2, Distribution::arcsin(-1, 1), Distribution::uniform(-1, 1));
    const auto semi = Distribution::semicircle(-1, 1);
    for (cplx z : {cplx(2, 0), cplx(-1.5, 0), cplx(0.3, 0.8), cplx(1.5, 1.5)}) {
        for (int k = 0; k <= 3; ++k) {
            const cplx a = mixture_stieltjes(spec, z, k);
            const cplx b = stieltjes(semi, z, k);
            CAPTURE(z);
            CAPTURE(k);
            CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(b)));
        }
    }
    const auto tsp = MixtureSpec::tsp(2, U01, U01);
    for (cplx z : {cplx(2, 0), cplx(0.5, 0.6)}) {
        for (int k = 0; k <= 3; k += 3) {
            const cplx a = mixture_stieltjes(tsp, z, k);
            const cplx b = mixture_stieltjes_by_density(tsp, z, k);
            CHECK(std::abs(a - b) < 1e-7 * std::max(1.0, std::abs(b)));
        }
    }
    CHECK_THROWS_AS(mixture_stieltjes(tsp, cplx(0.5, 0)), DomainError);
}
