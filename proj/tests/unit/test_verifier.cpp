#include "doctest.h"

#include "powermix/errors.hpp"
#include "powermix/rng.hpp"
#include "powermix/verifier.hpp"

#include <cmath>

using namespace powermix;

TEST_CASE("KS statistic") {
    const auto u = Distribution::uniform(0, 1);
    Stream s(11);
    const auto x = u.sample(s, 100000);
    const double d = ks_statistic(x, [&](double t) { return u.cdf(t); });
    CHECK(d < ks_threshold(100000, 1.5));
    CHECK(d > 0);

    const auto nrm = Distribution::normal(0, 1);
    const auto y = u.sample(s, 10000);
    CHECK(ks_statistic(y, [&](double t) { return nrm.cdf(t); }) > 0.04);

    const auto pm = Distribution::point_mass(2.5);
    CHECK(ks_statistic(std::vector<double>(50, 2.5), [&](double t) { return pm.cdf(t); }) == 0.0);

    // one point against uniform(0,1): sup gap is max(x, 1 - x)
    CHECK(ks_statistic({0.3}, [&](double t) { return u.cdf(t); }) == doctest::Approx(0.7));
    CHECK_THROWS_AS(ks_statistic({}, [](double) { return 0.0; }), PreconditionError);
}

TEST_CASE("tabulated CDF") {
    const auto b = Distribution::beta(2, 3);
    TabulatedCdf t([&](double x) { return b.pdf(x); }, 0.0, 1.0, 500);
    for (double x : {-1.0, 0.0, 1e-4, 0.1, 0.37, 0.5, 0.9, 1.0, 2.0}) {
        CAPTURE(x);
        CHECK(std::fabs(t(x) - b.cdf(x)) < 1e-9);
    }
    TabulatedCdf closed([](double x) { return tsp_pdf_uniform(2, x); }, 0.0, 1.0);
    Stream s(5);
    const auto z = sample(MixtureSpec::tsp(2, Distribution::uniform(0, 1), Distribution::uniform(0, 1)),
                          s, 50000);
    CHECK(ks_statistic(z, closed) < ks_threshold(50000, 2.5));
}

TEST_CASE("scenario catalog") {
    const auto ids = scenario_ids();
    const std::vector<std::string> expect{"thm32a", "thm32b", "thm32c", "thm32d", "ex421",
                                          "ex431",  "ex432",  "thm412a", "thm412b", "cauchy_n1"};
    CHECK(ids == expect);
    for (const auto& s : scenario_catalog(1000000, 42)) {
        CHECK(s.threshold > 0);
        CHECK(s.seed == 42);
    }
    CHECK(find_scenario("thm32a", 1000000)->threshold == doctest::Approx(0.0020));
    CHECK(find_scenario("ex431", 1000000)->threshold == doctest::Approx(1.5 * 1.36 / 1000));
    CHECK(find_scenario("ex421", 1000000)->threshold == doctest::Approx(2.5 * 1.36 / 1000));
    CHECK_FALSE(find_scenario("nope"));
    CheckKind k;
    CHECK(check_from_name("density_sup", k));
    CHECK(k == CheckKind::density_sup);
    CHECK_FALSE(check_from_name("chi2", k));
}

TEST_CASE("scenario runs at reduced sample size") {
    const std::size_t n = 40000;
    for (const auto& id : {"thm32a", "thm32c", "thm32d", "ex431", "ex432", "cauchy_n1"}) {
        CAPTURE(id);
        auto s = *find_scenario(id, n, 42);
        const auto r = run_scenario(s);
        CHECK(r.pass);
        CHECK(r.seed == 42);
        CHECK(r.n == n);
        const auto neg = run_scenario(negative_control(s));
        CHECK_FALSE(neg.pass);
    }
    const auto ex = *find_scenario("ex421", n, 3);
    CHECK(run_scenario(ex).pass);
    CHECK_FALSE(run_scenario(negative_control(ex)).pass);

    const auto exact = run_scenario(*find_scenario("thm412a", n, 9));
    CHECK(exact.pass);
    CHECK(exact.statistic <= 4.0);
    CHECK_THROWS_AS(negative_control(*find_scenario("thm412a")), PreconditionError);
}

TEST_CASE("scenario determinism") {
    const auto s = *find_scenario("thm32a", 20000, 1234);
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    CHECK(a == b);
    CHECK(a.statistic == b.statistic);
    const auto both = run_scenarios({s, s});
    CHECK(both[0] == a);
    CHECK(both[1] == a);
    CHECK(run_scenario(*find_scenario("thm32a", 20000, 1235)).statistic != a.statistic);
}

TEST_CASE("arcsin law is not preserved beyond n = 1") {
    const auto runs = arcsin_extension_scenarios(100000, 42);
    REQUIRE(runs.size() == 2);
    CHECK(run_scenario(runs[0]).pass);
    CHECK_FALSE(run_scenario(runs[1]).pass);
}

TEST_CASE("user-defined check kinds") {
    const auto u = Distribution::uniform(0, 1);
    Scenario s;
    s.id = "user_density";
    s.check = CheckKind::density_sup;
    s.construction = MixtureSpec::tsp_weighted(Distribution::beta(2, 2), u, u);
    s.claimed_law = Distribution::beta(2, 2);
    s.threshold = 1e-7;
    CHECK(run_scenario(s).pass);

    s.id = "user_stieltjes";
    s.check = CheckKind::stieltjes_residual;
    s.threshold = 1e-8;
    CHECK(run_scenario(s).pass);

    s.id = "user_moments";
    s.check = CheckKind::moment_match;
    s.n = 100000;
    s.threshold = 4.0;
    CHECK(run_scenario(s).pass);
    s.claimed_law = Distribution::beta(2, 2.3);
    CHECK_FALSE(run_scenario(s).pass);

    s.threshold = 0;
    CHECK_THROWS_AS(run_scenario(s), PreconditionError);
    s.threshold = 1;
    s.procedure = "bogus";
    CHECK_THROWS_AS(run_scenario(s), PreconditionError);
}
