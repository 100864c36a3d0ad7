#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "commands.hpp"

#include "powermix/errors.hpp"

#include <cmath>
#include <sstream>

using namespace powermix;
using namespace powermix::cli;

namespace {

double num(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
    return std::nan("");
}

std::string csv(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

}  // namespace

TEST_CASE("grids") {
    const auto g = parse_real_grid("0:1:5");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g[2] == 0.5);
    CHECK(g.back() == 1.0);
    CHECK(parse_real_grid("2:2:1") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_real_grid("0:1"), UsageError);
    CHECK_THROWS_AS(parse_real_grid("0:1:0"), UsageError);
    CHECK_THROWS_AS(parse_real_grid("0:x:3"), UsageError);

    const auto c = parse_complex_grid("-1:1:3,0.5");
    REQUIRE(c.size() == 3);
    CHECK(c[0] == std::complex<double>(-1, 0.5));
    CHECK(c[2] == std::complex<double>(1, 0.5));

    const auto p = parse_points("2, 3,1.5+1.5i,-2i,1e-3-4e+1i,i");
    REQUIRE(p.size() == 6);
    CHECK(p[1] == std::complex<double>(3, 0));
    CHECK(p[2] == std::complex<double>(1.5, 1.5));
    CHECK(p[3] == std::complex<double>(0, -2));
    CHECK(p[4] == std::complex<double>(1e-3, -40));
    CHECK(p[5] == std::complex<double>(0, 1));
    CHECK_THROWS_AS(parse_points("2,,3"), UsageError);
}

TEST_CASE("sample") {
    const auto t = cmd_sample("tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))", 3, 7);
    REQUIRE(t.rows.size() == 3);
    for (const auto& r : t.rows) {
        CHECK(num(r[1]) > 0.0);
        CHECK(num(r[1]) < 1.0);
    }
    CHECK(t.meta_value("seed") == "7");
    CHECK(t.meta_value("spec") == "tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))");
    CHECK_FALSE(t.meta_value("version").empty());
    CHECK(csv(t) == csv(cmd_sample("tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))", 3, 7)));
    CHECK(csv(t) != csv(cmd_sample("tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))", 3, 8)));

    const auto pm = cmd_sample("tsp(n=2, x1=point_mass(0), x2=point_mass(1))", 1000000, 1);
    double s = 0;
    for (const auto& r : pm.rows) s += num(r[1]);
    CHECK(std::fabs(s / 1e6 - 2.0 / 3.0) <= 1e-3);

    CHECK(cmd_sample("beta(2,2)", 10, 1).rows.size() == 10);
    try {
        cmd_sample("tsp(n=)", 3, 7);
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
}

TEST_CASE("round trip through csv") {
    const auto t = cmd_sample("tsp(n=2, x1=normal(0,1), x2=normal(0,1))", 200, 3);
    std::istringstream in(csv(t));
    const Table back = read_csv(in);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(num(back.rows[i][1]) == num(t.rows[i][1]));
    CHECK(back.meta_value("spec") == t.meta_value("spec"));
}

TEST_CASE("pdf") {
    const auto t = cmd_pdf("tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))", {0.5});
    CHECK(num(t.rows[0][1]) == doctest::Approx(1.3862943611).epsilon(1e-10));
    CHECK(t.meta_value("method") == "closed_form_power_weight");

    const auto bw = cmd_pdf("tsp(w=beta(2,2), x1=uniform(0,1), x2=uniform(0,1))", {0.5});
    CHECK(num(bw.rows[0][1]) == doctest::Approx(1.5).epsilon(1e-12));

    // trapezoid over 10^4 points
    const auto grid = parse_real_grid("0:1:10000");
    const auto n2 = cmd_pdf("tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))", grid);
    double area = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        area += 0.5 * (grid[i] - grid[i - 1]) * (num(n2.rows[i][1]) + num(n2.rows[i - 1][1]));
    }
    CHECK(std::fabs(area - 1.0) <= 1e-6);

    const auto q = cmd_pdf("tsp(n=2, x1=beta(2,2), x2=uniform(0,1))", {0.3});
    CHECK(q.meta_value("method") == "quadrature");
    CHECK(num(q.rows[0][1]) > 0);
    CHECK_THROWS_AS(cmd_pdf("point_mass(1)", {0.0}), DomainError);
}

TEST_CASE("moments") {
    const auto c = cmd_moments("tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))", 1, "c", 1, 1000);
    REQUIRE(c.table.rows.size() == 1);
    CHECK(num(c.table.rows[0][2]) == doctest::Approx(5.0 / 9.0).epsilon(1e-14));

    const auto b = cmd_moments("tsp(n=2, x1=normal(0,1), x2=normal(0,1))", 2, "b", 1, 1000);
    CHECK(num(b.table.rows[1][2]) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const auto all = cmd_moments("tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))", 4, "all", 42, 1000000);
    CHECK(all.exit_code == kOk);
    CHECK(all.table.meta_value("pass") == "true");
    CHECK(std::stod(all.table.meta_value("max_delta_over_allowed")) <= 1.0);

    CHECK_THROWS_AS(cmd_moments("tsp(n=1, x1=cauchy(0,1), x2=cauchy(0,1))", 2, "a", 1, 1000),
                    NoFiniteMomentError);
    CHECK_THROWS_AS(cmd_moments("directed(n=1, x1=uniform(0,1), x2=uniform(0,1))", 2, "c", 1, 1000),
                    UsageError);
    CHECK_THROWS_AS(cmd_moments("tsp(w=beta(2,2), x1=uniform(0,1), x2=uniform(0,1))", 2, "a", 1, 1000),
                    UsageError);
    CHECK_THROWS_AS(cmd_moments("uniform(0,1)", 2, "mc", 1, 1000), UsageError);
    CHECK_THROWS_AS(cmd_moments("tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))", 2, "z", 1, 1000),
                    UsageError);
    const auto mc = cmd_moments("directed(n=2, x1=uniform(0,1), x2=uniform(0,1))", 2, "mc", 5, 10000);
    CHECK(mc.table.rows.size() == 2);
}

TEST_CASE("verify") {
    VerifyOptions o;
    o.ids = {"thm412a"};
    o.n = 20000;
    const auto r = cmd_verify(o);
    CHECK(r.exit_code == kOk);
    REQUIRE(r.table.rows.size() == 1);
    CHECK(num(r.table.rows[0][2]) <= 4.0);

    o.ids = {"nope"};
    CHECK_THROWS_AS(cmd_verify(o), UsageError);
    o.ids.clear();
    CHECK_THROWS_AS(cmd_verify(o), UsageError);

    o.wall_time = false;
    o.ids = {"thm32a"};
    CHECK(csv(cmd_verify(o).table) == csv(cmd_verify(o).table));
}

TEST_CASE("stieltjes") {
    StieltjesOptions o;
    o.identity = "lemma21";
    auto r = cmd_stieltjes(o);
    CHECK(r.exit_code == kOk);
    CHECK(std::stod(r.table.meta_value("max_residual")) <= 1e-11);

    o.identity = "lemma22";
    o.spec = "directed(n=1, x1=cauchy(0,1), x2=cauchy(0,1))";
    o.claimed = "cauchy(0,1)";
    r = cmd_stieltjes(o);
    CHECK(r.exit_code == kOk);
    CHECK(std::stod(r.table.meta_value("max_residual")) <= 1e-8);

    o.identity = "thm441";
    o.spec = "tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))";
    o.claimed.reset();
    o.points = parse_points("2,3,1.5+1.5i");
    r = cmd_stieltjes(o);
    CHECK(r.exit_code == kFailed);
    CHECK(r.table.meta_value("max_residual") == "inf");

    o.identity = "thm441_corrected";
    r = cmd_stieltjes(o);
    CHECK(r.exit_code == kOk);

    o.identity = "eq31";
    o.spec = "uniform(0,1)";
    o.points = parse_points("0.5,2");
    CHECK_THROWS_AS(cmd_stieltjes(o), DomainError);

    o.identity = "lemma99";
    CHECK_THROWS_AS(cmd_stieltjes(o), UsageError);
}
