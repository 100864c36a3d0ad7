#include "doctest.h"

#include "powermix/errors.hpp"
#include "powermix/grammar.hpp"
#include "powermix/table.hpp"

#include <cmath>
#include <sstream>

using namespace powermix;

TEST_CASE("distribution specs") {
    CHECK(parse_distribution("uniform(0,1)") == Distribution::uniform(0, 1));
    CHECK(parse_distribution("  beta( 0.5 , 0.5 ) ") == Distribution::beta(0.5, 0.5));
    CHECK(parse_distribution("normal(-1e-3,2.5)") == Distribution::normal(-0.001, 2.5));
    CHECK(parse_distribution("triangular(0,+0.25,1)") == Distribution::triangular(0, 0.25, 1));
    CHECK(parse_distribution("point_mass(3)") == Distribution::point_mass(3));
    CHECK(parse_distribution("power_semicircle(-1,1)") == Distribution::power_semicircle(-1, 1));
}

TEST_CASE("mixture specs") {
    const auto u = Distribution::uniform(0, 1);
    CHECK(parse_mixture("tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))") == MixtureSpec::tsp(2, u, u));
    CHECK(parse_mixture("directed(n=2, x1=uniform(-1,1), x2=arcsin(-1,1))") ==
          MixtureSpec::directed(2, Distribution::uniform(-1, 1), Distribution::arcsin(-1, 1)));
    CHECK(parse_mixture("tsp(w=beta(3,1), x1=beta(1,2), x2=beta(1,2))") ==
          MixtureSpec::tsp_weighted(Distribution::beta(3, 1), Distribution::beta(1, 2),
                                    Distribution::beta(1, 2)));
    CHECK(parse_mixture("tsp(x2=uniform(0,1),x1=uniform(0,1),n=1.5)") == MixtureSpec::tsp(1.5, u, u));
    CHECK(std::holds_alternative<Distribution>(parse_spec("cauchy(0,1)")));
    CHECK(std::holds_alternative<MixtureSpec>(parse_spec("tsp(n=1, x1=cauchy(0,1), x2=cauchy(0,1))")));
}

TEST_CASE("canonical forms round-trip") {
    const char* canon[] = {
        "uniform(0,1)",
        "arcsin(-1,1)",
        "beta(0.5,0.5)",
        "normal(0.1,3)",
        "tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))",
        "directed(n=2, x1=uniform(-1,1), x2=arcsin(-1,1))",
        "tsp(w=beta(3,1), x1=beta(1,2), x2=beta(1,2))",
        "tsp(n=2.5, x1=point_mass(0), x2=triangular(0,0.3,1))",
    };
    for (const char* c : canon) {
        CAPTURE(c);
        CHECK(print(parse_spec(c)) == c);
    }
    // non-canonical spellings print canonically
    CHECK(print(parse_spec(" tsp( x1 = uniform(0, 1.0), n = 2 , x2=uniform(0,1) ) ")) ==
          "tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))");
    const double x = 0.1 + 0.2;
    const auto d = Distribution::normal(x, 1);
    CHECK(parse_distribution(print(d)) == d);
}

TEST_CASE("parse errors carry position and expectation") {
    auto err = [](const char* text) -> ParseError {
        try {
            parse_spec(text);
        } catch (const ParseError& e) {
            return e;
        }
        FAIL("no error for " << text);
        return ParseError(0, "", "");
    };
    {
        const auto e = err("tsp(n=)");
        CHECK(e.position() == 6);
        CHECK(e.expected() == "number");
        CHECK(std::string(e.what()).find("position 6") != std::string::npos);
    }
    CHECK(err("unifrm(0,1)").position() == 0);
    CHECK(err("uniform(0,1").expected() == "')'");
    CHECK(err("uniform(0,1) x").expected() == "end of spec");
    CHECK(err("uniform(0)").position() == 9);
    CHECK(err("uniform(1,0)").expected() == "valid parameters");
    CHECK(err("tsp(n=2, x1=uniform(0,1))").expected() == "x2=");
    CHECK(err("tsp(n=2, n=3, x1=uniform(0,1), x2=uniform(0,1))").position() == 9);
    CHECK(err("tsp(m=2, x1=uniform(0,1), x2=uniform(0,1))").position() == 4);
    CHECK(err("directed(w=beta(2,2), x1=uniform(0,1), x2=uniform(0,1))").expected() == "n=");
    CHECK(err("tsp(n=0.5, x1=uniform(0,1), x2=uniform(0,1))").expected() == "valid mixture arguments");
    CHECK(err("").expected() == "spec name");
    CHECK_THROWS_AS(parse_mixture("uniform(0,1)"), ParseError);
    CHECK_THROWS_AS(parse_distribution("tsp(n=1, x1=uniform(0,1), x2=uniform(0,1))"), ParseError);
}

TEST_CASE("CSV tables round-trip at full precision") {
    Table t;
    t.add_meta("spec", "tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))");
    t.add_meta("seed", "42");
    t.columns = {"z", "pdf", "note"};
    const double vals[] = {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, -0.0, 5e-324, 0.30000000000000004};
    for (double v : vals) t.rows.push_back({v, std::sqrt(v > 0 ? v : 0.0), std::string("a,b")});
    t.rows.push_back({std::numeric_limits<double>::infinity(), 1.0, std::string("x")});

    std::stringstream ss;
    write_csv(ss, t);
    const Table back = read_csv(ss);
    CHECK(back.meta_value("spec") == t.meta_value("spec"));
    CHECK(back.meta_value("seed") == "42");
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(std::get<double>(back.rows[i][0]) == std::get<double>(t.rows[i][0]));
        CHECK(std::get<double>(back.rows[i][1]) == std::get<double>(t.rows[i][1]));
        CHECK(std::get<std::string>(back.rows[i][2]) == std::get<std::string>(t.rows[i][2]));
    }

    std::stringstream js;
    write_json(js, t);
    CHECK(js.str().find("\"seed\": \"42\"") != std::string::npos);
    CHECK(js.str().find("\"inf\"") != std::string::npos);
}
