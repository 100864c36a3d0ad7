#include "powermix/errors.hpp"
#include "powermix/specfun.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace powermix;
using namespace powermix::specfun;

namespace {

bool rel_close(double got, double want, double tol) {
    return std::fabs(got - want) <= tol * std::fabs(want);
}

}  // namespace

TEST_CASE("log_gamma matches high-precision values") {
    CHECK(std::fabs(log_gamma(1.0)) < 1e-15);
    CHECK(std::fabs(log_gamma(2.0)) < 1e-15);
    // mpmath, 30 digits
    CHECK(rel_close(log_gamma(0.5), 0.57236494292470008707, 1e-13));
    CHECK(rel_close(log_gamma(1e-3), 6.9071788853838536825, 1e-13));
    CHECK(rel_close(log_gamma(1e6), 12815504.56914761166, 1e-13));
    CHECK(rel_close(log_gamma(3.7), 1.4280723266653879219, 1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("incomplete_beta against frozen values") {
    CHECK(incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(incomplete_beta(1.0, 2.0, 3.0) == 1.0);
    CHECK(std::fabs(incomplete_beta(0.5, 2, 2) - 0.5) < 1e-14);
    CHECK(std::fabs(incomplete_beta(0.3, 1, 1) - 0.3) < 1e-14);

    struct Row {
        double x, a, b, want;
    };
    const Row rows[] = {
        {0.3, 2, 5, 0.579825},
        {0.7, 0.5, 0.5, 0.63098988043445461724},
        {0.2, 3, 2, 0.0272},
        {0.9, 10, 3, 0.889130022255},
        {0.05, 0.2, 7, 0.83189754500687822878},
        {0.5, 30, 40, 0.88579988732335151449},
        {0.999, 2.5, 0.3, 0.8231543600374320073},
    };
    for (const auto& r : rows) {
        CAPTURE(r.x);
        CAPTURE(r.a);
        CAPTURE(r.b);
        CHECK(std::fabs(incomplete_beta(r.x, r.a, r.b) - r.want) < 1e-12);
    }
    CHECK_THROWS_AS(incomplete_beta(1.5, 1, 1), DomainError);
    CHECK_THROWS_AS(incomplete_beta(0.5, 0, 1), DomainError);
}

TEST_CASE("incomplete_beta reflection and monotonicity") {
    const double shapes[] = {0.2, 0.5, 1.0, 2.5, 7.0, 40.0};
    for (double a : shapes) {
        for (double b : shapes) {
            double prev = 0.0;
            for (int i = 0; i <= 50; ++i) {
                const double x = i / 50.0;
                const double ix = incomplete_beta(x, a, b);
                CHECK(std::fabs(ix + incomplete_beta(1.0 - x, b, a) - 1.0) < 1e-10);
                CHECK(ix >= prev - 1e-15);
                prev = ix;
            }
        }
    }
}

TEST_CASE("hyp2f1_1_n frozen values") {
    struct Row {
        double n, z, want;
    };
    const Row rows[] = {
        {1, 0.5, 1.3862943611198906188},    {2, 0.5, 1.5451774444795624753},
        {3, 0.25, 1.2349579107419380683},   {5, 0.9, 5.00059351550445972},
        {0.5, 0.3, 1.1230539918931030348},  {2.5, 0.7, 2.1715891747537767279},
        {3, 0.99, 9.6623417709018293373},   {1, 0.999999, 13.815524373488647593},
        {7.5, 0.95, 8.5450407561376886704}, {2, 0.01, 1.006717070028823671},
    };
    for (const auto& r : rows) {
        CAPTURE(r.n);
        CAPTURE(r.z);
        // z = 0.999999 is not exact in binary; 1 - z carries a 3e-11 relative error.
        const double tol = r.z > 0.9999 ? 1e-11 : 1e-12;
        CHECK(rel_close(hyp2f1_1_n(r.n, r.z), r.want, tol));
    }
    CHECK(hyp2f1_1_n(4.0, 0.0) == 1.0);
    CHECK_THROWS_AS(hyp2f1_1_n(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(hyp2f1_1_n(0.0, 0.5), DomainError);
}

namespace {

// n z^-n (-ln(1-z) - sum_{m<n} z^m/m) in 50 digits; the double version cancels for small z.
double closed_form_50(int n, double zd) {
    using boost::multiprecision::cpp_bin_float_50;
    const cpp_bin_float_50 z = zd;
    cpp_bin_float_50 s = -log1p(-z);
    cpp_bin_float_50 zm = 1;
    for (int m = 1; m < n; ++m) {
        zm *= z;
        s -= zm / m;
    }
    return static_cast<double>(n * s / pow(z, n));
}

}  // namespace

TEST_CASE("hyp2f1_1_n agrees with the integer closed form") {
    for (int n = 1; n <= 8; ++n) {
        for (int i = 1; i <= 99; ++i) {
            const double z = i / 100.0;
            CAPTURE(n);
            CAPTURE(z);
            CHECK(rel_close(hyp2f1_1_n(n, z), closed_form_50(n, z), 1e-10));
            if (z >= 0.5) CHECK(rel_close(hyp2f1_1_n_closed(n, z), closed_form_50(n, z), 1e-10));
        }
    }
}

TEST_CASE("hyp2f1_1_n is nondecreasing in z") {
    for (double n : {0.3, 1.0, 2.0, 4.5, 20.0}) {
        double prev = 1.0;
        for (int i = 0; i < 1000; ++i) {
            const double z = i / 1000.0;
            const double f = hyp2f1_1_n(n, z);
            CHECK(f >= prev * (1 - 1e-15));
            prev = f;
        }
    }
}

TEST_CASE("euler_hyp2f1 matches the series") {
    CHECK(std::fabs(euler_hyp2f1({0.0, 2.0, 5.0, 0.7}) - 1.0) < 1e-12);
    CHECK(rel_close(euler_hyp2f1({1, 1, 2, 0.5}), 1.3862943611198906188, 1e-10));
    CHECK(rel_close(euler_hyp2f1({1, 3, 4, 0.25}), hyp2f1_1_n(3, 0.25), 1e-10));
    for (double n : {1.0, 2.0, 3.0, 5.0}) {
        for (int i = 1; i <= 9; ++i) {
            const double z = i / 10.0;
            CHECK(rel_close(euler_hyp2f1({1.0, n, n + 1.0, z}), hyp2f1_1_n(n, z), 1e-8));
        }
    }
    CHECK_THROWS_AS(euler_hyp2f1({1, 2, 2, 0.5}), DomainError);
    CHECK_THROWS_AS(euler_hyp2f1({1, 0, 2, 0.5}), DomainError);
}
