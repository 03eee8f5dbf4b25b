#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "permean/errors.hpp"
#include "permean/kernel.hpp"
#include "permean/theta_binom.hpp"

using namespace permean;
using namespace permean::kernel;

TEST_CASE("c_{m,j} by convolution") {
    for (double theta : {0.5, 1.0, 2.0})
        CHECK(c_by_convolution(theta, 0, 5) == doctest::Approx(0.2).epsilon(1e-15));
    // two-term hand evaluation: 1 - 1/2
    CHECK(c_by_convolution(1.0, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c_by_convolution(2.0, 2, 3) ==
          doctest::Approx(c_by_recurrence(2.0, 2, 3)[2]).epsilon(1e-13));
}

TEST_CASE("c_{m,j} by recurrence") {
    const auto c11 = c_by_recurrence(1.0, 1, 1);
    CHECK(c11[0] == 1.0);
    CHECK(c11[1] == doctest::Approx(0.5).epsilon(1e-15));
    for (double theta : {0.5, 1.7}) {
        const auto c0 = c_by_recurrence(theta, 0, 7);
        CHECK(c0.size() == 1);
        CHECK(c0[0] == doctest::Approx(1.0 / 7).epsilon(1e-15));
    }
    const auto col = c_by_recurrence(0.5, 100, 10);
    for (int m = 0; m <= 100; ++m) {
        const double conv = c_by_convolution(0.5, m, 10);
        CHECK(std::abs(col[m] - conv) <= 1e-12 * std::max(1.0, std::abs(conv)));
    }
}

TEST_CASE("route agreement across the acceptance grid corners") {
    for (double theta : {0.5, 1.0, 2.0})
        for (int j : {1, 7, 100})
            for (int m : {1, 50, 300}) {
                const auto rec = c_by_recurrence(theta, m, j);
                const double conv = c_by_convolution(theta, m, j);
                CHECK(std::abs(rec[m] - conv) <= 1e-12 * std::max(1.0, std::abs(conv)));
            }
}

TEST_CASE("build_table matches the serial reference bitwise") {
    const auto a = build_table(1.3, 120, 40);
    const auto b = build_table_serial(1.3, 120, 40);
    CHECK(a.values == b.values);
    CHECK(a.at(0, 17) == doctest::Approx(1.0 / 17).epsilon(1e-15));
}

TEST_CASE("b_majorant") {
    CHECK(b_majorant(1.0, 1, 1) == 1.0);
    CHECK(b_majorant(2.0, 3, 2) == doctest::Approx(2.0).epsilon(1e-15));
    for (int m = 1; m < 40; ++m)
        CHECK(b_majorant(1.5, m + 1, 3) > b_majorant(1.5, m, 3));
    CHECK_THROWS_AS(b_majorant(1.0, 0, 1), validation_error);
}

TEST_CASE("beta_integral") {
    CHECK(beta_integral(1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(beta_integral(2, 1.0) == doctest::Approx(1.0 / 6).epsilon(1e-14));
    for (double theta : {0.5, 2.0, 9.0})
        CHECK(beta_integral(1, theta) == doctest::Approx(1.0 / (theta + 1)).epsilon(1e-15));
    // independent quadrature route
    for (double theta : {0.5, 1.0, 2.0})
        for (int j : {1, 2, 10, 50}) {
            const double quad = integrate(
                [theta, j](double y) {
                    return std::pow(1.0 - y, theta) * std::pow(y, j - 1.0);
                },
                0.0, 1.0, 1e-14);
            CHECK(beta_integral(j, theta) == doctest::Approx(quad).epsilon(1e-11));
        }
}

TEST_CASE("check_lemma2: clean grid runs") {
    const auto rep = check_lemma2(1.0, 200, 50);
    CHECK(rep.cells_checked == 200 * 50);
    CHECK(rep.worst_chain_slack <= 1e-12);
    CHECK(rep.max_route_error <= 1e-12);
}

TEST_CASE("check_lemma2: chain at a spot cell") {
    const auto col = c_by_recurrence(2.0, 50, 40);
    const double b = b_majorant(2.0, 50, 40);
    const double e = 2.0 / 1600 * std::exp(2.0 * 50 / 40.0);
    CHECK(col[50] <= b);
    CHECK(b <= e);
    CHECK(e == doctest::Approx(0.00125 * std::exp(2.5)).epsilon(1e-12));
}

TEST_CASE("check_lemma2: estimate (ii) stability where the error is a real signal") {
    for (double theta : {0.5, 2.0}) {
        const auto rep = check_lemma2(theta, 300, 50);
        // fitted constant: measured full-grid max 1.84 at theta=2
        CHECK(rep.max_normalized_error <= 4.0);
        for (int j : {10, 20, 40}) {
            double lo = 1e300, hi = 0.0;
            for (const auto& c : rep.dyadic)
                if (c.j == j) {
                    CHECK(!c.below_noise_floor);
                    lo = std::min(lo, c.normalized_error);
                    hi = std::max(hi, c.normalized_error);
                }
            CHECK(hi / lo <= 8.0);
        }
    }
    // at theta = 1 the (ii) error vanishes identically: every dyadic cell
    // sits at the noise floor and counts as exact
    const auto rep1 = check_lemma2(1.0, 300, 50);
    CHECK(rep1.max_normalized_error <= 1e-10);
    for (const auto& c : rep1.dyadic) CHECK(c.below_noise_floor);
}

TEST_CASE("generating function of c_{m,j} matches the integral form") {
    const double x = 0.5;
    for (double theta : {0.5, 1.0, 2.0})
        for (int j : {3, 10}) {
            const auto col = c_by_recurrence(theta, 400, j);
            double series_val = 0.0, xm = 1.0;
            for (int m = 0; m <= 400; ++m) {
                series_val += col[m] * xm;
                xm *= x;
            }
            const double integral =
                integrate(
                    [theta, j, x](double t) {
                        return std::pow(1.0 - t * x, theta) * std::pow(t, j - 1.0);
                    },
                    0.0, 1.0, 1e-13) /
                std::pow(1.0 - x, theta);
            CHECK(std::abs(series_val - integral) <= 1e-9);
        }
}

TEST_CASE("tail_identity: sum equals integral") {
    const auto r = tail_identity(1.0, 4, 2);
    CHECK(std::abs(r.sum - r.integral) <= 1e-10 * (1.0 + std::abs(r.sum)));

    // closed-form antiderivative at theta=1, j=1, n=1
    const auto c = tail_identity(1.0, 1, 1);
    const double want = std::exp(-1.0) - std::exp(-2.0) / 2.0;
    CHECK(c.integral == doctest::Approx(want).epsilon(1e-12));
    CHECK(c.sum == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("tail_identity: bound positive and decaying in j") {
    double prev = 1e300;
    for (int j : {1, 2, 5, 10, 40}) {
        const auto r = tail_identity(1.5, j, 10);
        CHECK(r.bound > 0.0);
        CHECK(r.bound < prev);
        prev = r.bound;
    }
}

TEST_CASE("tail_identity: fitted bound constant for j > n/2") {
    for (double theta : {1.0, 2.0})
        for (int j : {1, 5, 50})
            for (int n : {1, 10, 100})
                if (j > n / 2) {
                    const auto r = tail_identity(theta, j, n);
                    CHECK(r.sum <= 2.0 * r.bound);
                    CHECK(r.sum >= 0.2 * r.bound);
                }
}

TEST_CASE("quadrature sanity") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-14) ==
          doctest::Approx(1.0 / 3).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, 0.0),
                    validation_error);
}
