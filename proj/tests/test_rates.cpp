#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "vatsim/rates.hpp"

using namespace vatsim;
using doctest::Approx;

TEST_CASE("to_outside converts inside quotations") {
    CHECK(to_outside(Rate::inside(0.33)).value() == Approx(0.33 / 0.67).epsilon(1e-14));
    CHECK(to_outside(Rate::inside(0.33)).value() == Approx(0.4925).epsilon(1e-3));
    CHECK(to_outside(Rate::inside(0.275)).value() == Approx(0.3793).epsilon(1e-4));
    CHECK(to_outside(Rate::inside(0.0)).value() == 0.0);
    CHECK(to_outside(Rate::inside(0.2)).basis() == RateBasis::Outside);
    CHECK(to_outside(Rate::outside(0.7)) == Rate::outside(0.7));
}

TEST_CASE("to_inside converts outside quotations") {
    CHECK(to_inside(Rate::outside(0.25)).value() == Approx(0.20).epsilon(1e-14));
    CHECK(to_inside(Rate::outside(0.22)).value() == Approx(0.1803).epsilon(1e-4));
    CHECK(to_inside(Rate::outside(0.0)).value() == 0.0);
    CHECK(to_inside(Rate::inside(0.4)) == Rate::inside(0.4));
}

TEST_CASE("inside rates at or above one are rejected") {
    CHECK_THROWS_AS(Rate::inside(1.0), DomainError);
    CHECK_THROWS_AS(Rate::inside(1.5), DomainError);
    CHECK_THROWS_AS(Rate::inside(-0.1), DomainError);
    CHECK_THROWS_AS(Rate::outside(-0.1), DomainError);
    CHECK_THROWS_AS(Rate::outside(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_NOTHROW(Rate::outside(3.0));
}

TEST_CASE("compose_selective follows the price chain") {
    // unit net price, excise first, VAT on the excise-inclusive price
    const double price = 1.0 * (1.0 + 0.19) * (1.0 + 0.379);
    CHECK(compose_selective(Rate::outside(0.19), Rate::outside(0.379)).value() ==
          Approx(price - 1.0).epsilon(1e-14));
    CHECK(compose_selective(Rate::outside(0.19), Rate::outside(0.379)).value() == Approx(0.64101).epsilon(1e-12));
    CHECK(compose_selective(Rate::outside(0.0), Rate::outside(0.31)).value() == Approx(0.31).epsilon(1e-15));
    CHECK(compose_selective(Rate::outside(0.05), Rate::outside(0.0)).value() == Approx(0.05).epsilon(1e-15));
    CHECK_THROWS_AS(compose_selective(Rate::inside(0.05), Rate::outside(0.2)), DomainError);
}

TEST_CASE("apply_fraction scales the legal reference rate") {
    const Rate reduced = apply_fraction(0.4, Rate::outside(0.379));
    CHECK(reduced.value() == Approx(0.1516).epsilon(1e-12));
    CHECK(to_inside(reduced).value() == Approx(0.1316).epsilon(1e-3));
    CHECK(apply_fraction(1.0, Rate::outside(0.3)).value() == Approx(0.3));
    CHECK(apply_fraction(0.7, Rate::outside(0.10)).value() == Approx(0.07).epsilon(1e-14));
    CHECK_THROWS_AS(apply_fraction(0.0, Rate::outside(0.3)), ConfigError);
    CHECK_THROWS_AS(apply_fraction(1.2, Rate::outside(0.3)), ConfigError);
}

TEST_CASE("quoted inside/outside pairs reproduce within 0.1 percentage point") {
    const double pairs[][2] = {{33, 49.3}, {27, 37}, {18, 22}, {14, 16.3}, {20, 25}, {27.5, 37.9}};
    for (const auto& p : pairs) {
        CAPTURE(p[0]);
        CHECK(std::fabs(100.0 * to_outside(Rate::inside(p[0] / 100.0)).value() - p[1]) <= 0.1);
    }
}

TEST_CASE("property: round trip, monotonicity, convexity, composition") {
    std::mt19937_64 rng(20240718);
    std::uniform_real_distribution<double> inside(0.0, 1.0 - 1e-6);
    std::uniform_real_distribution<double> outside(0.0, 3.0);
    for (int i = 0; i < 5000; ++i) {
        const double t = inside(rng);
        CHECK(std::fabs(to_inside(to_outside(Rate::inside(t))).value() - t) <= 1e-12);

        double a = inside(rng), b = inside(rng);
        if (a > b)
            std::swap(a, b);
        const auto f = [](double x) { return to_outside(Rate::inside(x)).value(); };
        if (a < b)
            CHECK(f(a) < f(b));
        CHECK(f(0.5 * (a + b)) <= 0.5 * (f(a) + f(b)) * (1.0 + 1e-12));

        const double x = outside(rng), y = outside(rng);
        const double xy = compose_selective(Rate::outside(x), Rate::outside(y)).value();
        CHECK(xy == compose_selective(Rate::outside(y), Rate::outside(x)).value());
        if (x > 0 && y > 0)
            CHECK(xy > x + y);
    }
    CHECK(std::fabs(compose_selective(Rate::outside(0.0), Rate::outside(0.4)).value() - 0.4) <= 1e-15);
}
