#include <doctest.h>

#include <cmath>

#include "cournot/concave_price.hpp"
#include "cournot/errors.hpp"
#include "cournot/instances.hpp"

using namespace cournot;

TEST_CASE("anchor data is reproduced exactly") {
    const ConcaveAnchorPrice curve({{1.0, 1.0, -1.0}, {1.25, 0.5, -4.0}});
    CHECK(curve.value(1.0) == 1.0);
    CHECK(curve.slope(1.0) == -1.0);
    CHECK(curve.value(1.25) == 0.5);
    CHECK(curve.slope(1.25) == -4.0);
}

TEST_CASE("interpolant is concave and smooth between anchors") {
    // secant (0.5-1)/(0.25) = -2 sits strictly inside [-4, -1]
    const ConcaveAnchorPrice curve({{1.0, 1.0, -1.0}, {1.25, 0.5, -4.0}});

    // concavity: second differences nonpositive on a fine grid
    const double h = 1e-3;
    double prev_slope = curve.slope(1.0);
    for (double q = 1.0 + h; q <= 1.25 + 1e-12; q += h) {
        const double s = (curve.value(q) - curve.value(q - h)) / h;
        CHECK(s <= prev_slope + 1e-9);
        prev_slope = s;
    }

    // C1: one-sided slopes agree at every knot
    const double eps = 1e-9;
    for (double knot : {1.0, 1.25}) {
        CHECK(std::abs(curve.slope(knot - eps) - curve.slope(knot + eps)) <= 1e-7);
        CHECK(std::abs(curve.slope(knot - eps) - curve.slope(knot)) <= 1e-7);
    }

    // continuity across the interior junction
    for (double q = 1.0; q <= 1.25; q += 0.001)
        CHECK(std::abs(curve.value(q) - curve.value(q + 1e-10)) < 1e-8);
}

TEST_CASE("multi-anchor curves stay concave, smooth and anchor-exact") {
    const ConcaveAnchorPrice curve(
        {{0.0, 10.0, 0.5}, {2.0, 10.5, -0.5}, {3.0, 9.5, -1.5}, {5.0, 5.0, -3.0}});
    for (const auto& a : curve.anchors()) {
        CHECK(curve.value(a.q) == a.v);
        CHECK(curve.slope(a.q) == a.s);
    }
    // slope nonincreasing across the whole range, value continuous
    double prev_slope = curve.slope(-0.5);
    double prev_value = curve.value(-0.5);
    for (double q = -0.5 + 1e-3; q <= 5.5; q += 1e-3) {
        const double s = curve.slope(q);
        CHECK(s <= prev_slope + 1e-9);
        CHECK(std::abs(curve.value(q) - prev_value) <= 1e-2);
        prev_slope = s;
        prev_value = curve.value(q);
    }
    // one-sided slopes at the interior knots (all secants strictly interior)
    for (double knot : {2.0, 3.0}) {
        CHECK(std::abs(curve.slope(knot - 1e-9) - curve.slope(knot + 1e-9)) <= 1e-7);
    }
}

TEST_CASE("linear extension outside the anchor range") {
    const ConcaveAnchorPrice curve({{1.0, 1.0, -1.0}, {1.25, 0.5, -4.0}});
    CHECK(curve.value(0.5) == doctest::Approx(1.5));
    CHECK(curve.slope(0.5) == -1.0);
    CHECK(curve.value(2.25) == doctest::Approx(0.5 - 4.0));
    CHECK(curve.slope(2.0) == -4.0);
}

TEST_CASE("validation rejects broken anchor sets") {
    // quantities must increase
    CHECK_THROWS_AS(ConcaveAnchorPrice({{1.0, 1.0, -1.0}, {1.0, 0.5, -4.0}}), ValidationError);
    // slopes must strictly decrease
    CHECK_THROWS_AS(ConcaveAnchorPrice({{1.0, 1.0, -1.0}, {2.0, 0.0, -1.0}}), ValidationError);
    CHECK_THROWS_AS(ConcaveAnchorPrice({{1.0, 1.0, -4.0}, {2.0, 0.0, -1.0}}), ValidationError);
    // secant -2 outside [-1.5, -1]
    CHECK_THROWS_AS(ConcaveAnchorPrice({{1.0, 1.0, -1.0}, {1.25, 0.5, -1.5}}), ValidationError);
    // secant 0.5 above the left slope 0.25
    CHECK_THROWS_AS(ConcaveAnchorPrice({{0.0, 0.0, 0.25}, {1.0, 0.5, -1.0}}), ValidationError);
    CHECK_THROWS_AS(ConcaveAnchorPrice({}), ValidationError);
}

TEST_CASE("boundary secant still yields a concave curve with exact anchors") {
    // The two-firm counterexample curve has its secant equal to the right
    // anchor slope; no smooth concave interpolant exists there, so the curve
    // is allowed a kink while anchors stay exact.
    const int k = 10;
    const Game g = concave_two_firm(k).game;
    const Market& m2 = g.market(g.market_index("m2"));
    REQUIRE(!m2.affine());
    const auto& curve = *m2.concave;
    const auto& anchors = curve.anchors();
    for (const auto& a : anchors) {
        CHECK(curve.value(a.q) == a.v);
        CHECK(curve.slope(a.q) == a.s);
    }
    const double lo = anchors.front().q, hi = anchors.back().q;
    double prev = curve.value(lo);
    double prev_slope = 1e300;
    for (double q = lo + 1e-3; q < hi; q += 1e-3) {
        const double v = curve.value(q);
        const double s = (v - prev) / 1e-3;
        CHECK(s <= prev_slope + 1e-9);
        prev_slope = s;
        prev = v;
    }
}

TEST_CASE("single anchor behaves as a line through it") {
    const ConcaveAnchorPrice curve({{2.0, 5.0, -0.5}});
    CHECK(curve.value(2.0) == 5.0);
    CHECK(curve.value(4.0) == doctest::Approx(4.0));
    CHECK(curve.value(0.0) == doctest::Approx(6.0));
    CHECK(curve.slope(3.0) == -0.5);
}
