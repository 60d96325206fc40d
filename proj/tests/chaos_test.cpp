#include <algorithm>
#include <cmath>
#include <set>

#include <doctest.h>

#include "stneuron/chaos.hpp"

using namespace stn;

TEST_CASE("map construction validates the r range") {
    CHECK_NOTHROW(ChaoticMap(MapKind::logistic, 4.0));
    CHECK_NOTHROW(ChaoticMap(MapKind::logistic, 0.1));
    CHECK_NOTHROW(ChaoticMap(MapKind::cubic, 3.0));
    CHECK_THROWS_AS(ChaoticMap(MapKind::logistic, 0.0), std::domain_error);
    CHECK_THROWS_AS(ChaoticMap(MapKind::logistic, 4.0001), std::domain_error);
    CHECK_THROWS_AS(ChaoticMap(MapKind::logistic, -1.0), std::domain_error);
    CHECK_THROWS_AS(ChaoticMap(MapKind::cubic, 3.5), std::domain_error);
    CHECK_THROWS_AS(ChaoticMap(MapKind::cubic, std::nan("")), std::domain_error);
}

TEST_CASE("map_step evaluates both maps and guards the logistic domain") {
    const ChaoticMap logi(MapKind::logistic, 4.0);
    CHECK(map_step(logi, 0.5) == 1.0);
    CHECK(map_step(logi, 1.0) == 0.0);
    CHECK(map_step(logi, 0.0) == 0.0);
    CHECK_THROWS_AS(map_step(logi, 1.5), std::domain_error);
    CHECK_THROWS_AS(map_step(logi, -0.1), std::domain_error);
    CHECK_THROWS_AS(map_step(logi, std::nan("")), std::domain_error);

    const ChaoticMap cub(MapKind::cubic, 2.0);
    CHECK(map_step(cub, 1.0) == 1.0);       // 2*1 - 1
    CHECK(map_step(cub, -1.0) == -1.0);     // odd symmetry
    CHECK(map_step(cub, 2.0) == -4.0);      // 4 - 8
}

TEST_CASE("logistic iterates never leave [0,1]") {
    const ChaoticMap map(MapKind::logistic, 4.0);
    double x = 0.1;
    for (int i = 0; i < 10000; ++i) {
        x = map_step(map, x);
        REQUIRE(x >= 0.0);
        REQUIRE(x <= 1.0);
    }
}

TEST_CASE("map_derivative matches the analytic formulas") {
    const ChaoticMap logi(MapKind::logistic, 4.0);
    CHECK(map_derivative(logi, 0.25) == 4.0 * 0.5);
    CHECK(map_derivative(logi, 0.5) == 0.0);
    const ChaoticMap cub(MapKind::cubic, 2.5);
    CHECK(map_derivative(cub, 1.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(map_derivative(cub, 0.0) == 2.5);
}

TEST_CASE("iterate_map records the state reached after burn_in") {
    const ChaoticMap map(MapKind::logistic, 4.0);
    const Orbit o = iterate_map(map, 0.5, 0, 3);
    REQUIRE(o.samples.size() == 3);
    CHECK(o.samples[0] == 0.5);
    CHECK(o.samples[1] == 1.0);
    CHECK(o.samples[2] == 0.0);
    CHECK(o.x0 == 0.5);
    CHECK(o.burn_in == 0);

    const Orbit shifted = iterate_map(map, 0.5, 2, 1);
    CHECK(shifted.samples[0] == 0.0);
}

TEST_CASE("iterate_map rejects n = 0") {
    const ChaoticMap map(MapKind::logistic, 4.0);
    CHECK_THROWS_AS(iterate_map(map, 0.1, 0, 0), std::invalid_argument);
}

TEST_CASE("cubic orbit from a wild seed escapes with a useful message") {
    const ChaoticMap map(MapKind::cubic, 2.0);
    try {
        iterate_map(map, 1000.0, 0, 10);
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        const std::string what = e.what();
        CHECK(what.find("escaped") != std::string::npos);
        CHECK(what.find("step") != std::string::npos);
    }
}

TEST_CASE("logistic r=2 collapses onto the fixed point 0.5") {
    const ChaoticMap map(MapKind::logistic, 2.0);
    const Orbit o = iterate_map(map, 0.3, 1000, 5);
    for (double x : o.samples) {
        CHECK(x == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("attractor bounds for known logistic parameters") {
    const std::size_t n = 100000;
    SUBCASE("r=3.7 matches the converged regression values") {
        const ChaoticMap map(MapKind::logistic, 3.7);
        const auto b = estimate_alpha_bounds(map, 0.1, 1000, n);
        CHECK(b.alpha_min == doctest::Approx(0.25668750138568824).epsilon(1e-12));
        CHECK(b.alpha_max == doctest::Approx(0.9249999995593996).epsilon(1e-12));
    }
    SUBCASE("r=4 covers almost the whole unit interval") {
        const ChaoticMap map(MapKind::logistic, 4.0);
        const auto b = estimate_alpha_bounds(map, 0.1, 1000, n);
        CHECK(b.alpha_min < 1e-6);
        CHECK(b.alpha_max > 1.0 - 1e-6);
        CHECK(b.alpha_min >= 0.0);
        CHECK(b.alpha_max <= 1.0);
    }
    SUBCASE("r=2 gives a degenerate width") {
        const ChaoticMap map(MapKind::logistic, 2.0);
        const auto b = estimate_alpha_bounds(map, 0.1, 1000, 1000);
        CHECK(b.alpha_min == 0.5);
        CHECK(b.alpha_max == 0.5);
    }
}

TEST_CASE("cubic attractor bounds from the positive basin at r=2.3") {
    const ChaoticMap map(MapKind::cubic, 2.3);
    const auto b = estimate_alpha_bounds(map, 0.1, 1000, 100000);
    CHECK(b.alpha_min == doctest::Approx(0.66796483745118573).epsilon(1e-12));
    CHECK(b.alpha_max == doctest::Approx(1.3425608342328235).epsilon(1e-12));
}

TEST_CASE("bifurcation_scan lays out an inclusive ordered grid") {
    const auto points =
        bifurcation_scan(MapKind::logistic, 2.5, 4.0, 4, 0.1, 200, 10);
    REQUIRE(points.size() == 40);
    CHECK(points.front().r == 2.5);
    CHECK(points.back().r == 4.0);
    CHECK(std::is_sorted(points.begin(), points.end(),
                         [](auto& a, auto& b) { return a.r < b.r; }));
    std::set<double> grid;
    for (const auto& p : points) grid.insert(p.r);
    CHECK(grid.size() == 4);
    CHECK(grid.count(3.0) == 1);
    CHECK(grid.count(3.5) == 1);
}

TEST_CASE("bifurcation_scan shows the period-2 window at r=3.2") {
    const auto points =
        bifurcation_scan(MapKind::logistic, 3.2, 4.0, 2, 0.1, 1000, 100);
    int low = 0, high = 0;
    for (const auto& p : points) {
        if (p.r != 3.2) continue;
        if (std::abs(p.x - 0.5130445095326298) < 1e-9) {
            ++low;
        } else if (std::abs(p.x - 0.7994554904673702) < 1e-9) {
            ++high;
        } else {
            FAIL("unexpected attractor value ", p.x);
        }
    }
    CHECK(low == 50);
    CHECK(high == 50);
}

TEST_CASE("bifurcation_scan validates its grid") {
    CHECK_THROWS_AS(bifurcation_scan(MapKind::logistic, 3.0, 2.5, 10, 0.1, 10, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(bifurcation_scan(MapKind::logistic, 2.5, 4.0, 1, 0.1, 10, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(bifurcation_scan(MapKind::logistic, 2.5, 4.0, 10, 0.1, 10, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(bifurcation_scan(MapKind::logistic, 2.5, 4.5, 10, 0.1, 10, 10),
                    std::domain_error);
    CHECK_THROWS_AS(bifurcation_scan(MapKind::cubic, 0.0, 3.0, 10, 0.1, 10, 10),
                    std::domain_error);
}

TEST_CASE("lyapunov exponent of the fully chaotic logistic map is ln 2") {
    const ChaoticMap map(MapKind::logistic, 4.0);
    const Orbit o = iterate_map(map, 0.1, 1000, 100000);
    const double lambda = lyapunov_exponent(o.samples, map);
    CHECK(lambda == doctest::Approx(std::log(2.0)).epsilon(0.015));
    CHECK(lambda == doctest::Approx(0.69314644814970083).epsilon(1e-12));
    // deterministic: same samples, same value
    CHECK(lyapunov_exponent(o.samples, map) == lambda);
}

TEST_CASE("lyapunov exponent reports the singular sample index") {
    const ChaoticMap map(MapKind::logistic, 4.0);
    const Series samples{0.3, 0.5, 0.7};
    try {
        lyapunov_exponent(samples, map);
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
    CHECK_THROWS_AS(lyapunov_exponent(Series{}, map), std::invalid_argument);
}

TEST_CASE("negative lyapunov exponent on a periodic orbit") {
    const ChaoticMap map(MapKind::logistic, 3.2);
    const Orbit o = iterate_map(map, 0.1, 1000, 1000);
    CHECK(lyapunov_exponent(o.samples, map) < 0.0);
}
