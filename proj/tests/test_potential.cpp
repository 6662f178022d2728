#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dwell/grid.hpp"
#include "dwell/potential.hpp"

using namespace dwell;
using Catch::Approx;

namespace {
// Production parameters: alpha = 0.0005, beta = 0.0001, epsilon varies.
DrivePotential paper_potential(double epsilon = 2.0) {
    return DrivePotential(0.0005, 0.0001, epsilon);
}
// tau with cos(epsilon*tau) = -1, i.e. half a drive period
double half_period(const DrivePotential& p) { return std::numbers::pi / p.epsilon; }
}  // namespace

TEST_CASE("drive coefficients match their closed forms") {
    const DrivePotential p = paper_potential();

    CHECK(coeff_a(p, 0.0) == Approx(0.0004 / (2.0 * std::sqrt(0.0005))).epsilon(1e-12));
    CHECK(coeff_a(p, 0.0) == Approx(0.00894427).epsilon(1e-6));
    CHECK(coeff_b(p, 0.0) == Approx(0.4472136).epsilon(1e-6));

    const double tau_half = half_period(p);
    CHECK(coeff_a(p, tau_half) == Approx(0.01341641).epsilon(1e-6));
    CHECK(coeff_b(p, tau_half) == Approx(0.5477226).epsilon(1e-6));

    const DrivePotential still(0.0005, 0.0, 0.0);
    for (double tau : {0.0, 1.3, 100.0}) {
        CHECK(coeff_a(still, tau) == Approx(std::sqrt(0.0005) / 2.0).epsilon(1e-12));
        CHECK(coeff_a(still, tau) == Approx(0.01118034).epsilon(1e-6));
        CHECK(coeff_b(still, tau) == Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("barrier height is 1/(8 sqrt(alpha)) and drive-independent") {
    CHECK(barrier_height(paper_potential()) == Approx(5.590).margin(5e-4));
    CHECK(barrier_height(DrivePotential(1.0 / 64.0, 0.0, 0.0)) == Approx(1.0).epsilon(1e-12));
    CHECK(barrier_height(DrivePotential(0.0005, 0.0, 0.0)) ==
          barrier_height(DrivePotential(0.0005, 0.0001, 2.0)));
}

TEST_CASE("potential value: barrier top, well bottom, far tail") {
    const DrivePotential p = paper_potential();

    CHECK(potential_value(p, 0.0, 0.0) == Approx(5.59017).epsilon(1e-6));
    CHECK(potential_value(p, 0.0, 17.3) == Approx(5.59017).epsilon(1e-6));

    const auto [left, right] = well_minima(p, 0.0);
    CHECK(potential_value(p, left, 0.0) == Approx(0.0).margin(1e-10));
    CHECK(potential_value(p, right, 0.0) == Approx(0.0).margin(1e-10));

    CHECK(potential_value(p, 10.0, 0.0) == Approx(50.3115).epsilon(1e-5));
}

TEST_CASE("well minima: paper parameters, stationary limit, extreme drive phase") {
    const DrivePotential p = paper_potential();

    const auto [left, right] = well_minima(p, 0.0);
    CHECK(right == Approx(5.0000).margin(1e-4));
    CHECK(left == Approx(-right).epsilon(1e-15));

    const DrivePotential still(0.0005, 0.0, 0.0);
    CHECK(well_minima(still, 0.0).second == Approx(std::pow(4.0 * 0.0005, -0.25)).epsilon(1e-12));
    CHECK(well_minima(still, 0.0).second == Approx(4.72871).margin(1e-5));

    CHECK(well_minima(p, half_period(p)).second == Approx(4.51803).margin(1e-5));
}

TEST_CASE("potential invariants hold across the drive cycle") {
    const DrivePotential p = paper_potential(1.7);
    const double period = 2.0 * std::numbers::pi / p.epsilon;

    for (int i = 0; i < 40; ++i) {
        const double tau = 0.137 + i * 0.61;
        // constant barrier
        CHECK(barrier_height(p) - potential_value(p, 0.0, tau) ==
              Approx(0.0).margin(1e-12 * barrier_height(p)));
        // wells sit at zero
        const auto [left, right] = well_minima(p, tau);
        CHECK(potential_value(p, left, tau) == Approx(0.0).margin(1e-10));
        CHECK(potential_value(p, right, tau) == Approx(0.0).margin(1e-10));
        // periodic in tau
        CHECK(potential_value(p, 3.3, tau) ==
              Approx(potential_value(p, 3.3, tau + period)).margin(1e-12));
        // even in x
        CHECK(potential_value(p, 2.9, tau) == Approx(potential_value(p, -2.9, tau)).margin(0.0));
    }
}

TEST_CASE("beta = 0 freezes the drive") {
    const DrivePotential still(0.0005, 0.0, 1.7);
    for (double tau : {0.0, 0.9, 55.5}) {
        CHECK(well_minima(still, tau).second ==
              Approx(std::pow(4.0 * 0.0005, -0.25)).epsilon(1e-12));
        CHECK(potential_value(still, 1.5, tau) ==
              Approx(potential_value(still, 1.5, 0.0)).margin(0.0));
    }
}

TEST_CASE("sample_potential vectorizes potential_value over the grid") {
    const SpatialGrid g = make_grid(16.0, 2048);
    const DrivePotential p = paper_potential();
    const std::vector<double> u = sample_potential(p, g, 0.3);

    REQUIRE(u.size() == g.n_points);

    // node nearest x = 0 is exactly x = 0 on this grid
    CHECK(u[g.n_points / 2] == Approx(5.59017).epsilon(1e-6));

    double u_min = u[0];
    for (double v : u) u_min = std::min(u_min, v);
    CHECK(u_min >= 0.0);
    // curvature bound: the minimum sampled value is within u'' dx^2 of zero
    const double curvature = 2.0 * coeff_b(p, 0.3);
    CHECK(u_min <= curvature * g.dx * g.dx);

    for (std::size_t j = 1; j < g.n_points / 2; ++j) {
        // nodes j and n-j are mirror images
        CHECK(u[j] == Approx(u[g.n_points - j]).margin(1e-12));
    }
}

TEST_CASE("drive parameter validation") {
    CHECK_THROWS_AS(DrivePotential(0.0, 0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(DrivePotential(-1.0, 0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(DrivePotential(0.0005, 0.0005, 2.0), ConfigError);  // beta == alpha
    CHECK_THROWS_AS(DrivePotential(0.0005, -0.1, 2.0), ConfigError);
    CHECK_THROWS_AS(DrivePotential(0.0005, 0.0001, -2.0), ConfigError);
}
