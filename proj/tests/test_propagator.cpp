#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dwell/grid.hpp"
#include "dwell/observables.hpp"
#include "dwell/potential.hpp"
#include "dwell/propagator.hpp"

using namespace dwell;
using Catch::Approx;

namespace {

complex inner_product(const WaveField& a, const WaveField& b, const SpatialGrid& g) {
    complex acc(0.0);
    for (std::size_t j = 0; j < g.n_points; ++j)
        acc += std::conj(a.amplitudes[j]) * b.amplitudes[j];
    return acc * g.dx;
}

double position_variance(const WaveField& f, const SpatialGrid& g) {
    const double mu = mean_position(f, g);
    double var = 0.0, total = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double p = std::norm(f.amplitudes[j]);
        var += (g.nodes[j] - mu) * (g.nodes[j] - mu) * p;
        total += p;
    }
    return var / total;
}

const DrivePotentialProvider kPaperDrive{DrivePotential(0.0005, 0.0001, 2.0)};

}  // namespace

// Free packet: i psi_tau = -psi_xx spreads a width-sigma Gaussian so that
// Var|psi|^2(tau) = (sigma^4 + 4 tau^2) / (2 sigma^2).
TEST_CASE("free Gaussian variance law, split-step") {
    const SpatialGrid g = make_grid(16.0, 2048);
    WaveField f = gaussian_packet(g, 0.0, 1.0);
    CHECK(position_variance(f, g) == Approx(0.5).epsilon(1e-6));

    f = propagate(std::move(f), g, ZeroPotential{}, StepScheme::SplitStepFourier, 0.5, 0.01);
    CHECK(position_variance(f, g) == Approx(1.0).epsilon(1e-3));
    CHECK(norm(f, g) == Approx(1.0).margin(1e-12));
}

TEST_CASE("free Gaussian variance law, Crank-Nicolson") {
    const SpatialGrid g = make_grid(16.0, 2048);
    WaveField f = gaussian_packet(g, 0.0, 1.0);
    f = propagate(std::move(f), g, ZeroPotential{}, StepScheme::CrankNicolson, 0.5, 0.001);
    CHECK(position_variance(f, g) == Approx(1.0).epsilon(1e-2));
    CHECK(norm(f, g) == Approx(1.0).margin(1e-10));
}

// pi^(-1/4) exp(-x^2/2) is the eigenstate of -d^2/dx^2 + x^2 with eigenvalue 1,
// so evolution only multiplies it by exp(-i tau).
TEST_CASE("harmonic eigenstate stays put under split-step") {
    const SpatialGrid g = make_grid(16.0, 2048);
    const WaveField psi0 = gaussian_packet(g, 0.0, 1.0);

    WaveField f = propagate(WaveField(psi0), g, HarmonicPotential{},
                            StepScheme::SplitStepFourier, 10.0, 0.002);
    const complex overlap = inner_product(psi0, f, g);
    CHECK(std::abs(overlap) >= 1.0 - 1e-6);

    // accumulated phase exp(-i tau): compare angles modulo 2 pi
    const double expected = std::remainder(-10.0, 2.0 * std::numbers::pi);
    CHECK(std::remainder(std::arg(overlap) - expected, 2.0 * std::numbers::pi) ==
          Approx(0.0).margin(1e-3));
}

TEST_CASE("harmonic eigenstate under Crank-Nicolson") {
    const SpatialGrid g = make_grid(16.0, 2048);
    const WaveField psi0 = gaussian_packet(g, 0.0, 1.0);

    WaveField f = propagate(WaveField(psi0), g, HarmonicPotential{}, StepScheme::CrankNicolson,
                            1.0, 0.001);
    const complex overlap = inner_product(psi0, f, g);
    CHECK(std::abs(overlap) == Approx(1.0).margin(1e-4));
    CHECK(std::remainder(std::arg(overlap) + 1.0, 2.0 * std::numbers::pi) ==
          Approx(0.0).margin(1e-3));
}

TEST_CASE("both schemes preserve the norm step by step") {
    const SpatialGrid g = make_grid(16.0, 1024);
    WaveField ss = gaussian_packet(g, -5.0, 1.0);
    WaveField cn = ss;

    SplitStepWorkspace ws(g);
    CrankNicolsonWorkspace cn_ws;
    for (int i = 0; i < 50; ++i) {
        const double tau = i * 0.002;
        const double before_ss = norm(ss, g);
        ss = split_step(std::move(ss), g, kPaperDrive, tau, 0.002, ws);
        CHECK(std::abs(norm(ss, g) - before_ss) <= 1e-12);

        const double before_cn = norm(cn, g);
        cn = crank_nicolson_step(std::move(cn), g, kPaperDrive, tau, 0.002, cn_ws);
        CHECK(std::abs(norm(cn, g) - before_cn) <= 1e-10);
    }
}

TEST_CASE("1000 zero-potential steps keep unit norm") {
    const SpatialGrid g = make_grid(16.0, 512);
    WaveField f = gaussian_packet(g, 0.0, 1.0);
    f = propagate(std::move(f), g, ZeroPotential{}, StepScheme::SplitStepFourier, 2.0, 0.002);
    CHECK(norm(f, g) == Approx(1.0).margin(1e-10));
}

TEST_CASE("stationary-Hamiltonian energy is conserved") {
    // beta = 0: drive off, total energy must hold to 1e-4 relative over tau <= 100
    const SpatialGrid g = make_grid(16.0, 2048);
    const DrivePotentialProvider still{DrivePotential(0.0005, 0.0, 0.0)};
    const auto [left, right] = well_minima(still.potential, 0.0);
    WaveField f = gaussian_packet(g, left, 1.0);

    const double e0 = total_energy(f, g, still, 0.0);
    double max_drift = 0.0;
    const auto observer = [&](double tau, const WaveField& field) {
        const double e = total_energy(field, g, still, tau);
        max_drift = std::max(max_drift, std::abs(e - e0));
    };
    propagate(std::move(f), g, still, StepScheme::SplitStepFourier, 100.0, 0.002, observer, 2500);
    CHECK(max_drift / std::abs(e0) <= 1e-4);
}

TEST_CASE("split-step phase error converges at second order") {
    const SpatialGrid g = make_grid(16.0, 1024);
    const WaveField psi0 = gaussian_packet(g, 0.0, 1.0);

    const auto phase_error = [&](double dtau) {
        WaveField f = propagate(WaveField(psi0), g, HarmonicPotential{},
                                StepScheme::SplitStepFourier, 1.0, dtau);
        return std::abs(std::remainder(std::arg(inner_product(psi0, f, g)) + 1.0,
                                       2.0 * std::numbers::pi));
    };

    const double coarse = phase_error(0.008);
    const double fine = phase_error(0.004);
    CHECK(coarse / fine == Approx(4.0).epsilon(0.2));
}

TEST_CASE("Crank-Nicolson time error converges at second order") {
    const SpatialGrid g = make_grid(16.0, 512);
    const auto [left, right] = well_minima(kPaperDrive.potential, 0.0);
    const WaveField psi0 = gaussian_packet(g, left, 1.0);

    const auto evolve = [&](double dtau) {
        return propagate(WaveField(psi0), g, kPaperDrive, StepScheme::CrankNicolson, 0.5, dtau);
    };
    const WaveField ref = evolve(0.0005);  // near-converged time reference at fixed dx
    const auto error_vs_ref = [&](double dtau) {
        const WaveField f = evolve(dtau);
        double err = 0.0;
        for (std::size_t j = 0; j < g.n_points; ++j)
            err += std::norm(f.amplitudes[j] - ref.amplitudes[j]);
        return std::sqrt(err * g.dx);
    };

    const double coarse = error_vs_ref(0.008);
    const double fine = error_vs_ref(0.004);
    CHECK(coarse / fine == Approx(4.0).epsilon(0.2));
}

TEST_CASE("time reversal recovers the initial state") {
    const SpatialGrid g = make_grid(16.0, 2048);
    const DrivePotentialProvider still{DrivePotential(0.0005, 0.0, 0.0)};
    const auto [left, right] = well_minima(still.potential, 0.0);
    const WaveField psi0 = gaussian_packet(g, left, 1.0);

    WaveField f = propagate(WaveField(psi0), g, still, StepScheme::SplitStepFourier, 10.0, 0.002);
    for (auto& a : f.amplitudes) a = std::conj(a);
    f.tau = 0.0;
    f = propagate(std::move(f), g, still, StepScheme::SplitStepFourier, 10.0, 0.002);
    for (auto& a : f.amplitudes) a = std::conj(a);

    const double fidelity = std::norm(inner_product(psi0, f, g));
    CHECK(fidelity >= 1.0 - 1e-8);
}

TEST_CASE("propagate handles trivial and shortened spans") {
    const SpatialGrid g = make_grid(16.0, 256);
    const WaveField psi0 = gaussian_packet(g, 0.0, 1.0);

    // zero steps: input returned unchanged
    WaveField same = propagate(WaveField(psi0), g, ZeroPotential{},
                               StepScheme::SplitStepFourier, psi0.tau, 0.002);
    for (std::size_t j = 0; j < g.n_points; ++j)
        CHECK(same.amplitudes[j] == psi0.amplitudes[j]);

    // span that is not a multiple of dtau lands exactly on tau_end
    WaveField f = propagate(WaveField(psi0), g, HarmonicPotential{},
                            StepScheme::SplitStepFourier, 0.0105, 0.002);
    CHECK(f.tau == 0.0105);

    // and the shortened final step agrees with an exact-step reference
    WaveField ref = propagate(WaveField(psi0), g, HarmonicPotential{},
                              StepScheme::SplitStepFourier, 0.0105, 0.0007);
    CHECK(std::abs(inner_product(ref, f, g)) == Approx(1.0).margin(1e-8));
}

TEST_CASE("propagate validates its arguments") {
    const SpatialGrid g = make_grid(16.0, 256);
    const WaveField psi0 = gaussian_packet(g, 0.0, 1.0);

    CHECK_THROWS_AS(propagate(WaveField(psi0), g, ZeroPotential{},
                              StepScheme::SplitStepFourier, 1.0, 0.1),
                    ConfigError);  // accuracy guard
    CHECK_THROWS_AS(propagate(WaveField(psi0), g, ZeroPotential{},
                              StepScheme::SplitStepFourier, 1.0, -0.01),
                    ConfigError);
    CHECK_THROWS_AS(propagate(WaveField(psi0), g, ZeroPotential{},
                              StepScheme::SplitStepFourier, -1.0, 0.01),
                    ConfigError);  // tau_end precedes field.tau
}

TEST_CASE("observer cadence: initial, stride hits, final") {
    const SpatialGrid g = make_grid(16.0, 256);
    const WaveField psi0 = gaussian_packet(g, 0.0, 1.0);

    std::vector<double> taus;
    propagate(WaveField(psi0), g, HarmonicPotential{}, StepScheme::SplitStepFourier, 0.01, 0.001,
              [&](double tau, const WaveField&) { taus.push_back(tau); }, 4);
    // steps 0..10: observed at 0, 4, 8 and the final step 10
    REQUIRE(taus.size() == 4);
    CHECK(taus[0] == 0.0);
    CHECK(taus[1] == Approx(0.004));
    CHECK(taus[2] == Approx(0.008));
    CHECK(taus[3] == Approx(0.01));
}

TEST_CASE("looped single steps reproduce the merged propagate loop") {
    const SpatialGrid g = make_grid(16.0, 512);
    const WaveField psi0 = gaussian_packet(g, -5.0, 1.0);

    WaveField merged = propagate(WaveField(psi0), g, kPaperDrive,
                                 StepScheme::SplitStepFourier, 0.01, 0.002);

    WaveField stepped = psi0;
    SplitStepWorkspace ws(g);
    for (int i = 0; i < 5; ++i)
        stepped = split_step(std::move(stepped), g, kPaperDrive, i * 0.002, 0.002, ws);

    for (std::size_t j = 0; j < g.n_points; ++j)
        CHECK(std::abs(merged.amplitudes[j] - stepped.amplitudes[j]) < 1e-12);
}

TEST_CASE("schemes agree on a short driven run") {
    const SpatialGrid g = make_grid(16.0, 2048);
    const auto [left, right] = well_minima(kPaperDrive.potential, 0.0);
    const WaveField psi0 = gaussian_packet(g, left, 1.0);

    std::vector<double> p_ss, p_cn;
    propagate(WaveField(psi0), g, kPaperDrive, StepScheme::SplitStepFourier, 10.0, 0.002,
              [&](double, const WaveField& f) { p_ss.push_back(prob_left(f, g)); }, 250);
    propagate(WaveField(psi0), g, kPaperDrive, StepScheme::CrankNicolson, 10.0, 0.002,
              [&](double, const WaveField& f) { p_cn.push_back(prob_left(f, g)); }, 250);

    REQUIRE(p_ss.size() == p_cn.size());
    double max_diff = 0.0;
    for (std::size_t i = 0; i < p_ss.size(); ++i)
        max_diff = std::max(max_diff, std::abs(p_ss[i] - p_cn[i]));
    CHECK(max_diff <= 5e-3);
}
