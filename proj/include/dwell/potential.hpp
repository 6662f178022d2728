#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dwell/errors.hpp"
#include "dwell/grid.hpp"

namespace dwell {

/// Time-periodic biquadratic double well
///
///   u(x, tau) = a(tau) x^4 - b(tau) x^2 + b^2(tau)/(4 a(tau)),
///   a(tau) = (alpha - beta cos(epsilon tau)) / (2 sqrt(alpha)),
///   b(tau) = sqrt(alpha - beta cos(epsilon tau)) / (2 sqrt(alpha)).
///
/// The constant offset b^2/(4a) = 1/(8 sqrt(alpha)) pins the well bottoms to
/// u = 0 and the barrier top to the time-independent height 1/(8 sqrt(alpha)).
/// The drive moves the well positions, never the barrier height.
struct DrivePotential {
    double alpha;
    double beta = 0.0;
    double epsilon = 0.0;

    DrivePotential(double alpha_, double beta_, double epsilon_)
        : alpha(alpha_), beta(beta_), epsilon(epsilon_) {
        if (!(alpha > 0.0))
            throw ConfigError("DrivePotential: alpha must be positive, got " + std::to_string(alpha));
        if (!(beta >= 0.0) || !(beta < alpha))
            throw ConfigError("DrivePotential: beta must satisfy 0 <= beta < alpha, got beta = " +
                              std::to_string(beta) + ", alpha = " + std::to_string(alpha));
        if (!(epsilon >= 0.0))
            throw ConfigError("DrivePotential: epsilon must be non-negative, got " +
                              std::to_string(epsilon));
    }
};

inline double coeff_a(const DrivePotential& p, double tau) {
    return (p.alpha - p.beta * std::cos(p.epsilon * tau)) / (2.0 * std::sqrt(p.alpha));
}

inline double coeff_b(const DrivePotential& p, double tau) {
    return std::sqrt(p.alpha - p.beta * std::cos(p.epsilon * tau)) / (2.0 * std::sqrt(p.alpha));
}

/// Barrier height b^2/(4a) = 1/(8 sqrt(alpha)); independent of tau, beta, epsilon.
inline double barrier_height(const DrivePotential& p) {
    return 1.0 / (8.0 * std::sqrt(p.alpha));
}

inline double potential_value(const DrivePotential& p, double x_tilde, double tau) {
    const double a = coeff_a(p, tau);
    const double b = coeff_b(p, tau);
    const double x2 = x_tilde * x_tilde;
    return (a * x2 - b) * x2 + barrier_height(p);
}

/// Instantaneous minima (-x_m, +x_m) with x_m = sqrt(b/(2a)); the stationary
/// (beta = 0) limit is (4 alpha)^(-1/4).
inline std::pair<double, double> well_minima(const DrivePotential& p, double tau) {
    const double x_m = std::sqrt(coeff_b(p, tau) / (2.0 * coeff_a(p, tau)));
    return {-x_m, x_m};
}

inline void sample_potential(const DrivePotential& p, const SpatialGrid& grid, double tau,
                             std::vector<double>& out) {
    const double a = coeff_a(p, tau);
    const double b = coeff_b(p, tau);
    const double h = barrier_height(p);
    out.resize(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double x2 = grid.nodes[j] * grid.nodes[j];
        out[j] = (a * x2 - b) * x2 + h;
    }
}

inline std::vector<double> sample_potential(const DrivePotential& p, const SpatialGrid& grid,
                                            double tau) {
    std::vector<double> out;
    sample_potential(p, grid, tau, out);
    return out;
}

/// Anything that can fill a per-node potential sample vector at a given time.
/// The propagator and the energy observables are generic over this so the
/// analytic test potentials below share the production code path.
template <typename P>
concept PotentialProvider = requires(const P& p, const SpatialGrid& g, double tau,
                                     std::vector<double>& out) {
    { p.sample(g, tau, out) };
};

/// Production provider: the driven double well.
struct DrivePotentialProvider {
    DrivePotential potential;

    void sample(const SpatialGrid& grid, double tau, std::vector<double>& out) const {
        sample_potential(potential, grid, tau, out);
    }
};

/// u = 0 everywhere; free propagation for analytic tests.
struct ZeroPotential {
    void sample(const SpatialGrid& grid, double /*tau*/, std::vector<double>& out) const {
        out.assign(grid.n_points, 0.0);
    }
};

/// u = x^2; the ground state pi^(-1/4) exp(-x^2/2) has eigenvalue 1.
struct HarmonicPotential {
    void sample(const SpatialGrid& grid, double /*tau*/, std::vector<double>& out) const {
        out.resize(grid.n_points);
        for (std::size_t j = 0; j < grid.n_points; ++j)
            out[j] = grid.nodes[j] * grid.nodes[j];
    }
};

}  // namespace dwell
