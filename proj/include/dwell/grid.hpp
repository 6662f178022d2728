#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dwell/errors.hpp"

namespace dwell {

using complex = std::complex<double>;

/// Uniform symmetric 1D grid on the periodic domain [-x_max, x_max).
///
/// Node j sits at -x_max + j*dx with dx = 2*x_max/n_points; the point
/// +x_max is the periodic image of -x_max and is not stored. n_points must
/// be a power of two >= 16 so the spectral kinetic step can use a radix-2
/// transform of the full node set.
struct SpatialGrid {
    double x_max = 0.0;
    std::size_t n_points = 0;
    double dx = 0.0;
    std::vector<double> nodes;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline SpatialGrid make_grid(double x_max, std::size_t n_points) {
    if (!(x_max > 0.0))
        throw ConfigError("make_grid: x_max must be positive, got " + std::to_string(x_max));
    if (n_points < 16 || !is_power_of_two(n_points))
        throw ConfigError("make_grid: n_points must be a power of two >= 16, got " +
                          std::to_string(n_points));
    SpatialGrid g;
    g.x_max = x_max;
    g.n_points = n_points;
    g.dx = 2.0 * x_max / static_cast<double>(n_points);
    g.nodes.resize(n_points);
    for (std::size_t j = 0; j < n_points; ++j)
        g.nodes[j] = -x_max + static_cast<double>(j) * g.dx;
    return g;
}

/// Wavenumbers k_m = (pi/x_max)*m in discrete-Fourier ordering
/// m = 0, 1, ..., n/2-1, -n/2, ..., -1.
inline std::vector<double> wavenumbers(const SpatialGrid& grid) {
    const double dk = std::numbers::pi / grid.x_max;
    const std::size_t n = grid.n_points;
    std::vector<double> k(n);
    for (std::size_t m = 0; m < n / 2; ++m)
        k[m] = dk * static_cast<double>(m);
    for (std::size_t m = n / 2; m < n; ++m)
        k[m] = dk * (static_cast<double>(m) - static_cast<double>(n));
    return k;
}

/// Complex amplitudes of psi sampled on a SpatialGrid at one instant of
/// dimensionless time.
struct WaveField {
    std::vector<complex> amplitudes;
    double tau = 0.0;
};

/// Total probability sum_j |psi_j|^2 * dx (periodic rectangle rule).
inline double norm(const WaveField& field, const SpatialGrid& grid) {
    double s = 0.0;
    for (const complex& a : field.amplitudes) s += std::norm(a);
    return s * grid.dx;
}

/// Rescale to unit probability; relative phases are untouched.
inline WaveField normalize(WaveField field, const SpatialGrid& grid) {
    const double n = norm(field, grid);
    if (!(n > 0.0)) throw DomainError("normalize: field has zero norm");
    const double scale = 1.0 / std::sqrt(n);
    for (complex& a : field.amplitudes) a *= scale;
    return field;
}

/// Gaussian packet psi_j = pi^(-1/4) width^(-1/2) exp(-(x_j-center)^2/(2 width^2)),
/// renormalized on the discrete grid; tau = 0. The 4-sigma support must fit
/// inside the domain.
inline WaveField gaussian_packet(const SpatialGrid& grid, double center, double width) {
    if (!(width > 0.0))
        throw DomainError("gaussian_packet: width must be positive");
    if (!(std::abs(center) + 4.0 * width < grid.x_max))
        throw DomainError("gaussian_packet: 4-sigma support [" + std::to_string(center - 4 * width) +
                          ", " + std::to_string(center + 4 * width) + "] leaves the domain |x| < " +
                          std::to_string(grid.x_max));
    const double amp = std::pow(std::numbers::pi, -0.25) / std::sqrt(width);
    WaveField field;
    field.tau = 0.0;
    field.amplitudes.resize(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double d = (grid.nodes[j] - center) / width;
        field.amplitudes[j] = complex(amp * std::exp(-0.5 * d * d), 0.0);
    }
    return normalize(std::move(field), grid);
}

/// Dimensional scales of the underlying oscillator problem. All simulation
/// code works in dimensionless units; this record exists to convert results
/// back to physical ones.
struct PhysicalScales {
    double hbar = 1.0;
    double mass = 1.0;
    double omega0 = 1.0;
    double xi = 1.0;                ///< sqrt(hbar/(mass*omega0)), length unit
    double period_T = 0.0;          ///< 2*pi/omega0
    double zero_point_energy = 0.0; ///< hbar*omega0/2, energy unit
};

inline PhysicalScales make_scales(double hbar, double mass, double omega0) {
    if (!(hbar > 0.0 && mass > 0.0 && omega0 > 0.0))
        throw ConfigError("make_scales: hbar, mass, omega0 must all be positive");
    PhysicalScales s;
    s.hbar = hbar;
    s.mass = mass;
    s.omega0 = omega0;
    s.xi = std::sqrt(hbar / (mass * omega0));
    s.period_T = 2.0 * std::numbers::pi / omega0;
    s.zero_point_energy = 0.5 * hbar * omega0;
    return s;
}

inline double physical_length(const PhysicalScales& scales, double x_tilde) {
    return x_tilde * scales.xi;
}

}  // namespace dwell
