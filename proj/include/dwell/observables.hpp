#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dwell/errors.hpp"
#include "dwell/fft.hpp"
#include "dwell/grid.hpp"
#include "dwell/potential.hpp"

namespace dwell {

/// One row of the recorded time series. Energies are dimensionless
/// (units of hbar*omega0/2).
struct ObservableSample {
    double tau = 0.0;
    double norm = 0.0;
    double prob_left = 0.0;
    double prob_right = 0.0;
    double mean_x = 0.0;
    double energy_total = 0.0;
    double energy_potential = 0.0;
};

/// Summary of a run's tunneling behavior, extracted from the
/// (tau, prob_right) series.
struct TunnelingMetrics {
    double max_prob_right = 0.0;
    std::optional<double> first_passage_tau;  ///< first tau with prob_right >= 0.5
    int transfer_cycles = 0;
};

namespace detail {

/// Probability in each half-line; a node at exactly x = 0 contributes half
/// its weight to each side, so left + right always equals the norm.
inline std::pair<double, double> split_probability(const WaveField& field,
                                                   const SpatialGrid& grid) {
    double left = 0.0, right = 0.0;
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double p = std::norm(field.amplitudes[j]);
        const double x = grid.nodes[j];
        if (x < 0.0)
            left += p;
        else if (x > 0.0)
            right += p;
        else {
            left += 0.5 * p;
            right += 0.5 * p;
        }
    }
    return {left * grid.dx, right * grid.dx};
}

}  // namespace detail

inline double prob_left(const WaveField& field, const SpatialGrid& grid) {
    return detail::split_probability(field, grid).first;
}

inline double prob_right(const WaveField& field, const SpatialGrid& grid) {
    return detail::split_probability(field, grid).second;
}

inline double mean_position(const WaveField& field, const SpatialGrid& grid) {
    double weighted = 0.0, total = 0.0;
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double p = std::norm(field.amplitudes[j]);
        weighted += grid.nodes[j] * p;
        total += p;
    }
    if (!(total > 0.0)) throw DomainError("mean_position: field has zero norm");
    return weighted / total;
}

/// How the spatial derivative in the energy density is taken. The split-step
/// pipeline uses the spectral derivative; the Crank-Nicolson pipeline uses
/// central differences, matching each scheme's representation of -d^2/dx^2.
enum class DerivativeKind { Spectral, CentralDifference };

/// d psi / dx via multiplication by i*k in the discrete-Fourier domain.
class SpectralDerivative {
public:
    explicit SpectralDerivative(const SpatialGrid& grid) : fft_(grid.n_points), ik_(grid.n_points) {
        const std::vector<double> k = wavenumbers(grid);
        const double inv_n = 1.0 / static_cast<double>(grid.n_points);
        for (std::size_t m = 0; m < k.size(); ++m) ik_[m] = complex(0.0, k[m] * inv_n);
    }

    void operator()(const std::vector<complex>& psi, std::vector<complex>& dpsi) const {
        dpsi = psi;
        fft_.forward(dpsi);
        for (std::size_t m = 0; m < dpsi.size(); ++m) dpsi[m] *= ik_[m];
        fft_.inverse(dpsi);
    }

private:
    Fft fft_;
    std::vector<complex> ik_;  // i*k/n per mode
};

namespace detail {

inline void central_difference(const std::vector<complex>& psi, double dx,
                               std::vector<complex>& dpsi) {
    const std::size_t n = psi.size();
    const double inv_2dx = 0.5 / dx;
    dpsi.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const complex left = (j > 0) ? psi[j - 1] : complex(0.0);
        const complex right = (j + 1 < n) ? psi[j + 1] : complex(0.0);
        dpsi[j] = (right - left) * inv_2dx;
    }
}

}  // namespace detail

/// Per-node energy density w = |d psi/dx|^2 + u |psi|^2.
template <PotentialProvider P>
std::vector<double> energy_density(const WaveField& field, const SpatialGrid& grid, const P& pot,
                                   double tau, DerivativeKind kind = DerivativeKind::Spectral) {
    std::vector<double> u;
    pot.sample(grid, tau, u);
    std::vector<complex> dpsi;
    if (kind == DerivativeKind::Spectral) {
        SpectralDerivative deriv(grid);
        deriv(field.amplitudes, dpsi);
    } else {
        detail::central_difference(field.amplitudes, grid.dx, dpsi);
    }
    std::vector<double> w(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j)
        w[j] = std::norm(dpsi[j]) + u[j] * std::norm(field.amplitudes[j]);
    return w;
}

template <PotentialProvider P>
double total_energy(const WaveField& field, const SpatialGrid& grid, const P& pot, double tau,
                    DerivativeKind kind = DerivativeKind::Spectral) {
    const std::vector<double> w = energy_density(field, grid, pot, tau, kind);
    double e = 0.0;
    for (double wj : w) e += wj;
    return e * grid.dx;
}

template <PotentialProvider P>
double potential_energy(const WaveField& field, const SpatialGrid& grid, const P& pot,
                        double tau) {
    std::vector<double> u;
    pot.sample(grid, tau, u);
    double e = 0.0;
    for (std::size_t j = 0; j < grid.n_points; ++j)
        e += u[j] * std::norm(field.amplitudes[j]);
    return e * grid.dx;
}

/// Computes a full ObservableSample per call, reusing FFT plans and buffers
/// across the thousands of samples of a production run.
template <PotentialProvider P>
class ObservableRecorder {
public:
    ObservableRecorder(const SpatialGrid& grid, const P& pot, DerivativeKind kind)
        : grid_(grid), pot_(pot), kind_(kind),
          deriv_(kind == DerivativeKind::Spectral ? std::optional<SpectralDerivative>(grid)
                                                  : std::nullopt) {}

    ObservableSample sample(double tau, const WaveField& field) {
        ObservableSample s;
        s.tau = tau;
        const auto [left, right] = detail::split_probability(field, grid_);
        s.prob_left = left;
        s.prob_right = right;
        s.norm = dwell::norm(field, grid_);
        s.mean_x = mean_position(field, grid_);
        pot_.sample(grid_, tau, u_);
        if (kind_ == DerivativeKind::Spectral)
            (*deriv_)(field.amplitudes, dpsi_);
        else
            detail::central_difference(field.amplitudes, grid_.dx, dpsi_);
        double kinetic = 0.0, potential = 0.0;
        for (std::size_t j = 0; j < grid_.n_points; ++j) {
            kinetic += std::norm(dpsi_[j]);
            potential += u_[j] * std::norm(field.amplitudes[j]);
        }
        s.energy_potential = potential * grid_.dx;
        s.energy_total = (kinetic + potential) * grid_.dx;
        return s;
    }

private:
    const SpatialGrid& grid_;
    const P& pot_;
    DerivativeKind kind_;
    std::optional<SpectralDerivative> deriv_;
    std::vector<double> u_;
    std::vector<complex> dpsi_;
};

using TimeSeries = std::vector<std::pair<double, double>>;  // (tau, value)

/// Hysteresis counter: counts upward crossings of up_threshold, re-armed only
/// after the signal falls below rearm_threshold. This is the operational
/// definition of a "transfer cycle".
inline int count_transfer_cycles(std::span<const std::pair<double, double>> series,
                                 double up_threshold = 0.5, double rearm_threshold = 0.4) {
    if (!(rearm_threshold > 0.0 && rearm_threshold < up_threshold && up_threshold < 1.0))
        throw ConfigError("count_transfer_cycles: need 0 < rearm < up < 1, got rearm = " +
                          std::to_string(rearm_threshold) + ", up = " +
                          std::to_string(up_threshold));
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i].first < series[i - 1].first)
            throw DomainError("count_transfer_cycles: series not sorted by tau at index " +
                              std::to_string(i));
    int cycles = 0;
    bool armed = true;
    for (const auto& [tau, value] : series) {
        if (armed && value >= up_threshold) {
            ++cycles;
            armed = false;
        } else if (!armed && value < rearm_threshold) {
            armed = true;
        }
    }
    return cycles;
}

/// Earliest tau with value >= threshold, or absent.
inline std::optional<double> first_passage_time(std::span<const std::pair<double, double>> series,
                                                double threshold = 0.5) {
    for (const auto& [tau, value] : series)
        if (value >= threshold) return tau;
    return std::nullopt;
}

inline TunnelingMetrics compute_tunneling_metrics(
    std::span<const std::pair<double, double>> series, double up_threshold = 0.5,
    double rearm_threshold = 0.4) {
    TunnelingMetrics m;
    for (const auto& [tau, value] : series) m.max_prob_right = std::max(m.max_prob_right, value);
    m.first_passage_tau = first_passage_time(series, up_threshold);
    m.transfer_cycles = count_transfer_cycles(series, up_threshold, rearm_threshold);
    return m;
}

}  // namespace dwell
