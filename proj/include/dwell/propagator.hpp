#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dwell/errors.hpp"
#include "dwell/fft.hpp"
#include "dwell/grid.hpp"
#include "dwell/potential.hpp"

namespace dwell {

/// Time stepper selection. Both schemes are unitary; their mutual agreement
/// on the same problem is the correctness oracle for driven runs.
enum class StepScheme { SplitStepFourier, CrankNicolson };

inline const char* to_string(StepScheme s) {
    return s == StepScheme::SplitStepFourier ? "split-step" : "crank-nicolson";
}

namespace detail {

inline void check_finite(const std::vector<complex>& amplitudes, double tau) {
    for (const complex& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw NumericalError("propagation produced non-finite amplitudes at tau = " +
                                 std::to_string(tau));
    }
}

/// amp[j] *= exp(-i * u[j] * scale)
inline void apply_potential_phase(std::vector<complex>& amp, const std::vector<double>& u,
                                  double scale) {
    const std::size_t n = amp.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double th = -u[j] * scale;
        amp[j] *= complex(std::cos(th), std::sin(th));
    }
}

}  // namespace detail

/// Reusable buffers and FFT plans for split-step propagation on one grid.
class SplitStepWorkspace {
public:
    explicit SplitStepWorkspace(const SpatialGrid& grid)
        : fft_(grid.n_points), k_squared_(grid.n_points), kinetic_(grid.n_points) {
        const std::vector<double> k = wavenumbers(grid);
        for (std::size_t m = 0; m < k.size(); ++m) k_squared_[m] = k[m] * k[m];
    }

    /// Kinetic full step: psi <- IFFT( exp(-i k^2 dtau) FFT(psi) ) / n.
    void kinetic_step(std::vector<complex>& amp, double dtau) {
        if (dtau != cached_dtau_) {
            const double inv_n = 1.0 / static_cast<double>(kinetic_.size());
            for (std::size_t m = 0; m < kinetic_.size(); ++m) {
                const double th = -k_squared_[m] * dtau;
                kinetic_[m] = complex(std::cos(th) * inv_n, std::sin(th) * inv_n);
            }
            cached_dtau_ = dtau;
        }
        fft_.forward(amp);
        for (std::size_t m = 0; m < amp.size(); ++m) amp[m] *= kinetic_[m];
        fft_.inverse(amp);
    }

    std::vector<double>& potential_scratch() { return u_; }

private:
    Fft fft_;
    std::vector<double> k_squared_;
    std::vector<complex> kinetic_;  // exp(-i k^2 dtau)/n for cached_dtau_
    double cached_dtau_ = -1.0;
    std::vector<double> u_;
};

/// One Strang step: half potential phase at tau, full kinetic step, half
/// potential phase at tau + dtau. Exactly norm-preserving per factor.
template <PotentialProvider P>
WaveField split_step(WaveField field, const SpatialGrid& grid, const P& pot, double tau,
                     double dtau, SplitStepWorkspace& ws) {
    if (!(dtau > 0.0)) throw ConfigError("split_step: dtau must be positive");
    std::vector<double>& u = ws.potential_scratch();
    pot.sample(grid, tau, u);
    detail::apply_potential_phase(field.amplitudes, u, 0.5 * dtau);
    ws.kinetic_step(field.amplitudes, dtau);
    pot.sample(grid, tau + dtau, u);
    detail::apply_potential_phase(field.amplitudes, u, 0.5 * dtau);
    field.tau = tau + dtau;
    detail::check_finite(field.amplitudes, field.tau);
    return field;
}

template <PotentialProvider P>
WaveField split_step(WaveField field, const SpatialGrid& grid, const P& pot, double tau,
                     double dtau) {
    SplitStepWorkspace ws(grid);
    return split_step(std::move(field), grid, pot, tau, dtau, ws);
}

/// Scratch vectors for the Crank-Nicolson tridiagonal solve.
struct CrankNicolsonWorkspace {
    std::vector<double> u;
    std::vector<complex> rhs;
    std::vector<complex> c_prime;
};

/// Cayley update (1 + i H dtau/2) psi' = (1 - i H dtau/2) psi with
/// H = central-difference Laplacian (Dirichlet ends) + diag u(tau + dtau/2).
/// Unitary in exact arithmetic; solved by the Thomas algorithm.
template <PotentialProvider P>
WaveField crank_nicolson_step(WaveField field, const SpatialGrid& grid, const P& pot, double tau,
                              double dtau, CrankNicolsonWorkspace& ws) {
    if (!(dtau > 0.0)) throw ConfigError("crank_nicolson_step: dtau must be positive");
    const std::size_t n = grid.n_points;
    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    const double h = 0.5 * dtau;

    pot.sample(grid, tau + 0.5 * dtau, ws.u);
    ws.rhs.resize(n);
    ws.c_prime.resize(n);
    std::vector<complex>& psi = field.amplitudes;

    // rhs = (1 - i h H) psi with psi_{-1} = psi_n = 0
    const complex ih(0.0, h);
    for (std::size_t j = 0; j < n; ++j) {
        const complex left = (j > 0) ? psi[j - 1] : complex(0.0);
        const complex right = (j + 1 < n) ? psi[j + 1] : complex(0.0);
        const complex h_psi = (2.0 * inv_dx2 + ws.u[j]) * psi[j] - inv_dx2 * (left + right);
        ws.rhs[j] = psi[j] - ih * h_psi;
    }

    // Thomas forward sweep for A = 1 + i h H; constant off-diagonal -i h inv_dx2.
    const complex off = -ih * inv_dx2;
    complex pivot = complex(1.0) + ih * (2.0 * inv_dx2 + ws.u[0]);
    if (!std::isfinite(std::abs(pivot)) || pivot == complex(0.0))
        throw NumericalError("crank_nicolson_step: singular pivot at node 0, tau = " +
                             std::to_string(tau));
    ws.c_prime[0] = off / pivot;
    ws.rhs[0] /= pivot;
    for (std::size_t j = 1; j < n; ++j) {
        const complex diag = complex(1.0) + ih * (2.0 * inv_dx2 + ws.u[j]);
        pivot = diag - off * ws.c_prime[j - 1];
        if (!std::isfinite(std::abs(pivot)) || pivot == complex(0.0))
            throw NumericalError("crank_nicolson_step: singular pivot at node " +
                                 std::to_string(j) + ", tau = " + std::to_string(tau));
        ws.c_prime[j] = off / pivot;
        ws.rhs[j] = (ws.rhs[j] - off * ws.rhs[j - 1]) / pivot;
    }

    // Back substitution, writing the solution into the field.
    psi[n - 1] = ws.rhs[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) psi[j] = ws.rhs[j] - ws.c_prime[j] * psi[j + 1];

    field.tau = tau + dtau;
    detail::check_finite(psi, field.tau);
    return field;
}

template <PotentialProvider P>
WaveField crank_nicolson_step(WaveField field, const SpatialGrid& grid, const P& pot, double tau,
                              double dtau) {
    CrankNicolsonWorkspace ws;
    return crank_nicolson_step(std::move(field), grid, pot, tau, dtau, ws);
}

namespace detail {

struct StepPlan {
    std::size_t n_steps;
    double tau0;
    double dtau;
    double tau_end;

    double tau_at(std::size_t i) const {
        return (i >= n_steps) ? tau_end : tau0 + static_cast<double>(i) * dtau;
    }
    /// Exactly dtau for interior steps; only the final step is shortened.
    double step_size(std::size_t i) const {
        return (i + 1 >= n_steps) ? tau_end - tau_at(n_steps - 1) : dtau;
    }
};

inline StepPlan plan_steps(double tau0, double tau_end, double dtau) {
    if (!(dtau > 0.0)) throw ConfigError("propagate: dtau must be positive");
    if (dtau >= 0.1)
        throw ConfigError("propagate: dtau = " + std::to_string(dtau) +
                          " exceeds the accuracy guard dtau < 0.1");
    if (tau_end < tau0)
        throw ConfigError("propagate: tau_end = " + std::to_string(tau_end) +
                          " precedes the field time " + std::to_string(tau0));
    const double span = tau_end - tau0;
    std::size_t n = 0;
    if (span > 0.0) {
        // Near-integer step counts snap down so the final step is not a sliver.
        n = static_cast<std::size_t>(std::ceil(span / dtau - 1e-9));
        if (n == 0) n = 1;
    }
    return StepPlan{n, tau0, dtau, tau_end};
}

}  // namespace detail

/// Advance to tau_end in steps of dtau (final step shortened to land exactly).
///
/// The observer is invoked with (tau, field) on the initial state, then every
/// observer_stride-th step, and always on the final state. For the split-step
/// scheme the two potential half-phases shared by adjacent steps are applied
/// as one full phase except where an observation needs the composed field;
/// this is an algebraically exact regrouping. Non-finite amplitudes are
/// detected at observation points.
template <PotentialProvider P, typename Observer>
WaveField propagate(WaveField field, const SpatialGrid& grid, const P& pot, StepScheme scheme,
                    double tau_end, double dtau, Observer&& observer,
                    std::size_t observer_stride = 1) {
    if (field.amplitudes.size() != grid.n_points)
        throw ConfigError("propagate: field size does not match grid");
    if (observer_stride == 0) throw ConfigError("propagate: observer_stride must be >= 1");
    const detail::StepPlan plan = detail::plan_steps(field.tau, tau_end, dtau);

    observer(field.tau, static_cast<const WaveField&>(field));
    if (plan.n_steps == 0) return field;

    const auto observed = [&](std::size_t i) {
        return i == plan.n_steps || i % observer_stride == 0;
    };

    if (scheme == StepScheme::CrankNicolson) {
        CrankNicolsonWorkspace ws;
        for (std::size_t i = 0; i < plan.n_steps; ++i) {
            field = crank_nicolson_step(std::move(field), grid, pot, plan.tau_at(i),
                                        plan.step_size(i), ws);
            field.tau = plan.tau_at(i + 1);
            if (observed(i + 1)) observer(field.tau, static_cast<const WaveField&>(field));
        }
        return field;
    }

    SplitStepWorkspace ws(grid);
    std::vector<double>& u = ws.potential_scratch();

    pot.sample(grid, plan.tau0, u);
    detail::apply_potential_phase(field.amplitudes, u, 0.5 * plan.step_size(0));
    for (std::size_t i = 0; i < plan.n_steps; ++i) {
        const double step_i = plan.step_size(i);
        ws.kinetic_step(field.amplitudes, step_i);
        const double tau_next = plan.tau_at(i + 1);
        pot.sample(grid, tau_next, u);
        if (i + 1 == plan.n_steps) {
            detail::apply_potential_phase(field.amplitudes, u, 0.5 * step_i);
            field.tau = tau_next;
            detail::check_finite(field.amplitudes, field.tau);
            observer(field.tau, static_cast<const WaveField&>(field));
        } else if (observed(i + 1)) {
            detail::apply_potential_phase(field.amplitudes, u, 0.5 * step_i);
            field.tau = tau_next;
            detail::check_finite(field.amplitudes, field.tau);
            observer(field.tau, static_cast<const WaveField&>(field));
            detail::apply_potential_phase(field.amplitudes, u, 0.5 * plan.step_size(i + 1));
        } else {
            detail::apply_potential_phase(field.amplitudes, u,
                                          0.5 * (step_i + plan.step_size(i + 1)));
        }
    }
    return field;
}

template <PotentialProvider P>
WaveField propagate(WaveField field, const SpatialGrid& grid, const P& pot, StepScheme scheme,
                    double tau_end, double dtau) {
    return propagate(std::move(field), grid, pot, scheme, tau_end, dtau,
                     [](double, const WaveField&) {});
}

}  // namespace dwell
