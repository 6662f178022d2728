#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dwell/errors.hpp"
#include "dwell/grid.hpp"
#include "dwell/observables.hpp"
#include "dwell/potential.hpp"
#include "dwell/propagator.hpp"

namespace dwell {

enum class InitialWell { Left, Right };

struct GridSpec {
    double x_max = 16.0;
    std::size_t n_points = 2048;
};

struct InitialPacket {
    InitialWell well = InitialWell::Left;
    double width = 1.0;
};

/// Full description of one simulation. Defaults mirror the production setup:
/// the paper's potential parameters with our numerics (x_max = 16, n = 2048,
/// dtau = 0.002, observables every 0.5 time units).
struct RunConfig {
    double alpha = 0.0005;
    double beta = 0.0001;
    double epsilon = 0.0;
    double tau_max = 2500.0;
    double dtau = 0.002;
    GridSpec grid;
    StepScheme scheme = StepScheme::SplitStepFourier;
    double record_stride_tau = 0.5;
    std::optional<std::vector<double>> snapshot_taus;  ///< absent = quantile defaults
    InitialPacket initial;

    /// Observable cadence in whole steps; validate() guarantees divisibility.
    std::size_t record_stride_steps() const {
        return static_cast<std::size_t>(std::llround(record_stride_tau / dtau));
    }

    /// Snapshot times actually used: the configured list, or quantiles
    /// {0, 1/4, 1/2, 3/4, 1} * tau_max when none are configured.
    std::vector<double> effective_snapshot_taus() const {
        if (snapshot_taus) {
            std::vector<double> taus = *snapshot_taus;
            std::sort(taus.begin(), taus.end());
            return taus;
        }
        return {0.0, 0.25 * tau_max, 0.5 * tau_max, 0.75 * tau_max, tau_max};
    }

    void validate() const {
        if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
        if (!(beta >= 0.0) || !(beta < alpha))
            throw ConfigError("beta must satisfy 0 <= beta < alpha");
        if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
        if (!(tau_max > 0.0)) throw ConfigError("tau_max must be positive");
        if (!(dtau > 0.0)) throw ConfigError("dtau must be positive");
        if (dtau >= 0.1) throw ConfigError("dtau must be below the accuracy guard 0.1");
        if (!(record_stride_tau >= dtau))
            throw ConfigError("record_stride_tau must be at least dtau");
        const double steps = record_stride_tau / dtau;
        if (std::abs(steps - std::llround(steps)) > 1e-9 * std::max(1.0, steps))
            throw ConfigError("record_stride_tau must be an integer multiple of dtau");
        if (!(grid.x_max > 0.0)) throw ConfigError("grid.x_max must be positive");
        if (grid.n_points < 16 || !is_power_of_two(grid.n_points))
            throw ConfigError("grid.n_points must be a power of two >= 16");
        if (snapshot_taus)
            for (double t : *snapshot_taus)
                if (!(t >= 0.0 && t <= tau_max))
                    throw ConfigError("snapshot_taus entries must lie in [0, tau_max]");
        if (!(initial.width > 0.0)) throw ConfigError("initial.width must be positive");
        const DrivePotential pot(alpha, beta, epsilon);
        const auto [left, right] = well_minima(pot, 0.0);
        const double center = (initial.well == InitialWell::Left) ? left : right;
        if (!(std::abs(center) + 4.0 * initial.width < grid.x_max))
            throw ConfigError("initial packet at the well minimum " + std::to_string(center) +
                              " with width " + std::to_string(initial.width) +
                              " does not fit inside grid.x_max = " + std::to_string(grid.x_max));
    }
};

struct Snapshot {
    double tau = 0.0;
    WaveField field;
};

struct RunRecord {
    RunConfig config;
    std::vector<ObservableSample> samples;
    std::vector<Snapshot> snapshots;
    TunnelingMetrics metrics;
    double wall_seconds = 0.0;
};

/// Per-epsilon result of a frequency scan. Failed runs carry the error text
/// instead of metrics.
struct ScanRecord {
    double epsilon = 0.0;
    bool ok = false;
    TunnelingMetrics metrics;
    double final_energy = std::numeric_limits<double>::quiet_NaN();
    std::string error;
};

/// Build the grid, place the Gaussian packet at the chosen well's tau = 0
/// minimum, propagate to tau_max recording observables every
/// record_stride_tau, and extract tunneling metrics. Deterministic for a
/// given config.
inline RunRecord run_simulation(const RunConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();

    RunRecord record;
    record.config = config;

    const SpatialGrid grid = make_grid(config.grid.x_max, config.grid.n_points);
    const DrivePotentialProvider pot{DrivePotential(config.alpha, config.beta, config.epsilon)};
    const auto [left, right] = well_minima(pot.potential, 0.0);
    const double center = (config.initial.well == InitialWell::Left) ? left : right;
    WaveField field = gaussian_packet(grid, center, config.initial.width);

    const DerivativeKind kind = (config.scheme == StepScheme::SplitStepFourier)
                                    ? DerivativeKind::Spectral
                                    : DerivativeKind::CentralDifference;
    ObservableRecorder<DrivePotentialProvider> recorder(grid, pot, kind);

    const std::vector<double> snapshot_taus = config.effective_snapshot_taus();
    std::size_t next_snapshot = 0;
    record.samples.reserve(static_cast<std::size_t>(config.tau_max / config.record_stride_tau) + 2);

    const auto observer = [&](double tau, const WaveField& f) {
        record.samples.push_back(recorder.sample(tau, f));
        while (next_snapshot < snapshot_taus.size() &&
               snapshot_taus[next_snapshot] <= tau + 1e-9) {
            record.snapshots.push_back(Snapshot{tau, f});
            ++next_snapshot;
        }
    };

    propagate(std::move(field), grid, pot, config.scheme, config.tau_max, config.dtau, observer,
              config.record_stride_steps());

    TimeSeries right_series;
    right_series.reserve(record.samples.size());
    for (const ObservableSample& s : record.samples)
        right_series.emplace_back(s.tau, s.prob_right);
    record.metrics = compute_tunneling_metrics(right_series);

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return record;
}

/// One run per epsilon (all other parameters from base), order preserved.
/// Runs are independent; up to `jobs` execute concurrently. A failing run is
/// recorded as a failed entry without aborting the scan.
inline std::vector<ScanRecord> scan_epsilon(const RunConfig& base,
                                            const std::vector<double>& epsilons,
                                            std::size_t jobs = 1) {
    if (epsilons.empty()) throw ConfigError("scan_epsilon: epsilon list is empty");
    for (double e : epsilons)
        if (!(e >= 0.0)) throw ConfigError("scan_epsilon: epsilon values must be non-negative");
    if (jobs == 0) jobs = 1;

    std::vector<ScanRecord> records(epsilons.size());
    std::atomic<std::size_t> cursor{0};

    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= epsilons.size()) return;
            ScanRecord& rec = records[i];
            rec.epsilon = epsilons[i];
            try {
                RunConfig cfg = base;
                cfg.epsilon = epsilons[i];
                cfg.snapshot_taus = std::vector<double>{};  // scans keep no wavefunctions
                const RunRecord run = run_simulation(cfg);
                rec.ok = true;
                rec.metrics = run.metrics;
                rec.final_energy = run.samples.back().energy_total;
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
            }
        }
    };

    const std::size_t n_threads = std::min(jobs, epsilons.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return records;
}

}  // namespace dwell
