#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dwell/experiment.hpp"
#include "dwell/io/csv.hpp"

namespace dwell::io {

/// Locations of everything a run or scan emitted under its output directory.
struct OutputBundle {
    std::filesystem::path timeseries_path;
    std::filesystem::path scan_path;
    std::vector<std::filesystem::path> snapshot_paths;
    std::vector<std::filesystem::path> plot_paths;
};

namespace detail {

inline std::string compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace detail

/// Emit timeseries.csv plus one snapshot_tau<t>.csv per recorded snapshot.
inline OutputBundle write_run_outputs(const RunRecord& record,
                                      const std::filesystem::path& out_dir, bool overwrite) {
    OutputBundle bundle;
    bundle.timeseries_path = out_dir / "timeseries.csv";
    write_timeseries(record, bundle.timeseries_path, overwrite);

    const SpatialGrid grid = make_grid(record.config.grid.x_max, record.config.grid.n_points);
    const DrivePotentialProvider pot{
        DrivePotential(record.config.alpha, record.config.beta, record.config.epsilon)};
    for (const Snapshot& snap : record.snapshots) {
        const std::filesystem::path path =
            out_dir / ("snapshot_tau" + detail::compact(snap.tau) + ".csv");
        write_snapshot(snap.field, grid, pot, snap.tau, path, overwrite);
        bundle.snapshot_paths.push_back(path);
    }
    return bundle;
}

}  // namespace dwell::io
