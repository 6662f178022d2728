#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dwell/errors.hpp"
#include "dwell/experiment.hpp"
#include "dwell/grid.hpp"
#include "dwell/observables.hpp"
#include "dwell/potential.hpp"

namespace dwell::io {

/// 12 significant digits; scientific notation when |v| < 1e-4 or >= 1e6.
/// Chosen so outputs of different schemes and builds are file-diffable.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    const double a = std::abs(v);
    char buf[48];
    if (a < 1e-4 || a >= 1e6) {
        std::snprintf(buf, sizeof(buf), "%.11e", v);
    } else {
        const int exp10 = static_cast<int>(std::floor(std::log10(a)));
        std::snprintf(buf, sizeof(buf), "%.*f", 11 - exp10, v);
    }
    return buf;
}

/// Write content to path via a temp file in the same directory, then rename.
/// Refuses to replace an existing file unless overwrite is set.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content,
                              bool overwrite) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!overwrite && fs::exists(path))
        throw IoError("refusing to overwrite existing file " + path.string() +
                      " (pass --force to allow)");
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("rename " + tmp.string() + " -> " + path.string() +
                      " failed: " + ec.message());
    }
}

inline constexpr const char* kTimeseriesHeader =
    "tau,norm,prob_left,prob_right,mean_x,energy_total,energy_potential,barrier_height";

inline void write_timeseries(const RunRecord& record, const std::filesystem::path& path,
                             bool overwrite = false) {
    const double h_b = barrier_height(
        DrivePotential(record.config.alpha, record.config.beta, record.config.epsilon));
    std::string out;
    out.reserve(record.samples.size() * 120 + 80);
    out += kTimeseriesHeader;
    out += '\n';
    for (const ObservableSample& s : record.samples) {
        out += format_number(s.tau);
        out += ',';
        out += format_number(s.norm);
        out += ',';
        out += format_number(s.prob_left);
        out += ',';
        out += format_number(s.prob_right);
        out += ',';
        out += format_number(s.mean_x);
        out += ',';
        out += format_number(s.energy_total);
        out += ',';
        out += format_number(s.energy_potential);
        out += ',';
        out += format_number(h_b);
        out += '\n';
    }
    write_text_atomic(path, out, overwrite);
}

inline constexpr const char* kSnapshotHeader = "x,re_psi,im_psi,prob_density,potential";

template <PotentialProvider P>
void write_snapshot(const WaveField& field, const SpatialGrid& grid, const P& pot, double tau,
                    const std::filesystem::path& path, bool overwrite = false) {
    std::vector<double> u;
    pot.sample(grid, tau, u);
    std::string out;
    out.reserve(grid.n_points * 80 + 48);
    out += kSnapshotHeader;
    out += '\n';
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const complex a = field.amplitudes[j];
        out += format_number(grid.nodes[j]);
        out += ',';
        out += format_number(a.real());
        out += ',';
        out += format_number(a.imag());
        out += ',';
        out += format_number(std::norm(a));
        out += ',';
        out += format_number(u[j]);
        out += '\n';
    }
    write_text_atomic(path, out, overwrite);
}

inline constexpr const char* kScanHeader =
    "epsilon,max_prob_right,first_passage_tau,transfer_cycles,final_energy,status";

/// One row per scanned epsilon; failed runs keep their epsilon and status,
/// with the metric cells left empty.
inline void write_scan(const std::vector<ScanRecord>& records, const std::filesystem::path& path,
                       bool overwrite = false) {
    std::string out;
    out += kScanHeader;
    out += '\n';
    for (const ScanRecord& r : records) {
        out += format_number(r.epsilon);
        out += ',';
        if (r.ok) {
            out += format_number(r.metrics.max_prob_right);
            out += ',';
            if (r.metrics.first_passage_tau) out += format_number(*r.metrics.first_passage_tau);
            out += ',';
            out += std::to_string(r.metrics.transfer_cycles);
            out += ',';
            out += format_number(r.final_energy);
            out += ",ok\n";
        } else {
            out += ",,,,failed\n";
        }
    }
    write_text_atomic(path, out, overwrite);
}

/// Column-oriented CSV contents; empty cells parse as NaN.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return columns[i];
        throw ConfigError("column \"" + name + "\" not found in CSV");
    }
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream head(line);
    std::string cell;
    while (std::getline(head, cell, ',')) table.header.push_back(cell);
    table.columns.resize(table.header.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t col = 0, start = 0;
        while (col < table.header.size()) {
            const std::size_t comma = line.find(',', start);
            const std::string field = line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            double value = std::numeric_limits<double>::quiet_NaN();
            if (!field.empty()) {
                try {
                    value = std::stod(field);
                } catch (const std::exception&) {
                    throw IoError("CSV line " + std::to_string(line_no) +
                                  ": cannot parse number \"" + field + "\"");
                }
            }
            table.columns[col].push_back(value);
            ++col;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        for (; col < table.header.size(); ++col)
            table.columns[col].push_back(std::numeric_limits<double>::quiet_NaN());
    }
    return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

}  // namespace dwell::io
