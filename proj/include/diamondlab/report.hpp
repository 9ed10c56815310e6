#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diamondlab {

/// One CSV row of an experiment report.
struct ReportRow {
    int level = 0;
    std::string params;      // "name=value;name=value"
    std::string statistic;
    double value = 0;
    double tolerance = 0;
    bool pass = true;
};

/// Tabular record of one verification run. Serialized as CSV (one row per
/// statistic) plus a versioned JSON summary; both are byte-stable for a
/// fixed config and seed. Timestamps go to a separate sidecar file only.
struct ExperimentReport {
    std::string name;
    std::string run_id;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<ReportRow> rows;

    void add(int level, std::string params, std::string statistic, double value,
             double tolerance, bool pass) {
        rows.push_back({level, std::move(params), std::move(statistic), value, tolerance, pass});
    }
    bool passed() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }

    std::string csv() const;
    std::string json_summary() const;

    /// Writes <dir>/<name>.csv, <name>.json and <name>.meta (timestamp sidecar).
    void write(const std::string& dir) const;
};

std::string format_double(double v);

/// FNV-1a of a canonical string; used for config hashes and run ids.
std::string fnv1a_hex(const std::string& text);

}  // namespace diamondlab
