#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diamondlab/rational.hpp"

namespace diamondlab {

/// One construction stage j >= 1 (the step X_{j-1} -> X_j).
struct StageEntry {
    int stage = 0;                 // j
    int block = 0;                 // k with nbar_{k-1} < j <= nbar_k
    std::int64_t block_param = 0;  // n_k, the diamond parameter used this block
    std::int64_t block_start = 0;  // nbar_{k-1}
    std::int64_t subdivision = 0;  // m_j, odd and divisible by 3
    Rational side_len;             // slen(X_j) = prod 1/m_i
    Rational gate_side;            // side of gate cells created at this stage
    bool block_first = false;      // true iff j == nbar_{k-1} + 1 (all cells doubled)
};

/// The parameter sequence of the inverse system: n_k, block boundaries,
/// subdivision factors and side lengths, up to a configured depth.
struct LevelSchedule {
    std::int64_t n0 = 2;
    int levels = 0;
    bool toy_mode = false;
    std::vector<StageEntry> stages;    // stages[j-1] describes stage j
    std::vector<std::string> warnings;

    const StageEntry& stage(int j) const { return stages.at(j - 1); }
    Rational side_len(int j) const {     // slen(X_j), slen(X_0) = 1
        return j == 0 ? Rational(1) : stages.at(j - 1).side_len;
    }
    /// Diamond parameter for block k (1-based).
    std::int64_t block_param(int k) const { return toy_mode ? n0 + k - 1 : n0 + k; }
    /// nbar_k = sum_{i<=k} n_i^3 (nbar_0 = 0).
    std::int64_t block_end(int k) const {
        std::int64_t s = 0;
        for (int i = 1; i <= k; ++i) {
            std::int64_t n = block_param(i);
            s += n * n * n;
        }
        return s;
    }
};

struct ScheduleOptions {
    std::int64_t m_override = 0;        // 0 = derive per mode
    std::int64_t max_denominator = (std::int64_t)1 << 60;  // resolution guard
};

/// Builds the stage table. Deterministic. Throws std::invalid_argument on
/// bad parameters and std::overflow_error when the resolution guard trips.
LevelSchedule build_schedule(std::int64_t n0, int levels, bool toy_mode,
                             const ScheduleOptions& opts = {});

/// The unique j with slen(X_{j+1}) <= r < slen(X_j); requires r in (0, 1/2]
/// and a schedule deep enough to bracket r.
int discrete_log(const Rational& r, const LevelSchedule& sched);
int discrete_log(double r, const LevelSchedule& sched);

}  // namespace diamondlab
