#include "diamondlab/schedule.hpp"

#include <stdexcept>

namespace diamondlab {

namespace {

// Smallest m >= 32n with m odd and divisible by 3, i.e. m == 3 (mod 6).
std::int64_t derive_subdivision(std::int64_t n) {
    std::int64_t m = 32 * n;
    std::int64_t r = m % 6;
    if (r != 3) m += (r < 3) ? (3 - r) : (9 - r);
    return m;
}

}  // namespace

LevelSchedule build_schedule(std::int64_t n0, int levels, bool toy_mode,
                             const ScheduleOptions& opts) {
    if (n0 < 2) throw std::invalid_argument("build_schedule: n0 must be >= 2");
    if (levels < 0) throw std::invalid_argument("build_schedule: levels must be >= 0");
    if (opts.m_override != 0) {
        if (opts.m_override % 2 == 0)
            throw std::invalid_argument("build_schedule: subdivision override must be odd");
        if (opts.m_override % 3 != 0)
            throw std::invalid_argument("build_schedule: subdivision override must be divisible by 3");
    }

    LevelSchedule s;
    s.n0 = n0;
    s.levels = levels;
    s.toy_mode = toy_mode;
    if (!toy_mode && n0 < 100)
        s.warnings.push_back("n0 < 100 outside the recommended range for full-size mode");

    Rational side(1);
    int block = 1;
    std::int64_t block_start = 0;
    std::int64_t block_end = s.block_end(1);
    for (int j = 1; j <= levels; ++j) {
        if (j > block_end) {
            ++block;
            block_start = block_end;
            block_end = s.block_end(block);
        }
        std::int64_t n = s.block_param(block);
        std::int64_t m;
        if (opts.m_override != 0) {
            m = opts.m_override;
        } else if (toy_mode) {
            m = 3;
        } else {
            m = derive_subdivision(n);
        }
        if (!toy_mode) {
            // 1/m must lie in [1/(128n), 1/(32n)].
            if (m < 32 * n || m > 128 * n)
                throw std::invalid_argument(
                    "build_schedule: subdivision " + std::to_string(m) +
                    " outside [32n,128n] for n=" + std::to_string(n));
        }
        __int128 den = (__int128)side.den * m;
        if (den > opts.max_denominator)
            throw std::overflow_error("build_schedule: resolution cap exceeded at stage " +
                                      std::to_string(j));
        side = side / Rational(m);

        StageEntry e;
        e.stage = j;
        e.block = block;
        e.block_param = n;
        e.block_start = block_start;
        e.subdivision = m;
        e.side_len = side;
        // Gate cells are the central grid cell of each doubled copy. With the
        // minimal subdivision m = 3 the central cell would be all of K, so the
        // gate shrinks to the central ninth of the base cube instead.
        e.gate_side = (m == 3) ? side / Rational(3) : side;
        e.block_first = (j == block_start + 1);
        s.stages.push_back(e);
    }
    return s;
}

int discrete_log(const Rational& r, const LevelSchedule& sched) {
    if (!(Rational(0) < r) || Rational(1, 2) < r)
        throw std::invalid_argument("discrete_log: r must be in (0, 1/2]");
    // slen(X_{lg+1}) <= r < slen(X_lg)
    for (int j = 0; j < sched.levels; ++j) {
        if (sched.side_len(j + 1) <= r && r < sched.side_len(j)) return j;
    }
    throw std::out_of_range("discrete_log: r below the resolution of the built schedule");
}

int discrete_log(double r, const LevelSchedule& sched) {
    return discrete_log(rational_from_double(r), sched);
}

}  // namespace diamondlab
