#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diamondlab/geometry.hpp"
#include "diamondlab/rational.hpp"
#include "diamondlab/schedule.hpp"

namespace diamondlab {

enum class Color : std::int8_t { Wildcard = 0, Green = 1, Red = 2 };

inline char color_char(Color c) {
    return c == Color::Green ? 'g' : (c == Color::Red ? 'r' : '*');
}

/// Per-point address across doubling stages; Wildcard at stage j means the
/// base point is not strictly inside any stage-j doubled K region.
using ColorWord = std::vector<Color>;

struct LabeledPoint {
    RPoint base;
    ColorWord word;

    int level() const { return (int)word.size(); }
    Vec3 pos() const { return to_vec3(base); }
};

/// One doubled cube: where it sits, what got doubled, the gate and the jump.
struct DoublingRecord {
    int stage = 0;
    RCube base_cube;      // a cell of X_{stage-1}
    RCube k_region;       // middle third of base_cube
    RCube gate_cell;      // concentric gate cube inside each K copy
    RPoint jump_center;   // common base point of the two copy centers
    Rational jump_cost;   // slen(base_cube) / (4 n)
};

/// Immutable description of X_l: the schedule plus the registry of doubled
/// cells and gate cubes. Cell-level facts are derived on demand by exact
/// rational queries, so the registry stays usable at depths where explicit
/// record lists would not fit in memory.
class DiamondComplex {
  public:
    DiamondComplex() = default;
    DiamondComplex(LevelSchedule sched, int level, std::size_t max_records);

    const LevelSchedule& schedule() const { return sched_; }
    int level() const { return level_; }

    bool records_complete() const { return records_complete_; }
    const std::vector<DoublingRecord>& records() const { return records_; }
    /// Records created at one stage (requires records_complete()).
    std::vector<const DoublingRecord*> records_at_stage(int j) const;

    /// Cell of the X_j grid containing base (clamped on the outer boundary).
    RCube cell_of(int j, const RPoint& base) const;

    /// Whether the X_{j-1} cell `q` is doubled at stage j (it is not iff an
    /// earlier gate of the current block overlaps it).
    bool cell_doubled(int j, const RCube& q) const;

    /// If base lies strictly inside the K region of a stage-j doubled cell,
    /// returns that record's geometry.
    std::optional<DoublingRecord> doubled_region_at(int j, const RPoint& base) const;

    /// True iff base lies inside a gate cube created at a stage in
    /// [stage_lo, stage_hi] (inclusive; stages of any block).
    bool in_gate_region(const RPoint& base, int stage_lo, int stage_hi) const;

    /// Stages j' < j such that base_cube of a stage-j record lies inside a
    /// stage-j' K region (the record's fiber stages).
    std::vector<int> fiber_stages(const DoublingRecord& rec) const;

    LabeledPoint resolve_word(const RPoint& base, int l, Color choice = Color::Green) const;
    LabeledPoint resolve_word(const RPoint& base, int l, const ColorWord& choice) const;

    /// Canonicalize a word in place against the base point.
    void canonicalize(LabeledPoint& p) const;
    bool is_canonical(const LabeledPoint& p) const;

    std::string to_json() const;
    static DiamondComplex from_json(const std::string& text);

  private:
    DoublingRecord make_record(int j, const RCube& q) const;
    std::vector<char> doubled_chain(const RPoint& x, int jmax) const;

    LevelSchedule sched_;
    int level_ = 0;
    bool records_complete_ = true;
    std::vector<DoublingRecord> records_;
    std::vector<std::size_t> stage_offsets_;  // records_ index range per stage
};

inline LabeledPoint project(const LabeledPoint& p, int l_prime) {
    LabeledPoint r = p;
    if (l_prime > p.level()) throw std::invalid_argument("project: target level above point level");
    r.word.resize(l_prime);
    return r;
}

/// Builds the registry for X_l. Records are materialized only while the
/// running count stays within max_records; queries work either way.
DiamondComplex build_complex(const LevelSchedule& sched, int l,
                             std::size_t max_records = 2'000'000);

}  // namespace diamondlab
