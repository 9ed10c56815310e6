#pragma once

#include <optional>

#include "diamondlab/metric.hpp"

namespace diamondlab {

/// Axis-parallel geodesic segment on one sheet (may be degenerate).
struct HorizontalSegment {
    LabeledPoint start, end;
    int axis = 0;
    double length = 0;
};

struct JumpHop {
    LabeledPoint from, to;
    DoublingRecord record;
    double cost = 0;
};

/// Horizontal path with at most one jump: segments[0..jump_after] come
/// before the jump (when present), the rest after.
struct JumpPath {
    std::vector<HorizontalSegment> segments;
    std::optional<JumpHop> jump;
    int jump_after = -1;

    double length() const {
        double s = jump ? jump->cost : 0.0;
        for (const auto& seg : segments) s += seg.length;
        return s;
    }
    int segment_count() const { return (int)segments.size(); }

    std::string to_json() const;  // polyline export for plotting
};

/// Lazy description of a fundamental configuration: the base offset grid
/// around the center plus the sheet color patterns whose lifts are kept.
class FundamentalConfiguration {
  public:
    LabeledPoint center;
    double r = 0;
    double eps = 0;
    int j0 = 0;                       // lg(eps^2 r) capped at the built level
    std::vector<double> offsets;      // signed per-axis offsets, never zero
    std::vector<ColorWord> patterns;  // length-j0 sheet patterns kept
    bool paper_eps_range = true;      // eps < 1/400

    std::size_t grid_point_count() const { return grid_.size(); }
    const std::vector<Vec3>& grid_points() const { return grid_; }

    /// All distinct labeled points (deduplicated canonical lifts).
    std::vector<LabeledPoint> points(const DiamondComplex& cx) const;

    /// Distance from q to the configuration (exact over candidate lifts of
    /// the nearby grid points).
    double distance_to(const MetricOracle& m, const LabeledPoint& q) const;

  private:
    friend FundamentalConfiguration build_configuration(const MetricOracle&, const LabeledPoint&,
                                                        double, double);
    std::vector<Vec3> grid_;
};

/// Base grid lifted across the sheet patterns meeting B(p_{j0}, r), then
/// extended by green words (Def of the fundamental configuration).
FundamentalConfiguration build_configuration(const MetricOracle& m, const LabeledPoint& p,
                                             double r, double eps);

/// Good horizontal path (at most one jump) from p to q at their level.
JumpPath good_path(const MetricOracle& m, const LabeledPoint& p, const LabeledPoint& q);

/// Structural checks (Gd1)-(Gd5) for an emitted path.
struct GoodPathCheck {
    bool endpoints_ok = false;      // Gd1
    bool single_jump_ok = false;    // Gd2
    double length_over_dist = 0;    // Gd3 statistic
    int short_segments = 0;         // Gd4: segments below eps^3 r / 400
    int segment_count = 0;          // Gd5
    double length = 0;
    double dist_lower = 0;

    bool pass(double fitted_c) const {
        return endpoints_ok && single_jump_ok && length_over_dist <= fitted_c &&
               short_segments <= 10 && segment_count <= 15 && length >= dist_lower - 1e-12;
    }
};

GoodPathCheck check_good_path(const MetricOracle& m, const JumpPath& path, const LabeledPoint& p,
                              const LabeledPoint& q, double eps, double r);

}  // namespace diamondlab
