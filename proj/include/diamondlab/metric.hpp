#pragma once

#include <cstdint>
#include <vector>

#include "diamondlab/complex.hpp"
#include "diamondlab/report.hpp"
#include "diamondlab/rng.hpp"

namespace diamondlab {

enum class HopKind { SheetSegment, Jump };

struct ChainHop {
    LabeledPoint to;
    HopKind kind = HopKind::SheetSegment;
    double cost = 0;
};

/// Certified bracket for a chain-metric distance, with the realizing chain.
struct DistanceResult {
    double lower = 0;
    double upper = 0;
    bool certified = true;
    LabeledPoint start;
    std::vector<ChainHop> witness;

    double chain_cost() const {
        double s = 0;
        for (const auto& h : witness) s += h.cost;
        return s;
    }
};

struct MeasureEstimate {
    double value = 0;
    double stderr_ = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Chain-metric queries against an immutable complex. Distances resolve the
/// outermost color conflict through either the shared K boundary or the
/// record's jump pair; legs toward those features never conflict, so the
/// two candidate chains bracket the metric exactly (up to float rounding).
class MetricOracle {
  public:
    explicit MetricOracle(const DiamondComplex& cx) : cx_(&cx) {}

    const DiamondComplex& complex() const { return *cx_; }

    DistanceResult distance(const LabeledPoint& p, const LabeledPoint& q,
                            double rel_tol = 0.01) const;
    /// Upper value only.
    double dist(const LabeledPoint& p, const LabeledPoint& q) const;

    /// Stages where p and q sit inside the same doubled K region with
    /// different non-wildcard colors.
    std::vector<DoublingRecord> conflicts(const LabeledPoint& p, const LabeledPoint& q) const;

    /// Cheapest single excursion to the free color-switch surface of a
    /// record's K boundary: min over w on the boundary of |p-w| + |w-q|.
    double boundary_excursion(const LabeledPoint& p, const LabeledPoint& q,
                              const DoublingRecord& rec, Vec3* witness = nullptr) const;

    /// mu_l realized as Lebesgue base times independent fair colors.
    LabeledPoint sample(const CounterRng& rng, std::uint64_t counter, int level) const;
    LabeledPoint sample(const CounterRng& rng, std::uint64_t counter) const;

    MeasureEstimate ball_measure(const LabeledPoint& center, double r, std::uint64_t samples,
                                 std::uint64_t seed, bool parallel = true) const;

  private:
    const DiamondComplex* cx_;
};

struct DoublingCheckConfig {
    int trials = 200;
    double r_min = 0.15;
    double r_max = 0.35;
    std::uint64_t samples = 100000;
    double ratio_bound = 20.0;   // empirical toy-mode bound, not the paper constant
    std::uint64_t min_hits = 25; // below this the trial is inconclusive
};

ExperimentReport verify_doubling(const MetricOracle& m, int level, std::uint64_t seed,
                                 const DoublingCheckConfig& cfg = {});

struct BallShapeConfig {
    int level_low = 1;    // l
    double r = 0.25;
    std::uint64_t samples = 2000;
};

ExperimentReport verify_ball_shape(const MetricOracle& m, const LabeledPoint& p, std::uint64_t seed,
                                   const BallShapeConfig& cfg = {});

ExperimentReport verify_metric_axioms(const MetricOracle& m, int triples, double delta,
                                      std::uint64_t seed);

}  // namespace diamondlab
