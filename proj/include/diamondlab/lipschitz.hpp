#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "diamondlab/metric.hpp"

namespace diamondlab {

enum class LipschitzKind {
    Coordinate,
    Affine,
    DistanceToPoint,
    DistanceToGateSet,
    RandomMacShane,
    UserTable,
};

/// Scalar- or vector-valued Lipschitz test function on the complex,
/// evaluable at any labeled point of any built level.
class LipschitzFunction {
  public:
    LipschitzKind kind() const { return kind_; }
    int components() const { return components_; }
    /// Reported upper bound for the global Lipschitz constant (vector case:
    /// of the l^2-valued map).
    double lipschitz_bound() const { return lip_bound_; }
    const std::string& name() const { return name_; }

    double eval(const LabeledPoint& p, int comp = 0) const;

    /// Evaluate at a base point whose word is the given prefix, extended
    /// canonically (green) to the complex level.
    double eval_at(const RPoint& base, const ColorWord& prefix, int comp = 0) const;

    /// Largest sampled difference quotient; always <= lipschitz_bound() up
    /// to MC slack.
    double verify_lipschitz(int samples, std::uint64_t seed) const;

    static LipschitzFunction coordinate(const MetricOracle& m, int axis);
    static LipschitzFunction affine(const MetricOracle& m, Vec3 slope, double offset);
    static LipschitzFunction distance_to_point(const MetricOracle& m, LabeledPoint anchor);
    static LipschitzFunction distance_to_gate_set(const MetricOracle& m);
    static LipschitzFunction macshane(const MetricOracle& m, int anchors, double slope,
                                      std::uint64_t seed, int components = 1);

  private:
    const MetricOracle* oracle_ = nullptr;
    LipschitzKind kind_ = LipschitzKind::Coordinate;
    int components_ = 1;
    double lip_bound_ = 1;
    std::string name_;
    int axis_ = 0;
    Vec3 slope_{};
    double offset_ = 0;
    // MacShane anchors per component; distance-to-point uses anchors_[0][0].
    std::vector<std::vector<LabeledPoint>> anchors_;
    std::vector<std::vector<double>> anchor_values_;
    std::vector<double> slopes_;
    std::vector<RCube> gate_cubes_;
};

}  // namespace diamondlab
