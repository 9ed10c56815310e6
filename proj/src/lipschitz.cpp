#include "diamondlab/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diamondlab {

double LipschitzFunction::eval(const LabeledPoint& p, int comp) const {
    switch (kind_) {
        case LipschitzKind::Coordinate:
            return p.pos()[axis_];
        case LipschitzKind::Affine:
            return slope_.dot(p.pos()) + offset_;
        case LipschitzKind::DistanceToPoint: {
            LabeledPoint a = anchors_[0][0];
            if (a.level() > p.level()) a = project(a, p.level());
            return oracle_->dist(p, a);
        }
        case LipschitzKind::DistanceToGateSet: {
            // Gate cubes exist in both colors over the same base, so the
            // chain distance to the set reduces to the Euclidean distance
            // from the base point to the nearest gate cube.
            Vec3 x = p.pos();
            double best = 1e300;
            for (const RCube& g : gate_cubes_) {
                Box3 b = to_box3(g);
                double d2 = 0;
                for (int i = 0; i < 3; ++i) {
                    double lo = b.lo[i], hi = b.hi[i];
                    double v = x[i] < lo ? lo - x[i] : (x[i] > hi ? x[i] - hi : 0.0);
                    d2 += v * v;
                }
                best = std::min(best, std::sqrt(d2));
            }
            return best;
        }
        case LipschitzKind::RandomMacShane: {
            double best = 1e300;
            for (std::size_t i = 0; i < anchors_[comp].size(); ++i) {
                LabeledPoint a = anchors_[comp][i];
                if (a.level() > p.level()) a = project(a, p.level());
                best = std::min(best, anchor_values_[comp][i] + slopes_[comp] * oracle_->dist(p, a));
            }
            return best;
        }
        case LipschitzKind::UserTable:
            throw std::logic_error("LipschitzFunction: user tables evaluate via their own closure");
    }
    return 0;
}

double LipschitzFunction::eval_at(const RPoint& base, const ColorWord& prefix, int comp) const {
    const DiamondComplex& cx = oracle_->complex();
    LabeledPoint p = cx.resolve_word(base, cx.level(), prefix);
    return eval(p, comp);
}

double LipschitzFunction::verify_lipschitz(int samples, std::uint64_t seed) const {
    CounterRng rng(seed, 97);
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        LabeledPoint a = oracle_->sample(rng, 2 * (std::uint64_t)i);
        LabeledPoint b = oracle_->sample(rng, 2 * (std::uint64_t)i + 1);
        double d = oracle_->dist(a, b);
        if (d <= 1e-12) continue;
        double s = 0;
        for (int c = 0; c < components_; ++c) {
            double dv = eval(a, c) - eval(b, c);
            s += dv * dv;
        }
        worst = std::max(worst, std::sqrt(s) / d);
    }
    return worst;
}

LipschitzFunction LipschitzFunction::coordinate(const MetricOracle& m, int axis) {
    LipschitzFunction f;
    f.oracle_ = &m;
    f.kind_ = LipschitzKind::Coordinate;
    f.axis_ = axis;
    f.lip_bound_ = 1;
    f.name_ = "coordinate_x" + std::to_string(axis + 1);
    return f;
}

LipschitzFunction LipschitzFunction::affine(const MetricOracle& m, Vec3 slope, double offset) {
    LipschitzFunction f;
    f.oracle_ = &m;
    f.kind_ = LipschitzKind::Affine;
    f.slope_ = slope;
    f.offset_ = offset;
    f.lip_bound_ = slope.norm();
    f.name_ = "affine";
    return f;
}

LipschitzFunction LipschitzFunction::distance_to_point(const MetricOracle& m, LabeledPoint anchor) {
    LipschitzFunction f;
    f.oracle_ = &m;
    f.kind_ = LipschitzKind::DistanceToPoint;
    f.anchors_ = {{std::move(anchor)}};
    f.lip_bound_ = 1;
    f.name_ = "distance_to_point";
    return f;
}

LipschitzFunction LipschitzFunction::distance_to_gate_set(const MetricOracle& m) {
    LipschitzFunction f;
    f.oracle_ = &m;
    f.kind_ = LipschitzKind::DistanceToGateSet;
    f.lip_bound_ = 1;
    f.name_ = "distance_to_gate_set";
    for (const DoublingRecord& r : m.complex().records()) f.gate_cubes_.push_back(r.gate_cell);
    if (f.gate_cubes_.empty())
        throw std::invalid_argument("distance_to_gate_set: complex has no gates");
    return f;
}

LipschitzFunction LipschitzFunction::macshane(const MetricOracle& m, int anchors, double slope,
                                              std::uint64_t seed, int components) {
    LipschitzFunction f;
    f.oracle_ = &m;
    f.kind_ = LipschitzKind::RandomMacShane;
    f.components_ = components;
    f.name_ = "macshane_" + std::to_string(seed);
    CounterRng rng(seed, 13);
    double bound_sq = 0;
    for (int c = 0; c < components; ++c) {
        std::vector<LabeledPoint> as;
        std::vector<double> vs;
        for (int i = 0; i < anchors; ++i) {
            std::uint64_t ctr = (std::uint64_t)c * anchors + i;
            as.push_back(m.sample(rng, ctr));
            vs.push_back((rng.uniform(ctr, 50) - 0.5));
        }
        // Components shrink as 1/c so the l^2 profile of a truncated
        // infinite-dimensional target is kept.
        double sc = slope / (1.0 + c);
        f.anchors_.push_back(std::move(as));
        f.anchor_values_.push_back(std::move(vs));
        f.slopes_.push_back(sc);
        bound_sq += sc * sc;
    }
    f.lip_bound_ = std::sqrt(bound_sq);
    return f;
}

}  // namespace diamondlab
