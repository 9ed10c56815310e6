#include "diamondlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diamondlab {

namespace {

inline bool same_origin(const RCube& a, const RCube& b) {
    return a.origin.x == b.origin.x && a.origin.y == b.origin.y && a.origin.z == b.origin.z;
}

struct Face {
    int axis;          // fixed axis
    double v;          // plane coordinate
    int a1, a2;        // free axes
    double lo1, hi1, lo2, hi2;
};

double path_cost(const Vec3& p, const Vec3& q, const Vec3& w) {
    return euclid(p, w) + euclid(w, q);
}

double edge_min(const Vec3& p, const Vec3& q, const Vec3& e0, const Vec3& e1, Vec3* best) {
    double a = 0, b = 1;
    auto at = [&](double t) { return e0 + t * (e1 - e0); };
    for (int it = 0; it < 200; ++it) {
        double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
        if (path_cost(p, q, at(m1)) < path_cost(p, q, at(m2)))
            b = m2;
        else
            a = m1;
    }
    *best = at((a + b) / 2);
    return path_cost(p, q, *best);
}

double face_min(const Vec3& p, const Vec3& q, const Face& f, Vec3* best) {
    // Reflection: for w on the plane, |w-q| = |w-q'| with q' mirrored.
    Vec3 qr = q;
    qr[f.axis] = 2 * f.v - q[f.axis];
    double denom = qr[f.axis] - p[f.axis];
    if (std::abs(denom) > 1e-300) {
        double t = (f.v - p[f.axis]) / denom;
        if (t >= 0 && t <= 1) {
            Vec3 w0 = p + t * (qr - p);
            if (w0[f.a1] >= f.lo1 && w0[f.a1] <= f.hi1 && w0[f.a2] >= f.lo2 && w0[f.a2] <= f.hi2) {
                *best = w0;
                return path_cost(p, q, w0);
            }
        }
    }
    // Constrained minimum lies on one of the 4 edges of the face rectangle.
    double bestv = std::numeric_limits<double>::infinity();
    auto corner = [&](double u1, double u2) {
        Vec3 w;
        w[f.axis] = f.v;
        w[f.a1] = u1;
        w[f.a2] = u2;
        return w;
    };
    Vec3 c00 = corner(f.lo1, f.lo2), c10 = corner(f.hi1, f.lo2);
    Vec3 c01 = corner(f.lo1, f.hi2), c11 = corner(f.hi1, f.hi2);
    const Vec3 edges[4][2] = {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};
    for (auto& e : edges) {
        Vec3 w;
        double v = edge_min(p, q, e[0], e[1], &w);
        if (v < bestv) {
            bestv = v;
            *best = w;
        }
    }
    return bestv;
}

/// Exact min over the boundary surface of box K of |p-w| + |w-q| for
/// p, q inside K (one excursion to the free color-switch surface).
double boundary_route(const Vec3& p, const Vec3& q, const Box3& K, Vec3* best) {
    double bestv = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
        int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        for (double v : {K.lo[axis], K.hi[axis]}) {
            Face f{axis, v, a1, a2, K.lo[a1], K.hi[a1], K.lo[a2], K.hi[a2]};
            Vec3 w;
            double m = face_min(p, q, f, &w);
            if (m < bestv) {
                bestv = m;
                *best = w;
            }
        }
    }
    return bestv;
}

}  // namespace

std::vector<DoublingRecord> MetricOracle::conflicts(const LabeledPoint& p,
                                                    const LabeledPoint& q) const {
    std::vector<DoublingRecord> out;
    int l = std::min(p.level(), q.level());
    for (int j = 1; j <= l; ++j) {
        Color a = p.word[j - 1], b = q.word[j - 1];
        if (a == Color::Wildcard || b == Color::Wildcard || a == b) continue;
        RCube cp = cx_->cell_of(j - 1, p.base);
        RCube cq = cx_->cell_of(j - 1, q.base);
        if (!same_origin(cp, cq)) continue;
        auto rec = cx_->doubled_region_at(j, p.base);
        if (rec) out.push_back(*rec);
    }
    return out;
}

DistanceResult MetricOracle::distance(const LabeledPoint& p, const LabeledPoint& q,
                                      double /*rel_tol*/) const {
    if (p.level() != q.level())
        throw std::invalid_argument("distance: points must live at the same level");
    LabeledPoint pc = p, qc = q;
    cx_->canonicalize(pc);
    cx_->canonicalize(qc);

    DistanceResult res;
    res.start = pc;
    Vec3 vp = pc.pos(), vq = qc.pos();
    auto confl = conflicts(pc, qc);
    if (confl.empty()) {
        double d = euclid(vp, vq);
        res.lower = res.upper = d;
        res.witness.push_back({qc, HopKind::SheetSegment, d});
        return res;
    }

    // Resolving the outermost conflict through its K boundary or its jump
    // re-synchronizes every deeper conflicted record as well (their K regions
    // nest strictly inside this one, and a jump leaves later stages free).
    const DoublingRecord& R = confl.front();
    int l = pc.level();
    Vec3 c = to_vec3(R.jump_center);
    double jc = R.jump_cost.to_double();
    double leg_pc = euclid(vp, c), leg_cq = euclid(c, vq);
    double route_jump = leg_pc + jc + leg_cq;

    Vec3 wbest;
    double route_bdy = boundary_route(vp, vq, to_box3(R.k_region), &wbest);

    if (route_jump <= route_bdy) {
        LabeledPoint u = cx_->resolve_word(R.jump_center, l, pc.word);
        LabeledPoint v = cx_->resolve_word(R.jump_center, l, qc.word);
        res.witness.push_back({u, HopKind::SheetSegment, leg_pc});
        res.witness.push_back({v, HopKind::Jump, jc});
        res.witness.push_back({qc, HopKind::SheetSegment, leg_cq});
        res.upper = route_jump;
    } else {
        LabeledPoint w = cx_->resolve_word(to_rpoint(wbest), l, qc.word);
        double l1 = euclid(vp, wbest), l2 = euclid(wbest, vq);
        res.witness.push_back({w, HopKind::SheetSegment, l1});
        res.witness.push_back({qc, HopKind::SheetSegment, l2});
        res.upper = l1 + l2;
    }
    res.lower = res.upper;
    res.certified = true;
    return res;
}

double MetricOracle::dist(const LabeledPoint& p, const LabeledPoint& q) const {
    LabeledPoint pc = p, qc = q;
    cx_->canonicalize(pc);
    cx_->canonicalize(qc);
    Vec3 vp = pc.pos(), vq = qc.pos();
    auto confl = conflicts(pc, qc);
    if (confl.empty()) return euclid(vp, vq);
    const DoublingRecord& R = confl.front();
    Vec3 c = to_vec3(R.jump_center);
    double route_jump = euclid(vp, c) + R.jump_cost.to_double() + euclid(c, vq);
    Vec3 w;
    double route_bdy = boundary_route(vp, vq, to_box3(R.k_region), &w);
    return std::min(route_jump, route_bdy);
}

LabeledPoint MetricOracle::sample(const CounterRng& rng, std::uint64_t counter, int level) const {
    RPoint base{rational_from_double(rng.uniform(counter, 0)),
                rational_from_double(rng.uniform(counter, 1)),
                rational_from_double(rng.uniform(counter, 2))};
    LabeledPoint p;
    p.base = base;
    p.word.resize(level);
    for (int j = 1; j <= level; ++j) {
        if (cx_->doubled_region_at(j, base))
            p.word[j - 1] = rng.coin(counter, 3 + j) ? Color::Green : Color::Red;
        else
            p.word[j - 1] = Color::Wildcard;
    }
    return p;
}

LabeledPoint MetricOracle::sample(const CounterRng& rng, std::uint64_t counter) const {
    return sample(rng, counter, cx_->level());
}

MeasureEstimate MetricOracle::ball_measure(const LabeledPoint& center, double r,
                                           std::uint64_t samples, std::uint64_t seed,
                                           bool parallel) const {
    if (samples == 0) throw std::invalid_argument("ball_measure: zero samples");
    CounterRng rng(seed, 11);
    std::int64_t hits = 0;
    std::int64_t n = (std::int64_t)samples;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : hits) schedule(static) if (parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        LabeledPoint z = sample(rng, (std::uint64_t)i, center.level());
        if (dist(center, z) <= r) ++hits;
    }
    MeasureEstimate e;
    e.value = (double)hits / (double)samples;
    e.stderr_ = std::sqrt(std::max(e.value * (1 - e.value), 0.0) / (double)samples);
    e.samples = samples;
    e.seed = seed;
    return e;
}

ExperimentReport verify_doubling(const MetricOracle& m, int level, std::uint64_t seed,
                                 const DoublingCheckConfig& cfg) {
    ExperimentReport rep;
    rep.name = "doubling";
    rep.seed = seed;
    CounterRng rng(seed, 777);
    double max_ratio = 0;
    int inconclusive = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        LabeledPoint center = m.sample(rng, (std::uint64_t)t, level);
        double r = cfg.r_min + (cfg.r_max - cfg.r_min) * rng.uniform(t, 100);
        MeasureEstimate big = m.ball_measure(center, r, cfg.samples, CounterRng::mix(seed + 2 * t));
        MeasureEstimate small = m.ball_measure(center, r / 2, cfg.samples, CounterRng::mix(seed + 2 * t + 1));
        std::string params = "trial=" + std::to_string(t) + ";r=" + format_double(r);
        double small_hits = small.value * (double)cfg.samples;
        if (small_hits < (double)cfg.min_hits) {
            ++inconclusive;
            rep.add(level, params, "doubling_ratio_inconclusive", 0.0, 0.0, true);
            continue;
        }
        double ratio = big.value / small.value;
        max_ratio = std::max(max_ratio, ratio);
        double rel = 3 * (big.stderr_ / big.value + small.stderr_ / small.value);
        bool pass = ratio <= cfg.ratio_bound && ratio >= 1.0 - rel;
        rep.add(level, params, "doubling_ratio", ratio, cfg.ratio_bound, pass);
    }
    rep.add(level, "trials=" + std::to_string(cfg.trials), "max_doubling_ratio", max_ratio,
            cfg.ratio_bound, max_ratio <= cfg.ratio_bound);
    rep.add(level, "trials=" + std::to_string(cfg.trials), "inconclusive_fraction",
            (double)inconclusive / cfg.trials, 0.3, inconclusive <= 0.3 * cfg.trials);
    return rep;
}

ExperimentReport verify_ball_shape(const MetricOracle& m, const LabeledPoint& p,
                                   std::uint64_t seed, const BallShapeConfig& cfg) {
    ExperimentReport rep;
    rep.name = "ball-shape";
    rep.seed = seed;
    int j = p.level();
    int l = cfg.level_low;
    if (l > j) throw std::invalid_argument("verify_ball_shape: need l <= level of p");
    double slack = 4.0 * m.complex().schedule().side_len(l).to_double();
    LabeledPoint pl = project(p, l);
    CounterRng rng(seed, 4242);
    std::int64_t preimage_hits = 0, containment_violations = 0;
    std::int64_t ball_hits = 0, reverse_violations = 0;
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
        LabeledPoint z = m.sample(rng, i, j);
        double d_high = m.dist(p, z);
        double d_low = m.dist(pl, project(z, l));
        if (d_low <= cfg.r) {
            ++preimage_hits;
            if (d_high > cfg.r + slack) ++containment_violations;
        }
        if (d_high <= cfg.r) {
            ++ball_hits;
            if (d_low > cfg.r) ++reverse_violations;
        }
    }
    std::string params = "j=" + std::to_string(j) + ";l=" + std::to_string(l) +
                         ";r=" + format_double(cfg.r) + ";samples=" + std::to_string(cfg.samples);
    rep.add(j, params, "preimage_samples", (double)preimage_hits, 0, preimage_hits > 0);
    rep.add(j, params, "containment_violations", (double)containment_violations, 0,
            containment_violations == 0);
    rep.add(j, params, "ball_samples", (double)ball_hits, 0, ball_hits > 0);
    rep.add(j, params, "ball_in_preimage_violations", (double)reverse_violations, 0,
            reverse_violations == 0);
    return rep;
}

ExperimentReport verify_metric_axioms(const MetricOracle& m, int triples, double delta,
                                      std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "metric-axioms";
    rep.seed = seed;
    CounterRng rng(seed, 31337);
    int level = m.complex().level();
    double max_sym = 0, max_tri = 0;
    int hard_violations = 0;
    for (int t = 0; t < triples; ++t) {
        LabeledPoint a = m.sample(rng, 3 * (std::uint64_t)t, level);
        LabeledPoint b = m.sample(rng, 3 * (std::uint64_t)t + 1, level);
        LabeledPoint c = m.sample(rng, 3 * (std::uint64_t)t + 2, level);
        double dab = m.dist(a, b), dba = m.dist(b, a);
        double dac = m.dist(a, c), dbc = m.dist(b, c);
        if (dab > 0) max_sym = std::max(max_sym, std::abs(dab - dba) / dab);
        double viol = dac - (dab + dbc);
        if (dac > 0) max_tri = std::max(max_tri, viol / dac);
        if (viol > 2 * delta * dac + 1e-12) ++hard_violations;
        if (m.dist(a, a) != 0.0) ++hard_violations;
    }
    std::string params = "triples=" + std::to_string(triples) + ";delta=" + format_double(delta);
    rep.add(level, params, "max_symmetry_rel_gap", max_sym, delta, max_sym <= delta);
    rep.add(level, params, "max_triangle_rel_excess", max_tri, 2 * delta, max_tri <= 2 * delta);
    rep.add(level, params, "hard_violations", (double)hard_violations, 0, hard_violations == 0);
    return rep;
}

}  // namespace diamondlab
