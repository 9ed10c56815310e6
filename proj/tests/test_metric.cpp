#include "doctest.h"

#include <cmath>
#include <set>

#include "chain_oracle.hpp"
#include "diamondlab/metric.hpp"

using namespace diamondlab;

namespace {
RPoint rp(double x, double y, double z) {
    return {rational_from_double(x), rational_from_double(y), rational_from_double(z)};
}
}  // namespace

TEST_CASE("identical labeled points are at distance zero") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    MetricOracle m(cx);
    LabeledPoint p = cx.resolve_word(rp(0.4, 0.7, 0.2), 2);
    DistanceResult d = m.distance(p, p);
    CHECK(d.lower == 0.0);
    CHECK(d.upper == 0.0);
}

TEST_CASE("n=26 unit-cube diamond: the two copy centers sit at exactly 1/104") {
    DiamondComplex cx = build_complex(build_schedule(25, 1, false), 1);
    MetricOracle m(cx);
    LabeledPoint cg = cx.resolve_word(rp(0.5, 0.5, 0.5), 1, Color::Green);
    LabeledPoint cr = cx.resolve_word(rp(0.5, 0.5, 0.5), 1, Color::Red);
    DistanceResult d = m.distance(cg, cr);
    CHECK(d.upper == 1.0 / 104.0);
    CHECK(d.lower == d.upper);
    REQUIRE(d.witness.size() == 3);
    CHECK(d.witness[1].kind == HopKind::Jump);
    CHECK(d.witness[1].cost == 1.0 / 104.0);
}

TEST_CASE("toy l=1: jump wins over the boundary route") {
    DiamondComplex cx = build_complex(build_schedule(2, 1, true), 1);
    MetricOracle m(cx);
    LabeledPoint cg = cx.resolve_word(rp(0.5, 0.5, 0.5), 1, Color::Green);
    LabeledPoint cr = cx.resolve_word(rp(0.5, 0.5, 0.5), 1, Color::Red);
    DistanceResult d = m.distance(cg, cr);
    CHECK(d.upper == doctest::Approx(0.125).epsilon(1e-12));
    // The boundary alternative costs at least 1/3 (out and back across K).
    testing::ChainOracle oracle(cx, 10);
    double od = oracle.distance(cg, cr);
    CHECK(od == doctest::Approx(0.125).epsilon(1e-9));
    // Forcing chains through the boundary: move q off-center so the jump it
    // must use stays the cheapest route.
    CHECK(d.witness[1].kind == HopKind::Jump);
}

TEST_CASE("sheet isometry: compatible words give exactly the Euclidean distance") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 3);
    MetricOracle m(cx);
    CounterRng rng(99);
    for (int i = 0; i < 1000; ++i) {
        LabeledPoint a = cx.resolve_word(rp(rng.uniform(i, 0), rng.uniform(i, 1), rng.uniform(i, 2)), 3);
        LabeledPoint b = cx.resolve_word(rp(rng.uniform(i, 3), rng.uniform(i, 4), rng.uniform(i, 5)), 3);
        // Same green choice everywhere: no conflicts possible.
        CHECK(m.dist(a, b) == euclid(a.pos(), b.pos()));
    }
}

TEST_CASE("projection is 1-Lipschitz on sampled pairs") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 3);
    MetricOracle m(cx);
    CounterRng rng(1234);
    for (int i = 0; i < 1000; ++i) {
        LabeledPoint a = m.sample(rng, 2 * i);
        LabeledPoint b = m.sample(rng, 2 * i + 1);
        double d3 = m.dist(a, b);
        for (int lp = 0; lp <= 2; ++lp) {
            double dl = m.dist(project(a, lp), project(b, lp));
            CHECK(dl <= d3 + 1e-12);
        }
    }
}

TEST_CASE("bracketing against the exhaustive chain oracle (toy l<=2)") {
    // Level 1, fine mesh: conflicted and unconflicted pairs.
    {
        DiamondComplex cx = build_complex(build_schedule(2, 1, true), 1);
        MetricOracle m(cx);
        testing::ChainOracle oracle(cx, 12);
        CounterRng rng(555);
        for (int i = 0; i < 30; ++i) {
            // Bias sampling into K so color conflicts actually occur.
            double span = (i % 2) ? 1.0 : 0.3;
            double off = (i % 2) ? 0.0 : 0.35;
            LabeledPoint a = cx.resolve_word(rp(off + span * rng.uniform(i, 0), off + span * rng.uniform(i, 1),
                                                off + span * rng.uniform(i, 2)),
                                             1, rng.coin(i, 7) ? Color::Green : Color::Red);
            LabeledPoint b = cx.resolve_word(rp(off + span * rng.uniform(i, 3), off + span * rng.uniform(i, 4),
                                                off + span * rng.uniform(i, 5)),
                                             1, rng.coin(i, 8) ? Color::Green : Color::Red);
            DistanceResult d = m.distance(a, b);
            double od = oracle.distance(a, b);
            CHECK(d.upper <= od + 1e-9);       // oracle paths are valid chains
            CHECK(od - d.upper <= 0.02 + 0.02 * d.upper);  // mesh converges to our value
            CHECK(d.lower <= od + 1e-9);
        }
    }
    // Level 2, coarser mesh.
    {
        DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
        MetricOracle m(cx);
        testing::ChainOracle oracle(cx, 4);
        CounterRng rng(777);
        auto recs = cx.records_at_stage(2);
        for (int i = 0; i < 10; ++i) {
            // Points inside one stage-2 K region with opposite colors.
            const DoublingRecord* r = recs[(7 * i) % recs.size()];
            Box3 k = to_box3(r->k_region);
            auto inside = [&](int slot0) {
                return rp(k.lo.x + (k.hi.x - k.lo.x) * (0.2 + 0.6 * rng.uniform(i, slot0)),
                          k.lo.y + (k.hi.y - k.lo.y) * (0.2 + 0.6 * rng.uniform(i, slot0 + 1)),
                          k.lo.z + (k.hi.z - k.lo.z) * (0.2 + 0.6 * rng.uniform(i, slot0 + 2)));
            };
            LabeledPoint a = cx.resolve_word(inside(0), 2, Color::Green);
            LabeledPoint b = cx.resolve_word(inside(3), 2, Color::Red);
            DistanceResult d = m.distance(a, b);
            double od = oracle.distance(a, b);
            CHECK(d.upper <= od + 1e-9);
            CHECK(od - d.upper <= 0.05 + 0.05 * d.upper);
        }
    }
}

TEST_CASE("witness chain invariants") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    MetricOracle m(cx);
    CounterRng rng(31);
    for (int i = 0; i < 200; ++i) {
        LabeledPoint a = m.sample(rng, 2 * i);
        LabeledPoint b = m.sample(rng, 2 * i + 1);
        DistanceResult d = m.distance(a, b);
        CHECK(d.lower <= d.upper);
        CHECK(d.chain_cost() == doctest::Approx(d.upper).epsilon(1e-12));
        for (const auto& hop : d.witness) {
            if (hop.kind != HopKind::Jump) continue;
            bool matches = false;
            for (const DoublingRecord& r : cx.records())
                if (hop.cost == r.jump_cost.to_double()) matches = true;
            CHECK(matches);
        }
    }
}

TEST_CASE("metric axioms report") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 3);
    MetricOracle m(cx);
    ExperimentReport rep = verify_metric_axioms(m, 1000, 0.02, 20250810);
    CHECK(rep.passed());
}

TEST_CASE("ball measure: whole space and Euclidean ball oracle") {
    DiamondComplex cx0 = build_complex(build_schedule(2, 3, true), 0);
    MetricOracle m0(cx0);
    LabeledPoint center = cx0.resolve_word(rp(0.5, 0.5, 0.5), 0);
    CHECK_THROWS_AS(m0.ball_measure(center, 0.1, 0, 1), std::invalid_argument);

    MeasureEstimate whole = m0.ball_measure(center, 2.0, 2000, 42);
    CHECK(whole.value == 1.0);

    // Level 0, r = 1/4: Lebesgue volume of the Euclidean ball.
    MeasureEstimate b = m0.ball_measure(center, 0.25, 200000, 42);
    double expected = 4.0 / 3.0 * M_PI * 0.25 * 0.25 * 0.25;
    CHECK(std::abs(b.value - expected) <= 3 * b.stderr_ + 1e-6);
    CHECK(b.value >= 0.0);
    CHECK(b.value <= 1.0);

    // Deterministic across serial/parallel execution.
    MeasureEstimate serial = m0.ball_measure(center, 0.25, 20000, 42, false);
    MeasureEstimate par = m0.ball_measure(center, 0.25, 20000, 42, true);
    CHECK(serial.value == par.value);
}

TEST_CASE("doubling at level 0: interior ratio is 8 up to MC error") {
    DiamondComplex cx = build_complex(build_schedule(2, 1, true), 0);
    MetricOracle m(cx);
    DoublingCheckConfig cfg;
    cfg.trials = 10;
    cfg.samples = 60000;
    cfg.r_min = 0.2;
    cfg.r_max = 0.25;
    ExperimentReport rep = verify_doubling(m, 0, 99, cfg);
    CHECK(rep.passed());
    int checked = 0;
    for (const auto& row : rep.rows)
        if (row.statistic == "doubling_ratio") {
            ++checked;
            CHECK(row.value > 2.0);   // boundary effects keep it below 8 sometimes
            CHECK(row.value < 12.0);
        }
    CHECK(checked > 0);
}

TEST_CASE("ball shape: projection preimage inclusions (toy j=2, l=1)") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    MetricOracle m(cx);
    CounterRng rng(7);
    LabeledPoint p = m.sample(rng, 123456);
    BallShapeConfig cfg;
    cfg.level_low = 1;
    cfg.r = 0.25;
    cfg.samples = 1000;
    ExperimentReport rep = verify_ball_shape(m, p, 2024, cfg);
    CHECK(rep.passed());
}

TEST_CASE("chromatic sheet count near a center stays bounded") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 3);
    MetricOracle m(cx);
    CounterRng rng(88);
    LabeledPoint center = m.sample(rng, 9999);
    double r = 0.1;
    int lg_r = discrete_log(r, cx.schedule());
    // Count distinct non-wildcard color patterns among sampled points within r.
    std::set<std::vector<int>> patterns;
    for (int i = 0; i < 4000; ++i) {
        LabeledPoint z = m.sample(rng, i);
        if (m.dist(center, z) > r) continue;
        std::vector<int> pat;
        for (Color c : z.word) pat.push_back((int)c);
        patterns.insert(pat);
    }
    double fitted_c = 4.0;
    CHECK((double)patterns.size() <= fitted_c * std::pow(2.0, cx.level() - lg_r));
}
