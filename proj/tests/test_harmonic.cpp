#include "doctest.h"

#include <cmath>

#include "diamondlab/harmonic.hpp"

using namespace diamondlab;

namespace {
RPoint rp(double x, double y, double z) {
    return {rational_from_double(x), rational_from_double(y), rational_from_double(z)};
}
}  // namespace

TEST_CASE("coordinate function: g and h reproduce x1, all cross terms vanish") {
    DiamondComplex cx = build_complex(build_schedule(2, 1, true), 1);
    MetricOracle m(cx);
    LipschitzFunction f = LipschitzFunction::coordinate(m, 0);
    HarmonicOptions opts;
    opts.refine = 2;
    for (HarmonicKind kind : {HarmonicKind::PerCell, HarmonicKind::GateAware}) {
        PiecewiseHarmonicField ph = piecewise_harmonic(cx, f, 1, kind, opts);
        CHECK(ph.covered_measure() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ph.energy() == doctest::Approx(1.0).epsilon(1e-9));
        for (const auto& s : ph.solves)
            for (int id = 0; id < s.domain->node_count(); ++id)
                CHECK(s.field.value(id) == doctest::Approx(s.domain->node_pos(id).x).epsilon(1e-8));
    }
    OrthogonalityResult r = check_orthogonality(cx, f, 1, opts);
    CHECK(std::abs(r.p1) <= 1e-10);
    CHECK(std::abs(r.p9) <= 1e-10);
    CHECK(r.e_g == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.e_h == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.e_g_prev == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("energy bound by the Lipschitz constant and monotone chain (toy level 1)") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    MetricOracle m(cx);
    LipschitzFunction f = LipschitzFunction::macshane(m, 5, 1.0, 31337);
    double glip = f.lipschitz_bound();
    HarmonicOptions opts;
    opts.refine = 2;
    OrthogonalityResult r = check_orthogonality(cx, f, 1, opts);
    double slack = 0.08 * glip * glip;
    CHECK(r.e_g <= glip * glip + slack);
    CHECK(r.e_h <= glip * glip + slack);
    CHECK(r.e_g_prev <= r.e_h + slack);
    CHECK(r.e_h <= r.e_g + slack);
    // p14/p15 identities from the same fields.
    CHECK(r.identity_gap() < 0.05);
    double p15_gap = std::abs((r.e_h - r.e_g_prev) - r.grad_diff_hgp) /
                     std::max({r.e_h, r.e_g_prev, 1e-30});
    CHECK(p15_gap < 0.05);
}

TEST_CASE("orthogonality residuals shrink under refinement (MacShane, toy j=1)") {
    DiamondComplex cx = build_complex(build_schedule(2, 1, true), 1);
    MetricOracle m(cx);
    LipschitzFunction f = LipschitzFunction::macshane(m, 6, 1.0, 777);
    double prev1 = 1e9, prev9 = 1e9;
    for (int refine : {1, 2, 4}) {
        HarmonicOptions opts;
        opts.refine = refine;
        OrthogonalityResult r = check_orthogonality(cx, f, 1, opts);
        CHECK(r.p1_normalized() <= prev1 * 1.05 + 1e-12);
        CHECK(r.p9_normalized() <= prev9 * 1.05 + 1e-12);
        prev1 = r.p1_normalized();
        prev9 = r.p9_normalized();
    }
    CHECK(prev1 < 0.05);
    CHECK(prev9 < 0.05);
}

TEST_CASE("maximum principle for vector-valued gate-aware fields") {
    DiamondComplex cx = build_complex(build_schedule(2, 1, true), 1);
    MetricOracle m(cx);
    LipschitzFunction f = LipschitzFunction::macshane(m, 4, 1.0, 99, 3);
    HarmonicOptions opts;
    opts.refine = 2;
    PiecewiseHarmonicField h = piecewise_harmonic(cx, f, 1, HarmonicKind::GateAware, opts);
    for (const auto& s : h.solves) {
        double bmax = 0;
        for (const auto& dn : s.domain->dirichlet_nodes()) {
            double nrm = 0;
            for (int c = 0; c < 3; ++c) nrm += s.field.value(dn.id, c) * s.field.value(dn.id, c);
            bmax = std::max(bmax, nrm);
        }
        for (int id = 0; id < s.domain->node_count(); ++id) {
            double nrm = 0;
            for (int c = 0; c < 3; ++c) nrm += s.field.value(id, c) * s.field.value(id, c);
            CHECK(nrm <= bmax + 1e-9);
        }
    }
}

TEST_CASE("harmonic solve has minimal energy among same-boundary competitors") {
    DiamondComplex cx = build_complex(build_schedule(2, 1, true), 1);
    MetricOracle m(cx);
    LipschitzFunction f = LipschitzFunction::macshane(m, 5, 1.0, 2024);
    RCube q{{Rational(0), Rational(0), Rational(0)}, Rational(1, 3)};
    auto dom = GridDomain::make_cube(q, 8);
    auto boundary = [&](const Vec3& p, int, int) { return f.eval_at(to_rpoint(p), {}); };
    GridField sol = solve_dirichlet(dom, boundary);
    // MacShane-style competitor: nodal values of f itself.
    GridField comp = sol;
    for (int id = 0; id < dom->node_count(); ++id)
        comp.value(id) = f.eval_at(to_rpoint(dom->node_pos(id)), {});
    CHECK(dirichlet_energy(sol) <= dirichlet_energy(comp) + 1e-10);
}

TEST_CASE("interior Lipschitz estimate for discrete harmonic fields") {
    // Difference quotients in B(p0, r/3) bounded by fitted-C/r * L1 norm on B(p0, r).
    RCube q{{Rational(0), Rational(0), Rational(0)}, Rational(1)};
    auto dom = GridDomain::make_cube(q, 24);
    CounterRng rng(4);
    auto boundary = [&](const Vec3& p, int, int) {
        return std::sin(9 * p.x + 3 * p.y) + std::cos(7 * p.z - 2 * p.x);
    };
    GridField u = solve_dirichlet(dom, boundary);
    Vec3 center{0.5, 0.5, 0.5};
    double r = 0.45, h = dom->h();
    double l1 = 0;
    for (int id = 0; id < dom->node_count(); ++id)
        if (euclid(dom->node_pos(id), center) <= r) l1 += std::abs(u.value(id)) * h * h * h;
    double max_dq = 0;
    for (const auto& c : dom->cells()) {
        Vec3 cc{dom->origin().x + (c.ci + 0.5) * h, dom->origin().y + (c.cj + 0.5) * h,
                dom->origin().z + (c.ck + 0.5) * h};
        if (euclid(cc, center) > r / 3) continue;
        Vec3 g = u.cell_gradient(c);
        max_dq = std::max(max_dq, g.norm());
    }
    double fitted_c = 40.0;
    CHECK(max_dq * r / std::max(l1, 1e-30) <= fitted_c);
}

TEST_CASE("horizontal gradient: coordinate, affine, distance-to-point") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    MetricOracle m(cx);
    LabeledPoint p = cx.resolve_word(rp(0.21, 0.55, 0.83), 2);

    LipschitzFunction fy = LipschitzFunction::coordinate(m, 1);
    auto gy = horizontal_gradient(cx, fy, p, 1e-4);
    CHECK(gy[0].x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gy[0].y == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gy[0].z == doctest::Approx(0.0).epsilon(1e-9));

    Vec3 a{0.4, -2.0, 1.25};
    LipschitzFunction fa = LipschitzFunction::affine(m, a, 3.0);
    auto ga = horizontal_gradient(cx, fa, p, 1e-4);
    CHECK(ga[0].x == doctest::Approx(a.x).epsilon(1e-8));
    CHECK(ga[0].y == doctest::Approx(a.y).epsilon(1e-8));
    CHECK(ga[0].z == doctest::Approx(a.z).epsilon(1e-8));

    LabeledPoint anchor = cx.resolve_word(rp(0.9, 0.1, 0.1), 2);
    LipschitzFunction fd = LipschitzFunction::distance_to_point(m, anchor);
    auto gd = horizontal_gradient(cx, fd, p, 1e-5);
    Vec3 expected = (1.0 / euclid(p.pos(), anchor.pos())) * (p.pos() - anchor.pos());
    CHECK(gd[0].x == doctest::Approx(expected.x).epsilon(1e-3));
    CHECK(gd[0].y == doctest::Approx(expected.y).epsilon(1e-3));
    CHECK(gd[0].z == doctest::Approx(expected.z).epsilon(1e-3));

    bool shrunk = false;
    horizontal_gradient(cx, fa, p, 1.0, &shrunk);
    CHECK(shrunk);
}

TEST_CASE("macshane respects its Lipschitz bound") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    MetricOracle m(cx);
    for (int comps : {1, 4}) {
        LipschitzFunction f = LipschitzFunction::macshane(m, 5, 2.0, 555, comps);
        CHECK(f.verify_lipschitz(500, 9) <= f.lipschitz_bound() * (1 + 1e-9));
    }
}
