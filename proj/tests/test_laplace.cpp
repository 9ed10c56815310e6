#include "doctest.h"

#include <cmath>

#include "diamondlab/laplace.hpp"
#include "diamondlab/rng.hpp"

using namespace diamondlab;

namespace {
RCube unit_cube() { return {{Rational(0), Rational(0), Rational(0)}, Rational(1)}; }
}  // namespace

TEST_CASE("constant boundary gives the constant field") {
    auto dom = GridDomain::make_cube(unit_cube(), 8);
    GridField f = solve_dirichlet(dom, [](const Vec3&, int, int) { return 3.5; });
    for (int id = 0; id < dom->node_count(); ++id)
        CHECK(f.value(id) == doctest::Approx(3.5).epsilon(1e-10));
    CHECK(dirichlet_energy(f) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("affine boundary reproduces the affine function exactly") {
    Vec3 a{0.3, -1.1, 0.7};
    auto affine = [&](const Vec3& p, int, int) { return a.dot(p) + 0.25; };
    for (auto dom : {GridDomain::make_cube(unit_cube(), 12),
                     GridDomain::make_cube_with_hole(unit_cube(), unit_cube().middle_third(), 12,
                                                     DomainKind::CubicalAnnulus)}) {
        SolveOptions opts;
        opts.tol = 1e-10;
        GridField f = solve_dirichlet(dom, affine, 1, opts);
        for (int id = 0; id < dom->node_count(); ++id) {
            Vec3 p = dom->node_pos(id);
            CHECK(f.value(id) == doctest::Approx(a.dot(p) + 0.25).epsilon(1e-8));
        }
        CHECK(laplacian_residual(f) <= 1e-9);
    }
}

TEST_CASE("affine data is exact across the doubled-annulus junction") {
    RCube q = unit_cube();
    RCube k = q.middle_third();
    RCube gate = q.central(Rational(1, 9));
    auto dom = GridDomain::make_doubled_annulus(q, k, gate, 18);
    Vec3 a{1.0, 0.5, -0.25};
    SolveOptions opts;
    opts.tol = 1e-10;
    GridField f = solve_dirichlet(dom, [&](const Vec3& p, int, int) { return a.dot(p); }, 1, opts);
    for (int id = 0; id < dom->node_count(); ++id)
        CHECK(f.value(id) == doctest::Approx(a.dot(dom->node_pos(id))).epsilon(1e-8));
    // Gradient is a everywhere, so E = |a|^2 * (Lebesgue volume of Q minus gate).
    double vol = 1.0 - 1.0 / 729.0;
    CHECK(dirichlet_energy(f) == doctest::Approx(a.dot(a) * vol).epsilon(1e-9));
}

TEST_CASE("equal-color data on the doubled annulus collapses to the single annulus") {
    RCube q = unit_cube();
    RCube k = q.middle_third();
    RCube gate = q.central(Rational(1, 9));
    auto doubled = GridDomain::make_doubled_annulus(q, k, gate, 18);
    auto single = GridDomain::make_cube_with_hole(q, gate, 18, DomainKind::CubeMinusGate);
    CounterRng rng(5);
    auto data = [&](const Vec3& p, int, int) {
        return std::sin(5 * p.x) + 0.5 * std::cos(3 * p.y + p.z);
    };
    SolveOptions opts;
    opts.tol = 1e-9;
    GridField fd = solve_dirichlet(doubled, data, 1, opts);
    GridField fs = solve_dirichlet(single, data, 1, opts);
    // Compare on matching lattice nodes of layer 0.
    for (int i = 0; i <= 18; ++i)
        for (int j = 0; j <= 18; ++j)
            for (int kk = 0; kk <= 18; ++kk) {
                auto ds = single->node_id(i, j, kk, 0);
                auto dd = doubled->node_id(i, j, kk, 0);
                if (ds == GridDomain::kVoid || dd == GridDomain::kVoid) continue;
                CHECK(fd.value(dd) == doctest::Approx(fs.value(ds)).epsilon(1e-6));
            }
    CHECK(dirichlet_energy(fd) == doctest::Approx(dirichlet_energy(fs)).epsilon(1e-7));
}

TEST_CASE("radial benchmark: profile and closed-form energy") {
    double s = 1.0 / 3.0, L = 1.0, a = 1.0;
    double A = a * s * L / (2 * (L - s));
    double B = -2 * A / L;
    double exact_energy = 4 * M_PI * A * A * 2 * (L - s) / (s * L);  // = 2 pi a^2 s L/(L-s)
    auto boundary = [&](const Vec3& p, int, int) {
        return (p.norm() <= (s + L) / 4) ? a : 0.0;  // inner shell at s/2, outer at L/2
    };
    double prev_err = 1e9;
    for (int n : {24, 48}) {
        auto dom = GridDomain::make_spherical_annulus(s / 2, L / 2, n);
        SolveOptions opts;
        opts.tol = 1e-7;
        GridField f = solve_dirichlet(dom, boundary, 1, opts);
        // Radial profile at interior nodes.
        double max_profile_err = 0;
        for (int id = 0; id < dom->node_count(); ++id) {
            if (dom->is_dirichlet(id)) continue;
            double r = dom->node_pos(id).norm();
            if (r < s / 2 + 3.0 / n || r > L / 2 - 3.0 / n) continue;  // skip stairstep skin
            max_profile_err = std::max(max_profile_err, std::abs(f.value(id) - (A / r + B)));
        }
        CHECK(max_profile_err < 12.0 / n);
        double err = std::abs(form_energy(f) - exact_energy) / exact_energy;
        CHECK(err < prev_err);
        // Midpoint quadrature converges to the same value from below.
        CHECK(dirichlet_energy(f) < form_energy(f));
        prev_err = err;
    }
    CHECK(prev_err < 0.08);
}

TEST_CASE("maximum principle on random boundary data") {
    auto dom = GridDomain::make_cube(unit_cube(), 10);
    CounterRng rng(77);
    auto data = [&](const Vec3& p, int, int) {
        return std::sin(13 * p.x + 7 * p.y) * std::cos(5 * p.z);
    };
    GridField f = solve_dirichlet(dom, data);
    double lo = 1e300, hi = -1e300;
    for (const auto& dn : dom->dirichlet_nodes()) {
        lo = std::min(lo, f.value(dn.id));
        hi = std::max(hi, f.value(dn.id));
    }
    for (int id = 0; id < dom->node_count(); ++id) {
        CHECK(f.value(id) >= lo - 1e-9);
        CHECK(f.value(id) <= hi + 1e-9);
    }
}

TEST_CASE("serial and OpenMP solves agree") {
    auto dom = GridDomain::make_cube(unit_cube(), 16);
    auto data = [](const Vec3& p, int, int) { return p.x * p.x - 0.5 * p.y * p.y; };
    SolveOptions ser;
    ser.parallel = false;
    SolveOptions par;
    par.parallel = true;
    GridField a = solve_dirichlet(dom, data, 1, ser);
    GridField b = solve_dirichlet(dom, data, 1, par);
    for (int id = 0; id < dom->node_count(); ++id)
        CHECK(a.value(id) == doctest::Approx(b.value(id)).epsilon(1e-9));
}

TEST_CASE("misaligned hole geometry is rejected") {
    RCube q = unit_cube();
    RCube hole{{Rational(1, 5), Rational(1, 5), Rational(1, 5)}, Rational(1, 7)};
    CHECK_THROWS_AS(GridDomain::make_cube_with_hole(q, hole, 9, DomainKind::CubicalAnnulus),
                    std::invalid_argument);
}

TEST_CASE("vector solves are componentwise") {
    auto dom = GridDomain::make_cube(unit_cube(), 8);
    auto data = [](const Vec3& p, int, int comp) { return comp == 0 ? p.x : (comp == 1 ? p.y * 2 : 0.0); };
    GridField f = solve_dirichlet(dom, data, 3);
    for (int id = 0; id < dom->node_count(); ++id) {
        Vec3 p = dom->node_pos(id);
        CHECK(f.value(id, 0) == doctest::Approx(p.x).epsilon(1e-8));
        CHECK(f.value(id, 1) == doctest::Approx(2 * p.y).epsilon(1e-8));
        CHECK(f.value(id, 2) == 0.0);
    }
    CHECK(dirichlet_energy(f) == doctest::Approx(1.0 + 4.0).epsilon(1e-10));
}
