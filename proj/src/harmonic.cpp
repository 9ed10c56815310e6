#include "diamondlab/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diamondlab {

namespace {

std::string cell_key(std::int64_t ix, std::int64_t iy, std::int64_t iz, const std::string& fiber) {
    return std::to_string(ix) + "," + std::to_string(iy) + "," + std::to_string(iz) + "|" + fiber;
}

// Colors of `context` at the fiber stages of the level-`level` cell holding
// the voxel; '*' elsewhere-free stages are dropped from the key.
std::string fiber_of_cell(const DiamondComplex& cx, int level, const RPoint& center,
                          const ColorWord& context) {
    std::string s;
    for (int j = 1; j <= level; ++j) {
        if (!cx.doubled_region_at(j, center)) continue;
        Color c = (j - 1 < (int)context.size()) ? context[j - 1] : Color::Green;
        if (c == Color::Wildcard) c = Color::Green;
        s += color_char(c);
        s += std::to_string(j);
    }
    return s;
}

RPoint box_center(const Rational& side, std::int64_t ix, std::int64_t iy, std::int64_t iz) {
    return {Rational(2 * ix + 1) * side / Rational(2), Rational(2 * iy + 1) * side / Rational(2),
            Rational(2 * iz + 1) * side / Rational(2)};
}

struct SolveJob {
    std::shared_ptr<const GridDomain> domain;
    ColorWord context;
    int color_stage = 0;
    double weight = 1;
    std::int64_t vox0[3];
};

ColorWord with_stage(const ColorWord& w, int stage, Color c) {
    ColorWord out = w;
    if ((int)out.size() < stage) out.resize(stage, Color::Wildcard);
    out[stage - 1] = c;
    return out;
}

}  // namespace

double PiecewiseHarmonicField::energy() const {
    double e = 0;
    for (const auto& s : solves) e += s.weight * dirichlet_energy(s.field);
    return e;
}

double PiecewiseHarmonicField::covered_measure() const {
    double v = 0;
    for (const auto& s : solves) {
        double h = s.domain->h();
        for (const auto& c : s.domain->cells()) v += s.weight * c.weight * h * h * h;
    }
    return v;
}

void PiecewiseHarmonicField::build_lookup(const DiamondComplex& cx) {
    cx_ = &cx;
    Rational side = cx.schedule().side_len(level);
    voxels_per_cell_ = (int)std::llround(side.to_double() / lattice_h);
    by_cell_.clear();
    for (int si = 0; si < (int)solves.size(); ++si) {
        const PiecewiseSolve& s = solves[si];
        // Register every level cell the domain overlaps under the solve's
        // own context (per layer when doubled).
        int nv = (int)std::llround(s.domain->n() * s.domain->h() / lattice_h);
        for (std::int64_t ci = s.vox0[0] / voxels_per_cell_;
             ci <= (s.vox0[0] + nv - 1) / voxels_per_cell_; ++ci)
            for (std::int64_t cj = s.vox0[1] / voxels_per_cell_;
                 cj <= (s.vox0[1] + nv - 1) / voxels_per_cell_; ++cj)
                for (std::int64_t ck = s.vox0[2] / voxels_per_cell_;
                     ck <= (s.vox0[2] + nv - 1) / voxels_per_cell_; ++ck) {
                    RPoint cc = box_center(side, ci, cj, ck);
                    for (int layer = 0; layer < (s.color_stage ? 2 : 1); ++layer) {
                        ColorWord ctx = s.context;
                        if (s.color_stage && layer == 1)
                            ctx = with_stage(ctx, s.color_stage, Color::Red);
                        by_cell_[cell_key(ci, cj, ck, fiber_of_cell(cx, level, cc, ctx))]
                            .push_back(si);
                    }
                }
    }
    for (auto& [k, v] : by_cell_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

bool PiecewiseHarmonicField::gradient_at(const std::int64_t vox[3], const ColorWord& context,
                                         std::vector<Vec3>& out) const {
    std::int64_t ci = vox[0] / voxels_per_cell_, cj = vox[1] / voxels_per_cell_,
                 ck = vox[2] / voxels_per_cell_;
    Rational side = cx_->schedule().side_len(level);
    RPoint cc = box_center(side, ci, cj, ck);
    auto it = by_cell_.find(cell_key(ci, cj, ck, fiber_of_cell(*cx_, level, cc, context)));
    if (it == by_cell_.end()) return false;
    for (int si : it->second) {
        const PiecewiseSolve& s = solves[si];
        int li = (int)(vox[0] - s.vox0[0]), lj = (int)(vox[1] - s.vox0[1]),
            lk = (int)(vox[2] - s.vox0[2]);
        int n = s.domain->n();
        if (li < 0 || lj < 0 || lk < 0 || li >= n || lj >= n || lk >= n) continue;
        int layer = 0;
        if (s.color_stage) {
            Color c = (s.color_stage - 1 < (int)context.size()) ? context[s.color_stage - 1]
                                                                : Color::Green;
            layer = (c == Color::Red) ? 1 : 0;
        }
        GridDomain::Cell cell;
        cell.ci = li; cell.cj = lj; cell.ck = lk;
        cell.layer = layer;
        int m = 0;
        bool ok = true;
        for (int dk = 0; dk < 2 && ok; ++dk)
            for (int dj2 = 0; dj2 < 2 && ok; ++dj2)
                for (int di = 0; di < 2 && ok; ++di) {
                    std::int32_t id = s.domain->node_id(li + di, lj + dj2, lk + dk, layer);
                    if (id == GridDomain::kVoid) ok = false;
                    else cell.corner[m++] = id;
                }
        if (!ok) continue;
        out.resize(components);
        for (int comp = 0; comp < components; ++comp)
            out[comp] = s.field.cell_gradient(cell, comp);
        return true;
    }
    return false;
}

PiecewiseHarmonicField piecewise_harmonic(const DiamondComplex& cx, const LipschitzFunction& f,
                                          int level, HarmonicKind kind,
                                          const HarmonicOptions& opts) {
    if (level > cx.level())
        throw std::invalid_argument("piecewise_harmonic: level above built complex");
    if (kind == HarmonicKind::GateAware && level < 1)
        throw std::invalid_argument("piecewise_harmonic: gate-aware fields need level >= 1");

    Rational cell_side = cx.schedule().side_len(level);
    Rational h = cell_side / Rational(3 * opts.refine);
    double hd = h.to_double();

    std::vector<SolveJob> jobs;
    auto vox_of = [&](const RPoint& origin, std::int64_t out[3]) {
        for (int d = 0; d < 3; ++d) out[d] = Rational::floor_div(origin[d], h);
    };

    if (kind == HarmonicKind::PerCell) {
        std::int64_t ncells = Rational::floor_div(Rational(1), cell_side);
        int n = 3 * opts.refine;
        for (std::int64_t iz = 0; iz < ncells; ++iz)
            for (std::int64_t iy = 0; iy < ncells; ++iy)
                for (std::int64_t ix = 0; ix < ncells; ++ix) {
                    RCube q{{Rational(ix) * cell_side, Rational(iy) * cell_side,
                             Rational(iz) * cell_side},
                            cell_side};
                    RPoint center = q.center();
                    std::vector<int> fs;
                    for (int j = 1; j <= level; ++j)
                        if (cx.doubled_region_at(j, center)) fs.push_back(j);
                    auto dom = GridDomain::make_cube(q, n);
                    for (int mask = 0; mask < (1 << fs.size()); ++mask) {
                        SolveJob job;
                        job.domain = dom;
                        job.context.assign(level, Color::Wildcard);
                        for (std::size_t b = 0; b < fs.size(); ++b)
                            job.context[fs[b] - 1] = (mask >> b) & 1 ? Color::Red : Color::Green;
                        job.weight = std::pow(0.5, (double)fs.size());
                        vox_of(q.origin, job.vox0);
                        jobs.push_back(std::move(job));
                    }
                }
    } else {
        Rational prev_side = cx.schedule().side_len(level - 1);
        std::int64_t ncells = Rational::floor_div(Rational(1), prev_side);
        int nq = (int)Rational::floor_div(prev_side, h);
        for (std::int64_t iz = 0; iz < ncells; ++iz)
            for (std::int64_t iy = 0; iy < ncells; ++iy)
                for (std::int64_t ix = 0; ix < ncells; ++ix) {
                    RCube q{{Rational(ix) * prev_side, Rational(iy) * prev_side,
                             Rational(iz) * prev_side},
                            prev_side};
                    RPoint center = q.center();
                    std::vector<int> fs;
                    for (int j = 1; j < level; ++j)
                        if (cx.doubled_region_at(j, center)) fs.push_back(j);
                    bool doubled = cx.cell_doubled(level, q);
                    for (int mask = 0; mask < (1 << fs.size()); ++mask) {
                        ColorWord sigma(level, Color::Wildcard);
                        for (std::size_t b = 0; b < fs.size(); ++b)
                            sigma[fs[b] - 1] = (mask >> b) & 1 ? Color::Red : Color::Green;
                        double wsigma = std::pow(0.5, (double)fs.size());
                        if (doubled) {
                            RCube k = q.middle_third();
                            RCube gate = q.central(cx.schedule().stage(level).gate_side);
                            SolveJob annulus;
                            annulus.domain = GridDomain::make_doubled_annulus(q, k, gate, nq);
                            annulus.context = with_stage(sigma, level, Color::Green);
                            annulus.color_stage = level;
                            annulus.weight = wsigma;
                            vox_of(q.origin, annulus.vox0);
                            jobs.push_back(std::move(annulus));
                            int ngate = (int)Rational::floor_div(gate.side, h);
                            for (Color c : {Color::Green, Color::Red}) {
                                SolveJob gj;
                                gj.domain = GridDomain::make_cube(gate, ngate);
                                gj.context = with_stage(sigma, level, c);
                                gj.weight = wsigma * 0.5;
                                vox_of(gate.origin, gj.vox0);
                                jobs.push_back(std::move(gj));
                            }
                        } else {
                            // Subdivided cell; it may hold a smaller gate cube
                            // created one stage earlier.
                            auto holder = cx.doubled_region_at(level - 1, center);
                            bool strict_gate =
                                holder && holder->gate_cell.side < q.side &&
                                q.contains_open(holder->gate_cell.center());
                            if (strict_gate) {
                                SolveJob outer;
                                outer.domain = GridDomain::make_cube_with_hole(
                                    q, holder->gate_cell, nq, DomainKind::CubeMinusGate);
                                outer.context = sigma;
                                outer.weight = wsigma;
                                vox_of(q.origin, outer.vox0);
                                jobs.push_back(std::move(outer));
                                int ngate = (int)Rational::floor_div(holder->gate_cell.side, h);
                                SolveJob gj;
                                gj.domain = GridDomain::make_cube(holder->gate_cell, ngate);
                                gj.context = sigma;
                                gj.weight = wsigma;
                                vox_of(holder->gate_cell.origin, gj.vox0);
                                jobs.push_back(std::move(gj));
                            } else {
                                SolveJob plain;
                                plain.domain = GridDomain::make_cube(q, nq);
                                plain.context = sigma;
                                plain.weight = wsigma;
                                vox_of(q.origin, plain.vox0);
                                jobs.push_back(std::move(plain));
                            }
                        }
                    }
                }
    }

    PiecewiseHarmonicField out;
    out.level = level;
    out.kind = kind;
    out.components = f.components();
    out.lattice_h = hd;
    out.solves.resize(jobs.size());
    SolveOptions sopts;
    sopts.tol = opts.tol;
    sopts.parallel = false;  // solves are independent; parallelize across them
    std::int64_t njobs = (std::int64_t)jobs.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
    for (std::int64_t i = 0; i < njobs; ++i) {
        const SolveJob& job = jobs[i];
        auto boundary = [&](const Vec3& pos, int layer, int comp) {
            ColorWord ctx = job.context;
            if (job.color_stage && layer == 1)
                ctx = with_stage(ctx, job.color_stage, Color::Red);
            return f.eval_at(to_rpoint(pos), ctx, comp);
        };
        PiecewiseSolve& s = out.solves[i];
        s.domain = job.domain;
        s.field = solve_dirichlet(job.domain, boundary, f.components(), sopts);
        s.context = job.context;
        s.color_stage = job.color_stage;
        s.weight = job.weight;
        s.vox0[0] = job.vox0[0];
        s.vox0[1] = job.vox0[1];
        s.vox0[2] = job.vox0[2];
    }
    out.build_lookup(cx);
    return out;
}

OrthogonalityResult check_orthogonality(const DiamondComplex& cx, const LipschitzFunction& f,
                                        int level, const HarmonicOptions& opts) {
    PiecewiseHarmonicField h = piecewise_harmonic(cx, f, level, HarmonicKind::GateAware, opts);
    PiecewiseHarmonicField g = piecewise_harmonic(cx, f, level, HarmonicKind::PerCell, opts);
    HarmonicOptions prev_opts = opts;
    // Same global lattice at the coarser level.
    prev_opts.refine = (int)cx.schedule().stage(level).subdivision * opts.refine;
    PiecewiseHarmonicField gp =
        piecewise_harmonic(cx, f, level - 1, HarmonicKind::PerCell, prev_opts);

    OrthogonalityResult r;
    r.level = level;
    r.e_g = g.energy();
    r.e_h = h.energy();
    r.e_g_prev = gp.energy();

    double vol = h.lattice_h * h.lattice_h * h.lattice_h;
    std::vector<Vec3> gh, gg, ggp;
    for (const auto& s : h.solves) {
        for (const auto& c : s.domain->cells()) {
            std::int64_t vox[3] = {s.vox0[0] + c.ci, s.vox0[1] + c.cj, s.vox0[2] + c.ck};
            ColorWord ctx = s.context;
            if (s.color_stage && c.layer == 1) ctx = with_stage(ctx, s.color_stage, Color::Red);
            gh.resize(h.components);
            for (int comp = 0; comp < h.components; ++comp)
                gh[comp] = s.field.cell_gradient(c, comp);
            if (!g.gradient_at(vox, ctx, gg) || !gp.gradient_at(vox, ctx, ggp))
                throw std::logic_error("check_orthogonality: lattice lookup failed");
            double w = s.weight * c.weight * vol;
            for (int comp = 0; comp < h.components; ++comp) {
                const Vec3 &vh = gh[comp], &vg = gg[comp], &vp = ggp[comp];
                r.p1 += w * (vh - vg).dot(vh);
                r.p9 += w * vp.dot(vh - vp);
                r.grad_diff_gh += w * (vg - vh).dot(vg - vh);
                r.grad_diff_hgp += w * (vh - vp).dot(vh - vp);
            }
        }
    }
    return r;
}

std::vector<Vec3> horizontal_gradient(const DiamondComplex& cx, const LipschitzFunction& f,
                                      const LabeledPoint& p, double step, bool* step_shrunk) {
    int level = p.level();
    RCube cell = cx.cell_of(level, p.base);
    Box3 cb = to_box3(cell);
    Vec3 x = p.pos();
    double room = 1e300;
    for (int d = 0; d < 3; ++d)
        room = std::min({room, x[d] - cb.lo[d], cb.hi[d] - x[d]});
    if (room <= 0)
        throw std::invalid_argument("horizontal_gradient: point not interior to its cell");
    double delta = step;
    bool shrunk = false;
    if (delta > 0.9 * room) {
        delta = 0.9 * room;
        shrunk = true;
    }
    if (step_shrunk) *step_shrunk = shrunk;
    std::vector<Vec3> out(f.components());
    for (int comp = 0; comp < f.components(); ++comp) {
        for (int d = 0; d < 3; ++d) {
            Vec3 hi = x, lo = x;
            hi[d] += delta;
            lo[d] -= delta;
            double vhi = f.eval_at(to_rpoint(hi), p.word, comp);
            double vlo = f.eval_at(to_rpoint(lo), p.word, comp);
            out[comp][d] = (vhi - vlo) / (2 * delta);
        }
    }
    return out;
}

}  // namespace diamondlab
