#pragma once

#include <string>
#include <unordered_map>

#include "diamondlab/complex.hpp"
#include "diamondlab/laplace.hpp"
#include "diamondlab/lipschitz.hpp"
#include "diamondlab/report.hpp"

namespace diamondlab {

enum class HarmonicKind {
    PerCell,    // harmonic inside every cell, boundary data on the 2-skeleton
    GateAware,  // harmonic on doubled annuli/gates, data on the harmonic skeleton
};

/// One solved patch of a piecewise harmonic field: its domain, the fiber
/// word giving the colors of the patch, and the external measure weight
/// (2^-|fiber|; the stage-level halving of doubled copies lives in the
/// domain's cell weights).
struct PiecewiseSolve {
    std::shared_ptr<const GridDomain> domain;
    GridField field;
    ColorWord context;     // color context of the patch (layer 0 colors)
    int color_stage = 0;   // stage whose color layer 1 flips (doubled domains)
    double weight = 1;
    std::int64_t vox0[3];  // domain origin in global lattice units
};

/// A piecewise harmonic approximation at one level, on a global lattice of
/// spacing slen(X_level)/(3 refine).
class PiecewiseHarmonicField {
  public:
    int level = 0;
    HarmonicKind kind = HarmonicKind::PerCell;
    int components = 1;
    double lattice_h = 0;
    std::vector<PiecewiseSolve> solves;

    /// Measure-weighted Dirichlet energy over the whole level.
    double energy() const;
    /// Total measure covered (should be 1 within quadrature rounding).
    double covered_measure() const;

    /// Gradient of the patch covering a global lattice voxel under a color
    /// context (one Vec3 per component). Returns false if uncovered.
    bool gradient_at(const std::int64_t vox[3], const ColorWord& context,
                     std::vector<Vec3>& out) const;

    void build_lookup(const DiamondComplex& cx);

  private:
    // Key: level cell index plus fiber colors; small candidate lists because
    // gate cubes share their level cell with the surrounding annulus.
    std::unordered_map<std::string, std::vector<int>> by_cell_;
    int voxels_per_cell_ = 0;
    const DiamondComplex* cx_ = nullptr;
};

struct HarmonicOptions {
    int refine = 2;       // lattice h = slen(X_level) / (3 * refine)
    double tol = 1e-8;
    bool parallel = true;
};

/// Builds g_level f (PerCell) or h_level f (GateAware).
PiecewiseHarmonicField piecewise_harmonic(const DiamondComplex& cx, const LipschitzFunction& f,
                                          int level, HarmonicKind kind,
                                          const HarmonicOptions& opts = {});

/// Energies and orthogonality cross terms at one level, all computed with
/// the midpoint quadrature on the shared lattice.
struct OrthogonalityResult {
    int level = 0;
    double e_g = 0;        // E[g_level]
    double e_h = 0;        // E[h_level]
    double e_g_prev = 0;   // E[g_{level-1}]
    double p1 = 0;         // int (grad h - grad g) . grad h dmu
    double p9 = 0;         // int grad(g_prev) . (grad h - grad g_prev) dmu
    double grad_diff_gh = 0;   // || grad g - grad h ||^2
    double grad_diff_hgp = 0;  // || grad h - grad g_prev ||^2

    double p1_normalized() const { return e_h > 0 ? std::abs(p1) / e_h : std::abs(p1); }
    double p9_normalized() const { return e_h > 0 ? std::abs(p9) / e_h : std::abs(p9); }
    /// Relative gap in E[g] - E[h] = ||grad g - grad h||^2.
    double identity_gap() const {
        double lhs = e_g - e_h;
        double scale = std::max({e_g, e_h, 1e-30});
        return std::abs(lhs - grad_diff_gh) / scale;
    }
};

OrthogonalityResult check_orthogonality(const DiamondComplex& cx, const LipschitzFunction& f,
                                        int level, const HarmonicOptions& opts = {});

/// Central-difference horizontal gradient along the sheet of p (word held
/// fixed); one row per component. Shrinks the step to stay inside p's cell
/// and sets *step_shrunk when it had to.
std::vector<Vec3> horizontal_gradient(const DiamondComplex& cx, const LipschitzFunction& f,
                                      const LabeledPoint& p, double step,
                                      bool* step_shrunk = nullptr);

}  // namespace diamondlab
