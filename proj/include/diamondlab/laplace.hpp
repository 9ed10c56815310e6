#pragma once

#include <functional>
#include <memory>

#include "diamondlab/grid.hpp"

namespace diamondlab {

struct SolveOptions {
    double tol = 1e-8;     // sup norm of the scaled 7-point Laplacian residual
    int max_iter = 50000;
    bool parallel = true;  // OpenMP kernels; serial reference when false
};

struct SolveStats {
    int iterations = 0;
    double residual = 0;   // final scaled residual
    bool converged = false;
};

/// Dirichlet boundary data: value at a boundary node per component. The
/// layer distinguishes the two copies of a doubled domain.
using BoundaryFn = std::function<double(const Vec3& pos, int layer, int comp)>;

/// Solves the weighted-Laplace problem on the domain (energy minimization
/// under the boundary data) with Jacobi-preconditioned conjugate gradients,
/// componentwise. Throws std::runtime_error on non-convergence, reporting
/// the residual, unless stats is provided (then flags it there).
GridField solve_dirichlet(std::shared_ptr<const GridDomain> dom, const BoundaryFn& boundary,
                          int components = 1, const SolveOptions& opts = {},
                          SolveStats* stats = nullptr);

/// Scaled sup-norm residual of the interior equations for a given field.
double laplacian_residual(const GridField& f, int comp = 0);

}  // namespace diamondlab
