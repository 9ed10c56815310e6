#include "diamondlab/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace diamondlab {

namespace {

/// CSR form of the energy stencil restricted to unknowns, with the
/// Dirichlet part of each row split off for the right-hand side.
class LaplaceSystem {
  public:
    explicit LaplaceSystem(const GridDomain& dom) : dom_(dom) {
        int nu = dom.unknown_count();
        int nn = dom.node_count();
        diag_.assign(nn, 0.0);
        std::vector<std::vector<std::pair<std::int32_t, double>>> adj(nn);

        // Edge weights: h * average of the four incident cell weights,
        // accumulated per layer over the lattice.
        double h = dom.h();
        int n = dom.n();
        auto add_edge = [&](std::int32_t a, std::int32_t b, double w) {
            if (a == GridDomain::kVoid || b == GridDomain::kVoid || w <= 0) return;
            w *= dom.edge_scale(a, b);
            adj[a].push_back({b, w});
            adj[b].push_back({a, w});
            diag_[a] += w;
            diag_[b] += w;
        };
        auto cw = [&](int ci, int cj, int ck, int layer) -> double {
            if (ci < 0 || cj < 0 || ck < 0 || ci >= n || cj >= n || ck >= n) return 0.0;
            return dom.cell_weight(ci, cj, ck, layer);
        };
        for (int layer = 0; layer < dom.layers(); ++layer)
            for (int k = 0; k <= n; ++k)
                for (int j = 0; j <= n; ++j)
                    for (int i = 0; i <= n; ++i) {
                        std::int32_t a = dom.node_id(i, j, k, layer);
                        if (a == GridDomain::kVoid) continue;
                        // +x, +y, +z edges; each (layer, lattice edge) once,
                        // weighted by that layer's incident cells only.
                        if (i < n) {
                            double w = cw(i, j - 1, k - 1, layer) + cw(i, j, k - 1, layer) +
                                       cw(i, j - 1, k, layer) + cw(i, j, k, layer);
                            add_edge(a, dom.node_id(i + 1, j, k, layer), w * h / 4);
                        }
                        if (j < n) {
                            double w = cw(i - 1, j, k - 1, layer) + cw(i, j, k - 1, layer) +
                                       cw(i - 1, j, k, layer) + cw(i, j, k, layer);
                            add_edge(a, dom.node_id(i, j + 1, k, layer), w * h / 4);
                        }
                        if (k < n) {
                            double w = cw(i - 1, j - 1, k, layer) + cw(i - 1, j, k, layer) +
                                       cw(i, j - 1, k, layer) + cw(i, j, k, layer);
                            add_edge(a, dom.node_id(i, j, k + 1, layer), w * h / 4);
                        }
                    }

        // CSR over unknowns (ids [0, nu) are unknowns by construction).
        row_ptr_.assign(nu + 1, 0);
        for (int r = 0; r < nu; ++r) row_ptr_[r + 1] = row_ptr_[r] + (int)adj[r].size();
        cols_.resize(row_ptr_[nu]);
        w_.resize(row_ptr_[nu]);
        for (int r = 0; r < nu; ++r) {
            int at = row_ptr_[r];
            for (auto& [c, w] : adj[r]) {
                cols_[at] = c;
                w_[at] = w;
                ++at;
            }
        }
        nu_ = nu;
        nn_ = nn;
    }

    int unknowns() const { return nu_; }
    double diag(int r) const { return diag_[r]; }

    /// b_r = sum over Dirichlet neighbors of w * value.
    std::vector<double> rhs(const std::vector<double>& full_values) const {
        std::vector<double> b(nu_, 0.0);
        for (int r = 0; r < nu_; ++r)
            for (int t = row_ptr_[r]; t < row_ptr_[r + 1]; ++t)
                if (cols_[t] >= nu_) b[r] += w_[t] * full_values[cols_[t]];
        return b;
    }

    /// y = A x (x over unknowns).
    void apply(const std::vector<double>& x, std::vector<double>& y, bool parallel) const {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
        for (int r = 0; r < nu_; ++r) {
            double s = diag_[r] * x[r];
            for (int t = row_ptr_[r]; t < row_ptr_[r + 1]; ++t)
                if (cols_[t] < nu_) s -= w_[t] * x[cols_[t]];
            y[r] = s;
        }
    }

  private:
    const GridDomain& dom_;
    int nu_ = 0, nn_ = 0;
    std::vector<int> row_ptr_;
    std::vector<std::int32_t> cols_;
    std::vector<double> w_;
    std::vector<double> diag_;
};

/// Dot product with a fixed chunk decomposition: the result does not depend
/// on the number of OpenMP threads.
double det_dot(const std::vector<double>& a, const std::vector<double>& b, bool parallel) {
    constexpr int kChunks = 256;
    std::size_t n = a.size();
    double partial[kChunks] = {0};
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int c = 0; c < kChunks; ++c) {
        std::size_t lo = n * c / kChunks, hi = n * (c + 1) / kChunks;
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        partial[c] = s;
    }
    double total = 0;
    for (int c = 0; c < kChunks; ++c) total += partial[c];
    return total;
}

}  // namespace

GridField solve_dirichlet(std::shared_ptr<const GridDomain> dom, const BoundaryFn& boundary,
                          int components, const SolveOptions& opts, SolveStats* stats) {
    GridField field;
    field.domain = dom;
    field.components = components;
    int nn = dom->node_count();
    int nu = dom->unknown_count();
    field.values.assign((std::size_t)components * nn, 0.0);

    LaplaceSystem sys(*dom);
    SolveStats local;
    for (int comp = 0; comp < components; ++comp) {
        double* vals = field.values.data() + (std::size_t)comp * nn;
        double bmax = 0;
        for (const auto& dn : dom->dirichlet_nodes()) {
            vals[dn.id] = boundary(dn.pos, dn.layer, comp);
            bmax = std::max(bmax, std::abs(vals[dn.id]));
        }
        if (nu == 0) continue;
        std::vector<double> full(vals, vals + nn);
        std::vector<double> b = sys.rhs(full);
        // Zero boundary data has the zero solution; skip the iteration.
        if (bmax == 0.0) continue;

        std::vector<double> x(nu, 0.0), r(b), z(nu), p(nu), ap(nu);
        // Jacobi preconditioner.
        auto precond = [&](const std::vector<double>& rin, std::vector<double>& zout) {
            for (int i = 0; i < nu; ++i) zout[i] = rin[i] / sys.diag(i);
        };
        precond(r, z);
        p = z;
        double rz = det_dot(r, z, opts.parallel);
        // Convergence in the scaled sup norm |A x - b|_inf / (h * max|g|).
        double scale = dom->h() * std::max(bmax, 1e-300);
        int it = 0;
        double res = 0;
        for (; it < opts.max_iter; ++it) {
            res = 0;
            for (int i = 0; i < nu; ++i) res = std::max(res, std::abs(r[i]));
            res /= scale;
            if (res <= opts.tol) break;
            sys.apply(p, ap, opts.parallel);
            double pap = det_dot(p, ap, opts.parallel);
            if (pap <= 0) break;
            double alpha = rz / pap;
            for (int i = 0; i < nu; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            precond(r, z);
            double rz_new = det_dot(r, z, opts.parallel);
            double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < nu; ++i) p[i] = z[i] + beta * p[i];
        }
        local.iterations = std::max(local.iterations, it);
        local.residual = std::max(local.residual, res);
        local.converged = res <= opts.tol;
        if (!local.converged && stats == nullptr)
            throw std::runtime_error("solve_dirichlet: no convergence, residual " +
                                     std::to_string(res));
        for (int i = 0; i < nu; ++i) vals[i] = x[i];
    }
    if (local.iterations == 0) local.converged = true;
    if (stats) *stats = local;
    return field;
}

double form_energy(const GridField& f) {
    const GridDomain& dom = *f.domain;
    double h = dom.h();
    int n = dom.n();
    auto cw = [&](int ci, int cj, int ck, int layer) -> double {
        if (ci < 0 || cj < 0 || ck < 0 || ci >= n || cj >= n || ck >= n) return 0.0;
        return dom.cell_weight(ci, cj, ck, layer);
    };
    double e = 0;
    const int dirs[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int layer = 0; layer < dom.layers(); ++layer)
        for (int k = 0; k <= n; ++k)
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n; ++i) {
                    std::int32_t a = dom.node_id(i, j, k, layer);
                    if (a == GridDomain::kVoid) continue;
                    for (int d = 0; d < 3; ++d) {
                        int i2 = i + dirs[d][0], j2 = j + dirs[d][1], k2 = k + dirs[d][2];
                        if (i2 > n || j2 > n || k2 > n) continue;
                        std::int32_t b = dom.node_id(i2, j2, k2, layer);
                        if (b == GridDomain::kVoid) continue;
                        double w;
                        if (d == 0)
                            w = cw(i, j - 1, k - 1, layer) + cw(i, j, k - 1, layer) +
                                cw(i, j - 1, k, layer) + cw(i, j, k, layer);
                        else if (d == 1)
                            w = cw(i - 1, j, k - 1, layer) + cw(i, j, k - 1, layer) +
                                cw(i - 1, j, k, layer) + cw(i, j, k, layer);
                        else
                            w = cw(i - 1, j - 1, k, layer) + cw(i - 1, j, k, layer) +
                                cw(i, j - 1, k, layer) + cw(i, j, k, layer);
                        if (w <= 0) continue;
                        double we = w * h / 4 * dom.edge_scale(a, b);
                        for (int comp = 0; comp < f.components; ++comp) {
                            double du = f.value(a, comp) - f.value(b, comp);
                            e += we * du * du;
                        }
                    }
                }
    return e;
}

double laplacian_residual(const GridField& f, int comp) {
    const GridDomain& dom = *f.domain;
    LaplaceSystem sys(dom);
    int nu = dom.unknown_count();
    int nn = dom.node_count();
    std::vector<double> full(f.values.begin() + (std::size_t)comp * nn,
                             f.values.begin() + (std::size_t)(comp + 1) * nn);
    std::vector<double> b = sys.rhs(full);
    std::vector<double> x(full.begin(), full.begin() + nu), y(nu);
    sys.apply(x, y, false);
    double bmax = 1e-300;
    for (const auto& dn : dom.dirichlet_nodes()) bmax = std::max(bmax, std::abs(full[dn.id]));
    double res = 0;
    for (int i = 0; i < nu; ++i) res = std::max(res, std::abs(y[i] - b[i]));
    return res / (dom.h() * bmax);
}

}  // namespace diamondlab
