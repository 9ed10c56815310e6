#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "diamondlab/geometry.hpp"
#include "diamondlab/rational.hpp"

namespace diamondlab {

enum class DomainKind {
    Cube,
    CubicalAnnulus,    // cube minus concentric inner cube
    CubeMinusGate,     // same shape, inner cube is a gate cell
    DoubledAnnulus,    // two copies of (K minus gate) glued to the shared outer shell
    SphericalAnnulus,  // embedded stairstep shell between two spheres
};

/// Uniform lattice over an axis-aligned cube, with per-layer cell weights
/// (0.5 on doubled copies) and node classification. Nodes on the shared
/// region of a doubled domain exist once; nodes strictly inside the doubled
/// K region exist per layer.
class GridDomain {
  public:
    static constexpr std::int32_t kVoid = -1;

    DomainKind kind() const { return kind_; }
    int n() const { return n_; }               // cells per axis
    double h() const { return h_; }
    Vec3 origin() const { return origin_; }
    int layers() const { return layers_; }
    int node_count() const { return (int)node_pos_.size(); }
    int unknown_count() const { return unknown_count_; }

    /// Global node id for lattice node (i,j,k) on a layer; kVoid outside.
    std::int32_t node_id(int i, int j, int k, int layer) const {
        return ids_[idx(i, j, k, layer)];
    }
    bool is_dirichlet(std::int32_t id) const { return dirichlet_[id] != 0; }
    const Vec3& node_pos(std::int32_t id) const { return node_pos_[id]; }
    int node_layer(std::int32_t id) const { return node_layer_[id]; }

    /// Cell weight (0, 1, or 0.5) for lattice cell (ci,cj,ck) on a layer.
    double cell_weight(int ci, int cj, int ck, int layer) const {
        return cellw_[cidx(ci, cj, ck, layer)];
    }

    struct DirichletNode {
        std::int32_t id;
        Vec3 pos;
        int layer;
    };
    const std::vector<DirichletNode>& dirichlet_nodes() const { return dnodes_; }

    struct Cell {
        int ci, cj, ck, layer;
        double weight;
        std::int32_t corner[8];  // node ids, x-fastest order
    };
    /// All cells with positive weight.
    const std::vector<Cell>& cells() const { return cells_; }

    /// Cut-edge stencil scale (Shortley-Weller style) for an unknown to
    /// Dirichlet edge crossing an embedded boundary; 1 when not cut.
    double edge_scale(std::int32_t a, std::int32_t b) const {
        if (edge_scales_.empty()) return 1.0;
        if (a > b) std::swap(a, b);
        auto it = edge_scales_.find(((std::uint64_t)a << 32) | (std::uint32_t)b);
        return it == edge_scales_.end() ? 1.0 : it->second;
    }

    // Factories. Rational geometry must align with the lattice exactly.
    static std::shared_ptr<const GridDomain> make_cube(const RCube& q, int n);
    static std::shared_ptr<const GridDomain> make_cube_with_hole(const RCube& q, const RCube& hole,
                                                                 int n, DomainKind kind);
    static std::shared_ptr<const GridDomain> make_doubled_annulus(const RCube& q, const RCube& k,
                                                                  const RCube& gate, int n);
    /// Spheres centered at the box center; box side 2*r_out, stairstep shell.
    static std::shared_ptr<const GridDomain> make_spherical_annulus(double r_in, double r_out, int n);

  private:
    std::size_t idx(int i, int j, int k, int layer) const {
        return ((std::size_t)layer * (n_ + 1) * (n_ + 1) * (n_ + 1)) +
               ((std::size_t)k * (n_ + 1) + j) * (n_ + 1) + i;
    }
    std::size_t cidx(int ci, int cj, int ck, int layer) const {
        return ((std::size_t)layer * n_ * n_ * n_) + ((std::size_t)ck * n_ + cj) * n_ + ci;
    }
    void finalize();  // builds node ids, cells, dirichlet list from class maps

    DomainKind kind_ = DomainKind::Cube;
    Vec3 origin_;
    double h_ = 0;
    int n_ = 0;
    int layers_ = 1;
    // Per (layer, lattice node): 0 = void, 1 = unknown, 2 = dirichlet, 3 = alias layer 0.
    std::vector<std::uint8_t> node_class_;
    std::vector<float> cellw_;
    std::vector<std::int32_t> ids_;
    std::vector<Vec3> node_pos_;
    std::vector<std::uint8_t> dirichlet_;
    std::vector<std::uint8_t> node_layer_;
    std::vector<DirichletNode> dnodes_;
    std::vector<Cell> cells_;
    std::unordered_map<std::uint64_t, float> edge_scales_;
    int unknown_count_ = 0;

    friend class LaplaceSystem;
};

/// Scalar or m-vector field sampled on a domain's nodes.
struct GridField {
    std::shared_ptr<const GridDomain> domain;
    int components = 1;
    std::vector<double> values;  // [comp * node_count + id]

    double value(std::int32_t id, int comp = 0) const {
        return values[(std::size_t)comp * domain->node_count() + id];
    }
    double& value(std::int32_t id, int comp = 0) {
        return values[(std::size_t)comp * domain->node_count() + id];
    }
    /// Midpoint gradient of one component over a cell (average of the four
    /// parallel edge differences per axis).
    Vec3 cell_gradient(const GridDomain::Cell& c, int comp = 0) const;
};

/// Measure-weighted Dirichlet energy: midpoint finite-difference gradient,
/// cell-volume weighted sum over all layers; vector case sums components.
double dirichlet_energy(const GridField& f);

/// Energy restricted to cells matching a predicate on (cell).
double dirichlet_energy_where(const GridField& f,
                              const std::function<bool(const GridDomain::Cell&)>& pred);

/// Cross inner product  sum_cells w h^3 grad(f) . grad(g)  per component.
double energy_inner(const GridField& a, const GridField& b);

/// Edge-difference (bilinear form) energy, cut-edge aware; matches the
/// midpoint quadrature on grid-aligned domains and integrates the boundary
/// skin correctly on embedded ones.
double form_energy(const GridField& f);

}  // namespace diamondlab
