#include "diamondlab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace diamondlab {

namespace {

// Index of a rational coordinate on the lattice; throws if misaligned.
int lattice_index(const Rational& coord, const Rational& origin, const Rational& h) {
    Rational rel = coord - origin;
    std::int64_t i = Rational::floor_div(rel, h);
    if (!(Rational(i) * h == rel))
        throw std::invalid_argument("grid: geometry does not align with the lattice");
    return (int)i;
}

struct HoleRange {
    int lo[3], hi[3];  // node-index bounds of the inner cube
    bool node_inside_open(int i, int j, int k) const {
        return i > lo[0] && i < hi[0] && j > lo[1] && j < hi[1] && k > lo[2] && k < hi[2];
    }
    bool node_on_closed(int i, int j, int k) const {
        return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1] && k >= lo[2] && k <= hi[2];
    }
    bool cell_inside(int ci, int cj, int ck) const {
        return ci >= lo[0] && ci < hi[0] && cj >= lo[1] && cj < hi[1] && ck >= lo[2] && ck < hi[2];
    }
};

HoleRange hole_range(const RCube& outer, const RCube& inner, const Rational& h) {
    HoleRange r;
    for (int d = 0; d < 3; ++d) {
        r.lo[d] = lattice_index(inner.origin[d], outer.origin[d], h);
        r.hi[d] = lattice_index(inner.origin[d] + inner.side, outer.origin[d], h);
    }
    return r;
}

constexpr std::uint8_t kClassVoid = 0;
constexpr std::uint8_t kClassUnknown = 1;
constexpr std::uint8_t kClassDirichlet = 2;
constexpr std::uint8_t kClassAlias = 3;

}  // namespace

void GridDomain::finalize() {
    int np = n_ + 1;
    ids_.assign((std::size_t)layers_ * np * np * np, kVoid);
    node_pos_.clear();
    dirichlet_.clear();
    node_layer_.clear();
    dnodes_.clear();
    cells_.clear();
    unknown_count_ = 0;

    // Unknowns first, then Dirichlet nodes, layer-major for determinism.
    for (int pass = 0; pass < 2; ++pass) {
        std::uint8_t want = pass == 0 ? kClassUnknown : kClassDirichlet;
        for (int layer = 0; layer < layers_; ++layer)
            for (int k = 0; k < np; ++k)
                for (int j = 0; j < np; ++j)
                    for (int i = 0; i < np; ++i) {
                        if (node_class_[idx(i, j, k, layer)] != want) continue;
                        std::int32_t id = (std::int32_t)node_pos_.size();
                        ids_[idx(i, j, k, layer)] = id;
                        node_pos_.push_back({origin_.x + h_ * i, origin_.y + h_ * j, origin_.z + h_ * k});
                        dirichlet_.push_back(pass == 1);
                        node_layer_.push_back((std::uint8_t)layer);
                        if (pass == 0) ++unknown_count_;
                        else dnodes_.push_back({id, node_pos_.back(), layer});
                    }
    }
    // Resolve layer-1 aliases to the shared layer-0 node.
    for (int layer = 1; layer < layers_; ++layer)
        for (int k = 0; k < np; ++k)
            for (int j = 0; j < np; ++j)
                for (int i = 0; i < np; ++i)
                    if (node_class_[idx(i, j, k, layer)] == kClassAlias)
                        ids_[idx(i, j, k, layer)] = ids_[idx(i, j, k, 0)];

    for (int layer = 0; layer < layers_; ++layer)
        for (int ck = 0; ck < n_; ++ck)
            for (int cj = 0; cj < n_; ++cj)
                for (int ci = 0; ci < n_; ++ci) {
                    double w = cellw_[cidx(ci, cj, ck, layer)];
                    if (w <= 0) continue;
                    Cell c;
                    c.ci = ci; c.cj = cj; c.ck = ck;
                    c.layer = layer;
                    c.weight = w;
                    int m = 0;
                    for (int dk = 0; dk < 2; ++dk)
                        for (int dj = 0; dj < 2; ++dj)
                            for (int di = 0; di < 2; ++di)
                                c.corner[m++] = ids_[idx(ci + di, cj + dj, ck + dk, layer)];
                    for (int t = 0; t < 8; ++t)
                        if (c.corner[t] == kVoid)
                            throw std::logic_error("grid: weighted cell touches a void node");
                    cells_.push_back(c);
                }
}

std::shared_ptr<const GridDomain> GridDomain::make_cube(const RCube& q, int n) {
    auto d = std::make_shared<GridDomain>();
    d->kind_ = DomainKind::Cube;
    d->origin_ = to_vec3(q.origin);
    d->h_ = (q.side / Rational(n)).to_double();
    d->n_ = n;
    d->layers_ = 1;
    int np = n + 1;
    d->node_class_.assign((std::size_t)np * np * np, kClassUnknown);
    d->cellw_.assign((std::size_t)n * n * n, 1.0f);
    for (int k = 0; k < np; ++k)
        for (int j = 0; j < np; ++j)
            for (int i = 0; i < np; ++i)
                if (i == 0 || i == n || j == 0 || j == n || k == 0 || k == n)
                    d->node_class_[d->idx(i, j, k, 0)] = kClassDirichlet;
    d->finalize();
    return d;
}

std::shared_ptr<const GridDomain> GridDomain::make_cube_with_hole(const RCube& q, const RCube& hole,
                                                                  int n, DomainKind kind) {
    auto d = std::make_shared<GridDomain>();
    d->kind_ = kind;
    d->origin_ = to_vec3(q.origin);
    Rational h = q.side / Rational(n);
    d->h_ = h.to_double();
    d->n_ = n;
    d->layers_ = 1;
    HoleRange hr = hole_range(q, hole, h);
    int np = n + 1;
    d->node_class_.assign((std::size_t)np * np * np, kClassUnknown);
    d->cellw_.assign((std::size_t)n * n * n, 1.0f);
    for (int k = 0; k < np; ++k)
        for (int j = 0; j < np; ++j)
            for (int i = 0; i < np; ++i) {
                std::uint8_t& cls = d->node_class_[d->idx(i, j, k, 0)];
                if (hr.node_inside_open(i, j, k)) cls = kClassVoid;
                else if (hr.node_on_closed(i, j, k)) cls = kClassDirichlet;
                else if (i == 0 || i == n || j == 0 || j == n || k == 0 || k == n)
                    cls = kClassDirichlet;
            }
    for (int ck = 0; ck < n; ++ck)
        for (int cj = 0; cj < n; ++cj)
            for (int ci = 0; ci < n; ++ci)
                if (hr.cell_inside(ci, cj, ck)) d->cellw_[d->cidx(ci, cj, ck, 0)] = 0.0f;
    d->finalize();
    return d;
}

std::shared_ptr<const GridDomain> GridDomain::make_doubled_annulus(const RCube& q, const RCube& k,
                                                                   const RCube& gate, int n) {
    auto d = std::make_shared<GridDomain>();
    d->kind_ = DomainKind::DoubledAnnulus;
    d->origin_ = to_vec3(q.origin);
    Rational h = q.side / Rational(n);
    d->h_ = h.to_double();
    d->n_ = n;
    d->layers_ = 2;
    HoleRange kr = hole_range(q, k, h);
    HoleRange gr = hole_range(q, gate, h);
    int np = n + 1;
    d->node_class_.assign((std::size_t)2 * np * np * np, kClassVoid);
    d->cellw_.assign((std::size_t)2 * n * n * n, 0.0f);
    for (int kk = 0; kk < np; ++kk)
        for (int j = 0; j < np; ++j)
            for (int i = 0; i < np; ++i) {
                bool outer = (i == 0 || i == n || j == 0 || j == n || kk == 0 || kk == n);
                std::uint8_t cls0, cls1;
                if (kr.node_inside_open(i, j, kk)) {
                    // Doubled region: one node per layer.
                    if (gr.node_inside_open(i, j, kk)) cls0 = cls1 = kClassVoid;
                    else if (gr.node_on_closed(i, j, kk)) cls0 = cls1 = kClassDirichlet;
                    else cls0 = cls1 = kClassUnknown;
                } else {
                    // Shared shell (including the K boundary).
                    cls0 = outer ? kClassDirichlet : kClassUnknown;
                    cls1 = kClassAlias;
                }
                d->node_class_[d->idx(i, j, kk, 0)] = cls0;
                d->node_class_[d->idx(i, j, kk, 1)] = cls1;
            }
    for (int ck = 0; ck < n; ++ck)
        for (int cj = 0; cj < n; ++cj)
            for (int ci = 0; ci < n; ++ci) {
                float w0, w1;
                if (kr.cell_inside(ci, cj, ck)) {
                    bool in_gate = gr.cell_inside(ci, cj, ck);
                    w0 = w1 = in_gate ? 0.0f : 0.5f;
                } else {
                    w0 = 1.0f;
                    w1 = 0.0f;
                }
                d->cellw_[d->cidx(ci, cj, ck, 0)] = w0;
                d->cellw_[d->cidx(ci, cj, ck, 1)] = w1;
            }
    d->finalize();
    return d;
}

std::shared_ptr<const GridDomain> GridDomain::make_spherical_annulus(double r_in, double r_out,
                                                                     int n) {
    if (!(0 < r_in && r_in < r_out))
        throw std::invalid_argument("make_spherical_annulus: need 0 < r_in < r_out");
    auto d = std::make_shared<GridDomain>();
    d->kind_ = DomainKind::SphericalAnnulus;
    d->origin_ = {-r_out, -r_out, -r_out};
    d->h_ = 2 * r_out / n;
    d->n_ = n;
    d->layers_ = 1;
    int np = n + 1;
    d->node_class_.assign((std::size_t)np * np * np, kClassVoid);
    d->cellw_.assign((std::size_t)n * n * n, 0.0f);
    auto radius = [&](double i, double j, double k) {
        double x = d->origin_.x + d->h_ * i, y = d->origin_.y + d->h_ * j, z = d->origin_.z + d->h_ * k;
        return std::sqrt(x * x + y * y + z * z);
    };
    for (int k = 0; k < np; ++k)
        for (int j = 0; j < np; ++j)
            for (int i = 0; i < np; ++i) {
                double r = radius(i, j, k);
                std::uint8_t cls = (r <= r_in || r >= r_out) ? kClassDirichlet : kClassUnknown;
                d->node_class_[d->idx(i, j, k, 0)] = cls;
            }
    // Fractional weights from 4^3 subsampling keep the energy quadrature
    // first-order accurate across the stairstep shell.
    for (int ck = 0; ck < n; ++ck)
        for (int cj = 0; cj < n; ++cj)
            for (int ci = 0; ci < n; ++ci) {
                int inside = 0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        for (int c = 0; c < 4; ++c) {
                            double r = radius(ci + (a + 0.5) / 4, cj + (b + 0.5) / 4,
                                              ck + (c + 0.5) / 4);
                            if (r > r_in && r < r_out) ++inside;
                        }
                d->cellw_[d->cidx(ci, cj, ck, 0)] = (float)inside / 64.0f;
            }
    // A cell with positive weight may touch nodes classified outside both
    // spheres' Dirichlet shells only if all its corners carry values; widen
    // the Dirichlet shells to cover corners of weighted cells.
    for (int ck = 0; ck < n; ++ck)
        for (int cj = 0; cj < n; ++cj)
            for (int ci = 0; ci < n; ++ci) {
                if (d->cellw_[d->cidx(ci, cj, ck, 0)] <= 0) continue;
                for (int dk = 0; dk < 2; ++dk)
                    for (int dj = 0; dj < 2; ++dj)
                        for (int di = 0; di < 2; ++di) {
                            std::uint8_t& cls = d->node_class_[d->idx(ci + di, cj + dj, ck + dk, 0)];
                            if (cls == kClassVoid) cls = kClassDirichlet;
                        }
            }
    d->finalize();
    // Shortley-Weller scales on edges cut by either sphere: the stencil
    // coefficient toward the boundary value tightens by the inverse of the
    // cut fraction, which moves the discrete equipotential onto the sphere.
    auto pos_of = [&](int i, int j, int k) {
        return Vec3{d->origin_.x + d->h_ * i, d->origin_.y + d->h_ * j, d->origin_.z + d->h_ * k};
    };
    auto cut_fraction = [&](const Vec3& pu, const Vec3& pd) {
        double rd = pd.norm();
        double target = rd <= r_in ? r_in : (rd >= r_out ? r_out : -1.0);
        if (target < 0) return 1.0;
        // smallest t in (0,1] with |pu + t (pd-pu)| = target
        Vec3 dir = pd - pu;
        double aa = dir.dot(dir), bb = 2 * pu.dot(dir), cc = pu.dot(pu) - target * target;
        double disc = bb * bb - 4 * aa * cc;
        if (disc <= 0) return 1.0;
        double sq = std::sqrt(disc);
        double t1 = (-bb - sq) / (2 * aa), t2 = (-bb + sq) / (2 * aa);
        double t = 1.0;
        if (t1 > 0 && t1 <= 1) t = t1;
        else if (t2 > 0 && t2 <= 1) t = t2;
        return std::max(t, 0.05);
    };
    const int dirs[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                std::int32_t a = d->node_id(i, j, k, 0);
                if (a == kVoid) continue;
                for (auto& dir : dirs) {
                    int i2 = i + dir[0], j2 = j + dir[1], k2 = k + dir[2];
                    if (i2 > n || j2 > n || k2 > n) continue;
                    std::int32_t b = d->node_id(i2, j2, k2, 0);
                    if (b == kVoid) continue;
                    bool da = d->dirichlet_[a], db = d->dirichlet_[b];
                    if (da == db) continue;
                    Vec3 pu = da ? pos_of(i2, j2, k2) : pos_of(i, j, k);
                    Vec3 pd = da ? pos_of(i, j, k) : pos_of(i2, j2, k2);
                    double t = cut_fraction(pu, pd);
                    if (t >= 1.0) continue;
                    std::int32_t lo = std::min(a, b), hi = std::max(a, b);
                    d->edge_scales_[((std::uint64_t)lo << 32) | (std::uint32_t)hi] =
                        (float)(1.0 / t);
                }
            }
    return d;
}

Vec3 GridField::cell_gradient(const GridDomain::Cell& c, int comp) const {
    double h = domain->h();
    const double* v = values.data() + (std::size_t)comp * domain->node_count();
    // Corner order: x fastest, then y, then z.
    double gx = (v[c.corner[1]] - v[c.corner[0]] + v[c.corner[3]] - v[c.corner[2]] +
                 v[c.corner[5]] - v[c.corner[4]] + v[c.corner[7]] - v[c.corner[6]]) /
                (4 * h);
    double gy = (v[c.corner[2]] - v[c.corner[0]] + v[c.corner[3]] - v[c.corner[1]] +
                 v[c.corner[6]] - v[c.corner[4]] + v[c.corner[7]] - v[c.corner[5]]) /
                (4 * h);
    double gz = (v[c.corner[4]] - v[c.corner[0]] + v[c.corner[5]] - v[c.corner[1]] +
                 v[c.corner[6]] - v[c.corner[2]] + v[c.corner[7]] - v[c.corner[3]]) /
                (4 * h);
    return {gx, gy, gz};
}

double dirichlet_energy(const GridField& f) {
    return dirichlet_energy_where(f, [](const GridDomain::Cell&) { return true; });
}

double dirichlet_energy_where(const GridField& f,
                              const std::function<bool(const GridDomain::Cell&)>& pred) {
    double h = f.domain->h();
    double vol = h * h * h;
    double e = 0;
    for (const auto& c : f.domain->cells()) {
        if (!pred(c)) continue;
        double s = 0;
        for (int comp = 0; comp < f.components; ++comp) {
            Vec3 g = f.cell_gradient(c, comp);
            s += g.dot(g);
        }
        e += c.weight * vol * s;
    }
    return e;
}

double energy_inner(const GridField& a, const GridField& b) {
    if (a.domain.get() != b.domain.get())
        throw std::invalid_argument("energy_inner: fields must share a domain");
    if (a.components != b.components)
        throw std::invalid_argument("energy_inner: component mismatch");
    double h = a.domain->h();
    double vol = h * h * h;
    double e = 0;
    for (const auto& c : a.domain->cells()) {
        double s = 0;
        for (int comp = 0; comp < a.components; ++comp)
            s += a.cell_gradient(c, comp).dot(b.cell_gradient(c, comp));
        e += c.weight * vol * s;
    }
    return e;
}

}  // namespace diamondlab
