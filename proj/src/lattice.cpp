#include "smcf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smcf/errors.hpp"

namespace smcf {

namespace {

constexpr double kInsideSlack = 1e-12;
constexpr double kBoundaryTol = 1e-9;
constexpr int kMaxFaces = 64;

// Rank of a set of row vectors by Gaussian elimination with partial pivoting.
int row_rank(std::vector<Vec> rows, int n) {
    int rank = 0;
    for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        double best = 1e-10;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
            if (std::abs(rows[r][col]) > best) {
                best = std::abs(rows[r][col]);
                piv = r;
            }
        }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank) continue;
            const double f = rows[r][col] / rows[rank][col];
            for (int j = 0; j < n; ++j) rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

// One nullspace direction of a rank-(n-1) set of n-1 row vectors, or empty.
Vec nullspace_direction(std::vector<Vec> rows, int n) {
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        double best = 1e-10;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
            if (std::abs(rows[r][col]) > best) {
                best = std::abs(rows[r][col]);
                piv = r;
            }
        }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank) continue;
            const double f = rows[r][col] / rows[rank][col];
            for (int j = 0; j < n; ++j) rows[r][j] -= f * rows[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank != n - 1) return {};
    // Free column = the one not pivoted.
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = -1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_col = c;
    Vec d(n, 0.0);
    d[free_col] = 1.0;
    for (int r = rank - 1; r >= 0; --r) {
        const int c = pivot_col[r];
        double s = rows[r][free_col];
        for (int k = r + 1; k < rank; ++k) s += rows[r][pivot_col[k]] * d[pivot_col[k]];
        d[c] = -s / rows[r][c];
    }
    const double nn = norm2(d);
    for (auto& x : d) x /= nn;
    return d;
}

void check_polytope_bounded(const std::vector<HalfSpace>& faces, int n) {
    // Recession cone {d : a_i . d <= 0 for all i} must be {0}.
    std::vector<Vec> normals;
    normals.reserve(faces.size());
    for (const auto& f : faces) normals.push_back(f.normal);
    if (row_rank(normals, n) < n)
        throw UnboundedDomain("polytope normals do not span the space");

    auto in_cone = [&](const Vec& d) {
        for (const auto& f : faces)
            if (dot(f.normal, d) > 1e-12) return false;
        return true;
    };

    if (n == 1) return;
    // Extreme rays lie in intersections of n-1 facet hyperplanes.
    std::vector<int> pick(n - 1);
    for (int i = 0; i < n - 1; ++i) pick[i] = i;
    const int f = static_cast<int>(faces.size());
    while (true) {
        std::vector<Vec> rows;
        for (int i : pick) rows.push_back(faces[i].normal);
        Vec d = nullspace_direction(rows, n);
        if (!d.empty()) {
            Vec neg(d.size());
            for (size_t i = 0; i < d.size(); ++i) neg[i] = -d[i];
            if (in_cone(d) || in_cone(neg))
                throw UnboundedDomain("polytope has a recession direction");
        }
        // next combination
        int i = n - 2;
        while (i >= 0 && pick[i] == f - (n - 1) + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < n - 1; ++j) pick[j] = pick[j - 1] + 1;
    }
}

std::vector<Vec> polytope_vertices(const std::vector<HalfSpace>& faces, int n) {
    std::vector<Vec> verts;
    const int f = static_cast<int>(faces.size());
    std::vector<int> pick(n);
    for (int i = 0; i < n; ++i) pick[i] = i;
    Mat a(n, n), inv(n, n);
    while (true) {
        bool ok = true;
        double det = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) a(r, c) = faces[pick[r]].normal[c];
        Vec v(n, 0.0);
        try {
            det = invert(a, inv);
            for (int r = 0; r < n; ++r) {
                double s = 0.0;
                for (int c = 0; c < n; ++c) s += inv(r, c) * faces[pick[c]].offset;
                v[r] = s;
            }
        } catch (const InvalidParameter&) {
            ok = false;
        }
        if (ok && std::abs(det) > 1e-10) {
            bool feasible = true;
            for (const auto& face : faces)
                if (dot(face.normal, v) > face.offset + 1e-9) feasible = false;
            if (feasible) verts.push_back(v);
        }
        int i = n - 1;
        while (i >= 0 && pick[i] == f - n + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return verts;
}

}  // namespace

ConvexDomain ConvexDomain::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size() || lo.empty())
        throw InvalidParameter("box bounds must have equal, nonzero dimension");
    for (size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] < hi[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k]))
            throw InvalidParameter("box requires finite lo < hi on every axis");
    ConvexDomain d;
    d.kind_ = Kind::Box;
    d.dim_ = static_cast<int>(lo.size());
    d.lo_ = std::move(lo);
    d.hi_ = std::move(hi);
    return d;
}

ConvexDomain ConvexDomain::ball(Vec center, double radius) {
    if (center.empty()) throw InvalidParameter("ball center must be nonempty");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidParameter("ball radius must be positive and finite");
    ConvexDomain d;
    d.kind_ = Kind::Ball;
    d.dim_ = static_cast<int>(center.size());
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
}

ConvexDomain ConvexDomain::polytope(std::vector<HalfSpace> faces) {
    if (faces.empty()) throw InvalidParameter("polytope needs at least one half-space");
    if (static_cast<int>(faces.size()) > kMaxFaces)
        throw InvalidParameter("polytope facet count capped at 64");
    const int n = static_cast<int>(faces[0].normal.size());
    for (const auto& f : faces) {
        if (static_cast<int>(f.normal.size()) != n)
            throw InvalidParameter("inconsistent half-space dimensions");
        if (std::abs(norm2(f.normal) - 1.0) > 1e-12)
            throw InvalidParameter("half-space normals must be unit vectors");
    }
    check_polytope_bounded(faces, n);
    ConvexDomain d;
    d.kind_ = Kind::Polytope;
    d.dim_ = n;
    d.faces_ = std::move(faces);
    // Nonempty interior check: must contain a strictly feasible point near
    // the vertex centroid.
    auto verts = polytope_vertices(d.faces_, n);
    if (verts.empty()) throw InvalidParameter("polytope is empty");
    Vec c(n, 0.0);
    for (const auto& v : verts)
        for (int k = 0; k < n; ++k) c[k] += v[k] / static_cast<double>(verts.size());
    if (d.violation(c) > -1e-12) throw InvalidParameter("polytope has empty interior");
    return d;
}

double ConvexDomain::violation(std::span<const double> p) const {
    switch (kind_) {
        case Kind::Box: {
            double worst = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < dim_; ++k) {
                worst = std::max(worst, lo_[k] - p[k]);
                worst = std::max(worst, p[k] - hi_[k]);
            }
            return worst;
        }
        case Kind::Ball: {
            double s = 0.0;
            for (int k = 0; k < dim_; ++k) {
                const double d = p[k] - center_[k];
                s += d * d;
            }
            return std::sqrt(s) - radius_;
        }
        case Kind::Polytope: {
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& f : faces_) worst = std::max(worst, dot(f.normal, p) - f.offset);
            return worst;
        }
    }
    return 0.0;
}

void ConvexDomain::bounding_box(Vec& lo, Vec& hi) const {
    switch (kind_) {
        case Kind::Box:
            lo = lo_;
            hi = hi_;
            return;
        case Kind::Ball:
            lo.assign(dim_, 0.0);
            hi.assign(dim_, 0.0);
            for (int k = 0; k < dim_; ++k) {
                lo[k] = center_[k] - radius_;
                hi[k] = center_[k] + radius_;
            }
            return;
        case Kind::Polytope: {
            auto verts = vertices();
            lo.assign(dim_, std::numeric_limits<double>::infinity());
            hi.assign(dim_, -std::numeric_limits<double>::infinity());
            for (const auto& v : verts)
                for (int k = 0; k < dim_; ++k) {
                    lo[k] = std::min(lo[k], v[k]);
                    hi[k] = std::max(hi[k], v[k]);
                }
            return;
        }
    }
}

double ConvexDomain::exit_parameter(std::span<const double> p, std::span<const double> d) const {
    switch (kind_) {
        case Kind::Box: {
            double t = std::numeric_limits<double>::infinity();
            for (int k = 0; k < dim_; ++k) {
                if (d[k] > 0.0)
                    t = std::min(t, (hi_[k] - p[k]) / d[k]);
                else if (d[k] < 0.0)
                    t = std::min(t, (lo_[k] - p[k]) / d[k]);
            }
            return std::max(t, 0.0);
        }
        case Kind::Ball: {
            double a = 0.0, b = 0.0, c0 = 0.0;
            for (int k = 0; k < dim_; ++k) {
                const double q = p[k] - center_[k];
                a += d[k] * d[k];
                b += d[k] * q;
                c0 += q * q;
            }
            c0 -= radius_ * radius_;
            const double disc = std::max(b * b - a * c0, 0.0);
            return std::max((-b + std::sqrt(disc)) / a, 0.0);
        }
        case Kind::Polytope: {
            double t = std::numeric_limits<double>::infinity();
            for (const auto& f : faces_) {
                const double slope = dot(f.normal, d);
                if (slope > 0.0) t = std::min(t, (f.offset - dot(f.normal, p)) / slope);
            }
            return std::max(t, 0.0);
        }
    }
    return 0.0;
}

std::vector<Vec> ConvexDomain::vertices() const {
    switch (kind_) {
        case Kind::Box: {
            std::vector<Vec> verts;
            const int corners = 1 << dim_;
            for (int mask = 0; mask < corners; ++mask) {
                Vec v(dim_);
                for (int k = 0; k < dim_; ++k) v[k] = (mask >> k) & 1 ? hi_[k] : lo_[k];
                verts.push_back(std::move(v));
            }
            return verts;
        }
        case Kind::Ball:
            throw InvalidParameter("a ball has no vertices");
        case Kind::Polytope:
            return polytope_vertices(faces_, dim_);
    }
    return {};
}

double diameter(const ConvexDomain& domain) {
    switch (domain.kind()) {
        case ConvexDomain::Kind::Box: {
            double s = 0.0;
            for (int k = 0; k < domain.dim(); ++k) {
                const double d = domain.box_hi()[k] - domain.box_lo()[k];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case ConvexDomain::Kind::Ball:
            return 2.0 * domain.ball_radius();
        case ConvexDomain::Kind::Polytope: {
            const auto verts = domain.vertices();
            double best = 0.0;
            for (size_t i = 0; i < verts.size(); ++i)
                for (size_t j = i + 1; j < verts.size(); ++j) {
                    double s = 0.0;
                    for (int k = 0; k < domain.dim(); ++k) {
                        const double d = verts[i][k] - verts[j][k];
                        s += d * d;
                    }
                    best = std::max(best, std::sqrt(s));
                }
            return best;
        }
    }
    return 0.0;
}

Hyperplane supporting_hyperplane(const ConvexDomain& domain, std::span<const double> p) {
    const int n = domain.dim();
    if (std::abs(domain.violation(p)) > kBoundaryTol)
        throw NotOnBoundary("point is not on the domain boundary");
    Hyperplane hp;
    hp.normal.assign(n, 0.0);
    switch (domain.kind()) {
        case ConvexDomain::Kind::Box: {
            for (int k = 0; k < n; ++k) {
                if (std::abs(p[k] - domain.box_lo()[k]) <= kBoundaryTol) {
                    hp.normal[k] = 1.0;
                    hp.offset = domain.box_lo()[k];
                    return hp;
                }
                if (std::abs(p[k] - domain.box_hi()[k]) <= kBoundaryTol) {
                    hp.normal[k] = -1.0;
                    hp.offset = -domain.box_hi()[k];
                    return hp;
                }
            }
            throw NotOnBoundary("point is not on any box face");
        }
        case ConvexDomain::Kind::Ball: {
            double nn = 0.0;
            for (int k = 0; k < n; ++k) {
                hp.normal[k] = domain.ball_center()[k] - p[k];
                nn += hp.normal[k] * hp.normal[k];
            }
            nn = std::sqrt(nn);
            if (nn == 0.0) throw NotOnBoundary("point coincides with the ball center");
            for (int k = 0; k < n; ++k) hp.normal[k] /= nn;
            hp.offset = dot(hp.normal, p);
            return hp;
        }
        case ConvexDomain::Kind::Polytope: {
            for (const auto& f : domain.faces()) {
                if (std::abs(dot(f.normal, p) - f.offset) <= kBoundaryTol) {
                    for (int k = 0; k < n; ++k) hp.normal[k] = -f.normal[k];
                    hp.offset = -f.offset;
                    return hp;
                }
            }
            throw NotOnBoundary("point is not on any polytope facet");
        }
    }
    throw NotOnBoundary("unreachable");
}

int Grid::pair_index(int i, int j) const {
    // pairs (i, j), i < j, in lexicographic order
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

std::int64_t Grid::node_at(std::span<const int> index) const {
    std::int64_t flat = 0;
    for (int k = 0; k < n_; ++k) {
        if (index[k] < 0 || index[k] >= extent_[k]) return -1;
        flat += index[k] * stride_[k];
    }
    return node_id_[flat];
}

NodeClass Grid::class_at(std::span<const int> index) const {
    const std::int64_t id = node_at(index);
    return id < 0 ? NodeClass::Exterior : cls_of_[id];
}

void Grid::multi_index(NodeId id, std::span<int> out) const {
    std::int64_t flat = lattice_of_[id];
    for (int k = 0; k < n_; ++k) {
        out[k] = static_cast<int>(flat / stride_[k]);
        flat %= stride_[k];
    }
}

Grid build_grid(const ConvexDomain& domain, double h) {
    const int n = domain.dim();
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidParameter("grid spacing must be positive");

    Vec lo, hi;
    domain.bounding_box(lo, hi);
    for (int k = 0; k < n; ++k)
        if (!(h <= (hi[k] - lo[k]) / 2.0 * (1.0 + 1e-12)))
            throw InvalidParameter("grid spacing must be at most half of every extent");

    Grid g;
    g.domain_ = domain;
    g.n_ = n;
    g.npairs_ = n * (n - 1) / 2;
    g.h_ = h;
    g.origin_.resize(n);
    g.extent_.resize(n);
    std::int64_t total = 1;
    for (int k = 0; k < n; ++k) {
        // One layer of slack on each side so every snapped boundary node has
        // a lattice slot.
        g.origin_[k] = lo[k] - h;
        g.extent_[k] = static_cast<int>(std::floor((hi[k] - lo[k]) / h * (1.0 + 1e-12))) + 3;
        total *= g.extent_[k];
    }
    g.stride_.assign(n, 1);
    for (int k = n - 2; k >= 0; --k) g.stride_[k] = g.stride_[k + 1] * g.extent_[k + 1];

    // Stencil offsets: axis neighbours then diagonal neighbours.
    struct Offset {
        std::vector<int> d;
    };
    std::vector<Offset> stencil;
    for (int k = 0; k < n; ++k)
        for (int s : {+1, -1}) {
            Offset o;
            o.d.assign(n, 0);
            o.d[k] = s;
            stencil.push_back(o);
        }
    for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int si : {+1, -1})
                for (int sj : {+1, -1}) {
                    Offset o;
                    o.d.assign(n, 0);
                    o.d[i] = si;
                    o.d[j] = sj;
                    stencil.push_back(o);
                }

    auto position_of = [&](std::span<const int> idx, Vec& out) {
        for (int k = 0; k < n; ++k) out[k] = g.origin_[k] + idx[k] * h;
    };

    // Pass 1: closed-domain membership of every lattice node.
    std::vector<std::uint8_t> inside(total, 0);
    {
        std::vector<int> idx(n, 0);
        Vec p(n);
        for (std::int64_t flat = 0; flat < total; ++flat) {
            position_of(idx, p);
            inside[flat] = domain.contains(p, kInsideSlack) ? 1 : 0;
            for (int k = n - 1; k >= 0; --k) {
                if (++idx[k] < g.extent_[k]) break;
                idx[k] = 0;
            }
        }
    }

    // Pass 2: Interior = node plus full stencil inside.
    std::vector<std::uint8_t> interior(total, 0);
    {
        std::vector<int> idx(n, 0);
        for (std::int64_t flat = 0; flat < total; ++flat) {
            if (inside[flat]) {
                bool ok = true;
                for (const auto& o : stencil) {
                    std::int64_t nb = flat;
                    bool in_lattice = true;
                    for (int k = 0; k < n; ++k) {
                        const int nk = idx[k] + o.d[k];
                        if (nk < 0 || nk >= g.extent_[k]) {
                            in_lattice = false;
                            break;
                        }
                        nb += static_cast<std::int64_t>(o.d[k]) * g.stride_[k];
                    }
                    if (!in_lattice || !inside[nb]) {
                        ok = false;
                        break;
                    }
                }
                interior[flat] = ok ? 1 : 0;
            }
            for (int k = n - 1; k >= 0; --k) {
                if (++idx[k] < g.extent_[k]) break;
                idx[k] = 0;
            }
        }
    }

    // Pass 3: snap non-interior stencil neighbours of interior nodes.
    // Each candidate keeps the snap of smallest displacement from its
    // lattice position.
    std::vector<double> snap(static_cast<std::size_t>(total) * n,
                             std::numeric_limits<double>::quiet_NaN());
    std::vector<double> snap_dist(total, std::numeric_limits<double>::infinity());
    {
        std::vector<int> idx(n, 0);
        Vec p(n), q(n), d(n), s(n);
        for (std::int64_t flat = 0; flat < total; ++flat) {
            if (interior[flat]) {
                position_of(idx, p);
                for (const auto& o : stencil) {
                    std::int64_t nb = flat;
                    for (int k = 0; k < n; ++k)
                        nb += static_cast<std::int64_t>(o.d[k]) * g.stride_[k];
                    if (interior[nb]) continue;
                    for (int k = 0; k < n; ++k) {
                        d[k] = o.d[k] * h;
                        q[k] = p[k] + d[k];
                    }
                    const double t = domain.exit_parameter(p, d);
                    double dist2 = 0.0;
                    for (int k = 0; k < n; ++k) {
                        s[k] = p[k] + t * d[k];
                        const double dd = s[k] - q[k];
                        dist2 += dd * dd;
                    }
                    if (dist2 < snap_dist[nb]) {
                        snap_dist[nb] = dist2;
                        for (int k = 0; k < n; ++k) snap[static_cast<std::size_t>(nb) * n + k] = s[k];
                    }
                }
            }
            for (int k = n - 1; k >= 0; --k) {
                if (++idx[k] < g.extent_[k]) break;
                idx[k] = 0;
            }
        }
    }

    // Pass 4: compact ids in lexicographic lattice order.
    g.node_id_.assign(total, -1);
    {
        std::vector<int> idx(n, 0);
        Vec p(n);
        for (std::int64_t flat = 0; flat < total; ++flat) {
            if (interior[flat]) {
                const NodeId id = static_cast<NodeId>(g.lattice_of_.size());
                g.node_id_[flat] = id;
                g.lattice_of_.push_back(flat);
                g.cls_of_.push_back(NodeClass::Interior);
                position_of(idx, p);
                for (int k = 0; k < n; ++k) g.pos_.push_back(p[k]);
            } else if (std::isfinite(snap_dist[flat])) {
                const NodeId id = static_cast<NodeId>(g.lattice_of_.size());
                g.node_id_[flat] = id;
                g.lattice_of_.push_back(flat);
                g.cls_of_.push_back(NodeClass::Boundary);
                for (int k = 0; k < n; ++k) g.pos_.push_back(snap[static_cast<std::size_t>(flat) * n + k]);
            }
            for (int k = n - 1; k >= 0; --k) {
                if (++idx[k] < g.extent_[k]) break;
                idx[k] = 0;
            }
        }
    }

    g.interior_ord_.assign(g.lattice_of_.size(), -1);
    for (NodeId id = 0; id < g.lattice_of_.size(); ++id) {
        if (g.cls_of_[id] == NodeClass::Interior) {
            g.interior_ord_[id] = static_cast<std::int32_t>(g.interior_.size());
            g.interior_.push_back(id);
        }
    }
    if (g.interior_.empty()) throw DegenerateGrid("grid has no interior node");

    // Pass 5: stencil tables.
    g.arms_.resize(g.interior_.size() * n);
    g.diags_.resize(g.interior_.size() * g.npairs_);
    g.unit_arms_.assign(g.interior_.size(), 1);
    g.near_boundary_.assign(g.interior_.size(), 0);
    std::vector<int> idx(n);
    for (std::size_t ord = 0; ord < g.interior_.size(); ++ord) {
        const NodeId id = g.interior_[ord];
        const std::int64_t flat = g.lattice_of_[id];
        g.multi_index(id, idx);
        const auto p = g.position(id);

        auto neighbour = [&](int di, int dj, int axis_i, int axis_j) -> NodeId {
            std::int64_t nb = flat + static_cast<std::int64_t>(di) * g.stride_[axis_i];
            if (axis_j >= 0) nb += static_cast<std::int64_t>(dj) * g.stride_[axis_j];
            return static_cast<NodeId>(g.node_id_[nb]);
        };
        auto arm_length = [&](NodeId nb, int axis, int sign) -> double {
            if (g.cls_of_[nb] == NodeClass::Interior) return h;
            g.near_boundary_[ord] = 1;
            const auto s = g.position(nb);
            const double a = sign * (s[axis] - p[axis]);
            return std::max(a, 1e-14 * h);
        };
        auto diag_fraction = [&](NodeId nb, int ai, int aj, int si, int sj) -> double {
            if (g.cls_of_[nb] == NodeClass::Interior) return 1.0;
            g.near_boundary_[ord] = 1;
            const auto s = g.position(nb);
            const double t = (si * (s[ai] - p[ai]) + sj * (s[aj] - p[aj])) / (2.0 * h);
            return std::max(t, 1e-14);
        };

        for (int k = 0; k < n; ++k) {
            Grid::Arm& a = g.arms_[ord * n + k];
            a.plus = neighbour(+1, 0, k, -1);
            a.minus = neighbour(-1, 0, k, -1);
            a.ap = arm_length(a.plus, k, +1);
            a.am = arm_length(a.minus, k, -1);
            if (a.ap != h || a.am != h) g.unit_arms_[ord] = 0;
        }
        for (int i = 0; i < n - 1; ++i)
            for (int j = i + 1; j < n; ++j) {
                Grid::DiagArm& da = g.diags_[ord * g.npairs_ + g.pair_index(i, j)];
                da.pp = neighbour(+1, +1, i, j);
                da.pm = neighbour(+1, -1, i, j);
                da.mp = neighbour(-1, +1, i, j);
                da.mm = neighbour(-1, -1, i, j);
                da.tpp = diag_fraction(da.pp, i, j, +1, +1);
                da.tpm = diag_fraction(da.pm, i, j, +1, -1);
                da.tmp = diag_fraction(da.mp, i, j, -1, +1);
                da.tmm = diag_fraction(da.mm, i, j, -1, -1);
                if (da.tpp != 1.0 || da.tpm != 1.0 || da.tmp != 1.0 || da.tmm != 1.0)
                    g.unit_arms_[ord] = 0;
            }
    }

    return g;
}

}  // namespace smcf
