#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "smcf/mat.hpp"

namespace smcf {

using NodeId = std::uint32_t;

/// Closed half-space { y : normal . y <= offset } with |normal| = 1.
struct HalfSpace {
    Vec normal;
    double offset = 0.0;
};

/// Supporting hyperplane at a boundary point p, oriented so that
/// d_p(y) = normal . y - offset is >= 0 on the whole domain and 0 at p.
struct Hyperplane {
    Vec normal;
    double offset = 0.0;

    double distance(std::span<const double> y) const {
        return dot(normal, y) - offset;
    }
};

/// Bounded convex region in n-space: box, ball, or intersection of
/// half-spaces.  Immutable after construction; safe to share across threads.
class ConvexDomain {
public:
    enum class Kind { Box, Ball, Polytope };

    ConvexDomain() = default;  // empty; only as a pre-construction placeholder

    static ConvexDomain box(Vec lo, Vec hi);
    static ConvexDomain ball(Vec center, double radius);
    static ConvexDomain polytope(std::vector<HalfSpace> faces);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    const Vec& box_lo() const { return lo_; }
    const Vec& box_hi() const { return hi_; }
    const Vec& ball_center() const { return center_; }
    double ball_radius() const { return radius_; }
    const std::vector<HalfSpace>& faces() const { return faces_; }

    /// Signed constraint violation: <= 0 inside the closed domain, > 0 outside.
    /// (Exact signed distance for box faces and balls; max half-space residual
    /// for polytopes.)
    double violation(std::span<const double> p) const;
    bool contains(std::span<const double> p, double tol = 0.0) const {
        return violation(p) <= tol;
    }

    void bounding_box(Vec& lo, Vec& hi) const;

    /// Largest t >= 0 such that p + t*d stays in the closed domain.
    /// Requires p inside and d != 0.
    double exit_parameter(std::span<const double> p, std::span<const double> d) const;

    /// Polytope/box corner points (boxes: the 2^n corners).  Used for
    /// diameter computation; not available for balls.
    std::vector<Vec> vertices() const;

private:
    Kind kind_ = Kind::Box;
    int dim_ = 0;
    Vec lo_, hi_;           // box
    Vec center_;            // ball
    double radius_ = 0.0;   // ball
    std::vector<HalfSpace> faces_;  // polytope
};

/// sup of pairwise distances over the domain.
double diameter(const ConvexDomain& domain);

/// Supporting hyperplane at boundary point p (within 1e-9 of the boundary).
Hyperplane supporting_hyperplane(const ConvexDomain& domain, std::span<const double> p);

enum class NodeClass : std::uint8_t { Interior, Boundary, Exterior };

/// Uniform lattice over a convex domain with Interior/Boundary/Exterior node
/// classification and precomputed stencil geometry.
///
/// A node is Interior when its whole second-order stencil (the 2n axis
/// neighbours and the 4*C(n,2) diagonal neighbours) lies in the closed
/// domain.  Every other node appearing in an Interior stencil is snapped to
/// the boundary along the connecting line and marked Boundary; the snapped
/// position is where boundary data gets sampled.  Remaining nodes are
/// Exterior and carry no data.
class Grid {
public:
    /// One axis arm of an interior node's stencil.  `ap`/`am` are the
    /// distances to the plus/minus neighbour (h unless snapped).
    struct Arm {
        NodeId plus = 0, minus = 0;
        double ap = 0.0, am = 0.0;
    };

    /// Diagonal arms for an axis pair (i < j).  `t**` are arm lengths as
    /// fractions of the full diagonal step h*(e_i +- e_j).
    struct DiagArm {
        NodeId pp = 0, pm = 0, mp = 0, mm = 0;
        double tpp = 1.0, tpm = 1.0, tmp = 1.0, tmm = 1.0;
    };

    int dim() const { return n_; }
    double spacing() const { return h_; }
    const ConvexDomain& domain() const { return domain_; }

    std::size_t node_count() const { return lattice_of_.size(); }
    std::size_t interior_count() const { return interior_.size(); }
    std::size_t boundary_count() const { return node_count() - interior_count(); }

    NodeClass node_class(NodeId id) const { return cls_of_[id]; }
    bool is_interior(NodeId id) const { return cls_of_[id] == NodeClass::Interior; }

    /// Compact ids of interior nodes in lexicographic multi-index order.
    std::span<const NodeId> interior_nodes() const { return interior_; }

    /// Position of a node (snapped location for boundary nodes).
    std::span<const double> position(NodeId id) const {
        return {pos_.data() + static_cast<std::size_t>(id) * n_, static_cast<std::size_t>(n_)};
    }

    /// Interior ordinal (index into stencil tables) or -1.
    std::int32_t interior_ordinal(NodeId id) const { return interior_ord_[id]; }
    NodeId interior_node(std::size_t ordinal) const { return interior_[ordinal]; }

    const Arm& arm(std::size_t ordinal, int axis) const {
        return arms_[ordinal * n_ + axis];
    }
    const DiagArm& diag(std::size_t ordinal, int pair) const {
        return diags_[ordinal * npairs_ + pair];
    }
    int pair_index(int i, int j) const;  // i < j
    int pair_count() const { return npairs_; }

    /// All arms exactly h (no snapped neighbour in the stencil).
    bool uniform_stencil(std::size_t ordinal) const { return unit_arms_[ordinal] != 0; }

    /// Interior node with at least one Boundary node in its stencil.
    bool touches_boundary(std::size_t ordinal) const { return near_boundary_[ordinal] != 0; }

    /// Lattice lookup for tests and file output.
    std::span<const int> extents() const { return extent_; }
    std::span<const double> origin() const { return origin_; }
    std::int64_t node_at(std::span<const int> index) const;  // compact id or -1
    NodeClass class_at(std::span<const int> index) const;
    void multi_index(NodeId id, std::span<int> out) const;

private:
    friend Grid build_grid(const ConvexDomain& domain, double h);

    ConvexDomain domain_;
    int n_ = 0;
    int npairs_ = 0;
    double h_ = 0.0;
    Vec origin_;
    std::vector<int> extent_;
    std::vector<std::int64_t> stride_;

    std::vector<std::int64_t> node_id_;     // lattice flat -> compact id or -1
    std::vector<std::int64_t> lattice_of_;  // compact id -> lattice flat
    std::vector<NodeClass> cls_of_;         // per compact id
    std::vector<double> pos_;               // compact id -> n coordinates
    std::vector<NodeId> interior_;
    std::vector<std::int32_t> interior_ord_;
    std::vector<Arm> arms_;
    std::vector<DiagArm> diags_;
    std::vector<std::uint8_t> unit_arms_;
    std::vector<std::uint8_t> near_boundary_;
};

/// Builds the classified grid.  Requires h > 0 and h < extent/4 on every
/// axis; throws DegenerateGrid when no interior node results.
Grid build_grid(const ConvexDomain& domain, double h);

}  // namespace smcf
