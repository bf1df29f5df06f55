#pragma once

#include <memory>
#include <span>
#include <vector>

#include "smcf/lattice.hpp"
#include "smcf/mat.hpp"

namespace smcf {

/// Jacobian of a grid map at a node: J(i, beta) = d f^beta / d x^i  (n x m).
using Jacobian = Mat;

/// One symmetric n x n Hessian per target component.
using HessianStack = std::vector<Mat>;

/// Sampled map f : domain -> R^m on the non-exterior nodes of a grid.
/// Boundary node values hold the Dirichlet data at the snapped locations.
class GraphMap {
public:
    GraphMap(std::shared_ptr<const Grid> grid, int components)
        : grid_(std::move(grid)),
          m_(components),
          values_(grid_->node_count() * components, 0.0) {}

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
    int components() const { return m_; }

    std::span<double> at(NodeId id) {
        return {values_.data() + static_cast<std::size_t>(id) * m_, static_cast<std::size_t>(m_)};
    }
    std::span<const double> at(NodeId id) const {
        return {values_.data() + static_cast<std::size_t>(id) * m_, static_cast<std::size_t>(m_)};
    }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::shared_ptr<const Grid> grid_;
    int m_;
    std::vector<double> values_;
};

/// Second-order gradient at an interior node.  Centered differences on
/// uniform arms; the three-point nonuniform formula (which degenerates to
/// the centered one) next to snapped boundary neighbours.  Exact on
/// quadratics either way.
void gradient_at(const GraphMap& f, NodeId node, Jacobian& jac);
Jacobian gradient_at(const GraphMap& f, NodeId node);

/// Second derivatives at an interior node: 3-point formulas on the diagonal,
/// the 4-point cross formula for mixed entries, Shortley-Weller weights on
/// snapped arms.  Symmetric by construction.
void hessian_at(const GraphMap& f, NodeId node, HessianStack& hess);
HessianStack hessian_at(const GraphMap& f, NodeId node);

}  // namespace smcf
