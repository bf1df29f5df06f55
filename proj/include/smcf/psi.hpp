#pragma once

#include <memory>
#include <span>
#include <vector>

#include "smcf/mat.hpp"
#include "smcf/oracles.hpp"
#include "smcf/stencil.hpp"

namespace smcf {

/// Closed-form map with exact first and second derivatives; the boundary
/// data, the flow's initial data, and the input to the solvability checker.
class PsiField {
public:
    virtual ~PsiField() = default;
    virtual int n() const = 0;
    virtual int m() const = 0;
    virtual Vec value(std::span<const double> x) const = 0;
    virtual Jacobian jacobian(std::span<const double> x) const = 0;
    virtual HessianStack hessian(std::span<const double> x) const = 0;
};

/// Wraps a catalog ExactSolution evaluator as boundary/initial data.
class ExactPsi final : public PsiField {
public:
    explicit ExactPsi(ExactSolution sol) : sol_(std::move(sol)) {}
    int n() const override { return sol_.n; }
    int m() const override { return sol_.m; }
    Vec value(std::span<const double> x) const override { return sol_.value(x); }
    Jacobian jacobian(std::span<const double> x) const override { return sol_.jacobian(x); }
    HessianStack hessian(std::span<const double> x) const override { return sol_.hessian(x); }
    const ExactSolution& solution() const { return sol_; }

private:
    ExactSolution sol_;
};

/// Multivariate polynomial per target component.
class PolynomialPsi final : public PsiField {
public:
    struct Term {
        std::vector<int> exponents;  // one per axis
        double coefficient = 0.0;
    };

    PolynomialPsi(int n, std::vector<std::vector<Term>> components);
    int n() const override { return n_; }
    int m() const override { return static_cast<int>(components_.size()); }
    Vec value(std::span<const double> x) const override;
    Jacobian jacobian(std::span<const double> x) const override;
    HessianStack hessian(std::span<const double> x) const override;
    const std::vector<std::vector<Term>>& components() const { return components_; }

private:
    int n_;
    std::vector<std::vector<Term>> components_;
};

/// Base map plus a product-of-sines bump that vanishes on the faces of the
/// box [lo, hi]; the convergence tests' initial perturbation.
class SineBumpPsi final : public PsiField {
public:
    SineBumpPsi(std::shared_ptr<const PsiField> base, Vec lo, Vec hi, double amplitude);
    int n() const override { return base_->n(); }
    int m() const override { return base_->m(); }
    Vec value(std::span<const double> x) const override;
    Jacobian jacobian(std::span<const double> x) const override;
    HessianStack hessian(std::span<const double> x) const override;

private:
    std::shared_ptr<const PsiField> base_;
    Vec lo_, hi_;
    double amplitude_;
};

/// Samples psi onto the grid: interior nodes at lattice positions, boundary
/// nodes at their snapped locations.
GraphMap sample_map(const PsiField& psi, std::shared_ptr<const Grid> grid);

}  // namespace smcf
