#include "smcf/psi.hpp"

#include <cmath>

#include "smcf/errors.hpp"

namespace smcf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double int_pow(double x, int e) {
    double r = 1.0;
    for (int k = 0; k < e; ++k) r *= x;
    return r;
}

}  // namespace

PolynomialPsi::PolynomialPsi(int n, std::vector<std::vector<Term>> components)
    : n_(n), components_(std::move(components)) {
    if (components_.empty()) throw InvalidParameter("polynomial needs at least one component");
    for (const auto& comp : components_)
        for (const auto& t : comp) {
            if (static_cast<int>(t.exponents.size()) != n_)
                throw InvalidParameter("polynomial term exponent count must equal n");
            for (int e : t.exponents)
                if (e < 0) throw InvalidParameter("polynomial exponents must be nonnegative");
        }
}

Vec PolynomialPsi::value(std::span<const double> x) const {
    Vec v(components_.size(), 0.0);
    for (std::size_t c = 0; c < components_.size(); ++c)
        for (const auto& t : components_[c]) {
            double term = t.coefficient;
            for (int k = 0; k < n_; ++k) term *= int_pow(x[k], t.exponents[k]);
            v[c] += term;
        }
    return v;
}

Jacobian PolynomialPsi::jacobian(std::span<const double> x) const {
    Jacobian jac(n_, m());
    for (std::size_t c = 0; c < components_.size(); ++c)
        for (const auto& t : components_[c])
            for (int i = 0; i < n_; ++i) {
                if (t.exponents[i] == 0) continue;
                double term = t.coefficient * t.exponents[i];
                for (int k = 0; k < n_; ++k)
                    term *= int_pow(x[k], k == i ? t.exponents[k] - 1 : t.exponents[k]);
                jac(i, static_cast<int>(c)) += term;
            }
    return jac;
}

HessianStack PolynomialPsi::hessian(std::span<const double> x) const {
    HessianStack hess(m(), Mat(n_, n_));
    for (std::size_t c = 0; c < components_.size(); ++c)
        for (const auto& t : components_[c])
            for (int i = 0; i < n_; ++i)
                for (int j = i; j < n_; ++j) {
                    double factor;
                    if (i == j) {
                        if (t.exponents[i] < 2) continue;
                        factor = static_cast<double>(t.exponents[i]) * (t.exponents[i] - 1);
                    } else {
                        if (t.exponents[i] == 0 || t.exponents[j] == 0) continue;
                        factor = static_cast<double>(t.exponents[i]) * t.exponents[j];
                    }
                    double term = t.coefficient * factor;
                    for (int k = 0; k < n_; ++k) {
                        int e = t.exponents[k];
                        if (k == i) e -= (i == j) ? 2 : 1;
                        if (k == j && i != j) e -= 1;
                        term *= int_pow(x[k], e);
                    }
                    hess[c](i, j) += term;
                    if (i != j) hess[c](j, i) += term;
                }
    return hess;
}

SineBumpPsi::SineBumpPsi(std::shared_ptr<const PsiField> base, Vec lo, Vec hi, double amplitude)
    : base_(std::move(base)), lo_(std::move(lo)), hi_(std::move(hi)), amplitude_(amplitude) {
    if (static_cast<int>(lo_.size()) != base_->n() || hi_.size() != lo_.size())
        throw InvalidParameter("perturbation box dimension mismatch");
}

Vec SineBumpPsi::value(std::span<const double> x) const {
    Vec v = base_->value(x);
    double bump = amplitude_;
    for (std::size_t k = 0; k < lo_.size(); ++k)
        bump *= std::sin(kPi * (x[k] - lo_[k]) / (hi_[k] - lo_[k]));
    for (auto& c : v) c += bump;
    return v;
}

Jacobian SineBumpPsi::jacobian(std::span<const double> x) const {
    Jacobian jac = base_->jacobian(x);
    const int n = base_->n();
    Vec s(n), co(n), w(n);
    for (int k = 0; k < n; ++k) {
        w[k] = kPi / (hi_[k] - lo_[k]);
        s[k] = std::sin(w[k] * (x[k] - lo_[k]));
        co[k] = std::cos(w[k] * (x[k] - lo_[k]));
    }
    for (int i = 0; i < n; ++i) {
        double d = amplitude_ * w[i] * co[i];
        for (int k = 0; k < n; ++k)
            if (k != i) d *= s[k];
        for (int c = 0; c < base_->m(); ++c) jac(i, c) += d;
    }
    return jac;
}

HessianStack SineBumpPsi::hessian(std::span<const double> x) const {
    HessianStack hess = base_->hessian(x);
    const int n = base_->n();
    Vec s(n), co(n), w(n);
    for (int k = 0; k < n; ++k) {
        w[k] = kPi / (hi_[k] - lo_[k]);
        s[k] = std::sin(w[k] * (x[k] - lo_[k]));
        co[k] = std::cos(w[k] * (x[k] - lo_[k]));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double d = amplitude_;
            if (i == j) {
                d *= -w[i] * w[i];
                for (int k = 0; k < n; ++k) d *= s[k];
            } else {
                d *= w[i] * w[j] * co[i] * co[j];
                for (int k = 0; k < n; ++k)
                    if (k != i && k != j) d *= s[k];
            }
            for (int c = 0; c < base_->m(); ++c) {
                hess[c](i, j) += d;
                if (i != j) hess[c](j, i) += d;
            }
        }
    return hess;
}

GraphMap sample_map(const PsiField& psi, std::shared_ptr<const Grid> grid) {
    if (psi.n() != grid->dim()) throw DimensionMismatch("psi dimension differs from the grid");
    GraphMap f(grid, psi.m());
    const Grid& g = f.grid();
    for (NodeId id = 0; id < g.node_count(); ++id) {
        const Vec v = psi.value(g.position(id));
        auto dst = f.at(id);
        for (int c = 0; c < psi.m(); ++c) dst[c] = v[c];
    }
    return f;
}

}  // namespace smcf
