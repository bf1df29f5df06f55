#include "smcf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "smcf/errors.hpp"
#include "smcf/metric.hpp"
#include "smcf/rng.hpp"

namespace smcf {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double sigma_max_sym(const Mat& h) {
    const auto eig = jacobi_eigenvalues(h);
    return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

double lambda1_of(const Jacobian& jac) {
    Mat s(jac.rows(), jac.rows());
    gram(jac, s);
    const auto eig = jacobi_eigenvalues(s);
    return std::sqrt(std::max(eig[0], 0.0));
}

// |(v^T H_b v)_b|_2 for a unit direction v.
double form_norm(const HessianStack& hess, std::span<const double> v) {
    double s = 0.0;
    const int n = hess.front().rows();
    for (const auto& h : hess) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) {
            q += h(i, i) * v[i] * v[i];
            for (int j = i + 1; j < n; ++j) q += 2.0 * h(i, j) * v[i] * v[j];
        }
        s += q * q;
    }
    return std::sqrt(s);
}

// sup over unit directions of form_norm.  A 720-angle sweep covers n = 2;
// higher dimensions get 4096 quasi-random directions plus a short local
// ascent from the best one.
double quadratic_form_sup(const HessianStack& hess, int n) {
    if (n == 2) {
        double best = 0.0;
        Vec v(2);
        for (int k = 0; k < 720; ++k) {
            const double a = kTwoPi * k / 720.0;
            v[0] = std::cos(a);
            v[1] = std::sin(a);
            best = std::max(best, form_norm(hess, v));
        }
        return best;
    }

    SplitMix64 rng(0x5eed5eedull);
    Vec v(n), best_v(n, 0.0);
    double best = -1.0;
    for (int k = 0; k < 4096; ++k) {
        double nn = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = rng.gaussian();
            nn += v[i] * v[i];
        }
        nn = std::sqrt(nn);
        if (nn == 0.0) continue;
        for (int i = 0; i < n; ++i) v[i] /= nn;
        const double f = form_norm(hess, v);
        if (f > best) {
            best = f;
            best_v = v;
        }
    }
    if (best <= 0.0) return std::max(best, 0.0);

    // projected gradient ascent on the sphere
    v = best_v;
    double alpha = 0.2;
    const int m = static_cast<int>(hess.size());
    Vec grad(n), cand(n);
    for (int it = 0; it < 20; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double fv = form_norm(hess, v);
        if (fv == 0.0) break;
        for (int b = 0; b < m; ++b) {
            double q = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) q += hess[b](i, j) * v[i] * v[j];
            for (int i = 0; i < n; ++i) {
                double hv = 0.0;
                for (int j = 0; j < n; ++j) hv += hess[b](i, j) * v[j];
                grad[i] += 2.0 * q * hv / fv;
            }
        }
        const double gv = dot(grad, v);
        for (int i = 0; i < n; ++i) grad[i] -= gv * v[i];
        double nn = 0.0;
        for (int i = 0; i < n; ++i) {
            cand[i] = v[i] + alpha * grad[i];
            nn += cand[i] * cand[i];
        }
        nn = std::sqrt(nn);
        if (nn == 0.0) break;
        for (int i = 0; i < n; ++i) cand[i] /= nn;
        const double fc = form_norm(hess, cand);
        if (fc > fv) {
            v = cand;
            best = std::max(best, fc);
            alpha *= 1.2;
        } else {
            alpha *= 0.5;
        }
    }
    return best;
}

Grid fine_grid(const ConvexDomain& domain, double h_solver, int factor) {
    return build_grid(domain, h_solver / factor);
}

struct SampledNorms {
    PsiNorms norms;
    double eta0 = 1.0;
    double worst_lambda = 0.0;
    Vec worst_point;
};

SampledNorms sample_norms(const PsiField& psi, const Grid& fine) {
    SampledNorms out;
    const int n = fine.dim();
    out.worst_point.assign(n, 0.0);
    for (NodeId id = 0; id < fine.node_count(); ++id) {
        const auto pos = fine.position(id);
        const Jacobian jac = psi.jacobian(pos);
        const double l1 = lambda1_of(jac);
        out.norms.sup_dpsi_domain = std::max(out.norms.sup_dpsi_domain, l1);
        if (fine.node_class(id) == NodeClass::Boundary)
            out.norms.sup_dpsi_boundary = std::max(out.norms.sup_dpsi_boundary, l1);

        const HessianStack hess = psi.hessian(pos);
        out.norms.sup_d2psi = std::max(out.norms.sup_d2psi, quadratic_form_sup(hess, n));
        double upper = 0.0;
        for (const auto& h : hess) {
            const double s = sigma_max_sym(h);
            upper += s * s;
        }
        out.norms.sup_d2psi_upper = std::max(out.norms.sup_d2psi_upper, std::sqrt(upper));

        if (l1 > out.worst_lambda) {
            out.worst_lambda = l1;
            for (int k = 0; k < n; ++k) out.worst_point[k] = pos[k];
        }
        if (l1 < 1.0) {
            const auto spec = singular_values(jac);
            out.eta0 = std::max(out.eta0, hyperbolic_angle(spec).cosh_theta);
        }
    }
    return out;
}

void throw_not_spacelike(const SampledNorms& s) {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < s.worst_point.size(); ++k)
        os << (k ? ", " : "") << s.worst_point[k];
    os << ")";
    throw NotSpacelike(s.worst_lambda, os.str());
}

}  // namespace

PsiNorms psi_norms(const PsiField& psi, const ConvexDomain& domain, double h_solver,
                   int sampling_factor) {
    const Grid fine = fine_grid(domain, h_solver, sampling_factor);
    const SampledNorms s = sample_norms(psi, fine);
    for (double v : {s.norms.sup_dpsi_boundary, s.norms.sup_dpsi_domain, s.norms.sup_d2psi})
        if (!std::isfinite(v)) throw NonFiniteError("psi norms are not finite");
    return s.norms;
}

double eta0(const PsiField& psi, const ConvexDomain& domain, double h_solver,
            int sampling_factor) {
    const Grid fine = fine_grid(domain, h_solver, sampling_factor);
    const SampledNorms s = sample_norms(psi, fine);
    if (!(s.worst_lambda < 1.0)) throw_not_spacelike(s);
    return s.eta0;
}

double xi_from_eta0(double eta0_value) {
    if (!(eta0_value >= 1.0)) throw InvalidParameter("eta0 must be >= 1");
    return 1.0 - 1.0 / (eta0_value * eta0_value);
}

double boundary_gradient_bound(double delta, double xi, int n, double sup_d2psi,
                               double sup_dpsi_boundary) {
    if (!(xi >= 0.0) || !(xi < 1.0)) throw InvalidXi("xi must lie in [0, 1)");
    return 4.0 * n * delta / (1.0 - xi) * sup_d2psi +
           std::sqrt(2.0) * sup_dpsi_boundary;
}

BarrierParams barrier_params(const ConvexDomain& domain, double delta, double xi, int n,
                             double sup_d2psi, std::span<const double> p) {
    if (!(xi >= 0.0) || !(xi < 1.0)) throw InvalidXi("xi must lie in [0, 1)");
    if (!(delta > 0.0)) throw InvalidParameter("delta must be positive");
    BarrierParams bp;
    bp.k = 1.0 / delta;
    bp.vk = 4.0 * n * delta * sup_d2psi / (1.0 - xi);
    bp.v = bp.vk / bp.k;
    bp.p.assign(p.begin(), p.end());
    bp.plane = supporting_hyperplane(domain, p);
    return bp;
}

double barrier_margin(const FlowState& state, const BarrierParams& params, int alpha, int sign) {
    if (!state.pinned) throw InvalidParameter("barrier margin needs the pinned initial map");
    const Grid& g = state.f.grid();
    double margin = std::numeric_limits<double>::infinity();
    for (NodeId id = 0; id < g.node_count(); ++id) {
        const double d = params.plane.distance(g.position(id));
        const double s = params.v * std::log1p(params.k * d) -
                         sign * (state.f.at(id)[alpha] - state.pinned->at(id)[alpha]);
        margin = std::min(margin, s);
    }
    return margin;
}

ConditionReport check_condition(const Problem& problem, int sampling_factor) {
    const ConvexDomain& domain = problem.grid->domain();
    const double h = problem.grid->spacing();
    const Grid fine = fine_grid(domain, h, sampling_factor);
    const SampledNorms s = sample_norms(*problem.initial_map, fine);
    if (!(s.worst_lambda < 1.0)) throw_not_spacelike(s);

    ConditionReport rep;
    rep.n = problem.n();
    rep.m = problem.m();
    rep.delta = diameter(domain);
    rep.sup_d2psi = s.norms.sup_d2psi;
    rep.sup_dpsi_boundary = s.norms.sup_dpsi_boundary;
    rep.sup_dpsi_domain = s.norms.sup_dpsi_domain;
    rep.sup_d2psi_upper = s.norms.sup_d2psi_upper;
    rep.eta0 = s.eta0;
    rep.sampling_factor = sampling_factor;
    rep.lhs = 4.0 * rep.n * rep.eta0 * rep.eta0 * rep.delta * rep.sup_d2psi +
              std::sqrt(2.0) * rep.sup_dpsi_boundary;
    rep.satisfied = rep.lhs < 1.0;
    return rep;
}

std::vector<Vec> boundary_probe_points(const ConvexDomain& domain) {
    const int n = domain.dim();
    std::vector<Vec> points;
    switch (domain.kind()) {
        case ConvexDomain::Kind::Box: {
            const Vec& lo = domain.box_lo();
            const Vec& hi = domain.box_hi();
            SplitMix64 rng(0xb0a7ull);
            for (int axis = 0; axis < n; ++axis) {
                for (int side = 0; side < 2; ++side) {
                    for (int k = 0; k < 8; ++k) {
                        Vec p(n);
                        p[axis] = side ? hi[axis] : lo[axis];
                        if (n == 2) {
                            const int other = 1 - axis;
                            p[other] = lo[other] + (hi[other] - lo[other]) * (k + 0.5) / 8.0;
                        } else {
                            for (int j = 0; j < n; ++j)
                                if (j != axis) p[j] = rng.uniform(lo[j], hi[j]);
                        }
                        points.push_back(std::move(p));
                    }
                }
            }
            return points;
        }
        case ConvexDomain::Kind::Ball: {
            const Vec& c = domain.ball_center();
            const double r = domain.ball_radius();
            if (n == 2) {
                for (int k = 0; k < 16; ++k) {
                    const double a = kTwoPi * k / 16.0;
                    points.push_back({c[0] + r * std::cos(a), c[1] + r * std::sin(a)});
                }
            } else {
                SplitMix64 rng(0xba11ull);
                while (static_cast<int>(points.size()) < 16) {
                    Vec d(n);
                    double nn = 0.0;
                    for (int j = 0; j < n; ++j) {
                        d[j] = rng.gaussian();
                        nn += d[j] * d[j];
                    }
                    nn = std::sqrt(nn);
                    if (nn == 0.0) continue;
                    Vec p(n);
                    for (int j = 0; j < n; ++j) p[j] = c[j] + r * d[j] / nn;
                    points.push_back(std::move(p));
                }
            }
            return points;
        }
        case ConvexDomain::Kind::Polytope: {
            const auto verts = domain.vertices();
            for (const auto& face : domain.faces()) {
                std::vector<const Vec*> on_face;
                for (const auto& v : verts)
                    if (std::abs(dot(face.normal, v) - face.offset) <= 1e-9)
                        on_face.push_back(&v);
                if (on_face.empty()) continue;
                Vec centroid(n, 0.0);
                for (const Vec* v : on_face)
                    for (int k = 0; k < n; ++k)
                        centroid[k] += (*v)[k] / static_cast<double>(on_face.size());
                points.push_back(centroid);
                for (std::size_t j = 0; j < on_face.size() && j < 7; ++j) {
                    Vec p(n);
                    for (int k = 0; k < n; ++k) p[k] = 0.5 * (centroid[k] + (*on_face[j])[k]);
                    points.push_back(std::move(p));
                }
            }
            return points;
        }
    }
    return points;
}

Monitor::Monitor(const Problem& problem, int sampling_factor)
    : domain_(problem.grid->domain()),
      n_(problem.n()),
      m_(problem.m()),
      sampling_factor_(sampling_factor) {
    delta_ = diameter(domain_);
    const Grid fine = fine_grid(domain_, problem.grid->spacing(), sampling_factor);
    const SampledNorms s = sample_norms(*problem.initial_map, fine);
    if (!(s.worst_lambda < 1.0)) throw_not_spacelike(s);
    norms_ = s.norms;
    eta0_ = s.eta0;
    probe_points_ = boundary_probe_points(domain_);

    psi_component_sup_.assign(m_, -std::numeric_limits<double>::infinity());
    const GraphMap& init = *problem.initial_values;
    for (NodeId id = 0; id < init.grid().node_count(); ++id)
        for (int c = 0; c < m_; ++c)
            psi_component_sup_[c] = std::max(psi_component_sup_[c], init.at(id)[c]);
}

ConditionReport Monitor::condition_report(const Problem& problem) const {
    ConditionReport rep;
    rep.n = n_;
    rep.m = m_;
    rep.delta = delta_;
    rep.sup_d2psi = norms_.sup_d2psi;
    rep.sup_dpsi_boundary = norms_.sup_dpsi_boundary;
    rep.sup_dpsi_domain = norms_.sup_dpsi_domain;
    rep.sup_d2psi_upper = norms_.sup_d2psi_upper;
    rep.eta0 = eta0_;
    rep.sampling_factor = sampling_factor_;
    rep.lhs = 4.0 * rep.n * rep.eta0 * rep.eta0 * rep.delta * rep.sup_d2psi +
              std::sqrt(2.0) * rep.sup_dpsi_boundary;
    rep.satisfied = rep.lhs < 1.0;
    (void)problem;
    return rep;
}

DiagnosticsRecord Monitor::record(const FlowState& state, double dt, double xi_running) const {
    DiagnosticsRecord rec;
    rec.step = state.step;
    rec.t = state.t;
    rec.dt = dt;
    rec.residual_sup = state.residual_sup;
    rec.max_cosh_theta = state.max_cosh;
    rec.sup_df = state.sup_df;

    double mp = std::numeric_limits<double>::infinity();
    for (int c = 0; c < m_; ++c) mp = std::min(mp, psi_component_sup_[c] - state.max_f[c]);
    rec.max_principle_margin = mp;

    rec.boundary_grad_margin =
        boundary_gradient_bound(delta_, xi_running, n_, norms_.sup_d2psi,
                                norms_.sup_dpsi_boundary) -
        state.boundary_df;

    double bar = std::numeric_limits<double>::infinity();
    for (const auto& p : probe_points_) {
        const BarrierParams bp = barrier_params(domain_, delta_, xi_running, n_,
                                                norms_.sup_d2psi, p);
        for (int alpha = 0; alpha < m_; ++alpha)
            for (int sign : {+1, -1})
                bar = std::min(bar, barrier_margin(state, bp, alpha, sign));
    }
    rec.barrier_margin = bar;

    rec.product_bound_margin = (1.0 - 1.0 / (eta0_ * eta0_)) - state.max_lambda_prod;
    return rec;
}

}  // namespace smcf
