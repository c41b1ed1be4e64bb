#include "fracldg/solvers.hpp"

#include <cmath>

namespace fracldg {

SolverState::SolverState(EquationSpec eq, SpacePtr space, DistOrderScheme scheme,
                         std::vector<ModalField> initial,
                         std::shared_ptr<const FracSpaceOperators> ops,
                         FluxOrientation orientation)
    : eq_(std::move(eq)), space_(std::move(space)), scheme_(std::move(scheme)) {
    const int nc = eq_.num_components();
    if (static_cast<int>(initial.size()) != nc)
        throw std::invalid_argument("SolverState: wrong number of initial fields");
    ops_ = ops ? std::move(ops)
               : std::make_shared<const FracSpaceOperators>(space_, FracOrder(eq_.beta),
                                                            orientation);
    if (ops_->space->dofs() != space_->dofs())
        throw std::invalid_argument("SolverState: operators assembled on a different space");
    for (int c = 0; c < nc; ++c) {
        if (initial[c].space->dofs() != space_->dofs())
            throw std::invalid_argument("SolverState: initial field on a different space");
        hist_[c].reserve(scheme_.num_steps + 1);
        hist_[c].push_back(std::move(initial[c]));
    }

    const auto& M = ops_->mass;
    const auto& A = ops_->stiffness;
    switch (eq_.family) {
        case Family::Diffusion:
        case Family::ConvectionDiffusion:
            implicit_ = scheme_.c0 * M - eq_.eps * A;
            implicit_lu_.compute(implicit_);
            break;
        case Family::Nls: {
            const int m = space_->dofs();
            block_.setZero(2 * m, 2 * m);
            block_.topLeftCorner(m, m) = scheme_.c0 * M;
            block_.bottomRightCorner(m, m) = scheme_.c0 * M;
            block_.topRightCorner(m, m) = eq_.eps1 * A;
            block_.bottomLeftCorner(m, m) = -eq_.eps1 * A;
            block_lu_.compute(block_);
            break;
        }
        case Family::CoupledNls: {
            const int m = space_->dofs();
            block_.setZero(2 * m, 2 * m);
            block_.topLeftCorner(m, m) = scheme_.c0 * M;
            block_.bottomRightCorner(m, m) = scheme_.c0 * M;
            block_.topRightCorner(m, m) = eq_.eps1 * A;
            block_.bottomLeftCorner(m, m) = -eq_.eps1 * A;
            block_lu_.compute(block_);
            block2_ = block_;
            block2_.topRightCorner(m, m) = eq_.eps3 * A;
            block2_.bottomLeftCorner(m, m) = -eq_.eps3 * A;
            block2_lu_.compute(block2_);
            break;
        }
    }
}

void SolverState::check_can_step() const {
    if (level_ + 1 > scheme_.num_steps)
        throw std::invalid_argument("step: all time levels already computed");
}

void SolverState::record_residual(const Eigen::MatrixXd& mat, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& rhs) {
    const double denom = std::max(rhs.norm(), 1e-300);
    last_residual_ = (mat * x - rhs).norm() / denom;
    max_residual_ = std::max(max_residual_, last_residual_);
}

Eigen::VectorXd SolverState::convection_vector(const ModalField& u) const {
    const auto& space = *space_;
    const auto& mesh = space.mesh();
    const auto& quad = space.quadrature();
    const int K = mesh.num_cells;
    const int nm = space.modes();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dofs());

    // traces at the K+1 faces; homogeneous Dirichlet exterior values
    std::vector<double> um(K + 1, 0.0), up(K + 1, 0.0);
    for (int k = 0; k < K; ++k) {
        const double sk = space.cell_scale(k);
        double left = 0.0, right = 0.0;
        for (int m = 0; m < nm; ++m) {
            const double c = u.coeffs[space.dof_index(k, m)];
            left += c * space.phi_left(m);
            right += c * space.phi_right(m);
        }
        up[k] = sk * left;
        um[k + 1] = sk * right;
    }

    double lf_speed = 0.0;
    for (int f = 0; f <= K; ++f)
        lf_speed = std::max(lf_speed,
                            std::max(std::abs(eq_.flux_df(um[f])), std::abs(eq_.flux_df(up[f]))));

    std::vector<double> fhat(K + 1);
    for (int f = 0; f <= K; ++f)
        fhat[f] = 0.5 * (eq_.flux_f(um[f]) + eq_.flux_f(up[f])) - 0.5 * lf_speed * (up[f] - um[f]);

    for (int k = 0; k < K; ++k) {
        const double sk = space.cell_scale(k);
        for (int q = 0; q < space.num_quad(); ++q) {
            double uq = 0.0;
            for (int m = 0; m < nm; ++m)
                uq += u.coeffs[space.dof_index(k, m)] * space.phi(q, m);
            uq *= sk;
            const double fw = eq_.flux_f(uq) * quad.weights[q];
            for (int i = 0; i < nm; ++i)
                out[space.dof_index(k, i)] -= fw * space.dphi(q, i) * sk;
        }
        for (int i = 0; i < nm; ++i) {
            out[space.dof_index(k, i)] += fhat[k + 1] * sk * space.phi_right(i);
            out[space.dof_index(k, i)] -= fhat[k] * sk * space.phi_left(i);
        }
    }
    return out;
}

Eigen::VectorXd SolverState::nls_vector(const ModalField& a, const ModalField& b,
                                        const ScalarFn& f) const {
    // Galerkin vector of f(a^2 + b^2) * b
    const auto& space = *space_;
    const auto& quad = space.quadrature();
    const int nm = space.modes();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dofs());
    for (int k = 0; k < space.mesh().num_cells; ++k) {
        const double sk = space.cell_scale(k);
        const double half_h = 0.5 * space.mesh().width(k);
        for (int q = 0; q < space.num_quad(); ++q) {
            double av = 0.0, bv = 0.0;
            for (int m = 0; m < nm; ++m) {
                av += a.coeffs[space.dof_index(k, m)] * space.phi(q, m);
                bv += b.coeffs[space.dof_index(k, m)] * space.phi(q, m);
            }
            av *= sk;
            bv *= sk;
            const double val = f(av * av + bv * bv) * bv * quad.weights[q] * half_h;
            for (int i = 0; i < nm; ++i) out[space.dof_index(k, i)] += val * sk * space.phi(q, i);
        }
    }
    return out;
}

std::array<Eigen::VectorXd, 4> SolverState::coupled_vectors(
    const std::array<ModalField, 4>& u) const {
    // Galerkin vectors of f(|u1|^2,|u2|^2)*{q,p} and g(|u1|^2,|u2|^2)*{theta,ups}
    const auto& space = *space_;
    const auto& quad = space.quadrature();
    const int nm = space.modes();
    std::array<Eigen::VectorXd, 4> out;
    for (auto& v : out) v = Eigen::VectorXd::Zero(space.dofs());
    for (int k = 0; k < space.mesh().num_cells; ++k) {
        const double sk = space.cell_scale(k);
        const double half_h = 0.5 * space.mesh().width(k);
        for (int q = 0; q < space.num_quad(); ++q) {
            double v[4] = {0, 0, 0, 0};
            for (int m = 0; m < nm; ++m) {
                const double phi = space.phi(q, m);
                for (int c = 0; c < 4; ++c)
                    v[c] += u[c].coeffs[space.dof_index(k, m)] * phi;
            }
            for (int c = 0; c < 4; ++c) v[c] *= sk;
            const double s1 = v[0] * v[0] + v[1] * v[1];
            const double s2 = v[2] * v[2] + v[3] * v[3];
            const double fv = eq_.cnls_f(s1, s2), gv = eq_.cnls_g(s1, s2);
            const double w = quad.weights[q] * half_h;
            const double vals[4] = {fv * v[1] * w, fv * v[0] * w, gv * v[3] * w, gv * v[2] * w};
            for (int i = 0; i < nm; ++i) {
                const double phi = sk * space.phi(q, i);
                for (int c = 0; c < 4; ++c) out[c][space.dof_index(k, i)] += vals[c] * phi;
            }
        }
    }
    return out;
}

ModalField step_diffusion(SolverState& st, const ModalField& g) {
    st.check_can_step();
    const int n = st.level_ + 1;
    const ModalField hist = history_rhs(st.scheme_, st.hist_[0], n);
    const Eigen::VectorXd rhs = st.ops_->mass * (hist.coeffs + g.coeffs);
    Eigen::VectorXd x = st.implicit_lu_.solve(rhs);
    st.record_residual(st.implicit_, x, rhs);
    st.picard_increments_.clear();
    ModalField u{st.space_, std::move(x)};
    st.hist_[0].push_back(u);
    st.level_ = n;
    return u;
}

ModalField step_convection_diffusion(SolverState& st, const ModalField& g) {
    st.check_can_step();
    const int n = st.level_ + 1;
    const ModalField hist = history_rhs(st.scheme_, st.hist_[0], n);
    const Eigen::VectorXd rhs_base = st.ops_->mass * (hist.coeffs + g.coeffs);

    ModalField u = st.hist_[0].back();
    st.picard_increments_.clear();
    bool converged = false;
    Eigen::VectorXd rhs;
    for (int it = 0; it < st.picard_.max_iters; ++it) {
        rhs = rhs_base - st.convection_vector(u);
        Eigen::VectorXd x = st.implicit_lu_.solve(rhs);
        const double inc = (x - u.coeffs).norm();
        u.coeffs = std::move(x);
        st.picard_increments_.push_back(inc);
        if (!std::isfinite(inc))
            throw SolverError("step_convection_diffusion: nonlinear divergence (non-finite iterate)",
                              n, inc);
        if (inc <= st.picard_.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("step_convection_diffusion: nonlinear divergence after max iterations", n,
                          st.picard_increments_.back());
    st.record_residual(st.implicit_, u.coeffs, rhs);
    st.hist_[0].push_back(u);
    st.level_ = n;
    return u;
}

std::pair<ModalField, ModalField> step_nls(SolverState& st, const ModalField& g_p,
                                           const ModalField& g_q) {
    st.check_can_step();
    const int n = st.level_ + 1;
    const int m = st.space_->dofs();
    const ModalField hist_p = history_rhs(st.scheme_, st.hist_[0], n);
    const ModalField hist_q = history_rhs(st.scheme_, st.hist_[1], n);
    Eigen::VectorXd rhs_base(2 * m);
    rhs_base.head(m) = st.ops_->mass * (hist_p.coeffs + g_p.coeffs);
    rhs_base.tail(m) = st.ops_->mass * (hist_q.coeffs + g_q.coeffs);

    ModalField p = st.hist_[0].back(), q = st.hist_[1].back();
    st.picard_increments_.clear();
    bool converged = false;
    Eigen::VectorXd rhs;
    for (int it = 0; it < st.picard_.max_iters; ++it) {
        rhs = rhs_base;
        if (st.eq_.eps2 != 0.0) {
            rhs.head(m) -= st.eq_.eps2 * st.nls_vector(p, q, st.eq_.nls_f);
            rhs.tail(m) += st.eq_.eps2 * st.nls_vector(q, p, st.eq_.nls_f);
        }
        Eigen::VectorXd x = st.block_lu_.solve(rhs);
        const double inc = std::hypot((x.head(m) - p.coeffs).norm(), (x.tail(m) - q.coeffs).norm());
        p.coeffs = x.head(m);
        q.coeffs = x.tail(m);
        st.picard_increments_.push_back(inc);
        if (!std::isfinite(inc))
            throw SolverError("step_nls: nonlinear divergence (non-finite iterate)", n, inc);
        if (inc <= st.picard_.tol) {
            converged = true;
            break;
        }
        if (st.eq_.eps2 == 0.0) {  // linear problem, one solve suffices
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("step_nls: nonlinear divergence after max iterations", n,
                          st.picard_increments_.back());
    Eigen::VectorXd x(2 * m);
    x.head(m) = p.coeffs;
    x.tail(m) = q.coeffs;
    st.record_residual(st.block_, x, rhs);
    st.hist_[0].push_back(p);
    st.hist_[1].push_back(q);
    st.level_ = n;
    return {p, q};
}

std::array<ModalField, 4> step_coupled_nls(SolverState& st, const std::array<ModalField, 4>& g) {
    st.check_can_step();
    const int n = st.level_ + 1;
    const int m = st.space_->dofs();
    std::array<ModalField, 4> hist;
    for (int c = 0; c < 4; ++c) hist[c] = history_rhs(st.scheme_, st.hist_[c], n);
    Eigen::VectorXd rhs1_base(2 * m), rhs2_base(2 * m);
    rhs1_base.head(m) = st.ops_->mass * (hist[0].coeffs + g[0].coeffs);
    rhs1_base.tail(m) = st.ops_->mass * (hist[1].coeffs + g[1].coeffs);
    rhs2_base.head(m) = st.ops_->mass * (hist[2].coeffs + g[2].coeffs);
    rhs2_base.tail(m) = st.ops_->mass * (hist[3].coeffs + g[3].coeffs);

    std::array<ModalField, 4> u{st.hist_[0].back(), st.hist_[1].back(), st.hist_[2].back(),
                                st.hist_[3].back()};
    st.picard_increments_.clear();
    bool converged = false;
    Eigen::VectorXd rhs1, rhs2;
    for (int it = 0; it < st.picard_.max_iters; ++it) {
        auto nl = st.coupled_vectors(u);
        rhs1 = rhs1_base;
        rhs2 = rhs2_base;
        rhs1.head(m) -= st.eq_.eps2 * nl[0];
        rhs1.tail(m) += st.eq_.eps2 * nl[1];
        rhs2.head(m) -= st.eq_.eps4 * nl[2];
        rhs2.tail(m) += st.eq_.eps4 * nl[3];
        Eigen::VectorXd x1 = st.block_lu_.solve(rhs1);
        Eigen::VectorXd x2 = st.block2_lu_.solve(rhs2);
        double inc2 = (x1.head(m) - u[0].coeffs).squaredNorm() +
                      (x1.tail(m) - u[1].coeffs).squaredNorm() +
                      (x2.head(m) - u[2].coeffs).squaredNorm() +
                      (x2.tail(m) - u[3].coeffs).squaredNorm();
        u[0].coeffs = x1.head(m);
        u[1].coeffs = x1.tail(m);
        u[2].coeffs = x2.head(m);
        u[3].coeffs = x2.tail(m);
        st.picard_increments_.push_back(std::sqrt(inc2));
        if (!std::isfinite(inc2))
            throw SolverError("step_coupled_nls: nonlinear divergence (non-finite iterate)", n,
                              std::sqrt(inc2));
        if (st.picard_increments_.back() <= st.picard_.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("step_coupled_nls: nonlinear divergence after max iterations", n,
                          st.picard_increments_.back());
    Eigen::VectorXd x(2 * m);
    x.head(m) = u[0].coeffs;
    x.tail(m) = u[1].coeffs;
    st.record_residual(st.block_, x, rhs1);
    for (int c = 0; c < 4; ++c) st.hist_[c].push_back(u[c]);
    st.level_ = n;
    return u;
}

namespace {

// project the spatial factors of each forcing term once
struct ProjectedForcing {
    std::vector<ModalField> spatial;
    std::vector<std::function<double(double, int)>> temporal;

    ProjectedForcing(const Forcing& f, const SpacePtr& space) {
        for (const auto& term : f) {
            spatial.push_back(project_l2(space, term.spatial));
            temporal.push_back(term.temporal);
        }
    }

    ModalField at(const SpacePtr& space, double t, int n) const {
        ModalField g(space);
        for (std::size_t i = 0; i < spatial.size(); ++i)
            g.coeffs += temporal[i](t, n) * spatial[i].coeffs;
        return g;
    }
};

}  // namespace

SolverState run(const EquationSpec& eq, const SpacePtr& space, const DistOrderScheme& scheme,
                const std::vector<ScalarFn>& initial, double T,
                std::shared_ptr<const FracSpaceOperators> ops, FluxOrientation orientation) {
    if (std::abs(scheme.num_steps * scheme.dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("run: require M * dt == T");
    const int nc = eq.num_components();
    if (static_cast<int>(initial.size()) != nc)
        throw std::invalid_argument("run: wrong number of initial data functions");

    std::vector<ModalField> init;
    for (int c = 0; c < nc; ++c) init.push_back(project_l2(space, initial[c]));
    SolverState state(eq, space, scheme, std::move(init), std::move(ops), orientation);

    std::vector<ProjectedForcing> forcing;
    switch (eq.family) {
        case Family::Diffusion:
        case Family::ConvectionDiffusion:
            forcing.emplace_back(eq.forcing_u, space);
            break;
        case Family::Nls:
            forcing.emplace_back(eq.forcing_p, space);
            forcing.emplace_back(eq.forcing_q, space);
            break;
        case Family::CoupledNls:
            forcing.emplace_back(eq.forcing_p, space);
            forcing.emplace_back(eq.forcing_q, space);
            forcing.emplace_back(eq.forcing_p2, space);
            forcing.emplace_back(eq.forcing_q2, space);
            break;
    }

    try {
        for (int n = 1; n <= scheme.num_steps; ++n) {
            const double t = scheme.time(n);
            switch (eq.family) {
                case Family::Diffusion:
                    step_diffusion(state, forcing[0].at(space, t, n));
                    break;
                case Family::ConvectionDiffusion:
                    step_convection_diffusion(state, forcing[0].at(space, t, n));
                    break;
                case Family::Nls:
                    step_nls(state, forcing[0].at(space, t, n), forcing[1].at(space, t, n));
                    break;
                case Family::CoupledNls:
                    step_coupled_nls(state, {forcing[0].at(space, t, n), forcing[1].at(space, t, n),
                                             forcing[2].at(space, t, n),
                                             forcing[3].at(space, t, n)});
                    break;
            }
        }
    } catch (const SolverError&) {
        throw;
    } catch (const std::exception& e) {
        throw SolverError(std::string("run: step failed: ") + e.what(), state.level() + 1, 0.0);
    }
    return state;
}

}  // namespace fracldg
