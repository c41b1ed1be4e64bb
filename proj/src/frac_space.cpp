#include "fracldg/frac_space.hpp"

#include <cmath>
#include <stdexcept>

namespace fracldg {

FracOrder::FracOrder(double beta_) : beta(beta_), sigma(2.0 - beta_), s(0.5 * (2.0 - beta_)) {
    if (!(beta > 1.0 && beta < 2.0))
        throw std::invalid_argument("FracOrder: beta must lie in (1,2)");
}

namespace {

double adaptive_gauss(const std::function<double(double)>& f, double lo, double hi, double tol,
                      const QuadratureRule& rule, int depth) {
    auto panel = [&](double l, double h) {
        const double mid = 0.5 * (l + h), half = 0.5 * (h - l);
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            acc += rule.weights[q] * f(mid + half * rule.nodes[q]);
        return acc * half;
    };
    const double whole = panel(lo, hi);
    const double mid = 0.5 * (lo + hi);
    const double halves = panel(lo, mid) + panel(mid, hi);
    if (depth <= 0 || std::abs(whole - halves) <= tol * (1.0 + std::abs(halves))) return halves;
    return adaptive_gauss(f, lo, mid, 0.5 * tol, rule, depth - 1) +
           adaptive_gauss(f, mid, hi, 0.5 * tol, rule, depth - 1);
}

double one_sided_integral(double sigma, const ScalarFn& v, double x, double endpoint, bool left) {
    // I_L^sigma v(x) = (1/Gamma(sigma+1)) int_0^{(x-a)^sigma} v(x - z^{1/sigma}) dz
    // (and the mirrored right integral); the substitution removes the kernel
    // singularity at t = x.
    const double range = left ? (x - endpoint) : (endpoint - x);
    if (range <= 0.0) return 0.0;
    static const QuadratureRule rule = gauss_legendre(12);
    const double upper = std::pow(range, sigma);
    const double inv_sigma = 1.0 / sigma;
    auto g = [&](double z) {
        const double w = std::pow(z, inv_sigma);
        return v(left ? x - w : x + w);
    };
    const double val = adaptive_gauss(g, 0.0, upper, 1e-13, rule, 42);
    return val / std::tgamma(sigma + 1.0);
}

}  // namespace

double riesz_integral(double sigma, const ScalarFn& v, double x, double a, double b) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("riesz_integral: sigma must lie in (0,1)");
    if (x < a || x > b) throw std::invalid_argument("riesz_integral: x outside domain");
    const double s = 0.5 * sigma;
    const double il = one_sided_integral(sigma, v, x, a, true);
    const double ir = one_sided_integral(sigma, v, x, b, false);
    return (il + ir) / (2.0 * std::cos(s * M_PI));
}

double kernel_moment(double sigma, double target_left, double target_width, double source_left,
                     double source_width, int p, int q) {
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw std::invalid_argument("kernel_moment: sigma must lie in (0,1]");
    if (p < 0 || q < 0) throw std::invalid_argument("kernel_moment: negative monomial degree");
    if (p > 24 || q > 24)
        throw std::runtime_error("kernel_moment: assembly failure, degree too large");
    const double c = target_left, h1 = target_width;
    const double d = source_left, h2 = source_width;
    if (!(h1 > 0.0 && h2 > 0.0))
        throw std::invalid_argument("kernel_moment: cell widths must be positive");

    const double tol = 1e-12 * (h1 + h2);
    if (std::abs(c - d) <= tol && std::abs(h1 - h2) <= tol) {
        // Coincident cell, triangular region t < x:
        //   h^{sigma+1} B(sigma, q+1) / (p+q+sigma+1)
        return std::pow(h1, sigma + 1.0) * std::tgamma(sigma) * std::tgamma(q + 1.0) /
               (std::tgamma(sigma + q + 1.0) * (p + q + sigma + 1.0));
    }
    if (d + h2 > c + tol)
        throw std::invalid_argument("kernel_moment: source cell must lie left of target");

    // outer integral of X^p (x-e)^nu over the target cell, X = (x-c)/h1
    auto outer = [&](double nu, double e) {
        const double w0 = std::max(c - e, 0.0);
        double binom = 1.0, acc = 0.0;
        for (int r = p; r >= 0; --r) {
            // binom = C(p,r) built incrementally from r = p downward
            const double sign_pow = ((p - r) % 2 == 0) ? 1.0 : -1.0;
            const double ex = nu + r + 1.0;
            acc += binom * sign_pow * std::pow(w0, p - r) *
                   (std::pow(w0 + h1, ex) - std::pow(w0, ex)) / ex;
            binom *= static_cast<double>(r) / (p - r + 1.0);
        }
        return acc / std::pow(h1, p);
    };

    // inner integral unrolled: I_q(y) = sum_i -(q!/(q-i)!) h2^{q-i}/(sigma)_{i+1} (y-h2)^{sigma+i}
    //                                   + q!/(sigma)_{q+1} (y^{sigma+q} - (y-h2)^{sigma+q})
    double result = 0.0;
    double fall = 1.0;   // q!/(q-i)!
    double poch = sigma; // (sigma)_{i+1}
    for (int i = 0; i < q; ++i) {
        const double coeff = -fall * std::pow(h2, q - i) / poch;
        result += coeff * outer(sigma + i, d + h2);
        fall *= static_cast<double>(q - i);
        poch *= sigma + i + 1.0;
    }
    double poch_full = 1.0;
    for (int r = 0; r <= q; ++r) poch_full *= sigma + r;
    double qfact = 1.0;
    for (int r = 2; r <= q; ++r) qfact *= r;
    result += (qfact / poch_full) * (outer(sigma + q, d) - outer(sigma + q, d + h2));
    return result / std::pow(h2, q);
}

Eigen::MatrixXd assemble_mass(const DgSpace& space) {
    const int dofs = space.dofs();
    const int nm = space.modes();
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(dofs, dofs);
    for (int k = 0; k < space.mesh().num_cells; ++k) {
        const double jac = 0.5 * space.mesh().width(k) * space.cell_scale(k) * space.cell_scale(k);
        for (int i = 0; i < nm; ++i)
            for (int m = 0; m < nm; ++m) {
                double acc = 0.0;
                for (int q = 0; q < space.num_quad(); ++q)
                    acc += space.quadrature().weights[q] * space.phi(q, i) * space.phi(q, m);
                mass(space.dof_index(k, i), space.dof_index(k, m)) = acc * jac;
            }
    }
    return mass;
}

namespace {

// One-sided first-derivative operator: flux u_hat = u^- (TraceLeft) or
// u^+ (TraceRight) at every face, with a zero exterior trace at the single
// boundary face whose trace would come from outside the domain.
Eigen::MatrixXd first_derivative_matrix(const DgSpace& space, Trace flux_side) {
    const int dofs = space.dofs();
    const int nm = space.modes();
    const int K = space.mesh().num_cells;
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(dofs, dofs);

    // volume integral int phi_m phi_i' dxi on the reference cell
    Eigen::MatrixXd vol(nm, nm);
    for (int i = 0; i < nm; ++i)
        for (int m = 0; m < nm; ++m) {
            double acc = 0.0;
            for (int q = 0; q < space.num_quad(); ++q)
                acc += space.quadrature().weights[q] * space.phi(q, m) * space.dphi(q, i);
            vol(m, i) = acc;
        }

    for (int k = 0; k < K; ++k) {
        const double sk = space.cell_scale(k);
        for (int i = 0; i < nm; ++i)
            for (int m = 0; m < nm; ++m)
                mat(space.dof_index(k, i), space.dof_index(k, m)) -=
                    (2.0 / space.mesh().width(k)) * vol(m, i);

        if (flux_side == Trace::Left) {
            // right face of cell k: u_hat from cell k itself (all k, incl. x=b)
            for (int i = 0; i < nm; ++i)
                for (int m = 0; m < nm; ++m)
                    mat(space.dof_index(k, i), space.dof_index(k, m)) +=
                        sk * space.phi_right(i) * sk * space.phi_right(m);
            // left face: u_hat from cell k-1; zero exterior trace at x=a
            if (k > 0) {
                const double sn = space.cell_scale(k - 1);
                for (int i = 0; i < nm; ++i)
                    for (int m = 0; m < nm; ++m)
                        mat(space.dof_index(k, i), space.dof_index(k - 1, m)) -=
                            sk * space.phi_left(i) * sn * space.phi_right(m);
            }
        } else {
            // left face of cell k: u_hat from cell k itself (all k, incl. x=a)
            for (int i = 0; i < nm; ++i)
                for (int m = 0; m < nm; ++m)
                    mat(space.dof_index(k, i), space.dof_index(k, m)) -=
                        sk * space.phi_left(i) * sk * space.phi_left(m);
            // right face: u_hat from cell k+1; zero exterior trace at x=b
            if (k + 1 < K) {
                const double sn = space.cell_scale(k + 1);
                for (int i = 0; i < nm; ++i)
                    for (int m = 0; m < nm; ++m)
                        mat(space.dof_index(k, i), space.dof_index(k + 1, m)) +=
                            sk * space.phi_right(i) * sn * space.phi_left(m);
            }
        }
    }
    return mat;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble_ldg_derivatives(const DgSpace& space,
                                                                     FluxOrientation orientation) {
    Eigen::MatrixXd from_left = first_derivative_matrix(space, Trace::Left);
    Eigen::MatrixXd from_right = first_derivative_matrix(space, Trace::Right);
    if (orientation == FluxOrientation::Left)
        return {std::move(from_left), std::move(from_right)};
    return {std::move(from_right), std::move(from_left)};
}

Eigen::MatrixXd assemble_riesz_gram(const DgSpace& space, const FracOrder& order) {
    const double sigma = order.sigma;
    const int K = space.mesh().num_cells;
    const int nm = space.modes();
    const int dofs = space.dofs();
    const double inv_gamma = 1.0 / std::tgamma(sigma);

    std::vector<std::vector<double>> leg(nm);
    for (int m = 0; m < nm; ++m) leg[m] = shifted_legendre_coeffs(m);

    // S_ij = (1/Gamma(sigma)) int int_{t<x} b_i(x) (x-t)^{sigma-1} b_j(t) dt dx;
    // exact closed-form moments for same/touching cell pairs, tensor Gauss for
    // separated pairs (the kernel is then analytic and the rule is effectively
    // exact, while the closed form would lose digits to cancellation).
    static const QuadratureRule far_rule = gauss_legendre(20);
    Eigen::MatrixXd smat = Eigen::MatrixXd::Zero(dofs, dofs);

    Eigen::MatrixXd moments(nm, nm);
    for (int k = 0; k < K; ++k) {
        const double ck = space.mesh().left(k), hk = space.mesh().width(k);
        for (int kp = 0; kp <= k; ++kp) {
            const double cs = space.mesh().left(kp), hs = space.mesh().width(kp);
            const double gap = ck - (cs + hs);
            const bool near = (kp == k) || gap < 0.9 * std::max(hk, hs);

            if (near) {
                for (int p = 0; p < nm; ++p)
                    for (int q = 0; q < nm; ++q) moments(p, q) = kernel_moment(sigma, ck, hk, cs, hs, p, q);
                for (int i = 0; i < nm; ++i)
                    for (int j = 0; j < nm; ++j) {
                        double acc = 0.0;
                        for (int p = 0; p <= i; ++p)
                            for (int q = 0; q <= j; ++q) acc += leg[i][p] * leg[j][q] * moments(p, q);
                        smat(space.dof_index(k, i), space.dof_index(kp, j)) =
                            acc * inv_gamma * space.cell_scale(k) * space.cell_scale(kp) *
                            std::sqrt((i + 0.5) * (j + 0.5));
                    }
            } else {
                Eigen::MatrixXd block = Eigen::MatrixXd::Zero(nm, nm);
                const int nq = static_cast<int>(far_rule.nodes.size());
                for (int qa = 0; qa < nq; ++qa) {
                    const double x = ck + 0.5 * (far_rule.nodes[qa] + 1.0) * hk;
                    for (int qb = 0; qb < nq; ++qb) {
                        const double t = cs + 0.5 * (far_rule.nodes[qb] + 1.0) * hs;
                        const double kern = std::pow(x - t, sigma - 1.0) * far_rule.weights[qa] *
                                            far_rule.weights[qb] * 0.25 * hk * hs;
                        const double xik = space.to_reference(k, x);
                        const double xis = space.to_reference(kp, t);
                        for (int i = 0; i < nm; ++i)
                            for (int j = 0; j < nm; ++j)
                                block(i, j) += kern * space.phi_at(i, xik) * space.phi_at(j, xis);
                    }
                }
                for (int i = 0; i < nm; ++i)
                    for (int j = 0; j < nm; ++j)
                        smat(space.dof_index(k, i), space.dof_index(kp, j)) =
                            block(i, j) * inv_gamma * space.cell_scale(k) * space.cell_scale(kp);
            }
        }
    }

    const double norm_const = 1.0 / (2.0 * std::cos(order.s * M_PI));
    return norm_const * (smat + smat.transpose());
}

FracSpaceOperators::FracSpaceOperators(SpacePtr space_, FracOrder order_,
                                       FluxOrientation orientation)
    : space(std::move(space_)), order(order_) {
    mass = assemble_mass(*space);
    std::tie(d_minus, d_plus) = assemble_ldg_derivatives(*space, orientation);
    gram = assemble_riesz_gram(*space, order);
    mass_lu.compute(mass);
    stiffness = gram * mass_lu.solve(d_plus * mass_lu.solve(d_minus));
}

ModalField frac_laplacian_apply(const FracSpaceOperators& ops, const ModalField& u) {
    if (u.coeffs.size() != ops.stiffness.rows())
        throw std::invalid_argument("frac_laplacian_apply: dimension mismatch");
    Eigen::VectorXd p = ops.mass_lu.solve(ops.stiffness * u.coeffs);
    return {u.space, std::move(p)};
}

}  // namespace fracldg
