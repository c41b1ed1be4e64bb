#pragma once

#include <Eigen/Dense>

#include "fracldg/dg_core.hpp"

namespace fracldg {

/// Spatial fractional order beta in (1,2) with the derived integral order
/// sigma = 2 - beta and s = sigma/2 in (0, 1/2).
struct FracOrder {
    double beta;
    double sigma;
    double s;

    explicit FracOrder(double beta_);
};

/// Orientation of the one-sided fluxes: Left takes u from the left and the
/// auxiliary derivative from the right at every face; Right mirrors every
/// one-sided trace.
enum class FluxOrientation { Left, Right };

/// Pointwise Riesz fractional integral
///   Delta_{-s} v(x) = [I_L^sigma v(x) + I_R^sigma v(x)] / (2 cos(s pi)),
/// with I_L^sigma v(x) = (1/Gamma(sigma)) int_a^x (x-t)^{sigma-1} v(t) dt and
/// I_R mirrored; v is zero-extended outside [a,b]. Evaluated by quadrature
/// after the substitution that removes the kernel singularity.
double riesz_integral(double sigma, const ScalarFn& v, double x, double a, double b);

/// Exact moment int int X^p (x-t)^{sigma-1} T^q dt dx over a (target, source)
/// cell pair in local coordinates X,T in [0,1]. The source cell must lie left
/// of (or coincide with) the target cell; coincident cells integrate over the
/// triangle t < x.
double kernel_moment(double sigma, double target_left, double target_width, double source_left,
                     double source_width, int p, int q);

/// Block-diagonal mass matrix (identity to round-off for the orthonormal basis).
Eigen::MatrixXd assemble_mass(const DgSpace& space);

/// LDG first-derivative matrices for the alternating fluxes.
///
/// D_minus: (r,eta) = -(u,eta_x) + u_hat eta^-|_R - u_hat eta^+|_L with
/// u_hat = u^- at interior faces, 0 at x=a (Dirichlet exterior trace), u^- at
/// x=b. D_plus mirrors it: r_hat = r^+ at interior faces and at x=a, 0 at x=b,
/// which makes D_plus = -D_minus^T and keeps the face terms telescoping in the
/// energy identity. FluxOrientation::Right mirrors all one-sided choices.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble_ldg_derivatives(
    const DgSpace& space, FluxOrientation orientation = FluxOrientation::Left);

/// Gram matrix G_ij = (Delta_{-s} phi_j, phi_i), dense, symmetric, PSD.
Eigen::MatrixXd assemble_riesz_gram(const DgSpace& space, const FracOrder& order);

/// Assembled spatial operators for one (mesh, degree, beta) triple.
struct FracSpaceOperators {
    SpacePtr space;
    FracOrder order;
    Eigen::MatrixXd mass;
    Eigen::MatrixXd d_minus;
    Eigen::MatrixXd d_plus;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd stiffness;  // A = G M^{-1} D_plus M^{-1} D_minus
    Eigen::PartialPivLU<Eigen::MatrixXd> mass_lu;

    FracSpaceOperators(SpacePtr space_, FracOrder order_,
                       FluxOrientation orientation = FluxOrientation::Left);
};

/// p with M p = A u, the discrete -(-Laplace)^{beta/2} u.
ModalField frac_laplacian_apply(const FracSpaceOperators& ops, const ModalField& u);

}  // namespace fracldg
