#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

namespace fracldg {

using ScalarFn = std::function<double(double)>;

/// Uniform partition of [a,b] into K cells D^k = [x_{k-1/2}, x_{k+1/2}].
struct Mesh1D {
    double a = 0.0;
    double b = 1.0;
    int num_cells = 1;
    std::vector<double> boundaries;  // size num_cells+1, strictly increasing

    double width(int k) const { return boundaries[k + 1] - boundaries[k]; }
    double left(int k) const { return boundaries[k]; }
    double right(int k) const { return boundaries[k + 1]; }
    /// Cell index containing x (clamped to [0, K-1] at the endpoints).
    int locate(double x) const;
};

Mesh1D build_mesh(double a, double b, int num_cells);

/// Gauss-Legendre rule on [-1,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // sum to 2
};

QuadratureRule gauss_legendre(int n);

/// Legendre polynomial P_m and derivative at xi in [-1,1].
double legendre(int m, double xi);
double legendre_deriv(int m, double xi);

/// Monomial coefficients of the shifted Legendre polynomial P_m(2X-1), X in [0,1].
/// Coefficients are exact integers (alternating binomial products).
std::vector<double> shifted_legendre_coeffs(int m);

/// Discrete DG space: mesh + orthonormal modal Legendre basis of degree N per
/// cell, with precomputed quadrature tables on the reference cell [-1,1].
///
/// Basis on cell k: b_{k,m}(x) = sqrt((2m+1)/h_k) * P_m(xi_k(x)), so the global
/// mass matrix is the identity to round-off.
class DgSpace {
  public:
    DgSpace(Mesh1D mesh, int degree);

    const Mesh1D& mesh() const { return mesh_; }
    int degree() const { return degree_; }
    int modes() const { return degree_ + 1; }
    int dofs() const { return mesh_.num_cells * modes(); }
    int dof_index(int cell, int mode) const { return cell * modes() + mode; }

    /// Quadrature used for projections and operator assembly
    /// (exact for polynomial integrands of degree <= 2*num_quad()-1).
    int num_quad() const { return static_cast<int>(quad_.nodes.size()); }
    const QuadratureRule& quadrature() const { return quad_; }
    /// Richer rule reserved for error norms.
    const QuadratureRule& error_quadrature() const { return err_quad_; }

    /// phi_m at quadrature node q, reference-orthonormal: int phi_m phi_n dxi = delta_mn.
    double phi(int q, int m) const { return phi_values_[q * modes() + m]; }
    double dphi(int q, int m) const { return phi_derivs_[q * modes() + m]; }
    /// Reference-orthonormal basis value at arbitrary xi.
    double phi_at(int m, double xi) const;
    /// Trace values at the reference endpoints.
    double phi_left(int m) const { return phi_left_[m]; }
    double phi_right(int m) const { return phi_right_[m]; }

    /// Physical-basis scaling on cell k: b_{k,m} = phi_m(xi) * sqrt(2/h_k).
    double cell_scale(int k) const { return std::sqrt(2.0 / mesh_.width(k)); }
    double to_reference(int k, double x) const {
        return 2.0 * (x - mesh_.left(k)) / mesh_.width(k) - 1.0;
    }
    double from_reference(int k, double xi) const {
        return mesh_.left(k) + 0.5 * (xi + 1.0) * mesh_.width(k);
    }

  private:
    Mesh1D mesh_;
    int degree_;
    QuadratureRule quad_;
    QuadratureRule err_quad_;
    std::vector<double> phi_values_;
    std::vector<double> phi_derivs_;
    std::vector<double> phi_left_;
    std::vector<double> phi_right_;
};

using SpacePtr = std::shared_ptr<const DgSpace>;

SpacePtr make_space(double a, double b, int num_cells, int degree);

/// Which one-sided trace to take at an element boundary.
enum class Trace { Left, Right };

/// Piecewise-polynomial field given by modal coefficients c[k][m].
struct ModalField {
    SpacePtr space;
    Eigen::VectorXd coeffs;

    ModalField() = default;
    explicit ModalField(SpacePtr s) : space(std::move(s)) {
        coeffs = Eigen::VectorXd::Zero(space->dofs());
    }
    ModalField(SpacePtr s, Eigen::VectorXd c) : space(std::move(s)), coeffs(std::move(c)) {}

    double operator()(double x, Trace side = Trace::Left) const;
};

/// L2 projection of f onto the DG space (computed by Gauss quadrature; exact
/// to round-off for piecewise polynomials of degree <= N).
ModalField project_l2(const SpacePtr& space, const ScalarFn& f);

/// Value of the piecewise polynomial at x; at interior boundaries `side`
/// selects the trace u^- (Left) or u^+ (Right).
double eval_field(const ModalField& u, double x, Trace side = Trace::Left);

/// Broken L2 norm sqrt(sum_k int_{D^k} (u - exact)^2 dx).
double l2_error(const ModalField& u, const ScalarFn& exact);

/// sqrt(int u^2) = |coeffs|_2 for the orthonormal basis.
double l2_norm(const ModalField& u);

/// Discrete inner product (u,v) over the mesh.
double inner(const ModalField& u, const ModalField& v);

ModalField operator+(const ModalField& u, const ModalField& v);
ModalField operator-(const ModalField& u, const ModalField& v);
ModalField operator*(double c, const ModalField& u);

}  // namespace fracldg
