#include "fracldg/dg_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracldg {

Mesh1D build_mesh(double a, double b, int num_cells) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("build_mesh: endpoints must be finite");
    if (!(a < b)) throw std::invalid_argument("build_mesh: require a < b");
    if (num_cells < 1) throw std::invalid_argument("build_mesh: require K >= 1");

    Mesh1D mesh;
    mesh.a = a;
    mesh.b = b;
    mesh.num_cells = num_cells;
    mesh.boundaries.resize(num_cells + 1);
    const double h = (b - a) / num_cells;
    for (int k = 0; k <= num_cells; ++k) mesh.boundaries[k] = a + k * h;
    mesh.boundaries.front() = a;
    mesh.boundaries.back() = b;
    return mesh;
}

int Mesh1D::locate(double x) const {
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), x);
    int k = static_cast<int>(it - boundaries.begin()) - 1;
    return std::clamp(k, 0, num_cells - 1);
}

double legendre(int m, double xi) {
    if (m == 0) return 1.0;
    double pm1 = 1.0, p = xi;
    for (int n = 1; n < m; ++n) {
        double pn1 = ((2 * n + 1) * xi * p - n * pm1) / (n + 1);
        pm1 = p;
        p = pn1;
    }
    return p;
}

double legendre_deriv(int m, double xi) {
    // P'_{n+1} = P'_{n-1} + (2n+1) P_n, stable at the endpoints
    if (m == 0) return 0.0;
    double pm1 = 1.0, p = xi;
    double dm1 = 0.0, d = 1.0;
    for (int n = 1; n < m; ++n) {
        double pn1 = ((2 * n + 1) * xi * p - n * pm1) / (n + 1);
        double dn1 = dm1 + (2 * n + 1) * p;
        pm1 = p;
        p = pn1;
        dm1 = d;
        d = dn1;
    }
    return d;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1 points");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double f = legendre(n, x);
            double df = legendre_deriv(n, x);
            double dx = f / df;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double dp = legendre_deriv(n, x);
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

std::vector<double> shifted_legendre_coeffs(int m) {
    // P_m(2X-1) = sum_j (-1)^{m+j} C(m,j) C(m+j,j) X^j
    std::vector<double> c(m + 1);
    for (int j = 0; j <= m; ++j) {
        double binom1 = 1.0, binom2 = 1.0;
        for (int i = 1; i <= j; ++i) {
            binom1 *= static_cast<double>(m - j + i) / i;
            binom2 *= static_cast<double>(m + i) / i;
        }
        double sign = ((m + j) % 2 == 0) ? 1.0 : -1.0;
        c[j] = sign * std::round(binom1) * std::round(binom2);
    }
    return c;
}

DgSpace::DgSpace(Mesh1D mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
    if (degree_ < 0) throw std::invalid_argument("DgSpace: degree must be >= 0");
    const int n_quad = std::max(degree_ + 3, 2 * degree_ + 2);
    quad_ = gauss_legendre(n_quad);
    err_quad_ = gauss_legendre(std::max(degree_ + 5, 2 * degree_ + 3));

    const int nm = modes();
    phi_values_.resize(n_quad * nm);
    phi_derivs_.resize(n_quad * nm);
    phi_left_.resize(nm);
    phi_right_.resize(nm);
    for (int m = 0; m < nm; ++m) {
        const double norm = std::sqrt(m + 0.5);  // orthonormal on [-1,1]
        for (int q = 0; q < n_quad; ++q) {
            phi_values_[q * nm + m] = norm * legendre(m, quad_.nodes[q]);
            phi_derivs_[q * nm + m] = norm * legendre_deriv(m, quad_.nodes[q]);
        }
        phi_left_[m] = norm * ((m % 2 == 0) ? 1.0 : -1.0);
        phi_right_[m] = norm;
    }
}

double DgSpace::phi_at(int m, double xi) const { return std::sqrt(m + 0.5) * legendre(m, xi); }

SpacePtr make_space(double a, double b, int num_cells, int degree) {
    return std::make_shared<DgSpace>(build_mesh(a, b, num_cells), degree);
}

ModalField project_l2(const SpacePtr& space, const ScalarFn& f) {
    ModalField u(space);
    const auto& mesh = space->mesh();
    const auto& quad = space->quadrature();
    const int nm = space->modes();
    for (int k = 0; k < mesh.num_cells; ++k) {
        const double half_h = 0.5 * mesh.width(k);
        const double scale = space->cell_scale(k);
        for (int q = 0; q < space->num_quad(); ++q) {
            const double x = space->from_reference(k, quad.nodes[q]);
            const double fw = f(x) * quad.weights[q] * half_h;
            for (int m = 0; m < nm; ++m)
                u.coeffs[space->dof_index(k, m)] += fw * scale * space->phi(q, m);
        }
    }
    return u;
}

double eval_field(const ModalField& u, double x, Trace side) {
    const auto& space = *u.space;
    const auto& mesh = space.mesh();
    if (x < mesh.a || x > mesh.b) throw std::invalid_argument("eval_field: x outside domain");
    int k = mesh.locate(x);
    // At an interior boundary pick the cell matching the requested trace.
    for (int kk = std::max(0, k - 1); kk <= std::min(mesh.num_cells - 1, k + 1); ++kk) {
        if (x == mesh.left(kk) && side == Trace::Right) k = kk;
        if (x == mesh.right(kk) && side == Trace::Left) k = kk;
    }
    const double xi = space.to_reference(k, x);
    const double scale = space.cell_scale(k);
    double val = 0.0;
    for (int m = space.degree(); m >= 0; --m)
        val += u.coeffs[space.dof_index(k, m)] * space.phi_at(m, xi);
    return val * scale;
}

double ModalField::operator()(double x, Trace side) const { return eval_field(*this, x, side); }

double l2_error(const ModalField& u, const ScalarFn& exact) {
    const auto& space = *u.space;
    const auto& mesh = space.mesh();
    const auto& quad = space.error_quadrature();
    const int nm = space.modes();
    double total = 0.0;
    for (int k = 0; k < mesh.num_cells; ++k) {
        const double half_h = 0.5 * mesh.width(k);
        const double scale = space.cell_scale(k);
        for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
            const double xi = quad.nodes[q];
            const double x = space.from_reference(k, xi);
            double val = 0.0;
            for (int m = 0; m < nm; ++m)
                val += u.coeffs[space.dof_index(k, m)] * space.phi_at(m, xi);
            val *= scale;
            const double diff = val - exact(x);
            total += diff * diff * quad.weights[q] * half_h;
        }
    }
    return std::sqrt(total);
}

double l2_norm(const ModalField& u) { return u.coeffs.norm(); }

double inner(const ModalField& u, const ModalField& v) {
    if (u.space->dofs() != v.space->dofs())
        throw std::invalid_argument("inner: mismatched spaces");
    return u.coeffs.dot(v.coeffs);
}

ModalField operator+(const ModalField& u, const ModalField& v) {
    return {u.space, u.coeffs + v.coeffs};
}
ModalField operator-(const ModalField& u, const ModalField& v) {
    return {u.space, u.coeffs - v.coeffs};
}
ModalField operator*(double c, const ModalField& u) { return {u.space, c * u.coeffs}; }

}  // namespace fracldg
