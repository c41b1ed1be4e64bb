#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracldg/dg_core.hpp"

namespace fracldg {

/// Weight W(alpha) of the distributed-order derivative, W : (0,1) -> R>=0.
struct WeightFunction {
    std::string name;
    std::function<double(double)> fn;

    double operator()(double alpha) const { return fn(alpha); }

    static WeightFunction flat();    // W == 1
    static WeightFunction gamma3();  // W(alpha) = Gamma(3-alpha)
    static WeightFunction custom(std::function<double(double)> f);
    static WeightFunction preset(const std::string& name);
};

/// Precomputed mid-point quadrature over the order variable plus per-node L1
/// coefficient tables.
///
/// alpha_j = (2j-1)/(2S), dtau_j = theta = 1/S, w_j = W(alpha_j)*theta,
/// lambda_j = dt^alpha_j Gamma(2-alpha_j), a_l = (l+1)^{1-alpha} - l^{1-alpha}.
struct DistOrderScheme {
    int num_nodes = 0;  // S
    double theta = 0.0;
    double dt = 0.0;
    int num_steps = 0;  // M
    std::vector<double> alpha;
    std::vector<double> weights;  // w_j
    std::vector<double> lambda;
    std::vector<std::vector<double>> a;  // a[j][l], l = 0..M-1
    double c0 = 0.0;                     // sum_j w_j / lambda_j

    // Combined history kernels (sums over j collapsed):
    //   kappa[d]  = sum_j w_j/lambda_j (a_{d-1} - a_d),  d = 1..M-1
    //   kappa0[n] = sum_j w_j/lambda_j a_{n-1},          n = 1..M
    std::vector<double> kappa;
    std::vector<double> kappa0;

    double time(int n) const { return n * dt; }
};

DistOrderScheme build_dist_order_scheme(const WeightFunction& w, int num_nodes, double dt,
                                        int num_steps);

/// L1 value delta_t^alpha y^n for samples y^0..y^n at spacing dt:
///   (1/lambda) (y^n - sum_{l=1}^{n-1} (a_{n-l-1}-a_{n-l}) y^l - a_{n-1} y^0).
double caputo_l1_apply(double alpha, double dt, std::span<const double> samples);

/// Weighted history part of the discrete distributed-order operator at level n,
/// so that the operator applied to u^n equals c0*u^n - history_rhs.
ModalField history_rhs(const DistOrderScheme& scheme, std::span<const ModalField> history, int n);

/// Scalar version of history_rhs for separable (in time) exact solutions.
double history_rhs_scalar(const DistOrderScheme& scheme, std::span<const double> history, int n);

}  // namespace fracldg
