#pragma once

#include <utility>
#include <vector>

#include "fracldg/frac_time.hpp"
#include "fracldg/solvers.hpp"

namespace fracldg {

/// Polynomial in monomial form, c[j] x^j.
struct Poly {
    std::vector<double> c;

    double operator()(double x) const;
    Poly deriv() const;
    int degree() const { return static_cast<int>(c.size()) - 1; }
};

/// (x^2 - 1)^m with exact integer coefficients.
Poly bump_poly(int m);

/// Left/right Riemann-Liouville derivative of order beta (1,2) of the
/// zero-extended polynomial on [-1,1], by expansion in (1 +/- x) powers and
/// the power rule D^beta (1+x)^k = Gamma(k+1)/Gamma(k+1-beta) (1+x)^{k-beta}.
double rl_left_deriv_poly(const Poly& p, double beta, double x);
double rl_right_deriv_poly(const Poly& p, double beta, double x);

/// (-Laplace)^{beta/2} of the zero-extended polynomial:
/// (D_L^beta + D_R^beta) / (2 cos(beta pi / 2)). Requires p(+-1) = 0.
double frac_laplacian_poly(const Poly& p, double beta, double x);

/// Mid-point quadrature value of int_0^1 W(a) cD_t^a t^2 da with S nodes.
double dist_order_midpoint_t2(const WeightFunction& w, double t, int num_nodes);

/// D_t^{W} t^2: closed form 2(t^2-t)/ln t for W = Gamma(3-alpha); reference
/// mid-point evaluation at S = 10^4 otherwise. Requires t > 0.
double dist_order_of_t2(const WeightFunction& w, double t);

enum class CaseId { Ex1Diffusion, Ex2Burgers, Ex3Nls, Ex4CoupledNls };
enum class ForcingMode { Analytic, DiscreteConsistent };

/// One of the four manufactured experiments: exact solution t^2 (x^2-1)^m on
/// [-1,1] (times (1+i) for the complex cases), coefficients eps(beta) and the
/// forcing that makes it exact.
struct ManufacturedCase {
    CaseId id;
    double beta;
    ForcingMode mode;
    WeightFunction weight;
    double T = 0.5;

    int bump_power = 0;     // m
    Poly profile;           // (x^2-1)^m
    double eps1 = 0.0;      // diffusion coefficient (also eps in ex1/ex2)
    double eps2 = 0.0;      // nonlinearity coefficient
    double eps3 = 0.0, eps4 = 0.0;

    /// x -> (-Laplace)^{beta/2} (x^2-1)^m, closed form.
    ScalarFn profile_frac_lap;
};

ManufacturedCase make_case(CaseId id, double beta, ForcingMode mode,
                           const WeightFunction& weight);

/// Exact solution: real value for ex1/ex2, (re, im) for ex3 and both ex4 fields.
double exact_scalar(const ManufacturedCase& c, double x, double t);
std::pair<double, double> exact_complex(const ManufacturedCase& c, double x, double t);

/// Forcing g(x, t_n) in complex form: (g1_re, g1_im) and, for the coupled case,
/// (g2_re, g2_im). Real cases use g1_re only. DiscreteConsistent mode replaces
/// the continuous D_t^W t^2 factor by the discrete operator applied to t^2
/// (scheme and level n required then).
struct ForcingValue {
    double g1_re = 0.0, g1_im = 0.0;
    double g2_re = 0.0, g2_im = 0.0;
};
ForcingValue forcing(const ManufacturedCase& c, double x, double t,
                     const DistOrderScheme* scheme = nullptr, int n = -1);

/// EquationSpec wired with the case's coefficients, nonlinearities and
/// (equation-form) forcing terms; the discrete time factor table is
/// precomputed from the scheme.
EquationSpec make_equation(const ManufacturedCase& c, const DistOrderScheme& scheme);

}  // namespace fracldg
