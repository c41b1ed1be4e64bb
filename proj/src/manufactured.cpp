#include "fracldg/manufactured.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace fracldg {

double Poly::operator()(double x) const {
    double acc = 0.0;
    for (int j = degree(); j >= 0; --j) acc = acc * x + c[j];
    return acc;
}

Poly Poly::deriv() const {
    if (c.size() <= 1) return Poly{{0.0}};
    Poly d;
    d.c.resize(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) d.c[j - 1] = j * c[j];
    return d;
}

Poly bump_poly(int m) {
    // (x^2-1)^m = sum_i C(m,i) (-1)^{m-i} x^{2i}
    Poly p;
    p.c.assign(2 * m + 1, 0.0);
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        p.c[2 * i] = (((m - i) % 2 == 0) ? 1.0 : -1.0) * binom;
        binom = binom * (m - i) / (i + 1.0);
    }
    return p;
}

namespace {

// expansion coefficients of p into powers of (1+x) or (1-x), exact binomials
std::vector<double> shift_expand(const Poly& p, bool around_minus_one) {
    const int deg = p.degree();
    std::vector<double> out(deg + 1, 0.0);
    for (int j = 0; j <= deg; ++j) {
        if (p.c[j] == 0.0) continue;
        double binom = 1.0;  // C(j,k)
        for (int k = 0; k <= j; ++k) {
            // x^j = sum_k C(j,k) (1+x)^k (-1)^{j-k} = sum_k C(j,k) (-1)^k (1-x)^k
            const double sign = around_minus_one ? (((j - k) % 2 == 0) ? 1.0 : -1.0)
                                                 : ((k % 2 == 0) ? 1.0 : -1.0);
            out[k] += p.c[j] * binom * sign;
            binom = binom * (j - k) / (k + 1.0);
        }
    }
    return out;
}

std::vector<double> power_rule_coeffs(const std::vector<double>& a, double beta) {
    // a_k (1+-x)^k  ->  a_k Gamma(k+1)/Gamma(k+1-beta) (1+-x)^{k-beta}
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        out[k] = a[k] * std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 1.0 - beta));
    return out;
}

double eval_frac_series(const std::vector<double>& g, double beta, double base) {
    // sum_k g_k base^{k-beta}; base >= 0 and g_k = 0 for k < 2, so base = 0 is fine
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k] == 0.0) continue;
        acc += g[k] * std::pow(base, static_cast<double>(k) - beta);
    }
    return acc;
}

void check_beta(double beta) {
    if (!(beta > 1.0 && beta < 2.0))
        throw std::invalid_argument("fractional order beta must lie in (1,2)");
}

}  // namespace

double rl_left_deriv_poly(const Poly& p, double beta, double x) {
    check_beta(beta);
    return eval_frac_series(power_rule_coeffs(shift_expand(p, true), beta), beta, 1.0 + x);
}

double rl_right_deriv_poly(const Poly& p, double beta, double x) {
    check_beta(beta);
    return eval_frac_series(power_rule_coeffs(shift_expand(p, false), beta), beta, 1.0 - x);
}

double frac_laplacian_poly(const Poly& p, double beta, double x) {
    check_beta(beta);
    const double scale = std::max(1.0, std::abs(p.c.empty() ? 0.0 : p.c[0]));
    if (std::abs(p(1.0)) > 1e-12 * scale || std::abs(p(-1.0)) > 1e-12 * scale)
        throw std::invalid_argument(
            "frac_laplacian_poly: invalid manufactured solution, polynomial must vanish at +-1");
    const double dl = rl_left_deriv_poly(p, beta, x);
    const double dr = rl_right_deriv_poly(p, beta, x);
    return (dl + dr) / (2.0 * std::cos(0.5 * beta * M_PI));
}

double dist_order_midpoint_t2(const WeightFunction& w, double t, int num_nodes) {
    if (!(t > 0.0)) throw std::invalid_argument("dist_order_midpoint_t2: t > 0 required");
    double acc = 0.0;
    const double theta = 1.0 / num_nodes;
    for (int j = 1; j <= num_nodes; ++j) {
        const double alpha = (2.0 * j - 1.0) / (2.0 * num_nodes);
        acc += w(alpha) * theta * 2.0 * std::pow(t, 2.0 - alpha) / std::tgamma(3.0 - alpha);
    }
    return acc;
}

double dist_order_of_t2(const WeightFunction& w, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("dist_order_of_t2: t > 0 required");
    if (w.name == "gamma3") {
        // int_0^1 2 t^{2-a} da = 2(t^2-t)/ln t, smooth through t = 1
        const double r = std::log(t);
        const double ratio = (r == 0.0) ? 1.0 : std::expm1(r) / r;
        return 2.0 * t * ratio;
    }
    // high-S mid-point reference; one Richardson step removes the theta^2 term
    const double coarse = dist_order_midpoint_t2(w, t, 5000);
    const double fine = dist_order_midpoint_t2(w, t, 10000);
    return (4.0 * fine - coarse) / 3.0;
}

ManufacturedCase make_case(CaseId id, double beta, ForcingMode mode,
                           const WeightFunction& weight) {
    check_beta(beta);
    ManufacturedCase c;
    c.id = id;
    c.beta = beta;
    c.mode = mode;
    c.weight = weight;

    auto gamma_ratio = [](double a, double b) { return std::exp(std::lgamma(a) - std::lgamma(b)); };
    switch (id) {
        case CaseId::Ex1Diffusion:
        case CaseId::Ex2Burgers:
            c.bump_power = 4;
            c.eps1 = gamma_ratio(8.0 - beta, 8.0);
            break;
        case CaseId::Ex3Nls:
            c.bump_power = 5;
            c.eps1 = gamma_ratio(10.0 - beta, 10.0);
            c.eps2 = 1.0;
            break;
        case CaseId::Ex4CoupledNls:
            c.bump_power = 6;
            c.eps1 = 0.5 * gamma_ratio(13.0 - beta, 13.0);
            c.eps3 = c.eps1;
            c.eps2 = 1.0;
            c.eps4 = 1.0;
            break;
    }
    c.profile = bump_poly(c.bump_power);

    // precompute the closed-form expansion of (-Laplace)^{beta/2} profile
    auto gl = std::make_shared<std::vector<double>>(
        power_rule_coeffs(shift_expand(c.profile, true), beta));
    auto gr = std::make_shared<std::vector<double>>(
        power_rule_coeffs(shift_expand(c.profile, false), beta));
    const double riesz_const = 1.0 / (2.0 * std::cos(0.5 * beta * M_PI));
    c.profile_frac_lap = [gl, gr, beta, riesz_const](double x) {
        return riesz_const *
               (eval_frac_series(*gl, beta, 1.0 + x) + eval_frac_series(*gr, beta, 1.0 - x));
    };
    return c;
}

double exact_scalar(const ManufacturedCase& c, double x, double t) {
    return t * t * c.profile(x);
}

std::pair<double, double> exact_complex(const ManufacturedCase& c, double x, double t) {
    const double v = t * t * c.profile(x);
    return {v, v};
}

namespace {

double time_factor(const ManufacturedCase& c, double t, const DistOrderScheme* scheme, int n) {
    if (c.mode == ForcingMode::Analytic) return dist_order_of_t2(c.weight, t);
    if (scheme == nullptr || n < 1)
        throw std::invalid_argument("forcing: discrete mode needs the scheme and the level n");
    std::vector<double> t2(n);
    for (int l = 0; l < n; ++l) t2[l] = scheme->time(l) * scheme->time(l);
    return scheme->c0 * scheme->time(n) * scheme->time(n) - history_rhs_scalar(*scheme, t2, n);
}

}  // namespace

ForcingValue forcing(const ManufacturedCase& c, double x, double t,
                     const DistOrderScheme* scheme, int n) {
    const double dtw = time_factor(c, t, scheme, n);
    const double phi = c.profile(x);
    const double lap = c.profile_frac_lap(x);
    ForcingValue out;
    switch (c.id) {
        case CaseId::Ex1Diffusion:
            out.g1_re = phi * dtw + c.eps1 * t * t * lap;
            break;
        case CaseId::Ex2Burgers: {
            const double conv = 8.0 * std::pow(t, 4.0) * x * std::pow(x * x - 1.0, 7.0);
            out.g1_re = phi * dtw + conv + c.eps1 * t * t * lap;
            break;
        }
        case CaseId::Ex3Nls: {
            // g = (1+i)(i phi dtw - eps1 t^2 lap + 2 t^6 phi^3)
            const double a = phi * dtw;
            const double b = -c.eps1 * t * t * lap + 2.0 * std::pow(t, 6.0) * phi * phi * phi;
            out.g1_re = b - a;
            out.g1_im = a + b;
            break;
        }
        case CaseId::Ex4CoupledNls: {
            const double a = phi * dtw;
            const double cube = std::pow(t, 6.0) * phi * phi * phi;
            const double b1 = -c.eps1 * t * t * lap + 8.0 * cube;
            const double b2 = -c.eps3 * t * t * lap + 16.0 * cube;
            out.g1_re = b1 - a;
            out.g1_im = b1 + a;
            out.g2_re = b2 - a;
            out.g2_im = b2 + a;
            break;
        }
    }
    return out;
}

EquationSpec make_equation(const ManufacturedCase& c, const DistOrderScheme& scheme) {
    EquationSpec eq;
    eq.beta = c.beta;

    // temporal factor of the D_t^W t^2 forcing term
    std::function<double(double, int)> dtw;
    if (c.mode == ForcingMode::Analytic) {
        auto w = c.weight;
        dtw = [w](double t, int) { return dist_order_of_t2(w, t); };
    } else {
        auto table = std::make_shared<std::vector<double>>(scheme.num_steps + 1, 0.0);
        std::vector<double> t2(scheme.num_steps + 1);
        for (int l = 0; l <= scheme.num_steps; ++l) t2[l] = scheme.time(l) * scheme.time(l);
        for (int n = 1; n <= scheme.num_steps; ++n)
            (*table)[n] = scheme.c0 * t2[n] - history_rhs_scalar(scheme, t2, n);
        dtw = [table](double, int n) { return (*table)[n]; };
    }
    auto t2 = [](double t, int) { return t * t; };
    auto t6 = [](double t, int) { return std::pow(t, 6.0); };

    const Poly profile = c.profile;
    const ScalarFn phi = [profile](double x) { return profile(x); };
    const ScalarFn lap = c.profile_frac_lap;

    switch (c.id) {
        case CaseId::Ex1Diffusion:
        case CaseId::Ex2Burgers: {
            eq.family = (c.id == CaseId::Ex1Diffusion) ? Family::Diffusion
                                                       : Family::ConvectionDiffusion;
            eq.eps = c.eps1;
            const double eps = c.eps1;
            eq.forcing_u.push_back({phi, dtw});
            eq.forcing_u.push_back({lap, [eps, t2](double t, int n) { return eps * t2(t, n); }});
            if (c.id == CaseId::Ex2Burgers) {
                eq.flux_f = [](double u) { return 0.5 * u * u; };
                eq.flux_df = [](double u) { return u; };
                eq.forcing_u.push_back({[](double x) { return 8.0 * x * std::pow(x * x - 1.0, 7.0); },
                                        [](double t, int) { return std::pow(t, 4.0); }});
            }
            break;
        }
        case CaseId::Ex3Nls: {
            eq.family = Family::Nls;
            eq.eps1 = c.eps1;
            eq.eps2 = c.eps2;
            eq.nls_f = [](double s) { return s; };
            const double eps = c.eps1;
            const ScalarFn cube = [profile](double x) {
                const double v = profile(x);
                return v * v * v;
            };
            // F_p = Im g = phi dtw + b, F_q = -Re g = phi dtw - b
            eq.forcing_p.push_back({phi, dtw});
            eq.forcing_p.push_back({lap, [eps](double t, int) { return -eps * t * t; }});
            eq.forcing_p.push_back({cube, [t6](double t, int n) { return 2.0 * t6(t, n); }});
            eq.forcing_q.push_back({phi, dtw});
            eq.forcing_q.push_back({lap, [eps](double t, int) { return eps * t * t; }});
            eq.forcing_q.push_back({cube, [t6](double t, int n) { return -2.0 * t6(t, n); }});
            break;
        }
        case CaseId::Ex4CoupledNls: {
            eq.family = Family::CoupledNls;
            eq.eps1 = c.eps1;
            eq.eps2 = c.eps2;
            eq.eps3 = c.eps3;
            eq.eps4 = c.eps4;
            eq.cnls_f = [](double s1, double s2) { return 2.0 * (s1 + s2); };
            eq.cnls_g = [](double s1, double s2) { return 4.0 * (s1 + s2); };
            const double e1 = c.eps1, e3 = c.eps3;
            const ScalarFn cube = [profile](double x) {
                const double v = profile(x);
                return v * v * v;
            };
            eq.forcing_p.push_back({phi, dtw});
            eq.forcing_p.push_back({lap, [e1](double t, int) { return -e1 * t * t; }});
            eq.forcing_p.push_back({cube, [t6](double t, int n) { return 8.0 * t6(t, n); }});
            eq.forcing_q.push_back({phi, dtw});
            eq.forcing_q.push_back({lap, [e1](double t, int) { return e1 * t * t; }});
            eq.forcing_q.push_back({cube, [t6](double t, int n) { return -8.0 * t6(t, n); }});
            eq.forcing_p2.push_back({phi, dtw});
            eq.forcing_p2.push_back({lap, [e3](double t, int) { return -e3 * t * t; }});
            eq.forcing_p2.push_back({cube, [t6](double t, int n) { return 16.0 * t6(t, n); }});
            eq.forcing_q2.push_back({phi, dtw});
            eq.forcing_q2.push_back({lap, [e3](double t, int) { return e3 * t * t; }});
            eq.forcing_q2.push_back({cube, [t6](double t, int n) { return -16.0 * t6(t, n); }});
            break;
        }
    }
    return eq;
}

}  // namespace fracldg
