// Independent quadrature oracles used by the tests. These deliberately avoid
// the closed-form code paths in the library: singular integrals are computed
// by geometrically graded Gauss panels, fractional derivatives through the
// integral definition applied to u''.
#pragma once

#include <cmath>
#include <functional>

#include "fracldg/dg_core.hpp"
#include "fracldg/manufactured.hpp"

namespace oracles {

using fracldg::QuadratureRule;

inline const QuadratureRule& rule16() {
    static const QuadratureRule r = fracldg::gauss_legendre(16);
    return r;
}

// Gauss on [lo,hi] with panels graded geometrically toward one endpoint;
// resolves endpoint singularities and kinks to near round-off.
inline double graded_gauss(const std::function<double(double)>& f, double lo, double hi,
                           double toward, int levels = 45, double ratio = 0.35) {
    const auto& rule = rule16();
    if (hi - lo <= 0) return 0.0;
    auto panel = [&](double l, double h) {
        if (h - l <= 0) return 0.0;
        double mid = 0.5 * (l + h), half = 0.5 * (h - l), s = 0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            s += rule.weights[q] * f(mid + half * rule.nodes[q]);
        return s * half;
    };
    double acc = 0.0, w = hi - lo;
    if (toward == lo) {
        for (int k = 0; k < levels; ++k) {
            acc += panel(lo + w * ratio, lo + w);
            w *= ratio;
        }
        acc += panel(lo, lo + w);
    } else {
        for (int k = 0; k < levels; ++k) {
            acc += panel(hi - w, hi - w * ratio);
            w *= ratio;
        }
        acc += panel(hi - w, hi);
    }
    return acc;
}

inline double graded_both(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return graded_gauss(f, lo, mid, lo) + graded_gauss(f, mid, hi, hi);
}

// int over [lo,hi] of |x-t|^{mu-1} f(t) dt with x == lo or x == hi: substitute
// z = |x-t|^mu so the integrand becomes bounded, then grade toward z = 0 where
// its higher derivatives may still blow up.
inline double endpoint_singular(double mu, const std::function<double(double)>& f, double lo,
                                double hi, double x) {
    if (hi - lo <= 0) return 0.0;
    const double upper = std::pow(hi - lo, mu);
    const double inv_mu = 1.0 / mu;
    std::function<double(double)> g;
    if (x == lo)
        g = [&f, x, inv_mu](double z) { return f(x + std::pow(z, inv_mu)); };
    else
        g = [&f, x, inv_mu](double z) { return f(x - std::pow(z, inv_mu)); };
    // grade both ends: derivative blowup at z = 0 (mu near 1), compressed
    // variation near z = upper (mu near 0)
    return graded_both(g, 0.0, upper) / mu;
}

// int_lo^hi |x-t|^{sigma-1} f(t) dt with the singular point possibly inside.
inline double singular_conv(double sigma, const std::function<double(double)>& f, double lo,
                            double hi, double x) {
    if (hi <= lo) return 0.0;
    // panel arithmetic can park x within one ulp of a boundary; snap it so the
    // graded panels never evaluate the kernel at distance zero
    const double snap = 1e-13 * (hi - lo);
    if (std::abs(x - lo) < snap) x = lo;
    if (std::abs(x - hi) < snap) x = hi;
    if (x > lo && x < hi)
        return endpoint_singular(sigma, f, lo, x, x) + endpoint_singular(sigma, f, x, hi, x);
    if (x == lo || x == hi) return endpoint_singular(sigma, f, lo, hi, x);
    // x outside: the kernel is analytic on [lo,hi], grade toward the near end
    auto kern = [&](double t) { return std::pow(std::abs(x - t), sigma - 1.0) * f(t); };
    return graded_gauss(kern, lo, hi, (x < lo) ? lo : hi, 60);
}

// Riesz fractional integral Delta_{-s} of f (zero-extended outside [a,b]).
inline double riesz_integral_oracle(double sigma, const std::function<double(double)>& f,
                                    double x, double a, double b) {
    const double s = 0.5 * sigma;
    return singular_conv(sigma, f, a, b, x) /
           (std::tgamma(sigma) * 2.0 * std::cos(s * M_PI));
}

// Left/right Riemann-Liouville derivative of a polynomial vanishing together
// with its first derivative at the corresponding endpoint, via
//   D^beta u(x) = (1/Gamma(2-beta)) int (x-s)^{1-beta} u''(s) ds
// with the weakly singular integral handled like singular_conv.
inline double rl_left_deriv_oracle(const fracldg::Poly& p, double beta, double x) {
    const fracldg::Poly d2 = p.deriv().deriv();
    auto f = [&](double s) { return d2(s); };
    return endpoint_singular(2.0 - beta, f, -1.0, x, x) / std::tgamma(2.0 - beta);
}

inline double rl_right_deriv_oracle(const fracldg::Poly& p, double beta, double x) {
    const fracldg::Poly d2 = p.deriv().deriv();
    auto f = [&](double s) { return d2(s); };
    return endpoint_singular(2.0 - beta, f, x, 1.0, x) / std::tgamma(2.0 - beta);
}

inline double frac_laplacian_oracle(const fracldg::Poly& p, double beta, double x) {
    return (rl_left_deriv_oracle(p, beta, x) + rl_right_deriv_oracle(p, beta, x)) /
           (2.0 * std::cos(0.5 * beta * M_PI));
}

// int_0^1 W(alpha) cD_t^alpha t^2 dalpha by a dense Gauss rule in alpha.
inline double dist_order_t2_oracle(const fracldg::WeightFunction& w, double t) {
    static const QuadratureRule rule = fracldg::gauss_legendre(80);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double alpha = 0.5 * (rule.nodes[q] + 1.0);
        acc += 0.5 * rule.weights[q] * w(alpha) * 2.0 * std::pow(t, 2.0 - alpha) /
               std::tgamma(3.0 - alpha);
    }
    return acc;
}

}  // namespace oracles
