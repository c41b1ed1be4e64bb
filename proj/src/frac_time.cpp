#include "fracldg/frac_time.hpp"

#include <cmath>
#include <stdexcept>

namespace fracldg {

WeightFunction WeightFunction::flat() {
    return {"flat", [](double) { return 1.0; }};
}

WeightFunction WeightFunction::gamma3() {
    return {"gamma3", [](double alpha) { return std::tgamma(3.0 - alpha); }};
}

WeightFunction WeightFunction::custom(std::function<double(double)> f) {
    return {"custom", std::move(f)};
}

WeightFunction WeightFunction::preset(const std::string& name) {
    if (name == "flat") return flat();
    if (name == "gamma3") return gamma3();
    throw std::invalid_argument("unknown weight preset: " + name);
}

DistOrderScheme build_dist_order_scheme(const WeightFunction& w, int num_nodes, double dt,
                                        int num_steps) {
    if (num_nodes < 1) throw std::invalid_argument("build_dist_order_scheme: S >= 1 required");
    if (!(dt > 0.0)) throw std::invalid_argument("build_dist_order_scheme: dt > 0 required");
    if (num_steps < 0) throw std::invalid_argument("build_dist_order_scheme: M >= 0 required");

    DistOrderScheme s;
    s.num_nodes = num_nodes;
    s.theta = 1.0 / num_nodes;
    s.dt = dt;
    s.num_steps = num_steps;
    s.alpha.resize(num_nodes);
    s.weights.resize(num_nodes);
    s.lambda.resize(num_nodes);
    s.a.assign(num_nodes, std::vector<double>(num_steps));

    for (int j = 0; j < num_nodes; ++j) {
        const double alpha = (2.0 * (j + 1) - 1.0) / (2.0 * num_nodes);
        const double wj = w(alpha);
        if (!(wj >= 0.0))
            throw std::invalid_argument("build_dist_order_scheme: invalid weight, W(alpha) < 0");
        s.alpha[j] = alpha;
        s.weights[j] = wj * s.theta;
        s.lambda[j] = std::pow(dt, alpha) * std::tgamma(2.0 - alpha);
        for (int l = 0; l < num_steps; ++l)
            s.a[j][l] = std::pow(l + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(l), 1.0 - alpha);
    }

    s.c0 = 0.0;
    for (int j = 0; j < num_nodes; ++j) s.c0 += s.weights[j] / s.lambda[j];

    s.kappa.assign(num_steps, 0.0);  // index d=1..M-1 used
    s.kappa0.assign(num_steps + 1, 0.0);
    for (int j = 0; j < num_nodes; ++j) {
        const double wl = s.weights[j] / s.lambda[j];
        for (int d = 1; d < num_steps; ++d) s.kappa[d] += wl * (s.a[j][d - 1] - s.a[j][d]);
        for (int n = 1; n <= num_steps; ++n) s.kappa0[n] += wl * s.a[j][n - 1];
    }
    return s;
}

double caputo_l1_apply(double alpha, double dt, std::span<const double> samples) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("caputo_l1_apply: alpha must lie in (0,1)");
    if (samples.size() < 2) throw std::invalid_argument("caputo_l1_apply: need n >= 1");
    const int n = static_cast<int>(samples.size()) - 1;
    const double lambda = std::pow(dt, alpha) * std::tgamma(2.0 - alpha);
    auto a = [alpha](int l) {
        return std::pow(l + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(l), 1.0 - alpha);
    };
    double acc = samples[n];
    for (int l = 1; l <= n - 1; ++l) acc -= (a(n - l - 1) - a(n - l)) * samples[l];
    acc -= a(n - 1) * samples[0];
    return acc / lambda;
}

namespace {

// y += c*x with Kahan compensation held in comp
inline void kahan_axpy(Eigen::VectorXd& y, Eigen::VectorXd& comp, double c,
                       const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double term = c * x[i] - comp[i];
        const double t = y[i] + term;
        comp[i] = (t - y[i]) - term;
        y[i] = t;
    }
}

}  // namespace

ModalField history_rhs(const DistOrderScheme& scheme, std::span<const ModalField> history, int n) {
    if (n < 1 || n > scheme.num_steps)
        throw std::invalid_argument("history_rhs: level n out of range");
    if (static_cast<int>(history.size()) < n)
        throw std::invalid_argument("history_rhs: history must hold levels 0..n-1");
    const auto& space = history[0].space;
    for (int l = 1; l < n; ++l)
        if (history[l].space->dofs() != space->dofs() ||
            history[l].space->degree() != space->degree())
            throw std::invalid_argument("history_rhs: mismatched meshes/degrees in history");

    ModalField out(space);
    Eigen::VectorXd comp = Eigen::VectorXd::Zero(space->dofs());
    for (int l = 1; l <= n - 1; ++l)
        kahan_axpy(out.coeffs, comp, scheme.kappa[n - l], history[l].coeffs);
    kahan_axpy(out.coeffs, comp, scheme.kappa0[n], history[0].coeffs);
    return out;
}

double history_rhs_scalar(const DistOrderScheme& scheme, std::span<const double> history, int n) {
    if (n < 1 || n > scheme.num_steps)
        throw std::invalid_argument("history_rhs_scalar: level n out of range");
    double acc = 0.0, comp = 0.0;
    for (int l = 1; l <= n - 1; ++l) {
        const double term = scheme.kappa[n - l] * history[l] - comp;
        const double t = acc + term;
        comp = (t - acc) - term;
        acc = t;
    }
    return acc + scheme.kappa0[n] * history[0];
}

}  // namespace fracldg
