#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fracldg/dg_core.hpp"
#include "fracldg/frac_space.hpp"
#include "fracldg/frac_time.hpp"

namespace fracldg {

enum class Family { Diffusion, ConvectionDiffusion, Nls, CoupledNls };

/// One separable forcing contribution spatial(x) * temporal(t, n).
struct ForcingTerm {
    ScalarFn spatial;
    std::function<double(double, int)> temporal;
};
using Forcing = std::vector<ForcingTerm>;

/// Coefficients, nonlinearities and forcing of one model problem. Complex
/// problems are stated in real/imaginary split form: u = p + iq obeys
///   D_t^W p + eps1 * L q + eps2 * f(p^2+q^2) q = F_p,
///   D_t^W q - eps1 * L p - eps2 * f(p^2+q^2) p = F_q,
/// with L the discrete -(-Laplace)^{beta/2} chain, F_p = Im g, F_q = -Re g.
struct EquationSpec {
    Family family = Family::Diffusion;
    double beta = 1.5;

    double eps = 0.0;                 // diffusion coefficient (real families)
    double eps1 = 0.0, eps2 = 0.0;    // nls dispersion / nonlinearity
    double eps3 = 0.0, eps4 = 0.0;    // second field of the coupled system

    ScalarFn flux_f;   // convection flux f(u)
    ScalarFn flux_df;  // f'(u), for the Lax-Friedrichs speed
    ScalarFn nls_f;    // f(s), s = |u|^2
    std::function<double(double, double)> cnls_f;  // f(|u1|^2, |u2|^2)
    std::function<double(double, double)> cnls_g;

    Forcing forcing_u;
    Forcing forcing_p, forcing_q;    // nls, equation form
    Forcing forcing_p2, forcing_q2;  // coupled second field

    int num_components() const {
        switch (family) {
            case Family::Diffusion:
            case Family::ConvectionDiffusion: return 1;
            case Family::Nls: return 2;
            default: return 4;
        }
    }
};

struct SolverError : std::runtime_error {
    int level;
    double last_increment;
    SolverError(const std::string& what, int level_, double inc)
        : std::runtime_error(what), level(level_), last_increment(inc) {}
};

struct PicardOptions {
    double tol = 1e-12;
    int max_iters = 50;
};

/// Time-stepping state for one run: history of fields, assembled operators and
/// the implicit matrix factored once at construction.
class SolverState {
  public:
    SolverState(EquationSpec eq, SpacePtr space, DistOrderScheme scheme,
                std::vector<ModalField> initial,
                std::shared_ptr<const FracSpaceOperators> ops = nullptr,
                FluxOrientation orientation = FluxOrientation::Left);

    const EquationSpec& equation() const { return eq_; }
    const SpacePtr& space() const { return space_; }
    const DistOrderScheme& scheme() const { return scheme_; }
    const FracSpaceOperators& ops() const { return *ops_; }
    int level() const { return level_; }
    double time() const { return scheme_.time(level_); }

    /// Trajectory of component c (0: u or p; 1: q; 2,3: second complex field).
    const std::vector<ModalField>& history(int c = 0) const { return hist_[c]; }
    const ModalField& current(int c = 0) const { return hist_[c].back(); }

    /// Relative linear-system residual of the most recent solve.
    double last_linear_residual() const { return last_residual_; }
    double max_linear_residual() const { return max_residual_; }
    /// Picard increments of the most recent nonlinear step.
    const std::vector<double>& last_picard_increments() const { return picard_increments_; }

    friend ModalField step_diffusion(SolverState&, const ModalField&);
    friend ModalField step_convection_diffusion(SolverState&, const ModalField&);
    friend std::pair<ModalField, ModalField> step_nls(SolverState&, const ModalField&,
                                                      const ModalField&);
    friend std::array<ModalField, 4> step_coupled_nls(SolverState&,
                                                      const std::array<ModalField, 4>&);

  private:
    void check_can_step() const;
    Eigen::VectorXd convection_vector(const ModalField& u) const;
    Eigen::VectorXd nls_vector(const ModalField& a, const ModalField& b,
                               const ScalarFn& f) const;
    std::array<Eigen::VectorXd, 4> coupled_vectors(const std::array<ModalField, 4>& u) const;
    void record_residual(const Eigen::MatrixXd& mat, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs);

    EquationSpec eq_;
    SpacePtr space_;
    DistOrderScheme scheme_;
    std::shared_ptr<const FracSpaceOperators> ops_;
    PicardOptions picard_;
    int level_ = 0;
    std::array<std::vector<ModalField>, 4> hist_;

    Eigen::MatrixXd implicit_;    // real families
    Eigen::MatrixXd block_;       // nls / coupled field 1
    Eigen::MatrixXd block2_;      // coupled field 2
    Eigen::PartialPivLU<Eigen::MatrixXd> implicit_lu_;
    Eigen::PartialPivLU<Eigen::MatrixXd> block_lu_;
    Eigen::PartialPivLU<Eigen::MatrixXd> block2_lu_;

    double last_residual_ = 0.0;
    double max_residual_ = 0.0;
    std::vector<double> picard_increments_;
};

/// Advance one level. g is the projected forcing at t_n (equation form);
/// complex families take one field per split equation.
ModalField step_diffusion(SolverState& state, const ModalField& g);
ModalField step_convection_diffusion(SolverState& state, const ModalField& g);
std::pair<ModalField, ModalField> step_nls(SolverState& state, const ModalField& g_p,
                                           const ModalField& g_q);
std::array<ModalField, 4> step_coupled_nls(SolverState& state,
                                           const std::array<ModalField, 4>& g);

/// Driver: project initial data, then iterate the appropriate step over
/// n = 1..M. Requires scheme.num_steps * scheme.dt == T.
SolverState run(const EquationSpec& eq, const SpacePtr& space, const DistOrderScheme& scheme,
                const std::vector<ScalarFn>& initial, double T,
                std::shared_ptr<const FracSpaceOperators> ops = nullptr,
                FluxOrientation orientation = FluxOrientation::Left);

}  // namespace fracldg
