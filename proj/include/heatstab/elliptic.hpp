#pragma once

#include "heatstab/grid.hpp"
#include "heatstab/spectral.hpp"
#include "heatstab/types.hpp"

#include <memory>

namespace heatstab {

/// Shift for the auxiliary Helmholtz problems; theta = -alpha - mu in every
/// synthesis/observer use. Construction enforces the resonance guard
/// |theta - lambda_j| > eps_res over the computed modes.
struct HelmholtzConfig {
    double theta = 0.0;
    double resonance_margin = 0.0;  // min_j |theta - lambda_j| over computed modes
    double mu = 0.0;
    double alpha = 0.0;
};

HelmholtzConfig make_helmholtz_config(const EigenBasis& basis, double mu, double alpha,
                                      double eps_res_factor = 1e-6);

/// Same guard for a raw shift (theta = 0 is the Neumann map).
HelmholtzConfig make_helmholtz_config_theta(const EigenBasis& basis, double theta,
                                            double eps_res_factor = 1e-6);

/// Factorization of (A_h - theta I), immutable and shareable once built.
class HelmholtzSolver {
public:
    HelmholtzSolver(const DiscreteOperator& op, const Grid& grid, const HelmholtzConfig& cfg);
    ~HelmholtzSolver();
    HelmholtzSolver(HelmholtzSolver&&) noexcept;
    HelmholtzSolver& operator=(HelmholtzSolver&&) noexcept;

    /// zeta with Delta zeta = theta zeta, d zeta/d nu = g on Gamma1:
    /// (A_h - theta) zeta = -B_h g. With g = phi_i|_Gamma1 this is P_phi_i(theta);
    /// S g = -zeta_g.
    Field solve_neumann_data(const TraceField& g) const;

    /// xi with (A_h - theta) xi = f, homogeneous flux; S* f = xi_f|_Gamma1.
    Field solve_source(const Field& f) const;

    const HelmholtzConfig& config() const { return cfg_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    HelmholtzConfig cfg_;
};

/// One-shot variants (build a factorization per call).
Field solve_neumann_data(const DiscreteOperator& op, const Grid& grid,
                         const HelmholtzConfig& cfg, const TraceField& g);
Field solve_source(const DiscreteOperator& op, const Grid& grid,
                   const HelmholtzConfig& cfg, const Field& f);

/// Residuals of <P_phi_i theta, phi_j> = <phi_i, phi_j>_Gamma1 / (theta - lambda_j).
struct ResolventReport {
    Matrix residuals;      // n_check x n_check
    double max_abs = 0.0;
    double max_rel = 0.0;  // relative to the largest matrix entry
    double scale = 0.0;    // largest |<P_phi_i theta, phi_j>|
    double condition = 0.0;  // (|theta| + |lambda_1|) / resonance margin
};

ResolventReport verify_resolvent_identity(const EigenBasis& basis, const HelmholtzConfig& cfg,
                                          const DiscreteOperator& op, const Grid& grid,
                                          int n_check = 0);

}  // namespace heatstab
