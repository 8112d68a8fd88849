#include "heatstab/elliptic.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <string>

namespace heatstab {

namespace {

HelmholtzConfig guarded(const EigenBasis& basis, double theta, double mu, double alpha,
                        double eps_res_factor) {
    const double eps_res = eps_res_factor * std::abs(basis.lambdas[0]);
    HelmholtzConfig cfg;
    cfg.theta = theta;
    cfg.mu = mu;
    cfg.alpha = alpha;
    cfg.resonance_margin = std::numeric_limits<double>::infinity();
    int offending = -1;
    for (int j = 0; j < basis.n_computed; ++j) {
        const double d = std::abs(theta - basis.lambdas[j]);
        if (d < cfg.resonance_margin) {
            cfg.resonance_margin = d;
            offending = j;
        }
    }
    if (cfg.resonance_margin <= eps_res)
        throw ResonanceError("theta = " + std::to_string(theta) +
                                 " is within eps_res = " + std::to_string(eps_res) +
                                 " of lambda_" + std::to_string(offending + 1) + " = " +
                                 std::to_string(basis.lambdas[offending]),
                             offending + 1, theta, basis.lambdas[offending]);
    return cfg;
}

}  // namespace

HelmholtzConfig make_helmholtz_config(const EigenBasis& basis, double mu, double alpha,
                                      double eps_res_factor) {
    return guarded(basis, -alpha - mu, mu, alpha, eps_res_factor);
}

HelmholtzConfig make_helmholtz_config_theta(const EigenBasis& basis, double theta,
                                            double eps_res_factor) {
    return guarded(basis, theta, 0.0, 0.0, eps_res_factor);
}

struct HelmholtzSolver::Impl {
    Eigen::SparseLU<SparseMatrix> lu;
    SparseMatrix B_h;
    Index n = 0;
    Index m = 0;
};

HelmholtzSolver::HelmholtzSolver(const DiscreteOperator& op, const Grid& grid,
                                 const HelmholtzConfig& cfg)
    : impl_(std::make_unique<Impl>()), cfg_(cfg) {
    SparseMatrix shifted = op.A_h;
    SparseMatrix eye(shifted.rows(), shifted.cols());
    eye.setIdentity();
    shifted -= cfg.theta * eye;
    impl_->lu.compute(shifted);
    if (impl_->lu.info() != Eigen::Success)
        throw NumericalError("Helmholtz factorization failed at theta = " +
                             std::to_string(cfg.theta));
    impl_->B_h = op.B_h;
    impl_->n = grid.n_interior();
    impl_->m = grid.n_gamma1();
}

HelmholtzSolver::~HelmholtzSolver() = default;
HelmholtzSolver::HelmholtzSolver(HelmholtzSolver&&) noexcept = default;
HelmholtzSolver& HelmholtzSolver::operator=(HelmholtzSolver&&) noexcept = default;

Field HelmholtzSolver::solve_neumann_data(const TraceField& g) const {
    if (g.size() != impl_->m)
        throw std::invalid_argument("solve_neumann_data: trace length mismatch");
    const Vector rhs = -(impl_->B_h * g.values);
    Field out{impl_->lu.solve(rhs)};
    if (impl_->lu.info() != Eigen::Success)
        throw NumericalError("solve_neumann_data: singular linear system");
    return out;
}

Field HelmholtzSolver::solve_source(const Field& f) const {
    if (f.size() != impl_->n)
        throw std::invalid_argument("solve_source: field length mismatch");
    Field out{impl_->lu.solve(f.values)};
    if (impl_->lu.info() != Eigen::Success)
        throw NumericalError("solve_source: singular linear system");
    return out;
}

Field solve_neumann_data(const DiscreteOperator& op, const Grid& grid,
                         const HelmholtzConfig& cfg, const TraceField& g) {
    return HelmholtzSolver(op, grid, cfg).solve_neumann_data(g);
}

Field solve_source(const DiscreteOperator& op, const Grid& grid,
                   const HelmholtzConfig& cfg, const Field& f) {
    return HelmholtzSolver(op, grid, cfg).solve_source(f);
}

ResolventReport verify_resolvent_identity(const EigenBasis& basis, const HelmholtzConfig& cfg,
                                          const DiscreteOperator& op, const Grid& grid,
                                          int n_check) {
    const int k = (n_check > 0 && n_check <= basis.n_computed) ? n_check : basis.n_computed;
    HelmholtzSolver solver(op, grid, cfg);

    std::vector<TraceField> traces;
    traces.reserve(k);
    for (int j = 0; j < k; ++j) traces.push_back(trace_gamma1(basis.phi(j), grid));

    ResolventReport rep;
    rep.residuals.resize(k, k);
    rep.scale = 0.0;
    for (int i = 0; i < k; ++i) {
        const Field zeta = solver.solve_neumann_data(traces[i]);
        for (int j = 0; j < k; ++j) {
            const double lhs = inner_product_omega(zeta, basis.phi(j), grid);
            const double rhs = inner_product_gamma1(traces[i], traces[j], grid) /
                               (cfg.theta - basis.lambdas[j]);
            rep.residuals(i, j) = lhs - rhs;
            rep.scale = std::max(rep.scale, std::abs(lhs));
        }
    }
    rep.max_abs = rep.residuals.cwiseAbs().maxCoeff();
    rep.max_rel = rep.scale > 0.0 ? rep.max_abs / rep.scale : rep.max_abs;
    rep.condition = (std::abs(cfg.theta) + std::abs(basis.lambdas[0])) / cfg.resonance_margin;
    return rep;
}

}  // namespace heatstab
