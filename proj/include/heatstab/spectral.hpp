#pragma once

#include "heatstab/grid.hpp"
#include "heatstab/types.hpp"

namespace heatstab {

/// Ordered eigenpairs of A_h: 0 > lambda_1 >= lambda_2 >= ... and columns of
/// `phis` orthonormal in the weighted Omega inner product.
struct EigenBasis {
    Vector lambdas;
    Matrix phis;  // n_interior x n_computed, column j = phi_{j+1}
    int n_computed = 0;

    Field phi(int j) const { return Field{phis.col(j)}; }
};

struct EigenOptions {
    double cluster_tol_factor = 1e-6;  // degenerate-cluster width, x |lambda_1|
    int dense_limit = 64;              // per-axis node count for the dense path
    int max_lanczos_iter = 600;        // shift-invert path
};

/// Unstable-mode count N for growth rate mu: lambda_N + mu >= 0 > lambda_{N+1} + mu.
struct UnstableSelection {
    int N = 0;
    double mu = 0.0;
    double margin = 0.0;  // lambda_{N+1} + mu, negative
};

/// Gamma1 Gram matrix of a group of eigenfunction traces with its
/// invertibility certificate.
struct GramReport {
    Matrix G;
    Vector singular_values;  // descending
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool near_singular = false;  // sigma_min < sing_tol_factor * sigma_max
};

/// First `count` eigenpairs of A_h, ordered non-increasing. Dense symmetric
/// solve for grids up to dense_limit per axis, shift-invert Lanczos above.
EigenBasis compute_eigenbasis(const DiscreteOperator& op, const Grid& grid, int count,
                              const EigenOptions& opts = {});

/// Throws InsufficientModesError when the computed spectrum cannot certify
/// lambda_{N+1} + mu < 0.
UnstableSelection select_unstable_count(const EigenBasis& basis, double mu);

/// `group` holds 0-based eigenfunction indices (normally one degenerate cluster).
GramReport gram_trace_matrix(const EigenBasis& basis, const std::vector<int>& group,
                             const Grid& grid, double sing_tol_factor = 1e-8);

/// Consecutive indices whose eigenvalues lie within cluster_tol of each other.
std::vector<std::vector<int>> eigenvalue_clusters(const Vector& lambdas, double cluster_tol);

}  // namespace heatstab
