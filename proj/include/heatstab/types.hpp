#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>
#include <vector>

namespace heatstab {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Which edges of the rectangle carry the homogeneous Dirichlet condition.
/// The top edge {y = Ly} is always the Neumann control/observation boundary.
///   A: Dirichlet on left, right and bottom.
///   B: Dirichlet on left and right; homogeneous Neumann on the bottom.
enum class BoundaryConfig { A, B };

/// Scalar field over the interior nodes, length nx*ny.
struct Field {
    Vector values;

    Index size() const { return values.size(); }
};

/// Scalar field over the top-edge quadrature nodes, length nx.
struct TraceField {
    Vector values;

    Index size() const { return values.size(); }
};

/// Uniform rectangular grid with interior unknowns and a Neumann top edge.
/// Node (i, j), i = 1..nx, j = 1..ny sits at (i*hx, j*hy); boundary nodes are
/// eliminated. omega_weights make the discrete Laplacian self-adjoint in the
/// weighted inner product (Neumann-adjacent rows carry a 3/2 factor).
struct Grid {
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    double Lx = 0.0;
    double Ly = 0.0;
    BoundaryConfig config = BoundaryConfig::A;
    std::vector<Index> gamma1_nodes;  // interior nodes adjacent to the top edge
    Vector omega_weights;             // per-node quadrature weight on Omega
    Vector gamma1_weights;            // per-node quadrature weight on Gamma1

    Index n_interior() const { return static_cast<Index>(nx) * ny; }
    Index n_gamma1() const { return nx; }
    // i, j are 1-based per the node convention above
    Index index(int i, int j) const { return static_cast<Index>(j - 1) * nx + (i - 1); }
    double node_x(int i) const { return i * hx; }
    double node_y(int j) const { return j * hy; }
};

/// A_h: discrete Laplacian, Dirichlet edges eliminated, Neumann edges folded
/// in by one-sided second-order elimination of the boundary value.
/// B_h: maps a top-edge flux to its load on the adjacent interior rows such
/// that <B_h g, f>_Omega = <g, f|_Gamma1>_Gamma1 holds exactly.
struct DiscreteOperator {
    SparseMatrix A_h;
    SparseMatrix B_h;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// theta (or alpha+mu) collides with an eigenvalue of A_h.
struct ResonanceError : std::runtime_error {
    ResonanceError(const std::string& what, int mode, double theta_, double lambda_)
        : std::runtime_error(what), mode_index(mode), theta(theta_), lambda(lambda_) {}
    int mode_index;  // offending j, 1-based
    double theta;
    double lambda;
};

/// The computed spectrum is too short to certify lambda_{N+1} + mu < 0.
struct InsufficientModesError : std::runtime_error {
    explicit InsufficientModesError(const std::string& what) : std::runtime_error(what) {}
};

/// Solver breakdowns: eigensolver non-convergence, singular systems,
/// Riccati degeneracy.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace heatstab
