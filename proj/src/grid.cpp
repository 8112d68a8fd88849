#include "heatstab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace heatstab {

namespace {

bool neumann_bottom(const Grid& g) { return g.config == BoundaryConfig::B; }

void check_field(const Field& f, const Grid& g, const char* who) {
    if (f.size() != g.n_interior())
        throw std::invalid_argument(std::string(who) + ": field length " +
                                    std::to_string(f.size()) + " != nx*ny = " +
                                    std::to_string(g.n_interior()));
}

void check_trace(const TraceField& f, const Grid& g, const char* who) {
    if (f.size() != g.n_gamma1())
        throw std::invalid_argument(std::string(who) + ": trace length " +
                                    std::to_string(f.size()) + " != nx = " +
                                    std::to_string(g.n_gamma1()));
}

}  // namespace

Grid build_grid(int nx, int ny, double Lx, double Ly, BoundaryConfig config) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("build_grid: nx and ny must be >= 2, got nx=" +
                                    std::to_string(nx) + " ny=" + std::to_string(ny));
    if (!(Lx > 0.0) || !(Ly > 0.0))
        throw std::invalid_argument("build_grid: Lx and Ly must be positive");

    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.Lx = Lx;
    g.Ly = Ly;
    g.hx = Lx / (nx + 1);
    g.hy = Ly / (ny + 1);
    g.config = config;

    // Product weights; rows adjacent to a Neumann edge get the 3/2 factor
    // that turns the one-sided stencil rows into a self-adjoint operator.
    g.omega_weights.resize(g.n_interior());
    const double w0 = g.hx * g.hy;
    for (int j = 1; j <= ny; ++j) {
        double wy = 1.0;
        if (j == ny) wy = 1.5;
        if (j == 1 && neumann_bottom(g)) wy = 1.5;
        for (int i = 1; i <= nx; ++i) g.omega_weights[g.index(i, j)] = wy * w0;
    }

    g.gamma1_weights = Vector::Constant(nx, g.hx);

    g.gamma1_nodes.reserve(nx);
    for (int i = 1; i <= nx; ++i) g.gamma1_nodes.push_back(g.index(i, ny));
    return g;
}

DiscreteOperator assemble_operators(const Grid& g) {
    const int nx = g.nx, ny = g.ny;
    const double ax = 1.0 / (g.hx * g.hx);
    const double ay = 1.0 / (g.hy * g.hy);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * static_cast<size_t>(g.n_interior()));

    for (int j = 1; j <= ny; ++j) {
        const bool top = (j == ny);
        const bool bottom_neumann = (j == 1 && neumann_bottom(g));
        for (int i = 1; i <= nx; ++i) {
            const Index row = g.index(i, j);
            double diag = -2.0 * ax;  // x-part; Dirichlet laterals just drop
            if (i > 1) trip.emplace_back(row, g.index(i - 1, j), ax);
            if (i < nx) trip.emplace_back(row, g.index(i + 1, j), ax);

            // y-part. At a Neumann-adjacent row the eliminated boundary value
            // u_b = (4 u_j - u_{j-1} + 2 h g)/3 turns the stencil into
            // (2/3)(u_neighbor - u_j)/h^2 plus the B_h load.
            if (top || bottom_neumann) {
                const int jn = top ? j - 1 : j + 1;
                trip.emplace_back(row, g.index(i, jn), (2.0 / 3.0) * ay);
                diag += -(2.0 / 3.0) * ay;
            } else {
                diag += -2.0 * ay;
                if (j > 1) trip.emplace_back(row, g.index(i, j - 1), ay);
                if (j < ny) trip.emplace_back(row, g.index(i, j + 1), ay);
            }
            trip.emplace_back(row, row, diag);
        }
    }

    DiscreteOperator op;
    op.A_h.resize(g.n_interior(), g.n_interior());
    op.A_h.setFromTriplets(trip.begin(), trip.end());

    std::vector<Eigen::Triplet<double>> btrip;
    btrip.reserve(nx);
    for (int i = 1; i <= nx; ++i)
        btrip.emplace_back(g.index(i, ny), i - 1, 2.0 / (3.0 * g.hy));
    op.B_h.resize(g.n_interior(), g.n_gamma1());
    op.B_h.setFromTriplets(btrip.begin(), btrip.end());
    return op;
}

double inner_product_omega(const Field& a, const Field& b, const Grid& grid) {
    check_field(a, grid, "inner_product_omega");
    check_field(b, grid, "inner_product_omega");
    return a.values.dot(grid.omega_weights.cwiseProduct(b.values));
}

double inner_product_gamma1(const TraceField& a, const TraceField& b, const Grid& grid) {
    check_trace(a, grid, "inner_product_gamma1");
    check_trace(b, grid, "inner_product_gamma1");
    return a.values.dot(grid.gamma1_weights.cwiseProduct(b.values));
}

double norm_omega(const Field& a, const Grid& grid) {
    return std::sqrt(inner_product_omega(a, a, grid));
}

double norm_gamma1(const TraceField& a, const Grid& grid) {
    return std::sqrt(inner_product_gamma1(a, a, grid));
}

TraceField trace_gamma1(const Field& f, const Grid& grid) {
    check_field(f, grid, "trace_gamma1");
    TraceField t;
    t.values.resize(grid.n_gamma1());
    for (Index i = 0; i < grid.n_gamma1(); ++i)
        t.values[i] = f.values[grid.gamma1_nodes[static_cast<size_t>(i)]];
    return t;
}

}  // namespace heatstab
