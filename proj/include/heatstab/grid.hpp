#pragma once

#include "heatstab/types.hpp"

namespace heatstab {

/// Build the uniform grid for [0,Lx]x[0,Ly] with nx*ny interior nodes.
/// Throws std::invalid_argument for nx or ny < 2 or non-positive lengths.
Grid build_grid(int nx, int ny, double Lx, double Ly,
                BoundaryConfig config = BoundaryConfig::A);

/// Assemble the 5-point Laplacian A_h and the boundary-load operator B_h.
DiscreteOperator assemble_operators(const Grid& grid);

/// Weighted inner products; throw std::invalid_argument on length mismatch.
double inner_product_omega(const Field& a, const Field& b, const Grid& grid);
double inner_product_gamma1(const TraceField& a, const TraceField& b, const Grid& grid);

double norm_omega(const Field& a, const Grid& grid);
double norm_gamma1(const TraceField& a, const Grid& grid);

/// Restriction to the top edge (the discrete B*). Boundary values are the
/// zero-flux ghost reconstruction, i.e. the adjacent node value.
TraceField trace_gamma1(const Field& f, const Grid& grid);

}  // namespace heatstab
