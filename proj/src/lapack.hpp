#pragma once

// Thin wrappers over the LAPACKE routines the library uses. Internal header.

#include "heatstab/types.hpp"

namespace heatstab::lapack {

struct SymEigs {
    Vector values;   // ascending
    Matrix vectors;  // one column per value
};

/// Largest `k` eigenpairs of a dense symmetric matrix (upper triangle read).
/// Throws NumericalError on LAPACK failure.
SymEigs sym_eigs_largest(const Matrix& a, int k);

/// All eigenvalues of a dense general matrix (no eigenvectors).
ComplexVector eigenvalues(const Matrix& a);

}  // namespace heatstab::lapack
