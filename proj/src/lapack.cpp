#include "lapack.hpp"

#include <lapacke.h>

#include <string>
#include <vector>

namespace heatstab::lapack {

SymEigs sym_eigs_largest(const Matrix& a, int k) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("sym_eigs_largest: matrix not square");
    if (k < 1 || k > n) throw std::invalid_argument("sym_eigs_largest: bad subset size");

    Matrix work = a;  // dsyevr destroys its input
    SymEigs out;
    out.values.resize(n);
    out.vectors.resize(n, k);
    std::vector<lapack_int> isuppz(2 * static_cast<size_t>(k));
    lapack_int m = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0,
        n - k + 1, n, 0.0, &m, out.values.data(), out.vectors.data(), n, isuppz.data());
    if (info != 0)
        throw NumericalError("dsyevr failed, info=" + std::to_string(info) +
                             " (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    if (m != k)
        throw NumericalError("dsyevr returned " + std::to_string(m) + " of " +
                             std::to_string(k) + " requested eigenpairs");
    out.values.conservativeResize(k);
    return out;
}

ComplexVector eigenvalues(const Matrix& a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("eigenvalues: matrix not square");

    Matrix work = a;
    Vector wr(n), wi(n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n,
                                          wr.data(), wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("dgeev failed, info=" + std::to_string(info) +
                             " (n=" + std::to_string(n) + ")");
    ComplexVector w(n);
    for (lapack_int i = 0; i < n; ++i) w[i] = std::complex<double>(wr[i], wi[i]);
    return w;
}

}  // namespace heatstab::lapack
