#include "heatstab/spectral.hpp"

#include "lapack.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace heatstab {

namespace {

// A_h is self-adjoint under the omega weights; D^{1/2} A_h D^{-1/2} is the
// plainly symmetric similar matrix the eigensolvers work on.
SparseMatrix symmetrized(const DiscreteOperator& op, const Grid& grid) {
    const Vector sqw = grid.omega_weights.cwiseSqrt();
    SparseMatrix a = op.A_h;
    for (Index k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it)
            it.valueRef() *= sqw[it.row()] / sqw[it.col()];
    return a;
}

struct RawEigs {
    Vector values;   // non-increasing
    Matrix vectors;  // columns in the symmetrized coordinates
};

RawEigs dense_path(const SparseMatrix& a_sym, int count) {
    Matrix dense = Matrix(a_sym);
    dense = 0.5 * (dense + dense.transpose()).eval();  // kill last-ulp asymmetry
    lapack::SymEigs es = lapack::sym_eigs_largest(dense, count);
    RawEigs out;
    out.values = es.values.reverse();
    out.vectors = es.vectors.rowwise().reverse();
    return out;
}

// Shift-invert Lanczos with full reorthogonalization on A_sym^{-1}; the
// eigenvalues nearest zero dominate the inverse, which is exactly the top of
// the spectrum we need. Used above the dense size limit.
RawEigs lanczos_path(const SparseMatrix& a_sym, int count, int max_iter) {
    const Index n = a_sym.rows();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(a_sym);
    if (lu.info() != Eigen::Success)
        throw NumericalError("shift-invert factorization failed (is the operator singular?)");

    const int m_cap = static_cast<int>(std::min<Index>(n, std::min(max_iter, std::max(4 * count + 40, 80))));
    Matrix V(n, m_cap + 1);
    Vector alpha(m_cap), beta(m_cap);

    Vector v = Vector::LinSpaced(n, 1.0, 2.0);
    V.col(0) = v / v.norm();

    int m = 0;
    for (int it = 0; it < m_cap; ++it) {
        Vector w = lu.solve(V.col(it));
        alpha[it] = V.col(it).dot(w);
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            w -= V.leftCols(it + 1) * (V.leftCols(it + 1).transpose() * w).eval();
        beta[it] = w.norm();
        m = it + 1;
        if (beta[it] < 1e-14) break;  // invariant subspace found
        V.col(it + 1) = w / beta[it];

        if (m >= count + 2 && (m % 5 == 0 || it == m_cap - 1)) {
            Matrix T = Matrix::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Matrix> tes(T);
            // Ritz values of the inverse: the `count` most negative ones
            // correspond to lambda_1..lambda_count.
            bool ok = true;
            for (int j = 0; j < count; ++j) {
                const double resid = std::abs(beta[m - 1] * tes.eigenvectors()(m - 1, j));
                if (resid > 1e-12 * std::abs(tes.eigenvalues()[j])) { ok = false; break; }
            }
            if (ok) {
                RawEigs out;
                out.values.resize(count);
                out.vectors.resize(n, count);
                for (int j = 0; j < count; ++j) {
                    out.values[j] = 1.0 / tes.eigenvalues()[j];
                    out.vectors.col(j) = V.leftCols(m) * tes.eigenvectors().col(j);
                    out.vectors.col(j).normalize();
                }
                return out;
            }
        }
    }
    throw NumericalError("shift-invert Lanczos did not converge after " +
                         std::to_string(m) + " iterations (requested " +
                         std::to_string(count) + " modes)");
}

void fix_sign(Eigen::Ref<Vector> v) {
    Index imax = 0;
    double best = -1.0;
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) { best = a; imax = i; }
    }
    if (v[imax] < 0.0) v = -v;
}

}  // namespace

std::vector<std::vector<int>> eigenvalue_clusters(const Vector& lambdas, double cluster_tol) {
    std::vector<std::vector<int>> clusters;
    for (int j = 0; j < lambdas.size(); ++j) {
        if (j == 0 || std::abs(lambdas[j - 1] - lambdas[j]) > cluster_tol)
            clusters.emplace_back();
        clusters.back().push_back(j);
    }
    return clusters;
}

EigenBasis compute_eigenbasis(const DiscreteOperator& op, const Grid& grid, int count,
                              const EigenOptions& opts) {
    if (count < 1 || count > grid.n_interior())
        throw std::invalid_argument("compute_eigenbasis: count must be in [1, nx*ny], got " +
                                    std::to_string(count));

    const SparseMatrix a_sym = symmetrized(op, grid);
    const bool dense = grid.nx <= opts.dense_limit && grid.ny <= opts.dense_limit;
    RawEigs raw = dense ? dense_path(a_sym, count)
                        : lanczos_path(a_sym, count, opts.max_lanczos_iter);

    EigenBasis basis;
    basis.n_computed = count;
    basis.lambdas = raw.values;
    // back to weighted coordinates; D^{-1/2} q stays W-orthonormal
    const Vector inv_sqw = grid.omega_weights.cwiseSqrt().cwiseInverse();
    basis.phis = inv_sqw.asDiagonal() * raw.vectors;

    // re-orthonormalize inside numerically degenerate clusters, then fix signs
    const double cluster_tol = opts.cluster_tol_factor * std::abs(basis.lambdas[0]);
    for (const auto& cl : eigenvalue_clusters(basis.lambdas, cluster_tol)) {
        if (cl.size() > 1) {
            for (size_t a = 0; a < cl.size(); ++a) {
                auto va = basis.phis.col(cl[a]);
                for (size_t b = 0; b < a; ++b) {
                    const auto vb = basis.phis.col(cl[b]);
                    va -= vb * vb.dot(grid.omega_weights.cwiseProduct(va));
                }
                va /= std::sqrt(va.dot(grid.omega_weights.cwiseProduct(va)));
            }
        }
    }
    for (int j = 0; j < count; ++j) fix_sign(basis.phis.col(j));

    // eigenpair residual guard
    for (int j = 0; j < count; ++j) {
        const Vector r = op.A_h * basis.phis.col(j) - basis.lambdas[j] * basis.phis.col(j);
        const double rn = std::sqrt(r.dot(grid.omega_weights.cwiseProduct(r)));
        if (rn > 1e-8 * std::abs(basis.lambdas[j]))
            throw NumericalError("eigenpair " + std::to_string(j + 1) +
                                 " residual " + std::to_string(rn) + " exceeds tolerance");
    }
    return basis;
}

UnstableSelection select_unstable_count(const EigenBasis& basis, double mu) {
    const int k = basis.n_computed;
    int N = 0;
    while (N < k && basis.lambdas[N] + mu >= 0.0) ++N;
    if (N == k)
        throw InsufficientModesError(
            "select_unstable_count: all " + std::to_string(k) +
            " computed modes satisfy lambda + mu >= 0; recompute with a larger count");
    UnstableSelection sel;
    sel.N = N;
    sel.mu = mu;
    sel.margin = basis.lambdas[N] + mu;
    return sel;
}

GramReport gram_trace_matrix(const EigenBasis& basis, const std::vector<int>& group,
                             const Grid& grid, double sing_tol_factor) {
    const int k = static_cast<int>(group.size());
    if (k == 0) throw std::invalid_argument("gram_trace_matrix: empty group");
    std::vector<TraceField> traces;
    traces.reserve(group.size());
    for (int j : group) {
        if (j < 0 || j >= basis.n_computed)
            throw std::invalid_argument("gram_trace_matrix: index out of range");
        traces.push_back(trace_gamma1(basis.phi(j), grid));
    }

    GramReport rep;
    rep.G.resize(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b <= a; ++b)
            rep.G(a, b) = rep.G(b, a) = inner_product_gamma1(traces[a], traces[b], grid);

    Eigen::JacobiSVD<Matrix> svd(rep.G);
    rep.singular_values = svd.singularValues();
    rep.sigma_max = rep.singular_values[0];
    rep.sigma_min = rep.singular_values[k - 1];
    rep.near_singular = rep.sigma_min < sing_tol_factor * rep.sigma_max;
    return rep;
}

}  // namespace heatstab
