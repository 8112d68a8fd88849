#include "heatstab/synthesis.hpp"

#include "lapack.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>

namespace heatstab {

namespace {

Matrix dense_trace_matrix(const Grid& grid) {
    Matrix t = Matrix::Zero(grid.n_gamma1(), grid.n_interior());
    for (Index i = 0; i < grid.n_gamma1(); ++i)
        t(i, grid.gamma1_nodes[static_cast<size_t>(i)]) = 1.0;
    return t;
}

double spectral_norm(const Matrix& m) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()[0];
}

}  // namespace

TruncatedSystem assemble_truncated(const EigenBasis& basis, const UnstableSelection& selection,
                                   const HelmholtzConfig& cfg, const DiscreteOperator& op,
                                   const Grid& grid, double sing_tol_factor) {
    const int N = selection.N;
    if (N < 1) throw std::invalid_argument("assemble_truncated: N must be >= 1");
    if (N > basis.n_computed)
        throw std::invalid_argument("assemble_truncated: N exceeds computed modes");

    TruncatedSystem sys;
    sys.theta = cfg.theta;
    sys.lambda_scale = std::abs(basis.lambdas[0]);
    sys.Lambda_N = Matrix::Zero(N, N);
    for (int j = 0; j < N; ++j) sys.Lambda_N(j, j) = basis.lambdas[j] + selection.mu;

    HelmholtzSolver solver(op, grid, cfg);
    sys.F_N.resize(N, N);
    for (int i = 0; i < N; ++i) {
        const Field zeta = solver.solve_neumann_data(trace_gamma1(basis.phi(i), grid));
        for (int k = 0; k < N; ++k)
            sys.F_N(k, i) = inner_product_omega(zeta, basis.phi(k), grid);
    }

    std::vector<int> head(N);
    for (int j = 0; j < N; ++j) head[j] = j;
    GramReport gram = gram_trace_matrix(basis, head, grid, sing_tol_factor);
    sys.gram = gram.G;
    sys.gram_singular_values = gram.singular_values;
    sys.gram_near_singular = gram.near_singular;
    return sys;
}

ControllabilityReport check_controllability(const TruncatedSystem& sys,
                                            double rank_tol_factor,
                                            double cluster_tol_factor) {
    const int N = static_cast<int>(sys.Lambda_N.rows());
    ControllabilityReport rep;
    rep.rank_tol = rank_tol_factor * spectral_norm(sys.F_N);
    rep.controllable = true;

    const double cluster_tol = cluster_tol_factor * std::max(sys.lambda_scale, 1.0);
    const Vector diag = sys.Lambda_N.diagonal();
    for (const auto& cl : eigenvalue_clusters(diag, cluster_tol)) {
        ClusterCertificate cert;
        cert.begin = cl.front();
        cert.size = static_cast<int>(cl.size());
        cert.lambda = diag[cl.front()];

        Matrix hautus(N, 2 * N);
        hautus.leftCols(N) = cert.lambda * Matrix::Identity(N, N) - sys.Lambda_N;
        hautus.rightCols(N) = sys.F_N;
        Eigen::JacobiSVD<Matrix> svd(hautus);
        cert.hautus_sigma_min = svd.singularValues()[N - 1];

        cert.block_abs_det =
            std::abs(sys.F_N.block(cert.begin, cert.begin, cert.size, cert.size).determinant());

        if (cert.hautus_sigma_min <= rep.rank_tol) {
            rep.controllable = false;
            std::ostringstream msg;
            msg << "uncontrollable cluster at lambda = " << cert.lambda
                << " (size " << cert.size << ", Hautus sigma_min = " << cert.hautus_sigma_min
                << " <= rank_tol = " << rep.rank_tol << ")";
            rep.message = msg.str();
        }
        rep.clusters.push_back(cert);
    }
    if (rep.controllable) rep.message = "controllable";
    return rep;
}

Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
    const int n = static_cast<int>(A.rows());
    const Matrix Rinv = R.inverse();

    Matrix H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = A;
    H.topRightCorner(n, n) = -B * Rinv * B.transpose();
    H.bottomLeftCorner(n, n) = -Q;
    H.bottomRightCorner(n, n) = -A.transpose();

    Eigen::EigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("solve_care: Hamiltonian eigen-decomposition failed");

    const double axis_tol = 1e-9 * H.cwiseAbs().maxCoeff();
    Eigen::MatrixXcd stable(2 * n, n);
    int found = 0;
    for (int k = 0; k < 2 * n; ++k) {
        const double re = es.eigenvalues()[k].real();
        if (std::abs(re) <= axis_tol)
            throw NumericalError("solve_care: Hamiltonian eigenvalue on the imaginary axis (Re = " +
                                 std::to_string(re) + "); the LQR problem is degenerate");
        if (re < 0.0) {
            if (found == n) throw NumericalError("solve_care: more than n stable eigenvalues");
            stable.col(found++) = es.eigenvectors().col(k);
        }
    }
    if (found != n)
        throw NumericalError("solve_care: stable invariant subspace has dimension " +
                             std::to_string(found) + " != " + std::to_string(n));

    const Eigen::MatrixXcd X = stable.topRows(n);
    const Eigen::MatrixXcd Y = stable.bottomRows(n);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(X);
    if (!lu.isInvertible())
        throw NumericalError("solve_care: stable subspace is not a graph over the state space");
    Matrix P = (Y * lu.inverse()).real();
    P = 0.5 * (P + P.transpose()).eval();

    const Matrix resid = A.transpose() * P + P * A - P * B * Rinv * B.transpose() * P + Q;
    const double scale = Q.norm() + (P * A).norm();
    if (resid.norm() > 1e-6 * std::max(scale, 1.0))
        throw NumericalError("solve_care: Riccati residual " + std::to_string(resid.norm()) +
                             " too large");
    return P;
}

GainSet design_gain(const TruncatedSystem& sys, double q, double r) {
    if (!(q > 0.0) || !(r > 0.0))
        throw std::invalid_argument("design_gain: q and r must be positive");
    ControllabilityReport ctrl = check_controllability(sys);
    if (!ctrl.controllable) throw NumericalError("design_gain: " + ctrl.message);

    const int N = static_cast<int>(sys.Lambda_N.rows());
    const Matrix Q = q * Matrix::Identity(N, N);
    const Matrix R = r * Matrix::Identity(N, N);
    const Matrix P = solve_care(sys.Lambda_N, sys.F_N, Q, R);

    GainSet gains;
    gains.L_N = -(1.0 / r) * sys.F_N.transpose() * P;

    Eigen::EigenSolver<Matrix> es(sys.Lambda_N + sys.F_N * gains.L_N);
    if (es.info() != Eigen::Success)
        throw NumericalError("design_gain: closed-pole eigensolve failed");
    gains.closed_poles = es.eigenvalues();
    gains.pole_margin = -gains.closed_poles.real().maxCoeff();
    if (!(gains.pole_margin > 0.0))
        throw NumericalError("design_gain: Lambda_N + F_N L_N is not Hurwitz (margin = " +
                             std::to_string(gains.pole_margin) + ")");
    return gains;
}

double spectral_abscissa(const Matrix& m) {
    return lapack::eigenvalues(m).real().maxCoeff();
}

double spectral_abscissa(const AssembledGenerator& gen) { return spectral_abscissa(gen.M); }

double spectrum_distance(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const ComplexVector& u = pass == 0 ? a : b;
        const ComplexVector& v = pass == 0 ? b : a;
        for (Index i = 0; i < u.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < v.size(); ++j) best = std::min(best, std::abs(u[i] - v[j]));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

Synthesis synthesize(const DiscreteOperator& op, const Grid& grid, const EigenBasis& basis,
                     const GainSet& gains, const HelmholtzConfig& cfg) {
    const int N = static_cast<int>(gains.L_N.rows());
    if (N < 1 || gains.L_N.cols() != N)
        throw std::invalid_argument("synthesize: L_N must be square with N >= 1");
    if (N > basis.n_computed)
        throw std::invalid_argument("synthesize: gain dimension exceeds computed modes");

    const Index n = grid.n_interior();
    const Index m = grid.n_gamma1();
    const Matrix T = dense_trace_matrix(grid);
    const Vector& W = grid.omega_weights;
    const Vector& Wg = grid.gamma1_weights;

    Synthesis s;
    s.N = N;
    s.mu = cfg.mu;
    s.alpha = cfg.alpha;
    s.theta = cfg.theta;
    s.Phi = basis.phis.leftCols(N);
    s.trace_phi = T * s.Phi;
    s.L_N = gains.L_N;
    s.K = s.L_N * s.Phi.transpose() * W.asDiagonal();
    s.K_star = s.Phi * s.L_N.transpose();
    s.B_v_star = s.trace_phi.transpose() * Wg.asDiagonal();

    HelmholtzSolver solver(op, grid, cfg);
    s.S.resize(n, m);
    for (Index i = 0; i < m; ++i) {
        TraceField e{Vector::Zero(m)};
        e.values[i] = 1.0;
        s.S.col(i) = -solver.solve_neumann_data(e).values;
    }
    s.S_star = Wg.cwiseInverse().asDiagonal() * s.S.transpose() * W.asDiagonal();

    s.xi_traces.resize(m, N);
    for (int j = 0; j < N; ++j)
        s.xi_traces.col(j) = (T * solver.solve_source(basis.phi(j)).values).eval();

    // closed loop over (w, v), Eq. blocks [A+mu, B; -B_v K, -alpha - B_v K S]
    const Matrix A_mu = Matrix(op.A_h) + cfg.mu * Matrix::Identity(n, n);
    const Matrix BvK = s.trace_phi * s.K;

    s.closed_loop.M.resize(n + m, n + m);
    s.closed_loop.M.topLeftCorner(n, n) = A_mu;
    s.closed_loop.M.topRightCorner(n, m) = Matrix(op.B_h);
    s.closed_loop.M.bottomLeftCorner(m, n) = -BvK;
    s.closed_loop.M.bottomRightCorner(m, m) =
        -cfg.alpha * Matrix::Identity(m, m) - s.trace_phi * (s.K * s.S);
    s.closed_loop.blocks = {{"w", 0, n, false}, {"v", n, m, true}};
    s.closed_loop.weights.resize(n + m);
    s.closed_loop.weights << W, Wg;

    // observation error generator over (w~, p~), the weighted adjoint:
    // [A+mu, -K* B_v*; B*, -alpha - S* K* B_v*]
    const Matrix KstarBvstar = s.K_star * s.B_v_star;
    s.observer.M.resize(n + m, n + m);
    s.observer.M.topLeftCorner(n, n) = A_mu;
    s.observer.M.topRightCorner(n, m) = -KstarBvstar;
    s.observer.M.bottomLeftCorner(m, n) = T;
    s.observer.M.bottomRightCorner(m, m) =
        -cfg.alpha * Matrix::Identity(m, m) - s.xi_traces * s.L_N.transpose() * s.B_v_star;
    s.observer.blocks = {{"w", 0, n, false}, {"p", n, m, true}};
    s.observer.weights = s.closed_loop.weights;

    return s;
}

AssembledGenerator assemble_closed_loop(const DiscreteOperator& op, const Grid& grid,
                                        const EigenBasis& basis, const GainSet& gains,
                                        const HelmholtzConfig& cfg) {
    return synthesize(op, grid, basis, gains, cfg).closed_loop;
}

AssembledGenerator assemble_observer_generator(const DiscreteOperator& op, const Grid& grid,
                                               const EigenBasis& basis, const GainSet& gains,
                                               const HelmholtzConfig& cfg) {
    return synthesize(op, grid, basis, gains, cfg).observer;
}

AssembledGenerator assemble_output_feedback(const Synthesis& s) {
    const Index n = s.closed_loop.blocks[0].size;
    const Index m = s.closed_loop.blocks[1].size;
    const auto& C = s.closed_loop.M;
    const auto& O = s.observer.M;
    const Matrix alpha_eye = s.alpha * Matrix::Identity(m, m);

    // state (w, v_hat, p, w_hat, p_hat)
    AssembledGenerator gen;
    gen.M = Matrix::Zero(2 * n + 3 * m, 2 * n + 3 * m);
    const Index iw = 0, iv = n, ip = n + m, iwh = n + 2 * m, iph = 2 * n + 2 * m;

    gen.M.block(iw, iw, n, n) = C.topLeftCorner(n, n);    // A + mu
    gen.M.block(iw, iv, n, m) = C.topRightCorner(n, m);   // B

    gen.M.block(iv, iv, m, m) = C.bottomRightCorner(m, m);  // -alpha - B_v K S
    gen.M.block(iv, iwh, m, n) = C.bottomLeftCorner(m, n);  // -B_v K on w_hat

    gen.M.block(ip, iw, m, n) = O.bottomLeftCorner(m, n);  // B* w
    gen.M.block(ip, ip, m, m) = -alpha_eye;

    const Matrix KsBvs = -O.topRightCorner(n, m);           // K* B_v*
    const Matrix SsKsBvs = -(O.bottomRightCorner(m, m) + alpha_eye);  // S* K* B_v*

    gen.M.block(iwh, iwh, n, n) = C.topLeftCorner(n, n);
    gen.M.block(iwh, iv, n, m) = C.topRightCorner(n, m);
    gen.M.block(iwh, ip, n, m) = KsBvs;
    gen.M.block(iwh, iph, n, m) = -KsBvs;

    gen.M.block(iph, iwh, m, n) = O.bottomLeftCorner(m, n);
    gen.M.block(iph, ip, m, m) = SsKsBvs;
    gen.M.block(iph, iph, m, m) = -alpha_eye - SsKsBvs;

    gen.blocks = {{"w", iw, n, false},
                  {"v_hat", iv, m, true},
                  {"p", ip, m, true},
                  {"w_hat", iwh, n, false},
                  {"p_hat", iph, m, true}};
    gen.weights.resize(2 * n + 3 * m);
    const Vector& W = s.closed_loop.weights;
    gen.weights << W.head(n), W.tail(m), W.tail(m), W.head(n), W.tail(m);
    return gen;
}

SimilarityReport verify_similarity(const Synthesis& s, SimilarityTransform which,
                                   bool compare_spectra) {
    const Index n = s.closed_loop.blocks[0].size;
    const Index m = s.closed_loop.blocks[1].size;

    SimilarityReport rep;
    if (which == SimilarityTransform::S) {
        const Matrix& M = s.closed_loop.M;
        Matrix t(n + m, n + m);
        // (I, S; 0, I) M (I, -S; 0, I) written out blockwise
        const auto M11 = M.topLeftCorner(n, n), M12 = M.topRightCorner(n, m);
        const auto M21 = M.bottomLeftCorner(m, n), M22 = M.bottomRightCorner(m, m);
        const Matrix T11 = M11 + s.S * M21;
        const Matrix T12 = M12 + s.S * M22;
        t.topLeftCorner(n, n) = T11;
        t.topRightCorner(n, m) = -T11 * s.S + T12;
        t.bottomLeftCorner(m, n) = M21;
        t.bottomRightCorner(m, m) = -M21 * s.S + M22;
        rep.zero_block_rel = t.topRightCorner(n, m).norm() / M12.norm();
        rep.transformed = std::move(t);
        if (compare_spectra)
            rep.spectrum_dist = spectrum_distance(lapack::eigenvalues(M),
                                                  lapack::eigenvalues(rep.transformed));
    } else {
        const Matrix& M = s.observer.M;
        Matrix t(n + m, n + m);
        // (I, 0; -S*, I) M (I, 0; S*, I)
        const auto M11 = M.topLeftCorner(n, n), M12 = M.topRightCorner(n, m);
        const auto M21 = M.bottomLeftCorner(m, n), M22 = M.bottomRightCorner(m, m);
        const Matrix B21 = M21 - s.S_star * M11;
        const Matrix B22 = M22 - s.S_star * M12;
        t.topLeftCorner(n, n) = M11 + M12 * s.S_star;
        t.topRightCorner(n, m) = M12;
        t.bottomLeftCorner(m, n) = B21 + B22 * s.S_star;
        t.bottomRightCorner(m, m) = B22;
        // the cancellation -S*(A+mu) - alpha S* + B* = 0
        rep.zero_block_rel =
            t.bottomLeftCorner(m, n).norm() / M21.norm();
        rep.transformed = std::move(t);
        if (compare_spectra)
            rep.spectrum_dist = spectrum_distance(lapack::eigenvalues(M),
                                                  lapack::eigenvalues(rep.transformed));
    }
    return rep;
}

}  // namespace heatstab
