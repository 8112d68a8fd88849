#pragma once

#include "heatstab/elliptic.hpp"
#include "heatstab/grid.hpp"
#include "heatstab/spectral.hpp"
#include "heatstab/types.hpp"

#include <string>
#include <vector>

namespace heatstab {

/// Modal truncation of the compensated plant: Lambda_N = diag(lambda_j + mu)
/// and F_N with f_ki = <P_phi_i theta, phi_k>_Omega. Structurally
/// F_N = diag(1/(theta - lambda_k)) * gram.
struct TruncatedSystem {
    Matrix Lambda_N;
    Matrix F_N;
    double theta = 0.0;
    double lambda_scale = 0.0;  // |lambda_1|, for cluster tolerances
    Matrix gram;                // Gamma1 trace Gram of the first N modes
    Vector gram_singular_values;
    bool gram_near_singular = false;
};

TruncatedSystem assemble_truncated(const EigenBasis& basis, const UnstableSelection& selection,
                                   const HelmholtzConfig& cfg, const DiscreteOperator& op,
                                   const Grid& grid, double sing_tol_factor = 1e-8);

struct ClusterCertificate {
    double lambda = 0.0;  // cluster eigenvalue of Lambda_N
    int begin = 0;
    int size = 0;
    double hautus_sigma_min = 0.0;
    double block_abs_det = 0.0;  // |det P_j| for the diagonal block of F_N
};

struct ControllabilityReport {
    bool controllable = false;
    double rank_tol = 0.0;
    std::vector<ClusterCertificate> clusters;
    std::string message;
};

/// Hautus (PBH) test per distinct eigenvalue cluster of Lambda_N, plus the
/// |P_j| != 0 block-determinant certificates.
ControllabilityReport check_controllability(const TruncatedSystem& sys,
                                            double rank_tol_factor = 1e-8,
                                            double cluster_tol_factor = 1e-6);

struct GainSet {
    Matrix L_N;
    ComplexVector closed_poles;  // eig(Lambda_N + F_N L_N)
    double pole_margin = 0.0;    // -max Re(closed_poles)
};

/// LQR gain via the continuous algebraic Riccati equation: L_N = -R^{-1} F^T P
/// renders Lambda_N + F_N L_N Hurwitz. Throws on controllability failure or a
/// Hamiltonian eigenvalue on the imaginary axis.
GainSet design_gain(const TruncatedSystem& sys, double q = 1.0, double r = 1.0);

/// P with A^T P + P A - P B R^{-1} B^T P + Q = 0 by ordered Hamiltonian
/// eigen-decomposition.
Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R);

struct GeneratorBlock {
    std::string name;
    Index offset = 0;
    Index size = 0;
    bool on_boundary = false;  // trace component (Gamma1 weights) vs field
};

/// Dense generator over a stacked state, with the quadrature weights of the
/// product inner product. Immutable once assembled.
struct AssembledGenerator {
    Matrix M;
    std::vector<GeneratorBlock> blocks;
    Vector weights;
};

double spectral_abscissa(const Matrix& m);
double spectral_abscissa(const AssembledGenerator& gen);

/// max_i min_j |a_i - b_j|, symmetrized; multiset comparison of spectra.
double spectrum_distance(const ComplexVector& a, const ComplexVector& b);

/// Everything the feedback and observer need, assembled once: eigenfunctions,
/// traces, gain, the discrete Sylvester solution S and its adjoint, and the
/// generators of the closed loop (state (w, v)) and of the observation error
/// (state (w~, p~), the weighted adjoint of the former).
struct Synthesis {
    int N = 0;
    double mu = 0.0;
    double alpha = 0.0;
    double theta = 0.0;
    Matrix Phi;        // n x N
    Matrix trace_phi;  // m x N; this is B_v
    Matrix L_N;
    Matrix K;          // N x n,  K = L_N Phi^T W
    Matrix K_star;     // n x N,  K* = Phi L_N^T
    Matrix B_v_star;   // N x m
    Matrix S;          // n x m, columnwise -zeta_g
    Matrix S_star;     // m x n, weighted adjoint
    Matrix xi_traces;  // m x N, trace of xi_{phi_j}
    AssembledGenerator closed_loop;
    AssembledGenerator observer;
};

Synthesis synthesize(const DiscreteOperator& op, const Grid& grid, const EigenBasis& basis,
                     const GainSet& gains, const HelmholtzConfig& cfg);

AssembledGenerator assemble_closed_loop(const DiscreteOperator& op, const Grid& grid,
                                        const EigenBasis& basis, const GainSet& gains,
                                        const HelmholtzConfig& cfg);

AssembledGenerator assemble_observer_generator(const DiscreteOperator& op, const Grid& grid,
                                               const EigenBasis& basis, const GainSet& gains,
                                               const HelmholtzConfig& cfg);

/// Plant + actuator driven by the observer estimate, with the sensor and
/// observer stacked alongside: state (w, v_hat, p, w_hat, p_hat).
AssembledGenerator assemble_output_feedback(const Synthesis& synth);

enum class SimilarityTransform { S, T };

/// S-transform (f,g) -> (f + Sg, g) block-triangularizes the closed loop;
/// T-transform (f,g) -> (f, g - S*f) does the same for the observer error
/// generator. zero_block_rel is the norm of the block the transform is
/// supposed to annihilate, relative to the natural scale of that block.
struct SimilarityReport {
    double zero_block_rel = 0.0;
    double spectrum_dist = 0.0;  // eig(M) vs eig(transformed), Hausdorff
    Matrix transformed;
};

SimilarityReport verify_similarity(const Synthesis& synth, SimilarityTransform which,
                                   bool compare_spectra = true);

}  // namespace heatstab
