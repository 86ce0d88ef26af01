#ifndef XXZSOV_SPECTRUM_HPP
#define XXZSOV_SPECTRUM_HPP

#include <optional>
#include <string>

#include "xxzsov/sov.hpp"

namespace xxzsov {

// One antiperiodic transfer-matrix eigenvalue t(lambda) = sum_b c_b
// lambda^(-N-1+2b) with its node tables and discrete-system residual. The
// exponent set enforces the parity class (even Laurent for N odd, odd for N
// even) structurally.
struct TransferEigenvalue {
    std::vector<cplx> coeffs;        // c_b, b = 1..N
    std::vector<cplx> node_values;   // t(eta_a)
    std::vector<cplx> node_values_q; // t(eta_a / q)
    double residual = 0.0;           // max_a |t(eta_a)t(eta_a/q) - a d| / scale

    cplx eval(const ModelParams& params, cplx lambda) const;
    static TransferEigenvalue from_coeffs(const ModelParams& params, std::vector<cplx> coeffs);
    std::string fingerprint() const;  // FNV-1a hash of rounded node values
};

bool eigenvalue_order(const TransferEigenvalue& x, const TransferEigenvalue& y);

// Per-node residuals t(eta_a)t(eta_a/q) - a(eta_a)d(eta_a/q).
std::vector<cplx> discrete_system_residual(const ModelParams& params,
                                           const TransferEigenvalue& t);
// Natural residual scale max_a |a(eta_a) d(eta_a/q)|.
double discrete_system_scale(const ModelParams& params);

// Ground-truth spectrum: eigendecompose Tbar(lambda0) at a random generic
// lambda0 (|lambda0| in [0.5,2], away from all eta_a and eta_a/q by relative
// 1e-2), take node values as Rayleigh quotients of the shared eigenvectors,
// interpolate the coefficients, Newton-polish. Retries with a fresh lambda0
// on degeneracy, fails after max_retries.
std::vector<TransferEigenvalue> solve_spectrum_oracle(const ModelParams& params, Rng& rng,
                                                      int max_retries = 8,
                                                      bool newton_polish = true);

// Newton iteration on F_a(c) = t(eta_a)t(eta_a/q) - a(eta_a)d(eta_a/q) with
// the analytic Jacobian; converges to relative residual < tol or throws
// ConvergenceError.
TransferEigenvalue refine_newton(const ModelParams& params, const TransferEigenvalue& t0,
                                 double tol = 1e-12, int max_iter = 60);

// Demonstration-only multi-start Newton search; completeness claims attach to
// the oracle path only.
std::vector<TransferEigenvalue> solve_spectrum_newton_multistart(const ModelParams& params,
                                                                 Rng& rng, int n_starts);

// Q-ratio tables normalized to Q_t(eta_a) = Qbar_t(eta_a) = 1:
// Q_t(eta_a/q) = t(eta_a)/d(eta_a/q), Qbar_t(eta_a/q) = t(eta_a)/a(eta_a).
struct QRatios {
    std::vector<cplx> q_at_node;       // Q_t(eta_a) == 1
    std::vector<cplx> q_at_node_q;     // Q_t(eta_a/q)
    std::vector<cplx> qbar_at_node;    // Qbar_t(eta_a) == 1
    std::vector<cplx> qbar_at_node_q;  // Qbar_t(eta_a/q)

    cplx q(int a, int h) const { return h == 0 ? q_at_node[static_cast<std::size_t>(a) - 1]
                                               : q_at_node_q[static_cast<std::size_t>(a) - 1]; }
    cplx qbar(int a, int h) const { return h == 0 ? qbar_at_node[static_cast<std::size_t>(a) - 1]
                                                  : qbar_at_node_q[static_cast<std::size_t>(a) - 1]; }
};
QRatios q_ratios(const ModelParams& params, const TransferEigenvalue& t);

struct EigenPair {
    TransferEigenvalue value;
    Vector right_state;
    Vector left_state;
    double verify_residual = 0.0;  // max over sample lambdas of ||Tbar v - t v|| / ||v||
    bool verified = false;
};

// Assembles one side from the SOV basis and the Q-ratio coefficients.
Vector assemble_eigenstate(const ModelParams& params, const SovBasis& basis, const QRatios& qr,
                           Side side);
// Builds both sides and verifies the eigen-relation densely at n_sample
// random lambdas.
EigenPair build_eigenstate(const ModelParams& params, const SovBasis& left_basis,
                           const SovBasis& right_basis, const TransferEigenvalue& t, Rng& rng,
                           int n_samples = 5, double tol = 1e-9);

// Eigenvalue-level TQ relation for even N: solves the homogeneous system for
// the N+1 coefficients of q(lambda) = lambda^(-N/2) prod_k (lambda -
// lambda_k), reports the TQ residual on fresh sample points, the Bethe roots
// and per-root Bethe-equation residuals.
struct TqReport {
    int nullspace_dim = 0;
    std::vector<cplx> q_coeffs;  // coefficient of lambda^(j - N/2), j = 0..N
    double tq_residual = 0.0;
    std::vector<cplx> bethe_roots;
    std::vector<double> bethe_residuals;  // relative; NaN-free, colliding roots skipped
    std::vector<bool> root_colliding;
};
TqReport tq_polynomial_check(const ModelParams& params, const TransferEigenvalue& t, Rng& rng,
                             int n_sample_points = 0 /* 0 = 2N+4 */);

// Smallest p >= 2 with q^p = 1 within tol, or nullopt.
std::optional<int> root_of_unity_order(cplx q, int max_p = 64, double tol = 1e-10);
cplx root_of_unity_q(int p, int p_prime);

// Cyclic p x p matrix D(lambda) built from t, a, d; row i carries
// t(q^i lambda) on the diagonal, -d(q^i lambda) to the right, -a(q^i lambda)
// to the left (indices mod p).
Matrix root_of_unity_matrix(const ModelParams& params, const TransferEigenvalue& t, cplx lambda,
                            int p);

struct RootOfUnityReport {
    int p = 0;
    double max_abs_det = 0.0;
    double scale = 1.0;  // max over samples of the Hadamard bound of D
};
RootOfUnityReport root_of_unity_check(const ModelParams& params, const TransferEigenvalue& t,
                                      const std::vector<cplx>& samples);

}  // namespace xxzsov

#endif
