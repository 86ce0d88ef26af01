#ifndef XXZSOV_VERIFY_HPP
#define XXZSOV_VERIFY_HPP

#include "xxzsov/observables.hpp"

namespace xxzsov {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

CheckResult make_check(std::string name, double residual, double threshold, std::string note = "");

// Everything the identity suite shares for one parameter set: the two D-bases,
// the complete spectrum and the assembled eigenpairs.
struct SpectrumBundle {
    SovBasis left;
    SovBasis right;
    std::vector<EigenPair> pairs;
};
SpectrumBundle build_spectrum_bundle(const ModelParams& params, Rng& rng);

// --- residual helpers (dimensionless; see the README for the conventions) ---

double ybe_local_residual(const ModelParams& params, cplx lambda, cplx mu);
double ybe_global_residual(const ModelParams& params, cplx lambda, cplx mu);
double lax_hermiticity_residual(const ModelParams& params, cplx lambda);  // massless form
double reference_state_residual(const ModelParams& params, cplx lambda);
double qdet_offscalar_residual(const ModelParams& params, cplx lambda);
double qdet_scalar_residual(const ModelParams& params, cplx lambda);
double qdet_factorization_residual(const ModelParams& params, cplx lambda);
double antiperiodic_qdet_residual(const ModelParams& params, int node);
double transfer_commutator_residual(const ModelParams& params, cplx lambda, cplx mu, int b);
double twist_trace_residual(const ModelParams& params, cplx lambda, cplx alpha);
double transfer_interpolation_residual(const ModelParams& params, Rng& rng);
double monodromy_entry_interpolation_residual(const ModelParams& params, Rng& rng);

double sov_basis_eigen_residual(const ModelParams& params, const SovBasis& basis, Rng& rng,
                                int n_lambda = 5);
double sov_action_residual(const ModelParams& params, SovVariable variable, Side side,
                           Generator gen, Rng& rng);
double coupling_flip_ratio_residual(const ModelParams& params, const SovBasis& left,
                                    const SovBasis& right);

double sovbax_residual(const ModelParams& params, const SpectrumBundle& bundle);
double wavefunction_ratio_residual(const ModelParams& params, const SpectrumBundle& bundle);
double eigen_orthogonality_residual(const ModelParams& params, const SpectrumBundle& bundle);
double spectrum_reality_residual(const ModelParams& params, cplx lambda);  // Lemma-1 loci

double scalar_product_random_residual(const ModelParams& params, const SovBasis& left,
                                      const SovBasis& right, Rng& rng, int n_pairs = 50);
double phi_kernel_residual(const ModelParams& params, const SpectrumBundle& bundle);
double scalar_product_orthogonality_residual(const ModelParams& params,
                                             const SpectrumBundle& bundle);

// max over eigenpair pairs and sites of |formula - dense| / max(|dense|,
// 0.01 * ||left|| * ||right||): the 1e-8 threshold then encodes both the
// relative comparison and the 1e-10 * norms zero floor.
double form_factor_residual(const ModelParams& params, const SpectrumBundle& bundle,
                            PauliKind kind);
double form_factor_covariance_residual(const ModelParams& params, const SpectrumBundle& bundle,
                                       Rng& rng);
double norm_alpha_residual(const ModelParams& params, const SpectrumBundle& bundle);

double reconstruction_residual(const ModelParams& params, ReconstructionFlavor flavor);
double sigma_x_string_residual(const ModelParams& params);
double hamiltonian_residual(const ModelParams& params);
double m_point_residual(const ModelParams& params, const SpectrumBundle& bundle, int m, Rng& rng);

struct VerifyOptions {
    Tolerances tol;
    std::uint64_t seed = 0;
};

// Runs every identity testable for the given parameters (root-of-unity and
// TQ checks switch on automatically when q / N qualify, the Hamiltonian check
// when the chain is homogeneous).
std::vector<CheckResult> run_full_verification(const ModelParams& params,
                                               const VerifyOptions& options);

}  // namespace xxzsov

#endif
