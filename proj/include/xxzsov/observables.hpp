#ifndef XXZSOV_OBSERVABLES_HPP
#define XXZSOV_OBSERVABLES_HPP

#include "xxzsov/spectrum.hpp"

namespace xxzsov {

// A separate state: per-site coefficient pairs alpha_a(eta_a q^{-h}),
// h in {0,1}. The assembled state carries the standard /omega factors and the
// squared-variable Vandermonde; assembly happens on demand (the determinant
// formulas consume the tables directly).
struct SeparateState {
    Side side = Side::left;
    std::vector<std::array<cplx, 2>> table;  // table[a-1][h]

    cplx at(int a, int h) const { return table.at(static_cast<std::size_t>(a) - 1)[static_cast<std::size_t>(h)]; }
    static SeparateState from_q_ratios(const QRatios& qr, Side side);
    static SeparateState random(const ModelParams& params, Side side, Rng& rng);
};

Vector assemble_separate_state(const ModelParams& params, const SovBasis& basis,
                               const SeparateState& state);

// <alpha|beta> = det_N M with M_{a,b} = eta_a^{2(b-1)} sum_h alpha_a beta_a
// q^{-2(b-1)h} / omega(eta_a q^{-h}).
Matrix scalar_product_matrix(const ModelParams& params, const SeparateState& alpha,
                             const SeparateState& beta);
cplx scalar_product(const ModelParams& params, const SeparateState& alpha,
                    const SeparateState& beta);

// Phi matrix of the orthogonality condition, with a signed half-integer
// column shift: entries eta_a^(2(b-1)+2*shift) sum_c Q_{t'} Qbar_t
// q^(-(2(b-1)+2*shift)c) / omega(eta_a q^{-c}). shift = 0 gives the square
// orthogonality matrix; the sigma^- form factor uses shift = -1/2.
Matrix phi_matrix(const ModelParams& params, const QRatios& t_bar, const QRatios& t_prime,
                  double shift, int n_cols);

// Determinant form factors between a left eigenstate t and a right eigenstate
// t'. Both target the full-Pauli local operators and match the dense matrix
// elements of the states assembled with the same Q-normalization. The table
// overloads accept rescaled Q-tables (per-node normalization freedom).
cplx form_factor_sigma_minus(const ModelParams& params, const TransferEigenvalue& t,
                             const TransferEigenvalue& t_prime, int site);
cplx form_factor_sigma_minus(const ModelParams& params, const TransferEigenvalue& t,
                             const TransferEigenvalue& t_prime, const QRatios& qbar_t,
                             const QRatios& q_t_prime, int site);
cplx form_factor_sigma_z(const ModelParams& params, const TransferEigenvalue& t,
                         const TransferEigenvalue& t_prime, int site);
cplx form_factor_sigma_z(const ModelParams& params, const TransferEigenvalue& t,
                         const TransferEigenvalue& t_prime, const QRatios& qbar_t,
                         const QRatios& q_t_prime, int site);

enum class ReconstructionFlavor { antiperiodic_1, antiperiodic_2, periodic_1, periodic_2 };

// Transfer-matrix reconstruction of the embedded local operator X at `site`;
// operator inverses are LU solves at the node points.
Matrix reconstruct_local_operator(const ModelParams& params, const SiteOperator& x, int site,
                                  ReconstructionFlavor flavor);

// Both sides of the sigma^x string identity prod_{b<c} sigma_b^x expressed
// through transfer matrices; form = 0 and 1 select the two displayed routes.
Matrix sigma_x_string_transfer(const ModelParams& params, int c, int form);

struct EigenstateNorm {
    cplx bracket;           // <t|t> via the determinant formula
    cplx hilbert_norm_sq;   // || |t> ||^2, sesquilinear
    cplx alpha;             // hilbert_norm_sq / bracket
};
EigenstateNorm eigenstate_norm_and_alpha(const ModelParams& params, const EigenPair& pair,
                                         const TransferEigenvalue& t);

// Spectral m-point function <t|O_1 ... O_m|t> / <t|t> via the stored form
// factors over the complete spectrum. Operators are drawn from the kinds with
// closed determinant formulas.
struct LocalOp {
    PauliKind kind;  // PauliKind::minus or PauliKind::z
    int site;
};
cplx m_point_function(const ModelParams& params, const std::vector<EigenPair>& spectrum,
                      std::size_t t_index, const std::vector<LocalOp>& ops);

}  // namespace xxzsov

#endif
