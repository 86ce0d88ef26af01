#ifndef XXZSOV_SOV_HPP
#define XXZSOV_SOV_HPP

#include <cstdint>

#include "xxzsov/operators.hpp"

namespace xxzsov {

enum class Side { left, right };
enum class SovVariable { D, A };

// Bijection between bit tuples h in {0,1}^N and basis labels j in 1..2^N,
// j = 1 + sum_a 2^(a-1) h_a. Site a corresponds to bit a-1.
std::size_t kappa(const std::vector<int>& h);
std::vector<int> kappa_inv(std::size_t j, int n_sites);
inline int h_bit(std::size_t j, int site) {
    return static_cast<int>(((j - 1) >> (site - 1)) & 1u);
}

// The gauge function omega(eta) = eta^(N-1); the exponent convention for its
// argument is eta_a q^(-h_a) everywhere (fixed by the identity decomposition).
cplx omega(const ModelParams& params, cplx eta);

// Vandermonde weight prod_{b<a} (eta_a^2 q^(-2 h_a) - eta_b^2 q^(-2 h_b)).
cplx sov_vandermonde(const ModelParams& params, std::size_t j);

// One of Sklyanin's four SOV bases: left/right eigenbasis of D(lambda) or
// A(lambda), built by repeated dense application of the C/B generators to
// the reference state and indexed by j = kappa(h). Covectors are stored as
// plain vectors under the bilinear pairing convention.
struct SovBasis {
    Side side;
    SovVariable variable;
    int n_sites = 0;
    cplx norm_constant;  // the global normalization n
    std::vector<Vector> states;
    double sov_margin = 0.0;  // min relative gap of the existence condition
    bool conditioning_warning = false;

    const Vector& state(std::size_t j) const { return states.at(j - 1); }
};

SovBasis build_sov_basis(const ModelParams& params, Side side, SovVariable variable,
                         double warn_margin = 1e-6);

// Eigenvalue of the diagonalized family on the h-labelled state:
// D: prod_n (lambda q^(h_n)/eta_n - eta_n/(lambda q^(h_n))),
// A: same with exponent (1 - h_n).
cplx eigenvalue_at(const ModelParams& params, SovVariable variable, const std::vector<int>& h,
                   cplx lambda);

// Closed interpolation-formula action of B or C on a state given in SOV
// coordinates (coefficients indexed by j). Shifts leaving {0,1}^N annihilate
// the corresponding term.
enum class Generator { B, C };
Vector sov_action(const ModelParams& params, SovVariable variable, Side side, Generator gen,
                  const Vector& state_coeffs, cplx lambda);

// Coupling of left and right D-bases: M_jj = <y_j | y_j> in closed form,
// Sklyanin's measure mu_j = 1/M_jj, and the gauge descriptor.
struct CouplingData {
    std::vector<cplx> m_diag;
    std::vector<cplx> measure;
    int gauge_exponent = 0;     // omega(eta) = eta^gauge_exponent
    double max_rel_err = 0.0;   // closed form vs dense pairing (when verified)
    double max_offdiag = 0.0;   // largest |<y_i|y_j>|, i != j (when verified)
    bool verified = false;
};
CouplingData coupling_data(const ModelParams& params, const SovBasis* left = nullptr,
                           const SovBasis* right = nullptr);

// || sum_h mu_h |h><h| - Id ||_F with the measure in gauge form; the public
// entry point uses the resolved exponent sign (-1), the signed variant exists
// for the negative-control test of the gauge convention.
double identity_decomposition_residual(const ModelParams& params, const SovBasis& left,
                                       const SovBasis& right, int exponent_sign = -1);
double check_identity_decomposition(const ModelParams& params);

}  // namespace xxzsov

#endif
