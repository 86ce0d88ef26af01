#ifndef XXZSOV_PARAMS_HPP
#define XXZSOV_PARAMS_HPP

#include <string>
#include <vector>

#include "xxzsov/common.hpp"

namespace xxzsov {

enum class Regime { massless, massive, generic };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

// Global model context: lattice size N, anisotropy q = e^eta, inhomogeneity
// parameters eta_1..eta_N and the regime tag. Immutable after construction;
// construction validates the regime hypotheses (massless: |q| = 1 and real
// inhomogeneities; massive: q real positive and unimodular inhomogeneities).
class ModelParams {
public:
    ModelParams(int n_sites, cplx q, std::vector<cplx> inhomogeneities,
                Regime regime = Regime::generic, double regime_tol = 1e-9);

    int n_sites() const { return n_; }
    cplx q() const { return q_; }
    const std::vector<cplx>& inhomogeneities() const { return eta_; }
    cplx eta(int site) const { return eta_.at(static_cast<std::size_t>(site) - 1); }  // 1-based
    Regime regime() const { return regime_; }
    std::size_t dim() const { return std::size_t{1} << n_; }
    bool parity_flag() const { return n_ % 2 == 0; }  // e_N: 1 for N even, 0 odd
    bool homogeneous(double rel_tol = 1e-12) const;

private:
    int n_;
    cplx q_;
    std::vector<cplx> eta_;
    Regime regime_;
};

struct SovViolation {
    int a = 0;  // 1-based pair indices, a < b
    int b = 0;
    int j = 0;  // violating power, eta_b ~ q^j eta_a would be j on the a side; stored as eta_a q^j = eta_b
};

struct SovCheck {
    bool ok = true;
    std::vector<SovViolation> violations;
    double margin = 0.0;  // min over pairs/powers of |eta_a q^j - eta_b| / |eta_b|
};

// Theorem-level existence condition for the SOV representation:
// eta_a != q^j eta_b for all j in {-1,0,1} and a < b.
SovCheck validate_sov_condition(const ModelParams& params, double rel_tol = 1e-9);

// Calibrated coefficient functions of the quantum determinant,
//   a(lambda) = -prod_n (lambda q / eta_n - eta_n / (lambda q)),
//   d(lambda) =  prod_n (lambda / eta_n - eta_n / lambda),
// so that A(lambda)D(lambda/q) - B(lambda)C(lambda/q) = -a(lambda)d(lambda/q) Id
// and the discrete system t(eta_a)t(eta_a/q) = a(eta_a)d(eta_a/q) hold. The
// sign is pinned by calibrate_sign_a() against the dense operator identity.
constexpr double kSignA = -1.0;

cplx eval_a(const ModelParams& params, cplx lambda);
cplx eval_d(const ModelParams& params, cplx lambda);

}  // namespace xxzsov

#endif
