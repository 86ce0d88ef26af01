#include "xxzsov/sov.hpp"

#include <cmath>

#include "xxzsov/oracle.hpp"

namespace xxzsov {

std::size_t kappa(const std::vector<int>& h) {
    std::size_t j = 1;
    for (std::size_t a = 0; a < h.size(); ++a) {
        if (h[a] != 0 && h[a] != 1) throw std::invalid_argument("kappa: bits must be 0 or 1");
        j += static_cast<std::size_t>(h[a]) << a;
    }
    return j;
}

std::vector<int> kappa_inv(std::size_t j, int n_sites) {
    if (j < 1 || j > (std::size_t{1} << n_sites))
        throw std::invalid_argument("kappa_inv: index out of range");
    std::vector<int> h(static_cast<std::size_t>(n_sites));
    for (int a = 0; a < n_sites; ++a) h[static_cast<std::size_t>(a)] = static_cast<int>(((j - 1) >> a) & 1u);
    return h;
}

cplx omega(const ModelParams& params, cplx eta) {
    return std::pow(eta, params.n_sites() - 1);
}

cplx sov_vandermonde(const ModelParams& params, std::size_t j) {
    const int n = params.n_sites();
    cplx v = 1.0;
    for (int a = 2; a <= n; ++a) {
        const cplx xa2 = std::pow(params.eta(a) * std::pow(params.q(), -h_bit(j, a)), 2);
        for (int b = 1; b < a; ++b) {
            const cplx xb2 = std::pow(params.eta(b) * std::pow(params.q(), -h_bit(j, b)), 2);
            v *= xa2 - xb2;
        }
    }
    return v;
}

SovBasis build_sov_basis(const ModelParams& params, Side side, SovVariable variable,
                         double warn_margin) {
    SovCheck check = validate_sov_condition(params);
    if (!check.ok)
        throw SovConditionError("build_sov_basis: SOV existence condition violated (" +
                                std::to_string(check.violations.size()) + " pairs)");
    const int n = params.n_sites();
    const std::size_t dim = params.dim();
    SovBasis basis;
    basis.side = side;
    basis.variable = variable;
    basis.n_sites = n;
    basis.sov_margin = check.margin;
    basis.conditioning_warning = check.margin < warn_margin;

    // n = prod_{b<a} (eta_a/eta_b - eta_b/eta_a)^(1/2), principal branch per
    // factor, (b,a) lexicographic.
    cplx norm = 1.0;
    for (int b = 1; b <= n; ++b)
        for (int a = b + 1; a <= n; ++a)
            norm *= std::sqrt(params.eta(a) / params.eta(b) - params.eta(b) / params.eta(a));
    basis.norm_constant = norm;

    // Per-site generator, already divided by its normalization:
    //   left D:  C(eta_n) / d(eta_n/q)      right D: B(eta_n) / a(eta_n)
    //   left A:  C(eta_n/q) / d(eta_n/q)    right A: B(eta_n/q) / a(eta_n)
    std::vector<Matrix> gens(static_cast<std::size_t>(n));
    const cplx q = params.q();
    for (int site = 1; site <= n; ++site) {
        const cplx eta = params.eta(site);
        const cplx arg = (variable == SovVariable::D) ? eta : eta / q;
        Monodromy m = monodromy(params, arg);
        Matrix g = (side == Side::left) ? m.c : m.b;
        const cplx div = (side == Side::left) ? eval_d(params, eta / q) : eval_a(params, eta);
        g *= 1.0 / div;
        gens[static_cast<std::size_t>(site) - 1] = std::move(g);
    }

    basis.states.assign(dim, Vector());
    Vector ref(dim, cplx{});
    ref[0] = 1.0 / norm;
    basis.states[0] = std::move(ref);
    for (std::size_t idx = 1; idx < dim; ++idx) {
        int top = 0;
        for (int a = n; a >= 1; --a)
            if (idx & (std::size_t{1} << (a - 1))) { top = a; break; }
        const std::size_t prev = idx & ~(std::size_t{1} << (top - 1));
        const Matrix& g = gens[static_cast<std::size_t>(top) - 1];
        basis.states[idx] = (side == Side::left) ? apply_covector(basis.states[prev], g)
                                                 : g * basis.states[prev];
    }
    return basis;
}

cplx eigenvalue_at(const ModelParams& params, SovVariable variable, const std::vector<int>& h,
                   cplx lambda) {
    if (lambda == cplx{}) throw std::domain_error("eigenvalue_at: lambda must be nonzero");
    cplx v = 1.0;
    for (int site = 1; site <= params.n_sites(); ++site) {
        const int hn = h.at(static_cast<std::size_t>(site) - 1);
        const int expo = (variable == SovVariable::D) ? hn : 1 - hn;
        const cplx w = lambda * std::pow(params.q(), expo) / params.eta(site);
        v *= w - 1.0 / w;
    }
    return v;
}

namespace {

cplx action_coefficient(const ModelParams& params, SovVariable variable, Side side, Generator gen,
                        std::size_t j, int a, cplx lambda) {
    const cplx q = params.q();
    const int ha = h_bit(j, a);
    cplx coeff = 1.0;
    for (int b = 1; b <= params.n_sites(); ++b) {
        if (b == a) continue;
        const int hb = h_bit(j, b);
        const int num_exp = (variable == SovVariable::D) ? hb : 1 - hb;
        const cplx nw = lambda * std::pow(q, num_exp) / params.eta(b);
        const int den_exp = (variable == SovVariable::D) ? hb - ha : ha - hb;
        const cplx dw = params.eta(a) * std::pow(q, den_exp) / params.eta(b);
        coeff *= (nw - 1.0 / nw) / (dw - 1.0 / dw);
    }
    const cplx arg = (side == Side::left) ? params.eta(a) * std::pow(q, ha - 1)
                                          : params.eta(a) * std::pow(q, -ha);
    coeff *= (gen == Generator::C) ? eval_d(params, arg) : eval_a(params, arg);
    return coeff;
}

}  // namespace

Vector sov_action(const ModelParams& params, SovVariable variable, Side side, Generator gen,
                  const Vector& state_coeffs, cplx lambda) {
    if (lambda == cplx{}) throw std::domain_error("sov_action: lambda must be nonzero");
    const std::size_t dim = params.dim();
    if (state_coeffs.size() != dim)
        throw std::invalid_argument("sov_action: coefficient vector has wrong dimension");
    // Shift direction: left C and right B raise h_a, left B and right C lower.
    const int dir = ((side == Side::left) == (gen == Generator::C)) ? +1 : -1;
    Vector out(dim, cplx{});
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const cplx psi = state_coeffs[idx];
        if (psi == cplx{}) continue;
        const std::size_t j = idx + 1;
        for (int a = 1; a <= params.n_sites(); ++a) {
            const int ha = h_bit(j, a);
            if (ha + dir < 0 || ha + dir > 1) continue;  // boundary annihilation
            const std::size_t target = idx ^ (std::size_t{1} << (a - 1));
            out[target] += psi * action_coefficient(params, variable, side, gen, j, a, lambda);
        }
    }
    return out;
}

CouplingData coupling_data(const ModelParams& params, const SovBasis* left,
                           const SovBasis* right) {
    SovCheck check = validate_sov_condition(params);
    if (!check.ok) throw SovConditionError("coupling_data: SOV existence condition violated");
    const int n = params.n_sites();
    const std::size_t dim = params.dim();
    CouplingData out;
    out.gauge_exponent = n - 1;
    out.m_diag.resize(dim);
    out.measure.resize(dim);
    for (std::size_t j = 1; j <= dim; ++j) {
        cplx m = 1.0;
        for (int b = 1; b <= n; ++b)
            for (int a = b + 1; a <= n; ++a) {
                const cplx w = params.eta(a) * std::pow(params.q(), h_bit(j, b) - h_bit(j, a)) /
                               params.eta(b);
                m /= w - 1.0 / w;
            }
        out.m_diag[j - 1] = m;
        out.measure[j - 1] = 1.0 / m;
    }
    if (left && right) {
        out.verified = true;
        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t j = 1; j <= dim; ++j) {
                const cplx p = pairing(left->state(i), right->state(j));
                if (i == j) {
                    out.max_rel_err = std::max(out.max_rel_err,
                                               std::abs(p - out.m_diag[i - 1]) /
                                                   std::abs(out.m_diag[i - 1]));
                } else {
                    const double scale =
                        norm2(left->state(i)) * norm2(right->state(j));
                    out.max_offdiag = std::max(out.max_offdiag, std::abs(p) / scale);
                }
            }
        }
    }
    return out;
}

double identity_decomposition_residual(const ModelParams& params, const SovBasis& left,
                                       const SovBasis& right, int exponent_sign) {
    const std::size_t dim = params.dim();
    Matrix sum(dim, dim);
    for (std::size_t j = 1; j <= dim; ++j) {
        cplx weight = sov_vandermonde(params, j);
        for (int b = 1; b <= params.n_sites(); ++b)
            weight /= omega(params, params.eta(b) * std::pow(params.q(), exponent_sign * h_bit(j, b)));
        Matrix term = outer(right.state(j), left.state(j));
        term *= weight;
        sum += term;
    }
    sum -= Matrix::identity(dim);
    return sum.frobenius_norm();
}

double check_identity_decomposition(const ModelParams& params) {
    SovBasis left = build_sov_basis(params, Side::left, SovVariable::D);
    SovBasis right = build_sov_basis(params, Side::right, SovVariable::D);
    return identity_decomposition_residual(params, left, right);
}

}  // namespace xxzsov
