#include "xxzsov/observables.hpp"

#include <cmath>

#include "xxzsov/oracle.hpp"

namespace xxzsov {

SeparateState SeparateState::from_q_ratios(const QRatios& qr, Side side) {
    SeparateState s;
    s.side = side;
    const std::size_t n = qr.q_at_node.size();
    s.table.resize(n);
    for (std::size_t a = 1; a <= n; ++a) {
        const int ai = static_cast<int>(a);
        s.table[a - 1][0] = (side == Side::left) ? qr.qbar(ai, 0) : qr.q(ai, 0);
        s.table[a - 1][1] = (side == Side::left) ? qr.qbar(ai, 1) : qr.q(ai, 1);
    }
    return s;
}

SeparateState SeparateState::random(const ModelParams& params, Side side, Rng& rng) {
    SeparateState s;
    s.side = side;
    s.table.resize(static_cast<std::size_t>(params.n_sites()));
    for (auto& pair : s.table) {
        pair[0] = random_box(rng, 1.0) + cplx{1.5, 0.0};  // keep entries away from 0
        pair[1] = random_box(rng, 1.0) + cplx{1.5, 0.0};
    }
    return s;
}

Vector assemble_separate_state(const ModelParams& params, const SovBasis& basis,
                               const SeparateState& state) {
    if (basis.variable != SovVariable::D || basis.side != state.side)
        throw std::invalid_argument("assemble_separate_state: need the matching D-basis");
    const std::size_t dim = params.dim();
    Vector out(dim, cplx{});
    for (std::size_t j = 1; j <= dim; ++j) {
        cplx coeff = sov_vandermonde(params, j);
        for (int a = 1; a <= params.n_sites(); ++a) {
            const int ha = h_bit(j, a);
            coeff *= state.at(a, ha) /
                     omega(params, params.eta(a) * std::pow(params.q(), -ha));
        }
        const Vector& s = basis.state(j);
        for (std::size_t i = 0; i < dim; ++i) out[i] += coeff * s[i];
    }
    return out;
}

Matrix scalar_product_matrix(const ModelParams& params, const SeparateState& alpha,
                             const SeparateState& beta) {
    if (alpha.side != Side::left || beta.side != Side::right)
        throw std::invalid_argument("scalar_product: need a left and a right separate state");
    const int n = params.n_sites();
    Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
            cplx s = 0.0;
            for (int h = 0; h <= 1; ++h) {
                const cplx x = params.eta(a) * std::pow(params.q(), -h);
                s += alpha.at(a, h) * beta.at(a, h) *
                     std::pow(params.q(), -2.0 * (b - 1) * h) / omega(params, x);
            }
            m(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1) =
                std::pow(params.eta(a), 2 * (b - 1)) * s;
        }
    }
    return m;
}

cplx scalar_product(const ModelParams& params, const SeparateState& alpha,
                    const SeparateState& beta) {
    return lu_det(scalar_product_matrix(params, alpha, beta));
}

Matrix phi_matrix(const ModelParams& params, const QRatios& t_bar, const QRatios& t_prime,
                  double shift, int n_cols) {
    const double two_shift = 2.0 * shift;
    const long ts = std::lround(two_shift);
    if (std::abs(two_shift - static_cast<double>(ts)) > 1e-12)
        throw std::invalid_argument("phi_matrix: shift must be a half-integer");
    const int n = params.n_sites();
    Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n_cols));
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n_cols; ++b) {
            const int e = 2 * (b - 1) + static_cast<int>(ts);
            cplx s = 0.0;
            for (int c = 0; c <= 1; ++c) {
                const cplx x = params.eta(a) * std::pow(params.q(), -c);
                s += t_prime.q(a, c) * t_bar.qbar(a, c) * std::pow(params.q(), -e * c) /
                     omega(params, x);
            }
            m(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1) =
                std::pow(params.eta(a), e) * s;
        }
    }
    return m;
}

namespace {

// Common form-factor prefactor prod_{h<n} t(eta_h) prod_{h<=n} t'(eta_h/q) /
// prod_{h<=n} a(eta_h) d(eta_h/q).
cplx ff_prefactor(const ModelParams& params, const TransferEigenvalue& t,
                  const TransferEigenvalue& t_prime, int site) {
    cplx num = 1.0;
    for (int h = 1; h < site; ++h) num *= t.node_values[static_cast<std::size_t>(h) - 1];
    for (int h = 1; h <= site; ++h) num *= t_prime.node_values_q[static_cast<std::size_t>(h) - 1];
    cplx den = 1.0;
    for (int h = 1; h <= site; ++h)
        den *= eval_a(params, params.eta(h)) * eval_d(params, params.eta(h) / params.q());
    if (den == cplx{})
        throw std::logic_error("form factor: vanishing a(eta_h)d(eta_h/q) (E-SOV violated)");
    return num / den;
}

void check_ff_site(const ModelParams& params, int site) {
    if (site < 1 || site > params.n_sites())
        throw std::invalid_argument("form factor: site out of range");
}

}  // namespace

cplx form_factor_sigma_minus(const ModelParams& params, const TransferEigenvalue& t,
                             const TransferEigenvalue& t_prime, int site) {
    return form_factor_sigma_minus(params, t, t_prime, q_ratios(params, t),
                                   q_ratios(params, t_prime), site);
}

cplx form_factor_sigma_minus(const ModelParams& params, const TransferEigenvalue& t,
                             const TransferEigenvalue& t_prime, const QRatios& qbar,
                             const QRatios& qpr, int site) {
    check_ff_site(params, site);
    const int n = params.n_sites();
    // Rows 1..N carry the half-shifted Phi columns (exponents 2(b-1)-1), the
    // last row is eta_site^(2(b-1)-N).
    Matrix phi = phi_matrix(params, qbar, qpr, -0.5, n + 1);
    Matrix s(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n) + 1);
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n + 1; ++b)
            s(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1) =
                phi(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1);
    for (int b = 1; b <= n + 1; ++b)
        s(static_cast<std::size_t>(n), static_cast<std::size_t>(b) - 1) =
            std::pow(params.eta(site), 2 * (b - 1) - n);
    return ff_prefactor(params, t, t_prime, site) * lu_det(s);
}

cplx form_factor_sigma_z(const ModelParams& params, const TransferEigenvalue& t,
                         const TransferEigenvalue& t_prime, int site) {
    return form_factor_sigma_z(params, t, t_prime, q_ratios(params, t),
                               q_ratios(params, t_prime), site);
}

cplx form_factor_sigma_z(const ModelParams& params, const TransferEigenvalue& t,
                         const TransferEigenvalue& t_prime, const QRatios& qbar,
                         const QRatios& qpr, int site) {
    check_ff_site(params, site);
    const int n = params.n_sites();
    Matrix phi = phi_matrix(params, qbar, qpr, 0.0, n);
    Matrix s(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n) + 1);
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            s(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1) =
                phi(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1);
    for (int a = 1; a <= n; ++a) {
        const cplx etaq = params.eta(a) / params.q();
        s(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(n)) =
            qpr.q(a, 1) * qbar.qbar(a, 0) * std::pow(etaq, n - 1) *
            eval_d(params, etaq) / omega(params, etaq);
    }
    for (int b = 1; b <= n; ++b)
        s(static_cast<std::size_t>(n), static_cast<std::size_t>(b) - 1) =
            std::pow(params.eta(site), 2 * b - 1 - n);
    // Corner t(eta_site)/2: cancels the <t|t'> term exactly on the diagonal
    // (where the prefactor equals 1/t(eta_site) by the discrete system) and
    // multiplies <t|t'> = 0 off the diagonal.
    s(static_cast<std::size_t>(n), static_cast<std::size_t>(n)) =
        0.5 * t.node_values[static_cast<std::size_t>(site) - 1];
    // The factor 2 converts the half-Pauli matrix element to full-Pauli sigma^z.
    return -2.0 * ff_prefactor(params, t, t_prime, site) * lu_det(s);
}

namespace {

// tr_0(M_0 X_0) = A X11 + B X21 + C X12 + D X22.
Matrix aux_trace(const Monodromy& m, const SiteOperator& x) {
    Matrix out = x(0, 0) * m.a;
    out += x(1, 0) * m.b;
    out += x(0, 1) * m.c;
    out += x(1, 1) * m.d;
    return out;
}

Monodromy conj_y_transpose(const Monodromy& m) {
    // sigma^y M^{t_0} sigma^y = [[D, -B], [-C, A]].
    Monodromy out;
    out.a = m.d;
    out.b = cplx{-1.0} * m.b;
    out.c = cplx{-1.0} * m.c;
    out.d = m.a;
    return out;
}

Monodromy conj_z_transpose(const Monodromy& m) {
    // sigma^z M^{t_0} sigma^z = [[A, -C], [-B, D]].
    Monodromy out;
    out.a = m.a;
    out.b = cplx{-1.0} * m.c;
    out.c = cplx{-1.0} * m.b;
    out.d = m.d;
    return out;
}

cplx qdet_scalar(const ModelParams& params, cplx lambda) {
    return -eval_a(params, lambda) * eval_d(params, lambda / params.q());
}

Matrix antiperiodic_det_operator(const ModelParams& params, cplx eta_b) {
    return transfer_antiperiodic(params, eta_b) *
           transfer_antiperiodic(params, eta_b / params.q());
}

}  // namespace

Matrix reconstruct_local_operator(const ModelParams& params, const SiteOperator& x, int site,
                                  ReconstructionFlavor flavor) {
    check_ff_site(params, site);
    const std::size_t dim = params.dim();
    const cplx q = params.q();
    Matrix result = Matrix::identity(dim);

    const bool antiperiodic = flavor == ReconstructionFlavor::antiperiodic_1 ||
                              flavor == ReconstructionFlavor::antiperiodic_2;
    const bool first_kind = flavor == ReconstructionFlavor::antiperiodic_1 ||
                            flavor == ReconstructionFlavor::periodic_1;

    auto transfer = [&](cplx lambda) {
        return antiperiodic ? transfer_antiperiodic(params, lambda)
                            : transfer_periodic(params, lambda);
    };

    const int lead = first_kind ? site - 1 : site;
    for (int b = 1; b <= lead; ++b) result = result * transfer(params.eta(b));

    if (first_kind) {
        // tr_0(M_0(eta_n) X_0) with X conjugated by sigma^x in the
        // antiperiodic case.
        SiteOperator xx = antiperiodic ? x * pauli_matrix(PauliKind::x) : x;
        result = result * aux_trace(monodromy(params, params.eta(site)), xx);
    } else {
        Monodromy m = monodromy(params, params.eta(site) / q);
        SiteOperator xx = antiperiodic ? x * pauli_matrix(PauliKind::x) : x;
        Matrix tr = antiperiodic ? aux_trace(conj_z_transpose(m), xx)
                                 : aux_trace(conj_y_transpose(m), xx);
        tr *= 1.0 / qdet_scalar(params, params.eta(site));
        result = result * tr;
    }

    const int trail = first_kind ? site : site - 1;
    for (int b = 1; b <= trail; ++b) {
        result = result * transfer(params.eta(b) / q);
        if (antiperiodic) {
            try {
                result = lu_solve_right(antiperiodic_det_operator(params, params.eta(b)), result);
            } catch (const SingularMatrixError& e) {
                throw SingularMatrixError("reconstruct_local_operator: det Mbar(eta_" +
                                              std::to_string(b) + ") singular: " + e.what(),
                                          e.pivot_index);
            }
        } else {
            result *= 1.0 / qdet_scalar(params, params.eta(b));
        }
    }
    return result;
}

Matrix sigma_x_string_transfer(const ModelParams& params, int c, int form) {
    if (c < 1 || c > params.n_sites() + 1)
        throw std::invalid_argument("sigma_x_string_transfer: c out of range");
    const std::size_t dim = params.dim();
    const cplx q = params.q();
    Matrix result = Matrix::identity(dim);
    if (form == 0) {
        for (int b = 1; b < c; ++b) result = result * transfer_antiperiodic(params, params.eta(b));
        for (int b = 1; b < c; ++b) {
            result = result * transfer_periodic(params, params.eta(b) / q);
            result *= 1.0 / qdet_scalar(params, params.eta(b));
        }
        return result;
    }
    for (int b = 1; b < c; ++b) {
        result = result * transfer_periodic(params, params.eta(b));
        result = lu_solve_right(antiperiodic_det_operator(params, params.eta(b)), result);
    }
    for (int b = 1; b < c; ++b)
        result = result * transfer_antiperiodic(params, params.eta(b) / q);
    return result;
}

EigenstateNorm eigenstate_norm_and_alpha(const ModelParams& params, const EigenPair& pair,
                                         const TransferEigenvalue& t) {
    QRatios qr = q_ratios(params, t);
    SeparateState left = SeparateState::from_q_ratios(qr, Side::left);
    SeparateState right = SeparateState::from_q_ratios(qr, Side::right);
    EigenstateNorm out;
    out.bracket = scalar_product(params, left, right);
    out.hilbert_norm_sq = inner(pair.right_state, pair.right_state);
    const double scale = norm2(pair.right_state) * norm2(pair.left_state);
    if (std::abs(out.bracket) < 1e-13 * std::max(scale, 1.0))
        throw ConvergenceError("eigenstate_norm_and_alpha: degenerate normalization <t|t> ~ 0");
    out.alpha = out.hilbert_norm_sq / out.bracket;
    return out;
}

cplx m_point_function(const ModelParams& params, const std::vector<EigenPair>& spectrum,
                      std::size_t t_index, const std::vector<LocalOp>& ops) {
    if (spectrum.size() != params.dim())
        throw std::invalid_argument("m_point_function: need the complete spectrum");
    if (ops.empty()) throw std::invalid_argument("m_point_function: empty operator list");
    const std::size_t dim = spectrum.size();

    std::vector<cplx> bracket(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        QRatios qr = q_ratios(params, spectrum[i].value);
        bracket[i] = scalar_product(params, SeparateState::from_q_ratios(qr, Side::left),
                                    SeparateState::from_q_ratios(qr, Side::right));
    }

    auto ff = [&](const LocalOp& op, std::size_t i, std::size_t j) {
        switch (op.kind) {
            case PauliKind::minus:
                return form_factor_sigma_minus(params, spectrum[i].value, spectrum[j].value,
                                               op.site);
            case PauliKind::z:
                return form_factor_sigma_z(params, spectrum[i].value, spectrum[j].value, op.site);
            default:
                throw std::invalid_argument(
                    "m_point_function: only sigma^- and sigma^z have closed form factors");
        }
    };

    // F_1 diag(1/bracket) F_2 ... diag(1/bracket) F_m, row t_index contracted
    // back onto t_index and normalized by <t|t>.
    Vector row(dim);
    for (std::size_t j = 0; j < dim; ++j) row[j] = ff(ops[0], t_index, j);
    for (std::size_t k = 1; k < ops.size(); ++k) {
        Vector next(dim, cplx{});
        for (std::size_t j = 0; j < dim; ++j) {
            const cplx w = row[j] / bracket[j];
            if (w == cplx{}) continue;
            for (std::size_t l = 0; l < dim; ++l) next[l] += w * ff(ops[k], j, l);
        }
        row = std::move(next);
    }
    return row[t_index] / bracket[t_index];
}

}  // namespace xxzsov
