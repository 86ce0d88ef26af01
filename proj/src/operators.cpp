#include "xxzsov/operators.hpp"

#include <cmath>

#include "xxzsov/oracle.hpp"

namespace xxzsov {

SiteOperator operator*(const SiteOperator& x, const SiteOperator& y) {
    SiteOperator out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c);
    return out;
}

SiteOperator operator*(cplx s, SiteOperator x) {
    for (auto& v : x.m) v *= s;
    return x;
}

SiteOperator operator+(SiteOperator x, const SiteOperator& y) {
    for (std::size_t k = 0; k < 4; ++k) x.m[k] += y.m[k];
    return x;
}

SiteOperator operator-(SiteOperator x, const SiteOperator& y) {
    for (std::size_t k = 0; k < 4; ++k) x.m[k] -= y.m[k];
    return x;
}

SiteOperator pauli_matrix(PauliKind kind) {
    SiteOperator s;
    const cplx i{0.0, 1.0};
    switch (kind) {
        case PauliKind::x: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
        case PauliKind::y: s(0, 1) = -i; s(1, 0) = i; break;
        case PauliKind::z: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
        case PauliKind::plus: s(0, 1) = 1.0; break;
        case PauliKind::minus: s(1, 0) = 1.0; break;
    }
    return s;
}

SiteOperator site_identity() {
    SiteOperator s;
    s(0, 0) = s(1, 1) = 1.0;
    return s;
}

namespace {

void check_site(int site, int n_sites) {
    if (site < 1 || site > n_sites)
        throw std::invalid_argument("site index " + std::to_string(site) + " out of range 1.." +
                                    std::to_string(n_sites));
}

}  // namespace

Matrix embed_site(const SiteOperator& op, int site, int n_sites) {
    check_site(site, n_sites);
    const std::size_t dim = std::size_t{1} << n_sites;
    const std::size_t bit = std::size_t{1} << (site - 1);
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const int bi = (i & bit) ? 1 : 0;
        m(i, i ^ bit) = op(bi, 1 - bi);
        m(i, i) = op(bi, bi);
    }
    return m;
}

Matrix pauli(PauliKind kind, int site, int n_sites) {
    return embed_site(pauli_matrix(kind), site, n_sites);
}

Matrix pauli(PauliKind kind, int site, const ModelParams& params) {
    return pauli(kind, site, params.n_sites());
}

Matrix apply_site_left(const SiteOperator& op, int site, const Matrix& m) {
    const std::size_t bit = std::size_t{1} << (site - 1);
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i & bit) continue;
        const std::size_t i1 = i | bit;
        const cplx* r0 = m.row_data(i);
        const cplx* r1 = m.row_data(i1);
        cplx* o0 = out.row_data(i);
        cplx* o1 = out.row_data(i1);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            o0[j] = op(0, 0) * r0[j] + op(0, 1) * r1[j];
            o1[j] = op(1, 0) * r0[j] + op(1, 1) * r1[j];
        }
    }
    return out;
}

Matrix apply_site_right(const Matrix& m, const SiteOperator& op, int site) {
    const std::size_t bit = std::size_t{1} << (site - 1);
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const cplx* r = m.row_data(i);
        cplx* o = out.row_data(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const int bj = (j & bit) ? 1 : 0;
            o[j] = r[j] * op(bj, bj) + r[j ^ bit] * op(1 - bj, bj);
        }
    }
    return out;
}

Vector apply_site(const SiteOperator& op, int site, const Vector& v) {
    const std::size_t bit = std::size_t{1} << (site - 1);
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int bi = (i & bit) ? 1 : 0;
        out[i] = op(bi, bi) * v[i] + op(bi, 1 - bi) * v[i ^ bit];
    }
    return out;
}

cplx x_plus(cplx q, cplx lambda) {
    return 0.5 * (lambda * q - 1.0 / (q * lambda) + lambda - 1.0 / lambda);
}

cplx x_minus(cplx q, cplx lambda) {
    return 0.5 * (lambda * q - 1.0 / (q * lambda) - lambda + 1.0 / lambda);
}

LaxBlocks lax(const ModelParams& params, int site, cplx lambda) {
    check_site(site, params.n_sites());
    if (lambda == cplx{}) throw std::domain_error("lax: lambda must be nonzero");
    const cplx q = params.q();
    const cplx xp = x_plus(q, lambda);
    const cplx xm = x_minus(q, lambda);
    const cplx gamma = q - 1.0 / q;
    LaxBlocks l;
    l.a(0, 0) = xp + xm;  // A = x_+ + x_- sigma^z = diag(alpha, beta)
    l.a(1, 1) = xp - xm;
    l.b = gamma * pauli_matrix(PauliKind::minus);
    l.c = gamma * pauli_matrix(PauliKind::plus);
    l.d(0, 0) = xp - xm;  // D = x_+ - x_- sigma^z = diag(beta, alpha)
    l.d(1, 1) = xp + xm;
    return l;
}

Matrix lax_matrix(const ModelParams& params, cplx lambda) {
    const LaxBlocks l = lax(params, 1, lambda);
    const SiteOperator* blocks[2][2] = {{&l.a, &l.b}, {&l.c, &l.d}};
    Matrix m(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 2; ++t)
                    m(static_cast<std::size_t>(2 * i + s), static_cast<std::size_t>(2 * j + t)) =
                        (*blocks[i][j])(s, t);
    return m;
}

Matrix r_matrix(cplx q, cplx lambda) {
    if (lambda == cplx{}) throw std::domain_error("r_matrix: lambda must be nonzero");
    const cplx alpha = lambda * q - 1.0 / (q * lambda);
    const cplx beta = lambda - 1.0 / lambda;
    const cplx gamma = q - 1.0 / q;
    Matrix r(4, 4);
    r(0, 0) = alpha;
    r(1, 1) = beta;
    r(1, 2) = gamma;
    r(2, 1) = gamma;
    r(2, 2) = beta;
    r(3, 3) = alpha;
    return r;
}

Matrix r_matrix(const ModelParams& params, cplx lambda) { return r_matrix(params.q(), lambda); }

Monodromy monodromy(const ModelParams& params, cplx lambda) {
    if (lambda == cplx{}) throw std::domain_error("monodromy: lambda must be nonzero");
    const int n = params.n_sites();
    LaxBlocks l1 = lax(params, 1, lambda / params.eta(1));
    Monodromy m;
    m.a = embed_site(l1.a, 1, n);
    m.b = embed_site(l1.b, 1, n);
    m.c = embed_site(l1.c, 1, n);
    m.d = embed_site(l1.d, 1, n);
    for (int site = 2; site <= n; ++site) {
        LaxBlocks l = lax(params, site, lambda / params.eta(site));
        Matrix a = apply_site_left(l.a, site, m.a) + apply_site_left(l.b, site, m.c);
        Matrix b = apply_site_left(l.a, site, m.b) + apply_site_left(l.b, site, m.d);
        Matrix c = apply_site_left(l.c, site, m.a) + apply_site_left(l.d, site, m.c);
        Matrix d = apply_site_left(l.c, site, m.b) + apply_site_left(l.d, site, m.d);
        m.a = std::move(a);
        m.b = std::move(b);
        m.c = std::move(c);
        m.d = std::move(d);
    }
    return m;
}

Matrix transfer_general(const ModelParams& params, cplx lambda, cplx alpha, int b) {
    if (b != 0 && b != 1) throw std::invalid_argument("transfer_general: b must be 0 or 1");
    Monodromy m = monodromy(params, lambda);
    const cplx ep = std::exp(alpha);
    const cplx em = std::exp(-alpha);
    // Sigma = (sigma^x)^b diag(e^a, e^-a): tr_0 weights (A,D) for b=0 and
    // (C,B) by (e^-a, e^+a) for b=1.
    if (b == 0) return ep * m.a + em * m.d;
    return em * m.c + ep * m.b;
}

Matrix transfer_antiperiodic(const ModelParams& params, cplx lambda) {
    Monodromy m = monodromy(params, lambda);
    return m.b + m.c;
}

Matrix transfer_periodic(const ModelParams& params, cplx lambda) {
    Monodromy m = monodromy(params, lambda);
    return m.a + m.d;
}

QuantumDeterminant quantum_determinant(const ModelParams& params, cplx lambda) {
    if (lambda == cplx{}) throw std::domain_error("quantum_determinant: lambda must be nonzero");
    Monodromy m1 = monodromy(params, lambda);
    Monodromy m2 = monodromy(params, lambda / params.q());
    QuantumDeterminant qd;
    qd.op = m1.a * m2.d - m1.b * m2.c;
    qd.scalar = -eval_a(params, lambda) * eval_d(params, lambda / params.q());
    return qd;
}

AntiperiodicQuantumDeterminant antiperiodic_quantum_determinant(const ModelParams& params,
                                                                cplx lambda,
                                                                double node_rel_tol) {
    if (lambda == cplx{}) throw std::domain_error("antiperiodic_quantum_determinant: lambda must be nonzero");
    Monodromy m1 = monodromy(params, lambda);
    Monodromy m2 = monodromy(params, lambda / params.q());
    AntiperiodicQuantumDeterminant out;
    Matrix t1 = m1.b + m1.c;
    Matrix t2 = m2.b + m2.c;
    out.transfer_product = t1 * t2;
    out.block_form = m1.b * m2.c - m1.a * m2.d;
    for (const auto& e : params.inhomogeneities())
        if (std::abs(lambda - e) <= node_rel_tol * std::abs(e)) out.at_node = true;
    return out;
}

NormalityReport check_normality(const ModelParams& params, cplx lambda) {
    if (params.regime() == Regime::generic)
        throw std::invalid_argument("check_normality: unsupported for the generic regime");
    Matrix t = transfer_antiperiodic(params, lambda);
    Matrix td = t.adjoint();
    NormalityReport rep;
    const double nt = t.frobenius_norm();
    rep.normality_residual = (t * td - td * t).frobenius_norm() / (nt * nt);
    // Self-adjoint family: i Tbar in the massless regime, i^{e_N} Tbar in the
    // massive regime (e_N = 1 for N even, 0 for N odd).
    cplx phase{0.0, 1.0};
    if (params.regime() == Regime::massive && !params.parity_flag()) phase = 1.0;
    Matrix x = phase * t;
    rep.selfadjoint_residual = (x - x.adjoint()).frobenius_norm() / nt;
    return rep;
}

Matrix hamiltonian_direct(const ModelParams& params) {
    const int n = params.n_sites();
    if (n < 2) throw std::invalid_argument("hamiltonian_direct: N >= 2 required");
    const cplx q = params.q();
    const cplx cosh_eta = 0.5 * (q + 1.0 / q);
    const std::size_t dim = params.dim();
    Matrix h(dim, dim);
    const PauliKind kinds[3] = {PauliKind::x, PauliKind::y, PauliKind::z};
    const cplx weights[3] = {1.0, 1.0, cosh_eta};
    for (int site = 1; site <= n; ++site) {
        const int partner = site == n ? 1 : site + 1;
        for (int k = 0; k < 3; ++k) {
            // Antiperiodic closure flips the sign of the y and z couplings
            // across the boundary bond.
            cplx w = weights[k];
            if (site == n && kinds[k] != PauliKind::x) w = -w;
            Matrix term = apply_site_left(pauli_matrix(kinds[k]), site,
                                          embed_site(pauli_matrix(kinds[k]), partner, n));
            h += w * term;
        }
    }
    return h;
}

std::vector<int> transfer_exponents(int n_sites) {
    std::vector<int> e(static_cast<std::size_t>(n_sites));
    for (int k = 0; k < n_sites; ++k) e[static_cast<std::size_t>(k)] = -n_sites + 1 + 2 * k;
    return e;
}

Matrix MatrixLaurent::eval(cplx lambda) const {
    Matrix out(coeffs.front().rows(), coeffs.front().cols());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const cplx w = std::pow(lambda, exponents[k]);
        Matrix term = coeffs[k];
        term *= w;
        out += term;
    }
    return out;
}

MatrixLaurent MatrixLaurent::derivative() const {
    MatrixLaurent d;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (exponents[k] == 0) continue;
        d.exponents.push_back(exponents[k] - 1);
        Matrix c = coeffs[k];
        c *= cplx{static_cast<double>(exponents[k]), 0.0};
        d.coeffs.push_back(std::move(c));
    }
    if (d.coeffs.empty()) {
        d.exponents.push_back(0);
        d.coeffs.emplace_back(coeffs.front().rows(), coeffs.front().cols());
    }
    return d;
}

MatrixLaurent interpolate_matrix_laurent(const std::vector<cplx>& nodes,
                                         const std::vector<Matrix>& samples,
                                         const std::vector<int>& exponents) {
    const std::size_t n = nodes.size();
    if (samples.size() != n || exponents.size() != n)
        throw std::invalid_argument("interpolate_matrix_laurent: size mismatch");
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v(i, j) = std::pow(nodes[i], exponents[j]);
    LUFactorization lu = LUFactorization::factor(v);
    const std::size_t rows = samples.front().rows();
    const std::size_t cols = samples.front().cols();
    Matrix rhs(n, rows * cols);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) rhs(s, i * cols + j) = samples[s](i, j);
    Matrix sol = lu.solve(rhs);
    MatrixLaurent out;
    out.exponents = exponents;
    out.coeffs.assign(n, Matrix(rows, cols));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) out.coeffs[k](i, j) = sol(k, i * cols + j);
    return out;
}

Matrix hamiltonian_from_transfer(const ModelParams& params) {
    if (!params.homogeneous(1e-12))
        throw std::invalid_argument("hamiltonian_from_transfer: homogeneous parameters required");
    const int n = params.n_sites();
    if (n < 2) throw std::invalid_argument("hamiltonian_from_transfer: N >= 2 required");
    const cplx q = params.q();

    std::vector<cplx> nodes(static_cast<std::size_t>(n));
    std::vector<Matrix> samples(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        nodes[static_cast<std::size_t>(k)] = 0.6 + 1.0 * k / n;
        samples[static_cast<std::size_t>(k)] =
            transfer_antiperiodic(params, nodes[static_cast<std::size_t>(k)]);
    }
    MatrixLaurent tbar = interpolate_matrix_laurent(nodes, samples, transfer_exponents(n));
    Matrix t1 = tbar.eval(1.0);
    Matrix dt1 = tbar.derivative().eval(1.0);

    Matrix x;
    try {
        x = lu_solve(t1, dt1);
    } catch (const SingularMatrixError& e) {
        throw ConditioningError(std::string("hamiltonian_from_transfer: Tbar(1) singular (") +
                                    e.what() + ")",
                                std::numeric_limits<double>::infinity());
    }
    x *= q - 1.0 / q;
    Matrix shift = Matrix::identity(params.dim());
    shift *= -0.5 * static_cast<double>(n) * (q + 1.0 / q);
    return x + shift;
}

double calibrate_sign_a(const ModelParams& params, Rng& rng) {
    // The quantum-determinant operator identity is the ground truth:
    // A(l)D(l/q) - B(l)C(l/q) = -a(l) d(l/q) Id fixes the global sign of a.
    cplx lambda = random_annulus(rng, 0.7, 1.6);
    QuantumDeterminant qd = quantum_determinant(params, lambda);
    cplx scalar_emp = qd.op.trace() / static_cast<double>(params.dim());
    cplx p = 1.0;
    const cplx lq = lambda * params.q();
    for (const auto& e : params.inhomogeneities()) p *= lq / e - e / lq;
    const cplx ratio = -scalar_emp / (p * eval_d(params, lambda / params.q()));
    return ratio.real() >= 0.0 ? 1.0 : -1.0;
}

Matrix embed_r12(const Matrix& r, std::size_t dim) {
    Matrix out(4 * dim, 4 * dim);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const cplx v = r(i, j);
            if (v == cplx{}) continue;
            for (std::size_t k = 0; k < dim; ++k) out(i * dim + k, j * dim + k) = v;
        }
    return out;
}

Matrix embed_op1(const Matrix& op, std::size_t dim) {
    Matrix out(4 * dim, 4 * dim);
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t j1 = 0; j1 < 2; ++j1)
            for (std::size_t v = 0; v < dim; ++v)
                for (std::size_t w = 0; w < dim; ++w) {
                    const cplx x = op(i1 * dim + v, j1 * dim + w);
                    if (x == cplx{}) continue;
                    for (std::size_t a2 = 0; a2 < 2; ++a2)
                        out((i1 * 2 + a2) * dim + v, (j1 * 2 + a2) * dim + w) = x;
                }
    return out;
}

Matrix embed_op2(const Matrix& op, std::size_t dim) {
    Matrix out(4 * dim, 4 * dim);
    for (std::size_t i2 = 0; i2 < 2; ++i2)
        for (std::size_t j2 = 0; j2 < 2; ++j2)
            for (std::size_t v = 0; v < dim; ++v)
                for (std::size_t w = 0; w < dim; ++w) {
                    const cplx x = op(i2 * dim + v, j2 * dim + w);
                    if (x == cplx{}) continue;
                    for (std::size_t a1 = 0; a1 < 2; ++a1)
                        out((a1 * 2 + i2) * dim + v, (a1 * 2 + j2) * dim + w) = x;
                }
    return out;
}

Matrix monodromy_matrix(const Monodromy& m) {
    const std::size_t dim = m.a.rows();
    Matrix out(2 * dim, 2 * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            out(i, j) = m.a(i, j);
            out(i, dim + j) = m.b(i, j);
            out(dim + i, j) = m.c(i, j);
            out(dim + i, dim + j) = m.d(i, j);
        }
    return out;
}

}  // namespace xxzsov
