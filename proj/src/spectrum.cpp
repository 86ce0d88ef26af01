#include "xxzsov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "xxzsov/oracle.hpp"

namespace xxzsov {

namespace {

cplx int_pow(cplx x, int e) {
    if (e == 0) return 1.0;
    cplx base = e > 0 ? x : 1.0 / x;
    int n = std::abs(e);
    cplx r = 1.0;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

}  // namespace

cplx TransferEigenvalue::eval(const ModelParams& params, cplx lambda) const {
    const int n = params.n_sites();
    cplx s = 0.0;
    for (int b = 1; b <= n; ++b)
        s += coeffs[static_cast<std::size_t>(b) - 1] * int_pow(lambda, -n - 1 + 2 * b);
    return s;
}

TransferEigenvalue TransferEigenvalue::from_coeffs(const ModelParams& params,
                                                   std::vector<cplx> c) {
    TransferEigenvalue t;
    t.coeffs = std::move(c);
    const int n = params.n_sites();
    t.node_values.resize(static_cast<std::size_t>(n));
    t.node_values_q.resize(static_cast<std::size_t>(n));
    for (int a = 1; a <= n; ++a) {
        t.node_values[static_cast<std::size_t>(a) - 1] = t.eval(params, params.eta(a));
        t.node_values_q[static_cast<std::size_t>(a) - 1] =
            t.eval(params, params.eta(a) / params.q());
    }
    const double scale = discrete_system_scale(params);
    double worst = 0.0;
    auto res = discrete_system_residual(params, t);
    for (const auto& r : res) worst = std::max(worst, std::abs(r));
    t.residual = worst / scale;
    return t;
}

std::string TransferEigenvalue::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double x) {
        // round to 9 significant digits so refinement noise does not move the id
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9e", x);
        for (const char* p = buf; *p; ++p) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*p));
            h *= 1099511628211ULL;
        }
    };
    for (const auto& v : node_values) {
        mix(v.real());
        mix(v.imag());
    }
    char out[24];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

bool eigenvalue_order(const TransferEigenvalue& x, const TransferEigenvalue& y) {
    for (std::size_t k = 0; k < x.node_values.size(); ++k) {
        const cplx a = x.node_values[k], b = y.node_values[k];
        if (a.real() != b.real()) return a.real() < b.real();
        if (a.imag() != b.imag()) return a.imag() < b.imag();
    }
    return false;
}

std::vector<cplx> discrete_system_residual(const ModelParams& params,
                                           const TransferEigenvalue& t) {
    const int n = params.n_sites();
    std::vector<cplx> res(static_cast<std::size_t>(n));
    for (int a = 1; a <= n; ++a) {
        const cplx eta = params.eta(a);
        res[static_cast<std::size_t>(a) - 1] =
            t.eval(params, eta) * t.eval(params, eta / params.q()) -
            eval_a(params, eta) * eval_d(params, eta / params.q());
    }
    return res;
}

double discrete_system_scale(const ModelParams& params) {
    double s = 0.0;
    for (int a = 1; a <= params.n_sites(); ++a)
        s = std::max(s, std::abs(eval_a(params, params.eta(a)) *
                                 eval_d(params, params.eta(a) / params.q())));
    return std::max(s, 1e-300);
}

namespace {

std::vector<cplx> interpolation_nodes(const ModelParams& params) {
    std::vector<cplx> nodes;
    nodes.reserve(static_cast<std::size_t>(params.n_sites()));
    for (int a = 1; a <= params.n_sites(); ++a) nodes.push_back(params.eta(a));
    return nodes;
}

}  // namespace

std::vector<TransferEigenvalue> solve_spectrum_oracle(const ModelParams& params, Rng& rng,
                                                      int max_retries, bool newton_polish) {
    SovCheck check = validate_sov_condition(params);
    if (!check.ok) throw SovConditionError("solve_spectrum_oracle: SOV condition violated");
    const int n = params.n_sites();
    const std::size_t dim = params.dim();

    // Tbar at the nodes, reused by the Rayleigh quotients of all eigenvectors.
    std::vector<Matrix> t_eta(static_cast<std::size_t>(n)), t_eta_q(static_cast<std::size_t>(n));
    for (int a = 1; a <= n; ++a) {
        t_eta[static_cast<std::size_t>(a) - 1] = transfer_antiperiodic(params, params.eta(a));
        t_eta_q[static_cast<std::size_t>(a) - 1] =
            transfer_antiperiodic(params, params.eta(a) / params.q());
    }
    const std::vector<int> exponents = transfer_exponents(n);
    const std::vector<cplx> nodes = interpolation_nodes(params);

    std::string last_error = "no attempt";
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        cplx lambda0 = random_annulus(rng, 0.5, 2.0);
        bool near_node = false;
        for (const auto& e : params.inhomogeneities()) {
            if (std::abs(lambda0 - e) < 1e-2 * std::abs(e)) near_node = true;
            if (std::abs(lambda0 - e / params.q()) < 1e-2 * std::abs(e / params.q()))
                near_node = true;
        }
        if (near_node) { --attempt; continue; }

        EigenDecomposition ed;
        try {
            ed = eig(transfer_antiperiodic(params, lambda0));
        } catch (const ConvergenceError& e) {
            last_error = e.what();
            continue;
        }
        // Degenerate spectrum at lambda0: retry elsewhere.
        bool degenerate = false;
        const double sep_tol = 1e-8 * (1.0 + std::abs(ed.values.back()));
        for (std::size_t i = 0; i + 1 < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                if (std::abs(ed.values[i] - ed.values[j]) < sep_tol) degenerate = true;
        if (degenerate || ed.backward_error > 1e-8) {
            last_error = degenerate ? "degenerate spectrum at lambda0" : "poor backward error";
            continue;
        }

        std::vector<TransferEigenvalue> out(dim);
        bool consistent = true;
        for (std::size_t k = 0; k < dim; ++k) {
            Vector v(dim);
            for (std::size_t i = 0; i < dim; ++i) v[i] = ed.vectors(i, k);
            const cplx vv = inner(v, v);
            std::vector<cplx> tn(static_cast<std::size_t>(n)), tnq(static_cast<std::size_t>(n));
            for (int a = 1; a <= n; ++a) {
                tn[static_cast<std::size_t>(a) - 1] =
                    inner(v, t_eta[static_cast<std::size_t>(a) - 1] * v) / vv;
                tnq[static_cast<std::size_t>(a) - 1] =
                    inner(v, t_eta_q[static_cast<std::size_t>(a) - 1] * v) / vv;
            }
            LaurentPoly p = laurent_interpolate(nodes, tn, exponents);
            std::vector<cplx> coeffs(static_cast<std::size_t>(n));
            for (int b = 1; b <= n; ++b)
                coeffs[static_cast<std::size_t>(b) - 1] = p.coeff(-n - 1 + 2 * b);
            TransferEigenvalue t = TransferEigenvalue::from_coeffs(params, std::move(coeffs));
            // Shared-eigenvector consistency: the interpolation from t(eta_a)
            // must reproduce the independently measured t(eta_a/q).
            double tq_scale = 0.0;
            for (const auto& x : tnq) tq_scale = std::max(tq_scale, std::abs(x));
            for (int a = 1; a <= n; ++a) {
                const double gap = std::abs(t.node_values_q[static_cast<std::size_t>(a) - 1] -
                                            tnq[static_cast<std::size_t>(a) - 1]);
                if (gap > 1e-6 * std::max(tq_scale, 1.0)) consistent = false;
            }
            out[k] = std::move(t);
        }
        if (!consistent) {
            last_error = "node-value consistency check failed";
            continue;
        }
        if (newton_polish)
            for (auto& t : out) t = refine_newton(params, t);

        std::sort(out.begin(), out.end(), eigenvalue_order);
        // Simple spectrum: the discrete system has exactly 2^N solutions and
        // they must all be distinct.
        double cmax = 0.0;
        for (const auto& t : out)
            for (const auto& c : t.coeffs) cmax = std::max(cmax, std::abs(c));
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < dim; ++i) {
            double gap = 0.0;
            for (std::size_t b = 0; b < out[i].coeffs.size(); ++b)
                gap = std::max(gap, std::abs(out[i].coeffs[b] - out[i + 1].coeffs[b]));
            if (gap < 1e-8 * std::max(cmax, 1.0)) distinct = false;
        }
        if (!distinct) {
            last_error = "coincident eigenvalue coefficients";
            continue;
        }
        return out;
    }
    throw ConvergenceError("solve_spectrum_oracle: failed after retries: " + last_error);
}

TransferEigenvalue refine_newton(const ModelParams& params, const TransferEigenvalue& t0,
                                 double tol, int max_iter) {
    const int n = params.n_sites();
    const double scale = discrete_system_scale(params);
    std::vector<cplx> c = t0.coeffs;
    std::vector<cplx> rhs_a(static_cast<std::size_t>(n));
    for (int a = 1; a <= n; ++a)
        rhs_a[static_cast<std::size_t>(a) - 1] =
            eval_a(params, params.eta(a)) * eval_d(params, params.eta(a) / params.q());

    for (int iter = 0; iter < max_iter; ++iter) {
        TransferEigenvalue cur = TransferEigenvalue::from_coeffs(params, c);
        double worst = 0.0;
        Vector f(static_cast<std::size_t>(n));
        for (int a = 1; a <= n; ++a) {
            f[static_cast<std::size_t>(a) - 1] =
                cur.node_values[static_cast<std::size_t>(a) - 1] *
                    cur.node_values_q[static_cast<std::size_t>(a) - 1] -
                rhs_a[static_cast<std::size_t>(a) - 1];
            worst = std::max(worst, std::abs(f[static_cast<std::size_t>(a) - 1]));
        }
        if (worst / scale < tol) return cur;
        Matrix jac(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (int a = 1; a <= n; ++a) {
            const cplx eta = params.eta(a);
            const cplx etaq = eta / params.q();
            for (int b = 1; b <= n; ++b) {
                const int e = -n - 1 + 2 * b;
                jac(static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1) =
                    int_pow(eta, e) * cur.node_values_q[static_cast<std::size_t>(a) - 1] +
                    int_pow(etaq, e) * cur.node_values[static_cast<std::size_t>(a) - 1];
            }
        }
        Vector delta;
        try {
            delta = lu_solve(jac, f);
        } catch (const SingularMatrixError&) {
            throw ConvergenceError("refine_newton: singular Jacobian");
        }
        for (int b = 0; b < n; ++b) c[static_cast<std::size_t>(b)] -= delta[static_cast<std::size_t>(b)];
    }
    throw ConvergenceError("refine_newton: no convergence after max iterations");
}

std::vector<TransferEigenvalue> solve_spectrum_newton_multistart(const ModelParams& params,
                                                                 Rng& rng, int n_starts) {
    const int n = params.n_sites();
    const double scale = std::sqrt(discrete_system_scale(params));
    std::vector<TransferEigenvalue> found;
    for (int s = 0; s < n_starts; ++s) {
        std::vector<cplx> c(static_cast<std::size_t>(n));
        for (auto& x : c) x = scale * random_box(rng, 1.5);
        TransferEigenvalue start;
        start.coeffs = std::move(c);
        try {
            TransferEigenvalue t =
                refine_newton(params, TransferEigenvalue::from_coeffs(params, start.coeffs));
            bool dup = false;
            for (const auto& g : found) {
                double gap = 0.0;
                for (std::size_t b = 0; b < g.coeffs.size(); ++b)
                    gap = std::max(gap, std::abs(g.coeffs[b] - t.coeffs[b]));
                if (gap < 1e-6 * (1.0 + scale)) dup = true;
            }
            if (!dup) found.push_back(std::move(t));
        } catch (const ConvergenceError&) {
        }
    }
    std::sort(found.begin(), found.end(), eigenvalue_order);
    return found;
}

QRatios q_ratios(const ModelParams& params, const TransferEigenvalue& t) {
    const int n = params.n_sites();
    QRatios qr;
    qr.q_at_node.assign(static_cast<std::size_t>(n), cplx{1.0});
    qr.qbar_at_node.assign(static_cast<std::size_t>(n), cplx{1.0});
    qr.q_at_node_q.resize(static_cast<std::size_t>(n));
    qr.qbar_at_node_q.resize(static_cast<std::size_t>(n));
    for (int a = 1; a <= n; ++a) {
        const cplx dv = eval_d(params, params.eta(a) / params.q());
        const cplx av = eval_a(params, params.eta(a));
        if (dv == cplx{} || av == cplx{})
            throw std::logic_error("q_ratios: vanishing a(eta_a) or d(eta_a/q) (E-SOV violated)");
        const cplx tn = t.node_values[static_cast<std::size_t>(a) - 1];
        qr.q_at_node_q[static_cast<std::size_t>(a) - 1] = tn / dv;
        qr.qbar_at_node_q[static_cast<std::size_t>(a) - 1] = tn / av;
    }
    return qr;
}

Vector assemble_eigenstate(const ModelParams& params, const SovBasis& basis, const QRatios& qr,
                           Side side) {
    if (basis.variable != SovVariable::D || basis.side != side)
        throw std::invalid_argument("assemble_eigenstate: need the D-basis of the matching side");
    const std::size_t dim = params.dim();
    Vector out(dim, cplx{});
    for (std::size_t j = 1; j <= dim; ++j) {
        cplx coeff = sov_vandermonde(params, j);
        for (int a = 1; a <= params.n_sites(); ++a) {
            const int ha = h_bit(j, a);
            const cplx x = params.eta(a) * std::pow(params.q(), -ha);
            const cplx qv = (side == Side::right) ? qr.q(a, ha) : qr.qbar(a, ha);
            coeff *= qv / omega(params, x);
        }
        const Vector& s = basis.state(j);
        for (std::size_t i = 0; i < dim; ++i) out[i] += coeff * s[i];
    }
    return out;
}

EigenPair build_eigenstate(const ModelParams& params, const SovBasis& left_basis,
                           const SovBasis& right_basis, const TransferEigenvalue& t, Rng& rng,
                           int n_samples, double tol) {
    QRatios qr = q_ratios(params, t);
    EigenPair pair;
    pair.value = t;
    pair.right_state = assemble_eigenstate(params, right_basis, qr, Side::right);
    pair.left_state = assemble_eigenstate(params, left_basis, qr, Side::left);
    double worst = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        const cplx lambda = random_annulus(rng, 0.5, 2.0);
        Matrix tb = transfer_antiperiodic(params, lambda);
        const cplx tv = t.eval(params, lambda);
        Vector r = tb * pair.right_state - tv * pair.right_state;
        worst = std::max(worst, norm2(r) / norm2(pair.right_state));
        Vector l = apply_covector(pair.left_state, tb) - tv * pair.left_state;
        worst = std::max(worst, norm2(l) / norm2(pair.left_state));
    }
    pair.verify_residual = worst;
    pair.verified = worst < tol;
    return pair;
}

TqReport tq_polynomial_check(const ModelParams& params, const TransferEigenvalue& t, Rng& rng,
                             int n_sample_points) {
    const int n = params.n_sites();
    if (n % 2 != 0)
        throw std::invalid_argument(
            "tq_polynomial_check: restricted to even N (lambda^(-N/2) branch unresolved for odd N)");
    if (n_sample_points <= 0) n_sample_points = 2 * n + 4;
    const cplx q = params.q();

    auto row_at = [&](cplx lambda, Matrix& g, std::size_t row) {
        const cplx tv = t.eval(params, lambda);
        const cplx av = eval_a(params, lambda);
        const cplx dv = eval_d(params, lambda);
        for (int j = 0; j <= n; ++j) {
            const int e = j - n / 2;
            g(row, static_cast<std::size_t>(j)) = tv * int_pow(lambda, e) -
                                                  av * int_pow(lambda / q, e) -
                                                  dv * int_pow(lambda * q, e);
        }
    };

    Matrix g(static_cast<std::size_t>(n_sample_points), static_cast<std::size_t>(n + 1));
    for (int s = 0; s < n_sample_points; ++s)
        row_at(random_annulus(rng, 0.5, 2.0), g, static_cast<std::size_t>(s));

    TqReport rep;
    NullspaceResult ns = nullspace(g, 1e-9);
    rep.nullspace_dim = static_cast<int>(ns.basis.size());
    if (rep.nullspace_dim != 1) return rep;  // degenerate report, recorded not thrown
    rep.q_coeffs = ns.basis.front();

    auto q_eval = [&](cplx lambda) {
        cplx s = 0.0;
        for (int j = 0; j <= n; ++j)
            s += rep.q_coeffs[static_cast<std::size_t>(j)] * int_pow(lambda, j - n / 2);
        return s;
    };

    // Residual on fresh sample points, relative to the largest term.
    double worst = 0.0;
    for (int s = 0; s < n_sample_points; ++s) {
        const cplx lambda = random_annulus(rng, 0.6, 1.8);
        const cplx lhs = t.eval(params, lambda) * q_eval(lambda);
        const cplx r1 = eval_a(params, lambda) * q_eval(lambda / q);
        const cplx r2 = eval_d(params, lambda) * q_eval(lambda * q);
        const double scale = std::max({std::abs(lhs), std::abs(r1), std::abs(r2), 1e-300});
        worst = std::max(worst, std::abs(lhs - r1 - r2) / scale);
    }
    rep.tq_residual = worst;

    // Roots of lambda^(N/2) q(lambda) via the companion matrix.
    std::vector<cplx> poly(rep.q_coeffs.begin(), rep.q_coeffs.end());  // degree n
    while (poly.size() > 1 && std::abs(poly.back()) < 1e-14 * max_abs(rep.q_coeffs))
        poly.pop_back();
    const std::size_t deg = poly.size() - 1;
    if (deg >= 1) {
        Matrix comp(deg, deg);
        for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -poly[i] / poly[deg];
        EigenDecomposition ed = eig(comp);
        rep.bethe_roots = ed.values;
    }

    // Bethe-equation residuals; roots colliding with each other or with the
    // +-eta poles are flagged and skipped.
    const std::size_t m = rep.bethe_roots.size();
    rep.bethe_residuals.assign(m, 0.0);
    rep.root_colliding.assign(m, false);
    double rmax = 1e-12;
    for (const auto& r : rep.bethe_roots) rmax = std::max(rmax, std::abs(r));
    for (std::size_t k = 0; k < m; ++k) {
        const cplx lk = rep.bethe_roots[k];
        bool collide = std::abs(lk) < 1e-6 * rmax;
        for (std::size_t a = 0; a < m; ++a)
            if (a != k && std::abs(lk - rep.bethe_roots[a]) < 1e-4 * rmax) collide = true;
        for (const auto& e : params.inhomogeneities()) {
            if (std::abs(lk * lk - e * e) < 1e-6 * std::abs(e * e)) collide = true;
            if (std::abs(lk - lk / q) < 1e-12) collide = true;
        }
        rep.root_colliding[k] = collide;
        if (collide) continue;
        cplx lhs = 1.0;
        for (const auto& e : params.inhomogeneities())
            lhs *= (q * q * lk * lk - e * e) / (lk * lk - e * e);
        cplx rhs = -1.0;
        for (std::size_t a = 0; a < m; ++a)
            rhs *= (q * lk - rep.bethe_roots[a]) / (lk / q - rep.bethe_roots[a]);
        rep.bethe_residuals[k] = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    }
    return rep;
}

std::optional<int> root_of_unity_order(cplx q, int max_p, double tol) {
    for (int p = 2; p <= max_p; ++p)
        if (std::abs(int_pow(q, p) - 1.0) < tol) return p;
    return std::nullopt;
}

cplx root_of_unity_q(int p, int p_prime) {
    return std::polar(1.0, 2.0 * kPi * p_prime / p);
}

Matrix root_of_unity_matrix(const ModelParams& params, const TransferEigenvalue& t, cplx lambda,
                            int p) {
    if (p < 2) throw std::invalid_argument("root_of_unity_matrix: p must be >= 2");
    Matrix d(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        const cplx li = int_pow(params.q(), i) * lambda;
        const std::size_t row = static_cast<std::size_t>(i);
        d(row, row) = t.eval(params, li);
        d(row, static_cast<std::size_t>((i + 1) % p)) = -eval_d(params, li);
        d(row, static_cast<std::size_t>((i + p - 1) % p)) = -eval_a(params, li);
    }
    return d;
}

RootOfUnityReport root_of_unity_check(const ModelParams& params, const TransferEigenvalue& t,
                                      const std::vector<cplx>& samples) {
    auto p = root_of_unity_order(params.q());
    if (!p) throw std::invalid_argument("root_of_unity_check: q is not a root of unity");
    RootOfUnityReport rep;
    rep.p = *p;
    for (const auto& big_lambda : samples) {
        const cplx lambda = std::exp(std::log(big_lambda) / static_cast<double>(*p));
        Matrix d = root_of_unity_matrix(params, t, lambda, *p);
        double hadamard = 1.0;
        for (int i = 0; i < *p; ++i) {
            double row = 0.0;
            for (int j = 0; j < *p; ++j)
                row += std::norm(d(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            hadamard *= std::sqrt(row);
        }
        rep.scale = std::max(rep.scale, hadamard);
        cplx det;
        try {
            det = lu_det(d);
        } catch (const SingularMatrixError&) {
            det = 0.0;  // structurally singular: the functional equation holds exactly
        }
        rep.max_abs_det = std::max(rep.max_abs_det, std::abs(det));
    }
    return rep;
}

}  // namespace xxzsov
