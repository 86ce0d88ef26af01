#include "xxzsov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xxzsov {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool lex_less(const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
}

}  // namespace

LUFactorization LUFactorization::factor(Matrix a, double pivot_rel_tol) {
    if (!a.square()) throw std::invalid_argument("LU: matrix must be square");
    const std::size_t n = a.rows();
    LUFactorization f;
    f.norm_a_ = a.one_norm();
    f.piv_.resize(n);
    const double floor = std::max(pivot_rel_tol * f.norm_a_,
                                  std::numeric_limits<double>::min());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best <= floor)
            throw SingularMatrixError("LU: pivot below threshold at column " + std::to_string(k), k);
        f.piv_[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            f.sign_ = -f.sign_;
        }
        const cplx pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx m = a(i, k) / pivot;
            a(i, k) = m;
            if (m == cplx{}) continue;
            const cplx* rk = a.row_data(k);
            cplx* ri = a.row_data(i);
            for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
        }
    }
    f.lu_ = std::move(a);
    return f;
}

cplx LUFactorization::det() const {
    cplx d = static_cast<double>(sign_);
    for (std::size_t i = 0; i < dim(); ++i) d *= lu_(i, i);
    return d;
}

double LUFactorization::min_pivot_abs() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dim(); ++i) m = std::min(m, std::abs(lu_(i, i)));
    return m;
}

Vector LUFactorization::solve(const Vector& b) const {
    const std::size_t n = dim();
    if (b.size() != n) throw std::invalid_argument("LU solve: dimension mismatch");
    Vector x = b;
    for (std::size_t k = 0; k < n; ++k) {
        if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
        for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

Matrix LUFactorization::solve(const Matrix& b) const {
    const std::size_t n = dim();
    if (b.rows() != n) throw std::invalid_argument("LU solve: dimension mismatch");
    Matrix x = b;
    for (std::size_t k = 0; k < n; ++k) {
        if (piv_[k] != k)
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv_[k], j));
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx m = lu_(i, k);
            if (m == cplx{}) continue;
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= m * x(k, j);
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) {
            const cplx m = lu_(ii, j);
            if (m == cplx{}) continue;
            for (std::size_t c = 0; c < x.cols(); ++c) x(ii, c) -= m * x(j, c);
        }
        const cplx pivot = lu_(ii, ii);
        for (std::size_t c = 0; c < x.cols(); ++c) x(ii, c) /= pivot;
    }
    return x;
}

Matrix LUFactorization::inverse() const { return solve(Matrix::identity(dim())); }

double LUFactorization::condition_estimate() const {
    return norm_a_ * inverse().one_norm();
}

cplx lu_det(const Matrix& a) { return LUFactorization::factor(a).det(); }

Vector lu_solve(const Matrix& a, const Vector& b) {
    return LUFactorization::factor(a).solve(b);
}

Matrix lu_solve(const Matrix& a, const Matrix& b) {
    return LUFactorization::factor(a).solve(b);
}

Matrix lu_solve_right(const Matrix& a, const Matrix& b) {
    return LUFactorization::factor(a.transpose()).solve(b.transpose()).transpose();
}

cplx pairing(const Vector& bra, const Vector& ket) {
    if (bra.size() != ket.size()) throw std::invalid_argument("pairing: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < bra.size(); ++i) s += bra[i] * ket[i];
    return s;
}

cplx matrix_element(const Vector& bra, const Matrix& a, const Vector& ket) {
    return pairing(bra, a * ket);
}

cplx inner(const Vector& v, const Vector& w) {
    if (v.size() != w.size()) throw std::invalid_argument("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * w[i];
    return s;
}

namespace {

// Householder reduction to upper Hessenberg; fills u with the accumulated
// unitary so that a_in = u * h * u^H.
void hessenberg(Matrix& h, Matrix& u) {
    const std::size_t n = h.rows();
    u = Matrix::identity(n);
    if (n < 3) return;
    Vector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colnorm += std::norm(h(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm <= 0.0) continue;
        const cplx x0 = h(k + 1, k);
        const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx{1.0};
        const cplx alpha = -phase * colnorm;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k);
            vnorm2 += std::norm(v[i]);
        }
        v[k + 1] -= alpha;
        vnorm2 += std::norm(v[k + 1]) - std::norm(h(k + 1, k));
        if (vnorm2 <= 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // h <- P h, P = I - beta v v^H acting on rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        // h <- h P on columns k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        // u <- u P
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += u(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) u(i, j) -= s * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
        h(k + 1, k) = alpha;
    }
}

struct Givens {
    cplx c;  // |c|^2 + |s|^2 = 1 with c real-ified by convention
    cplx s;
};

Givens make_givens(cplx a, cplx b) {
    const double scale = std::abs(a) + std::abs(b);
    if (scale == 0.0) return {cplx{1.0}, cplx{0.0}};
    const double r = scale * std::sqrt(std::norm(a / scale) + std::norm(b / scale));
    return {a / r, b / r};
}

// Eigenvalue of [[a,b],[c,d]] closest to d (Wilkinson shift).
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc);
    const cplx l2 = 0.5 * (tr - disc);
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

// Shifted QR with deflation on an upper Hessenberg matrix; returns the
// eigenvalues (diagonal of the triangularized matrix).
std::vector<cplx> qr_eigenvalues(Matrix h, std::size_t max_sweeps, bool& converged) {
    const std::size_t n = h.rows();
    std::vector<cplx> values(n);
    if (n == 0) { converged = true; return values; }
    if (n == 1) { converged = true; values[0] = h(0, 0); return values; }
    converged = true;

    std::size_t hi = n - 1;
    std::size_t iter = 0;
    std::size_t total_cap = max_sweeps * n + 100;
    std::size_t total = 0;
    while (true) {
        // Deflate negligible subdiagonals.
        for (std::size_t i = 0; i < hi; ++i) {
            const double small = kEps * (std::abs(h(i, i)) + std::abs(h(i + 1, i + 1)));
            if (std::abs(h(i + 1, i)) <= std::max(small, 1e-300)) h(i + 1, i) = 0.0;
        }
        while (hi > 0 && h(hi, hi - 1) == cplx{}) {
            values[hi] = h(hi, hi);
            --hi;
            iter = 0;
        }
        if (hi == 0) { values[0] = h(0, 0); break; }

        // Active block [lo..hi].
        std::size_t lo = hi;
        while (lo > 0 && h(lo, lo - 1) != cplx{}) --lo;

        if (hi - lo == 1) {
            // Solve the 2x2 block directly.
            const cplx a = h(lo, lo), b = h(lo, hi), c = h(hi, lo), d = h(hi, hi);
            const cplx tr = a + d;
            const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
            cplx l1 = 0.5 * (tr + disc);
            cplx l2 = 0.5 * (tr - disc);
            values[hi] = l1;
            values[lo] = l2;
            hi = (lo == 0) ? 0 : lo - 1;
            if (lo == 0) { values[0] = l2; break; }
            iter = 0;
            continue;
        }

        cplx shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        ++iter;
        ++total;
        if (total > total_cap) { converged = false; break; }
        if (iter % 12 == 0) {
            // Exceptional shift after stagnation.
            shift = h(hi, hi) + cplx{1.5, 0.75} * std::abs(h(hi, hi - 1));
        }

        // Implicit single-shift sweep via Givens rotations on [lo..hi].
        std::vector<Givens> rots(hi - lo);
        cplx x = h(lo, lo) - shift;
        cplx z = h(lo + 1, lo);
        for (std::size_t k = lo; k < hi; ++k) {
            Givens g = make_givens(x, z);
            rots[k - lo] = g;
            // Apply G^H to rows k, k+1.
            for (std::size_t j = (k == lo ? lo : k - 1); j < n; ++j) {
                const cplx t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = std::conj(g.c) * t1 + std::conj(g.s) * t2;
                h(k + 1, j) = -g.s * t1 + g.c * t2;
            }
            if (k + 1 < hi) {
                x = h(k + 1, k);
                z = h(k + 2, k);
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const Givens& g = rots[k - lo];
            const std::size_t top = std::min(k + 2, hi);
            for (std::size_t i = lo; i <= top; ++i) {
                const cplx t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = g.c * t1 + g.s * t2;
                h(i, k + 1) = -std::conj(g.s) * t1 + std::conj(g.c) * t2;
            }
            if (k > lo) h(k + 1, k - 1) = 0.0;
        }
    }
    return values;
}

// Inverse iteration for (h - lambda I) x = 0 on the unreduced Hessenberg
// matrix; partial-pivot elimination in O(n^2) per solve.
Vector hessenberg_inverse_iteration(const Matrix& h, cplx lambda, double norm_h, Rng& rng) {
    const std::size_t n = h.rows();
    Matrix m = h;
    const double pert = std::max(norm_h, 1.0) * kEps;
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= lambda;

    // Factor the Hessenberg shifted matrix once (row elimination with
    // partial pivoting between the two candidate rows).
    std::vector<std::size_t> piv(n);
    std::vector<cplx> mult(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        piv[k] = k;
        if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
            piv[k] = k + 1;
            for (std::size_t j = k; j < n; ++j) std::swap(m(k, j), m(k + 1, j));
        }
        if (std::abs(m(k, k)) < pert) m(k, k) = pert;
        const cplx mu = m(k + 1, k) / m(k, k);
        mult[k] = mu;
        m(k + 1, k) = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) m(k + 1, j) -= mu * m(k, j);
    }
    if (std::abs(m(n - 1, n - 1)) < pert) m(n - 1, n - 1) = pert;

    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector x(n);
    for (auto& xi : x) xi = cplx{u(rng), u(rng)};
    double nx = norm2(x);
    for (auto& xi : x) xi /= nx;

    for (int pass = 0; pass < 3; ++pass) {
        Vector b = x;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (piv[k] == k + 1) std::swap(b[k], b[k + 1]);
            b[k + 1] -= mult[k] * b[k];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t j = ii + 1; j < n; ++j) b[ii] -= m(ii, j) * b[j];
            b[ii] /= m(ii, ii);
        }
        const double nb = norm2(b);
        if (!(nb > 0.0) || !std::isfinite(nb)) break;
        for (auto& bi : b) bi /= nb;
        x = std::move(b);
        // 1/nb is the residual estimate of the previous iterate; converged
        // once the solve blows up to ~1/eps.
        if (nb > 0.1 / (kEps * std::max(norm_h, 1.0))) break;
    }
    return x;
}

}  // namespace

EigenDecomposition eig(const Matrix& a, std::size_t max_sweeps_per_eigenvalue) {
    if (!a.square()) throw std::invalid_argument("eig: matrix must be square");
    const std::size_t n = a.rows();
    EigenDecomposition out;
    out.vectors = Matrix(n, n);
    if (n == 0) return out;

    Matrix h = a;
    Matrix u;
    hessenberg(h, u);
    Matrix h0 = h;  // keep the unreduced Hessenberg form for inverse iteration

    bool converged = true;
    std::vector<cplx> values = qr_eigenvalues(h, max_sweeps_per_eigenvalue, converged);
    out.converged = converged;
    if (!converged)
        throw ConvergenceError("eig: QR iteration did not converge");

    std::sort(values.begin(), values.end(), lex_less);
    out.values = values;

    const double norm_h = h0.frobenius_norm();
    const double norm_a = a.frobenius_norm();
    Rng rng = make_rng(0x5eedf00d);  // fixed internal seed: deterministic output
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cplx lambda = values[j];
        // Tiny shift separation when an identical eigenvalue was already
        // processed, so inverse iteration can find an independent vector.
        double sep = norm_h * 64.0 * kEps;
        for (std::size_t k = 0; k < j; ++k)
            if (std::abs(values[k] - lambda) <= sep) lambda += cplx{sep, sep};

        Vector best;
        double best_err = std::numeric_limits<double>::infinity();
        for (int attempt = 0; attempt < 4; ++attempt) {
            Vector x = hessenberg_inverse_iteration(h0, lambda, norm_h, rng);
            Vector v = u * x;
            double nv = norm2(v);
            if (!(nv > 0.0)) continue;
            for (auto& vi : v) vi /= nv;
            Vector r = a * v;
            for (std::size_t i = 0; i < n; ++i) r[i] -= values[j] * v[i];
            const double err = norm2(r) / std::max(norm_a, 1e-300);
            if (err < best_err) {
                best_err = err;
                best = std::move(v);
            }
            if (best_err < 64.0 * kEps) break;
            lambda += cplx{2.0 * sep, -sep};  // retry with a nudged shift
        }
        worst = std::max(worst, best_err);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = best[i];
    }
    out.backward_error = worst;
    return out;
}

NullspaceResult nullspace(Matrix a, double rel_tol) {
    const std::size_t rows = a.rows(), cols = a.cols();
    NullspaceResult res;
    std::vector<std::size_t> col_perm(cols);
    for (std::size_t j = 0; j < cols; ++j) col_perm[j] = j;

    const std::size_t steps = std::min(rows, cols);
    double norm0 = a.max_abs();
    if (norm0 == 0.0) norm0 = 1.0;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        // Complete pivoting.
        std::size_t pi = k, pj = k;
        double best = 0.0;
        for (std::size_t i = k; i < rows; ++i)
            for (std::size_t j = k; j < cols; ++j)
                if (std::abs(a(i, j)) > best) { best = std::abs(a(i, j)); pi = i; pj = j; }
        if (best <= rel_tol * norm0) break;
        if (pi != k)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(k, j), a(pi, j));
        if (pj != k) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, k), a(i, pj));
            std::swap(col_perm[k], col_perm[pj]);
        }
        const cplx pivot = a(k, k);
        for (std::size_t i = k + 1; i < rows; ++i) {
            const cplx m = a(i, k) / pivot;
            if (m == cplx{}) continue;
            for (std::size_t j = k; j < cols; ++j) a(i, j) -= m * a(k, j);
        }
        ++rank;
    }
    res.rank = rank;

    // Back-substitute one basis vector per free column.
    for (std::size_t f = rank; f < cols; ++f) {
        Vector y(cols, cplx{});
        y[f] = 1.0;
        for (std::size_t ii = rank; ii-- > 0;) {
            cplx s = 0.0;
            for (std::size_t j = ii + 1; j < cols; ++j) s += a(ii, j) * y[j];
            y[ii] = -s / a(ii, ii);
        }
        Vector x(cols, cplx{});
        for (std::size_t j = 0; j < cols; ++j) x[col_perm[j]] = y[j];
        const double nx = norm2(x);
        for (auto& xi : x) xi /= nx;
        res.basis.push_back(std::move(x));
    }
    return res;
}

}  // namespace xxzsov
