#ifndef XXZSOV_ORACLE_HPP
#define XXZSOV_ORACLE_HPP

#include <vector>

#include "xxzsov/matrix.hpp"

// Self-contained dense complex linear algebra used as independent ground
// truth for every determinant formula and spectral claim in the toolkit.

namespace xxzsov {

class LUFactorization {
public:
    // Partial pivoting; throws SingularMatrixError when a pivot column is
    // below pivot_rel_tol * one_norm(A).
    static LUFactorization factor(Matrix a, double pivot_rel_tol = 1e-300);

    cplx det() const;
    Vector solve(const Vector& b) const;
    Matrix solve(const Matrix& b) const;
    Matrix inverse() const;
    double condition_estimate() const;  // one-norm condition number, exact inverse

    std::size_t dim() const { return lu_.rows(); }
    const std::vector<std::size_t>& pivots() const { return piv_; }
    int pivot_sign() const { return sign_; }
    double min_pivot_abs() const;

private:
    Matrix lu_;                     // packed L (unit diagonal) and U
    std::vector<std::size_t> piv_;  // row swapped with k at step k
    int sign_ = 1;
    double norm_a_ = 0.0;
};

cplx lu_det(const Matrix& a);
Vector lu_solve(const Matrix& a, const Vector& b);
Matrix lu_solve(const Matrix& a, const Matrix& b);
// x * a = b, used for operator right-division in the reconstruction formulas.
Matrix lu_solve_right(const Matrix& a, const Matrix& b);

struct EigenDecomposition {
    std::vector<cplx> values;  // sorted lexicographically by (re, im)
    Matrix vectors;            // columns, unit 2-norm
    double backward_error = 0.0;  // max_i ||A v_i - lambda_i v_i|| / ||A||_F
    bool converged = true;
};

// Householder Hessenberg reduction, Wilkinson-shifted QR with deflation and
// exceptional shifts, eigenvectors by inverse iteration on the Hessenberg
// form back-transformed. Deterministic.
EigenDecomposition eig(const Matrix& a, std::size_t max_sweeps_per_eigenvalue = 60);

// Bilinear pairing bra . ket (no conjugation) -- the covector action used
// throughout the SOV formulas.
cplx pairing(const Vector& bra, const Vector& ket);
// bra . A . ket, bilinear.
cplx matrix_element(const Vector& bra, const Matrix& a, const Vector& ket);
// Sesquilinear form conj(v) . w for Hilbert-space norms.
cplx inner(const Vector& v, const Vector& w);

// Rank of a (possibly rectangular) matrix by complete-pivoting elimination,
// with the nullspace basis of the column space. Used for the TQ nullspace.
struct NullspaceResult {
    std::size_t rank = 0;
    std::vector<Vector> basis;  // right-nullspace vectors, unit norm
};
NullspaceResult nullspace(Matrix a, double rel_tol = 1e-10);

}  // namespace xxzsov

#endif
