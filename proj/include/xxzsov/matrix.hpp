#ifndef XXZSOV_MATRIX_HPP
#define XXZSOV_MATRIX_HPP

#include <cstddef>
#include <vector>

#include "xxzsov/common.hpp"

namespace xxzsov {

using Vector = std::vector<cplx>;

// Dense row-major complex matrix. The chain-space basis convention is
// site-1-fastest binary ordering of sigma^z product states with spin-up
// encoded as bit value 0, so index 0 is the all-up reference state.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    cplx* row_data(std::size_t i) { return a_.data() + i * cols_; }
    const cplx* row_data(std::size_t i) const { return a_.data() + i * cols_; }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(cplx scale);

    Matrix transpose() const;
    Matrix conjugate() const;
    Matrix adjoint() const;

    double frobenius_norm() const;
    double max_abs() const;
    double one_norm() const;  // max column sum
    cplx trace() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(cplx scale, Matrix m);

Vector operator*(const Matrix& m, const Vector& v);
// row acting from the left: (row^T M), the bilinear covector convention.
Vector apply_covector(const Vector& row, const Matrix& m);

Matrix commutator(const Matrix& x, const Matrix& y);
Matrix outer(const Vector& ket, const Vector& bra);  // ket * bra^T (bilinear)

double norm2(const Vector& v);
double max_abs(const Vector& v);
Vector& scale(Vector& v, cplx s);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(cplx s, Vector v);

}  // namespace xxzsov

#endif
