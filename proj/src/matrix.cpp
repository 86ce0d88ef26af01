#include "xxzsov/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace xxzsov {

std::size_t thread_cap() {
    static const std::size_t cap = [] {
        if (const char* env = std::getenv("XXZ_SOV_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<std::size_t>(v);
        }
        std::size_t hw = std::thread::hardware_concurrency();
        return hw == 0 ? std::size_t{1} : hw;
    }();
    return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += other.a_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= other.a_[k];
    return *this;
}

Matrix& Matrix::operator*=(cplx scale) {
    for (auto& x : a_) x *= scale;
    return *this;
}

Matrix Matrix::transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

Matrix Matrix::conjugate() const {
    Matrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (const auto& x : a_) s = std::max(s, std::abs(x));
    return s;
}

double Matrix::one_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) col += std::abs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

cplx Matrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        cplx* oi = out.row_data(i);
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const cplx lik = lhs(i, k);
            if (lik == cplx{}) continue;
            const cplx* rk = rhs.row_data(k);
            for (std::size_t j = 0; j < rhs.cols(); ++j) oi[j] += lik * rk[j];
        }
    }
    return out;
}

Matrix operator*(cplx scale, Matrix m) { return m *= scale; }

Vector operator*(const Matrix& m, const Vector& v) {
    Vector out(m.rows(), cplx{});
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const cplx* ri = m.row_data(i);
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += ri[j] * v[j];
        out[i] = s;
    }
    return out;
}

Vector apply_covector(const Vector& row, const Matrix& m) {
    Vector out(m.cols(), cplx{});
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const cplx ri = row[i];
        if (ri == cplx{}) continue;
        const cplx* mi = m.row_data(i);
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += ri * mi[j];
    }
    return out;
}

Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

Matrix outer(const Vector& ket, const Vector& bra) {
    Matrix m(ket.size(), bra.size());
    for (std::size_t i = 0; i < ket.size(); ++i)
        for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * bra[j];
    return m;
}

double norm2(const Vector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double max_abs(const Vector& v) {
    double s = 0.0;
    for (const auto& x : v) s = std::max(s, std::abs(x));
    return s;
}

Vector& scale(Vector& v, cplx s) {
    for (auto& x : v) x *= s;
    return v;
}

Vector operator+(const Vector& a, const Vector& b) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vector operator-(const Vector& a, const Vector& b) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector operator*(cplx s, Vector v) {
    for (auto& x : v) x *= s;
    return v;
}

}  // namespace xxzsov
