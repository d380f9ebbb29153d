#include "aoif/matrix.hpp"

#include <cassert>
#include <cmath>

namespace aoif {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vec& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
    assert(i0 + r <= rows_ && j0 + c <= cols_);
    Matrix b(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
}

void Matrix::set_block(std::size_t i0, std::size_t j0, const Matrix& b) {
    assert(i0 + b.rows() <= rows_ && j0 + b.cols() <= cols_);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

double Matrix::one_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows());
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = b.row_ptr(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Vec operator*(const Vec& row, const Matrix& m) {
    assert(row.size() == m.rows());
    Vec out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double ri = row[i];
        if (ri == 0.0) continue;
        const double* mi = m.row_ptr(i);
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += ri * mi[j];
    }
    return out;
}

Vec operator*(const Matrix& m, const Vec& col) {
    assert(col.size() == m.cols());
    Vec out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* mi = m.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += mi[j] * col[j];
        out[i] = s;
    }
    return out;
}

double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double vec_sum(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

Vec vec_scaled(Vec v, double s) {
    for (double& x : v) x *= s;
    return v;
}

Matrix outer(const Vec& col, const Vec& row) {
    Matrix m(col.size(), row.size());
    for (std::size_t i = 0; i < col.size(); ++i)
        for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = col[i] * row[j];
    return m;
}

}  // namespace aoif
