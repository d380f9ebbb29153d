#ifndef AOIF_MATRIX_HPP
#define AOIF_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace aoif {

using Vec = std::vector<double>;

// Dense real matrix, row-major.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vec& d);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    bool square() const { return rows_ == cols_ && rows_ > 0; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    Matrix transposed() const;
    Matrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;
    void set_block(std::size_t i0, std::size_t j0, const Matrix& b);

    double one_norm() const;   // max column sum of |entries|
    double inf_norm() const;   // max row sum of |entries|
    double max_abs() const;
    bool all_finite() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    const Vec& data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec data_;
};

// Row/column vector products. A Vec on the left is a row vector, on the
// right a column vector.
Vec operator*(const Vec& row, const Matrix& m);
Vec operator*(const Matrix& m, const Vec& col);

double dot(const Vec& a, const Vec& b);
double vec_sum(const Vec& v);
Vec vec_scaled(Vec v, double s);

// Outer product col * row, sized col.size() x row.size().
Matrix outer(const Vec& col, const Vec& row);

}  // namespace aoif

#endif
