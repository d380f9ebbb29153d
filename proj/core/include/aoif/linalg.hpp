#ifndef AOIF_LINALG_HPP
#define AOIF_LINALG_HPP

#include <complex>
#include <cstddef>

#include "aoif/matrix.hpp"

namespace aoif {

// LU factorization with partial pivoting. Throws SingularMatrixError when a
// pivot falls below working precision relative to the matrix scale.
class LuFactor {
  public:
    explicit LuFactor(Matrix m);

    std::size_t size() const { return lu_.rows(); }
    double min_pivot() const { return min_pivot_; }

    Vec solve(Vec b) const;            // M x = b
    Matrix solve(Matrix b) const;      // column-wise
    Vec solve_transposed(Vec b) const; // M^T x = b, i.e. row-vector systems x M = b^T

  private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    double min_pivot_ = 0.0;
};

// Solve M X = B. Residual satisfies |M X - B|_inf <= ~1e-10 |M|_inf |X|_inf
// for well-conditioned M; singularity is reported, never masked.
Matrix solve_linear(const Matrix& m, const Matrix& b);
Vec solve_linear(const Matrix& m, const Vec& b);

// Matrix exponential by scaling-and-squaring with the degree-13 Pade
// approximant, 1-norm based scaling.
Matrix expm(const Matrix& m);

// Symmetric orthogonal reflector U = I - 2 u u^T / (u^T u) with
// u = v - |v|_2 w, so that U w |v|_2 = v. Returns I when v is already
// parallel to w. Throws DomainError for v = 0.
Matrix householder_similarity(const Vec& v, const Vec& w);

// Real Schur form with eigenvalues sorted so that every eigenvalue with real
// part >= -split leads (anti-stable block, size `anti_stable`) and the rest
// trail (stable block, size `stable`).
struct OrderedSchur {
    Matrix u;  // orthogonal
    Matrix t;  // quasi-upper-triangular, t = u^T m u
    std::size_t anti_stable = 0;
    std::size_t stable = 0;
};

inline constexpr double kSchurDefaultSplit = 1e-9;

OrderedSchur real_schur_ordered(const Matrix& m, double split = kSchurDefaultSplit);

// Eigenvalues of a quasi-upper-triangular matrix, in diagonal order.
std::vector<std::complex<double>> quasi_triangular_eigenvalues(const Matrix& t);

}  // namespace aoif

#endif
