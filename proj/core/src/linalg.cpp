#include "aoif/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "aoif/errors.hpp"

namespace aoif {

LuFactor::LuFactor(Matrix m) : lu_(std::move(m)), perm_(lu_.rows()) {
    if (!lu_.square()) throw DomainError("LuFactor: matrix must be square");
    const std::size_t n = lu_.rows();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    const double scale = lu_.max_abs();
    const double tiny = scale > 0.0 ? scale * 1e-14 * static_cast<double>(n) : 0.0;
    min_pivot_ = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= tiny || best == 0.0)
            throw SingularMatrixError("matrix singular to working precision", best);
        if (piv != k) {
            std::swap(perm_[piv], perm_[k]);
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(piv, j), lu_(k, j));
        }
        min_pivot_ = std::min(min_pivot_, best);
        const double inv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) * inv;
            lu_(i, k) = f;
            if (f == 0.0) continue;
            const double* rk = lu_.row_ptr(k);
            double* ri = lu_.row_ptr(i);
            for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
        }
    }
}

Vec LuFactor::solve(Vec b) const {
    const std::size_t n = size();
    if (b.size() != n) throw DomainError("LuFactor::solve: size mismatch");
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        const double* ri = lu_.row_ptr(i);
        for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
        x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        const double* ri = lu_.row_ptr(ii);
        for (std::size_t j = ii + 1; j < n; ++j) s -= ri[j] * x[j];
        x[ii] = s / ri[ii];
    }
    return x;
}

Matrix LuFactor::solve(Matrix b) const {
    const std::size_t n = size();
    if (b.rows() != n) throw DomainError("LuFactor::solve: size mismatch");
    Matrix x(n, b.cols());
    Vec col(n);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
        Vec sol = solve(col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
    }
    return x;
}

Vec LuFactor::solve_transposed(Vec b) const {
    // (P M)^T y = L^T U^T with M^T x = b  <=>  U^T z = b, L^T y = z, x = P^T y.
    const std::size_t n = size();
    if (b.size() != n) throw DomainError("LuFactor::solve_transposed: size mismatch");
    Vec z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(j, i) * z[j];
        z[i] = s / lu_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(j, ii) * z[j];
        z[ii] = s;
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = z[i];
    return x;
}

Matrix solve_linear(const Matrix& m, const Matrix& b) { return LuFactor(m).solve(b); }

Vec solve_linear(const Matrix& m, const Vec& b) { return LuFactor(m).solve(b); }

Matrix expm(const Matrix& m) {
    if (!m.square()) throw DomainError("expm: matrix must be square");
    if (!m.all_finite()) throw DomainError("expm: non-finite entries");
    const std::size_t n = m.rows();

    // Degree-13 Pade coefficients and the corresponding 1-norm threshold.
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const double theta13 = 5.371920351148152;

    const double norm = m.one_norm();
    int squarings = 0;
    Matrix a = m;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
        a *= std::ldexp(1.0, -squarings);
    }

    const Matrix eye = Matrix::identity(n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;

    Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                    b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
    Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
               b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;

    Matrix r = solve_linear(v - u, v + u);
    for (int s = 0; s < squarings; ++s) {
        r = r * r;
        if (!r.all_finite())
            throw NumericalError("expm: overflow in squaring phase", r.max_abs());
    }
    return r;
}

Matrix householder_similarity(const Vec& v, const Vec& w) {
    const std::size_t n = v.size();
    if (w.size() != n) throw DomainError("householder_similarity: size mismatch");
    const double vnorm = std::sqrt(dot(v, v));
    if (vnorm == 0.0) throw DomainError("householder_similarity: v must be nonzero");

    Vec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i] - vnorm * w[i];
    const double uu = dot(u, u);
    if (uu <= vnorm * vnorm * 1e-28) return Matrix::identity(n);  // v already along w

    Matrix h = Matrix::identity(n);
    const double f = 2.0 / uu;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) -= f * u[i] * u[j];
    return h;
}

}  // namespace aoif
