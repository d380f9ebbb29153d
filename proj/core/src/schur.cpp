// Ordered real Schur decomposition: Hessenberg reduction by Householder
// reflectors, Francis implicit double-shift QR, then adjacent block swaps to
// sort anti-stable eigenvalues ahead of stable ones.

#include <cmath>
#include <complex>
#include <limits>

#include "aoif/errors.hpp"
#include "aoif/linalg.hpp"

namespace aoif {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder data for a reflector P = I - beta v v^T acting on `len` rows.
struct Reflector {
    double v[3];
    double beta;
    int len;
};

// Builds a reflector mapping (x, y, z) onto (+-r, 0, 0). len is 2 or 3.
Reflector make_reflector(double x, double y, double z, int len) {
    Reflector r{{x, y, z}, 0.0, len};
    double norm = std::sqrt(x * x + y * y + z * z);
    if (norm == 0.0) return r;
    const double alpha = x >= 0.0 ? -norm : norm;
    r.v[0] = x - alpha;
    const double vv = r.v[0] * r.v[0] + y * y + z * z;
    if (vv == 0.0) return r;
    r.beta = 2.0 / vv;
    return r;
}

// Rows i0..i0+len-1, columns j0..j1 inclusive: A := P A.
void apply_left(Matrix& a, const Reflector& p, int i0, int j0, int j1) {
    if (p.beta == 0.0) return;
    for (int j = j0; j <= j1; ++j) {
        double s = 0.0;
        for (int k = 0; k < p.len; ++k) s += p.v[k] * a(i0 + k, j);
        s *= p.beta;
        for (int k = 0; k < p.len; ++k) a(i0 + k, j) -= s * p.v[k];
    }
}

// Columns j0..j0+len-1, rows i0..i1 inclusive: A := A P.
void apply_right(Matrix& a, const Reflector& p, int j0, int i0, int i1) {
    if (p.beta == 0.0) return;
    for (int i = i0; i <= i1; ++i) {
        double s = 0.0;
        for (int k = 0; k < p.len; ++k) s += a(i, j0 + k) * p.v[k];
        s *= p.beta;
        for (int k = 0; k < p.len; ++k) a(i, j0 + k) -= s * p.v[k];
    }
}

void hessenberg_reduce(Matrix& h, Matrix& u) {
    const int n = static_cast<int>(h.rows());
    for (int k = 0; k + 2 < n; ++k) {
        const int len = n - 1 - k;
        // Reflector over rows k+1..n-1 zeroing column k below the subdiagonal.
        Vec x(len);
        for (int i = 0; i < len; ++i) x[i] = h(k + 1 + i, k);
        double norm = std::sqrt(dot(x, x));
        if (norm == 0.0) continue;
        const double alpha = x[0] >= 0.0 ? -norm : norm;
        x[0] -= alpha;
        const double vv = dot(x, x);
        if (vv == 0.0) continue;
        const double beta = 2.0 / vv;

        for (int j = k; j < n; ++j) {  // left: rows k+1..n-1
            double s = 0.0;
            for (int i = 0; i < len; ++i) s += x[i] * h(k + 1 + i, j);
            s *= beta;
            for (int i = 0; i < len; ++i) h(k + 1 + i, j) -= s * x[i];
        }
        for (int i = 0; i < n; ++i) {  // right: columns k+1..n-1
            double s = 0.0;
            for (int j = 0; j < len; ++j) s += h(i, k + 1 + j) * x[j];
            s *= beta;
            for (int j = 0; j < len; ++j) h(i, k + 1 + j) -= s * x[j];
        }
        for (int i = 0; i < n; ++i) {  // accumulate u
            double s = 0.0;
            for (int j = 0; j < len; ++j) s += u(i, k + 1 + j) * x[j];
            s *= beta;
            for (int j = 0; j < len; ++j) u(i, k + 1 + j) -= s * x[j];
        }
        h(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// One implicit double-shift sweep over the active window [lo, hi] (size >= 3).
void francis_step(Matrix& h, Matrix& u, int lo, int hi, bool exceptional) {
    const int n = static_cast<int>(h.rows());
    double s, t;
    if (exceptional) {
        // Ad-hoc shifts to break symmetric limit cycles.
        const double w = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
        const double d = 0.75 * w + h(hi, hi);
        s = 2.0 * d;
        t = d * d + 0.4375 * w * w;
    } else {
        s = h(hi - 1, hi - 1) + h(hi, hi);
        t = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
    }
    double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) - s * h(lo, lo) + t;
    double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - s);
    double z = h(lo + 1, lo) * h(lo + 2, lo + 1);

    for (int r = lo; r <= hi - 2; ++r) {
        const Reflector p = make_reflector(x, y, z, 3);
        const int jstart = r == lo ? lo : r - 1;
        apply_left(h, p, r, jstart, n - 1);
        apply_right(h, p, r, 0, std::min(hi, r + 3));
        apply_right(u, p, r, 0, n - 1);
        if (r > lo) {  // the reflector annihilated the bulge in column r-1
            h(r + 1, r - 1) = 0.0;
            if (r + 2 <= hi) h(r + 2, r - 1) = 0.0;
        }
        if (r < hi - 2) {
            x = h(r + 1, r);
            y = h(r + 2, r);
            z = r + 3 <= hi ? h(r + 3, r) : 0.0;
        }
    }
    // Trailing 2-row reflector clears the last bulge entry h(hi, hi-2).
    const Reflector p = make_reflector(h(hi - 1, hi - 2), h(hi, hi - 2), 0.0, 2);
    apply_left(h, p, hi - 1, hi - 2, n - 1);
    apply_right(h, p, hi - 1, 0, hi);
    apply_right(u, p, hi - 1, 0, n - 1);
    h(hi, hi - 2) = 0.0;
}

void francis_iterate(Matrix& h, Matrix& u) {
    const int n = static_cast<int>(h.rows());
    const int cap = 30 * n;
    const double hnorm = h.inf_norm();
    int sweeps = 0;
    int since_deflation = 0;
    int hi = n - 1;
    while (hi > 0) {
        int lo = hi;
        while (lo > 0) {
            double denom = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (denom == 0.0) denom = hnorm;
            if (std::abs(h(lo, lo - 1)) <= kEps * denom) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if (lo == hi - 1) {
            hi -= 2;
            since_deflation = 0;
            continue;
        }
        if (sweeps >= cap)
            throw NumericalError("real_schur_ordered: QR iteration did not converge within 30*n sweeps",
                                 std::abs(h(hi, hi - 1)));
        const bool exceptional = since_deflation > 0 && since_deflation % 10 == 0;
        francis_step(h, u, lo, hi, exceptional);
        ++sweeps;
        ++since_deflation;
    }
    // Leave an exactly quasi-triangular matrix: clear roundoff remnants below
    // the subdiagonal and negligible subdiagonal entries.
    for (int i = 2; i < n; ++i)
        for (int j = 0; j <= i - 2; ++j) h(i, j) = 0.0;
    for (int i = 1; i < n; ++i) {
        double denom = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
        if (denom == 0.0) denom = hnorm;
        if (std::abs(h(i, i - 1)) <= kEps * denom) h(i, i - 1) = 0.0;
    }
}

// Applies the 2x2 rotation with first column (cs, sn) as a similarity at
// position i (rows/cols i, i+1) and accumulates it into u.
void apply_rotation(Matrix& t, Matrix& u, int i, double cs, double sn) {
    const int n = static_cast<int>(t.rows());
    for (int j = 0; j < n; ++j) {  // left: Q^T rows
        const double a = t(i, j), b = t(i + 1, j);
        t(i, j) = cs * a + sn * b;
        t(i + 1, j) = -sn * a + cs * b;
    }
    for (int r = 0; r < n; ++r) {  // right: cols
        const double a = t(r, i), b = t(r, i + 1);
        t(r, i) = cs * a + sn * b;
        t(r, i + 1) = -sn * a + cs * b;
    }
    for (int r = 0; r < n; ++r) {
        const double a = u(r, i), b = u(r, i + 1);
        u(r, i) = cs * a + sn * b;
        u(r, i + 1) = -sn * a + cs * b;
    }
}

// Triangularizes every 2x2 diagonal block whose eigenvalues are real, so
// the remaining 2x2 blocks all carry complex conjugate pairs.
void split_real_blocks(Matrix& t, Matrix& u) {
    const int n = static_cast<int>(t.rows());
    for (int i = 0; i + 1 < n;) {
        if (t(i + 1, i) == 0.0) {
            ++i;
            continue;
        }
        const double a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
        const double g = 0.5 * (a - d);
        const double disc = g * g + b * c;
        if (disc >= 0.0) {
            // Real pair: rotate the eigenvector (lam - d, c) into the first
            // coordinate; lam picked on the side of g for conditioning.
            const double sq = std::sqrt(disc);
            const double v1 = g >= 0.0 ? g + sq : g - sq;
            const double r = std::hypot(v1, c);
            if (r > 0.0) {
                apply_rotation(t, u, i, v1 / r, c / r);
                t(i + 1, i) = 0.0;
            }
        }
        i += 2;
    }
}

struct Block {
    int start;
    int size;
    double re;  // common real part of the block's eigenvalues
};

std::vector<Block> scan_blocks(const Matrix& t, double split) {
    std::vector<Block> blocks;
    const int n = static_cast<int>(t.rows());
    for (int i = 0; i < n;) {
        if (i + 1 < n && t(i + 1, i) != 0.0) {
            const double a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
            const double g = 0.5 * (a - d);
            const double disc = g * g + b * c;
            if (disc >= 0.0) {
                // Should have been split; guard against a real pair whose
                // members classify differently.
                const double sq = std::sqrt(disc);
                const double mean = 0.5 * (a + d);
                const bool anti1 = mean + sq >= -split;
                const bool anti2 = mean - sq >= -split;
                if (anti1 != anti2)
                    throw NumericalError(
                        "real_schur_ordered: real eigenvalue pair straddles the stability split", sq);
            }
            blocks.push_back({i, 2, 0.5 * (a + d)});
            i += 2;
        } else {
            blocks.push_back({i, 1, t(i, i)});
            i += 1;
        }
    }
    return blocks;
}

// Swaps adjacent diagonal blocks (sizes p then q) starting at row i0 by an
// orthogonal similarity, exchanging their order along the diagonal.
void swap_adjacent_blocks(Matrix& t, Matrix& u, int i0, int p, int q) {
    const int n = static_cast<int>(t.rows());
    const int m = p + q;
    const Matrix t11 = t.block(i0, i0, p, p);
    const Matrix t12 = t.block(i0, i0 + p, p, q);
    const Matrix t22 = t.block(i0 + p, i0 + p, q, q);

    // Sylvester equation T11 X - X T22 = -T12 via its Kronecker form,
    // column-major vec ordering.
    Matrix k(p * q, p * q);
    Vec rhs(p * q);
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < p; ++i) {
            const int row = j * p + i;
            rhs[row] = -t12(i, j);
            for (int kk = 0; kk < p; ++kk) k(row, j * p + kk) += t11(i, kk);
            for (int l = 0; l < q; ++l) k(row, l * p + i) -= t22(l, j);
        }
    Vec xv;
    try {
        xv = LuFactor(k).solve(rhs);
    } catch (const SingularMatrixError& e) {
        throw NumericalError(
            "real_schur_ordered: block swap failed, eigenvalues too close across the split", e.pivot);
    }

    // Columns of [X; I_q] span the T22 invariant subspace; its QR factor
    // moves that subspace into the leading position.
    Matrix w(m, q);
    for (int j = 0; j < q; ++j) {
        for (int i = 0; i < p; ++i) w(i, j) = xv[j * p + i];
        w(p + j, j) = 1.0;
    }
    Matrix qf = Matrix::identity(m);
    for (int j = 0; j < q; ++j) {
        Vec x(m - j);
        for (int i = 0; i < m - j; ++i) x[i] = w(j + i, j);
        double norm = std::sqrt(dot(x, x));
        if (norm == 0.0) continue;
        const double alpha = x[0] >= 0.0 ? -norm : norm;
        x[0] -= alpha;
        const double vv = dot(x, x);
        if (vv == 0.0) continue;
        const double beta = 2.0 / vv;
        for (int col = j; col < q; ++col) {
            double s = 0.0;
            for (int i = 0; i < m - j; ++i) s += x[i] * w(j + i, col);
            s *= beta;
            for (int i = 0; i < m - j; ++i) w(j + i, col) -= s * x[i];
        }
        for (int row = 0; row < m; ++row) {
            double s = 0.0;
            for (int i = 0; i < m - j; ++i) s += qf(row, j + i) * x[i];
            s *= beta;
            for (int i = 0; i < m - j; ++i) qf(row, j + i) -= s * x[i];
        }
    }

    // Similarity on the window rows/cols, full matrix width, plus u.
    Vec tmp(m);
    for (int col = 0; col < n; ++col) {
        for (int r = 0; r < m; ++r) {
            double s = 0.0;
            for (int rr = 0; rr < m; ++rr) s += qf(rr, r) * t(i0 + rr, col);
            tmp[r] = s;
        }
        for (int r = 0; r < m; ++r) t(i0 + r, col) = tmp[r];
    }
    for (int row = 0; row < n; ++row) {
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int cc = 0; cc < m; ++cc) s += t(row, i0 + cc) * qf(cc, c);
            tmp[c] = s;
        }
        for (int c = 0; c < m; ++c) t(row, i0 + c) = tmp[c];
    }
    for (int row = 0; row < n; ++row) {
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int cc = 0; cc < m; ++cc) s += u(row, i0 + cc) * qf(cc, c);
            tmp[c] = s;
        }
        for (int c = 0; c < m; ++c) u(row, i0 + c) = tmp[c];
    }

    // The lower-left q x ... block of the window must have collapsed.
    const double tol = 1e-10 * static_cast<double>(n) * std::max(1.0, t.inf_norm());
    for (int r = q; r < m; ++r)
        for (int c = 0; c < std::min(q, r); ++c) {
            if (std::abs(t(i0 + r, i0 + c)) > tol)
                throw NumericalError("real_schur_ordered: block swap residual too large",
                                     std::abs(t(i0 + r, i0 + c)));
            t(i0 + r, i0 + c) = 0.0;
        }
}

}  // namespace

OrderedSchur real_schur_ordered(const Matrix& m, double split) {
    if (!m.square()) throw DomainError("real_schur_ordered: matrix must be square");
    if (!m.all_finite()) throw DomainError("real_schur_ordered: non-finite entries");
    const std::size_t n = m.rows();

    OrderedSchur out;
    out.t = m;
    out.u = Matrix::identity(n);
    if (n > 2) hessenberg_reduce(out.t, out.u);
    if (n > 1) {
        francis_iterate(out.t, out.u);
        split_real_blocks(out.t, out.u);
    }

    // Bubble anti-stable blocks (re >= -split) to the front.
    bool moved = true;
    while (moved) {
        moved = false;
        std::vector<Block> blocks = scan_blocks(out.t, split);
        for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
            const bool anti_left = blocks[i].re >= -split;
            const bool anti_right = blocks[i + 1].re >= -split;
            if (!anti_left && anti_right) {
                swap_adjacent_blocks(out.t, out.u, blocks[i].start, blocks[i].size,
                                     blocks[i + 1].size);
                moved = true;
                break;
            }
        }
    }

    for (const Block& b : scan_blocks(out.t, split)) {
        if (b.re >= -split)
            out.anti_stable += static_cast<std::size_t>(b.size);
        else
            out.stable += static_cast<std::size_t>(b.size);
    }
    return out;
}

std::vector<std::complex<double>> quasi_triangular_eigenvalues(const Matrix& t) {
    std::vector<std::complex<double>> eigs;
    const std::size_t n = t.rows();
    for (std::size_t i = 0; i < n;) {
        if (i + 1 < n && t(i + 1, i) != 0.0) {
            const double a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
            const double mean = 0.5 * (a + d);
            const double disc = 0.25 * (a - d) * (a - d) + b * c;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                eigs.emplace_back(mean + sq, 0.0);
                eigs.emplace_back(mean - sq, 0.0);
            } else {
                const double im = std::sqrt(-disc);
                eigs.emplace_back(mean, im);
                eigs.emplace_back(mean, -im);
            }
            i += 2;
        } else {
            eigs.emplace_back(t(i, i), 0.0);
            i += 1;
        }
    }
    return eigs;
}

}  // namespace aoif
