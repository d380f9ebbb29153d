#include "aoif/solver.hpp"

#include <cmath>

#include "aoif/errors.hpp"

namespace aoif {

Vec SteadyStateSolution::density(double x) const {
    if (x < 0.0) throw DomainError("SteadyStateSolution::density: x must be non-negative");
    return (g * expm(a * x)) * h;
}

double SteadyStateSolution::total_mass() const {
    const Vec hsum = h * Vec(size, 1.0);
    const Vec y = solve_linear(a, hsum);
    return -dot(g, y) + vec_sum(boundary);
}

SteadyStateSolution solve_steady_state(const MfqSpec& spec, const SolveOptions& opts) {
    const std::size_t n = spec.size();
    const Vec& drift = spec.drift();

    // M = Q R^-1: generator columns scaled by the inverse drifts.
    Matrix m = spec.generator();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) /= drift[j];

    const double mnorm = std::max(1.0, m.inf_norm());
    const double tol = 1e-10 * static_cast<double>(n) * mnorm;

    Matrix u_total;
    Matrix a;
    std::size_t anti = 0;
    if (opts.path == SolveOptions::Path::deflated && n >= 2) {
        // R 1 is a right eigenvector of Q R^-1 at the origin; reflect it onto
        // the first coordinate and work on the deflated trailing block.
        Vec w(n, 0.0);
        w[0] = 1.0;
        const Matrix u0 = householder_similarity(drift, w);
        const Matrix m1 = u0 * m * u0;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(m1(i, 0)) > tol)
                throw NumericalError("solve_steady_state: deflation left a nonzero first column",
                                     std::abs(m1(i, 0)));

        const OrderedSchur schur =
            real_schur_ordered(m1.block(1, 1, n - 1, n - 1), opts.split);
        anti = 1 + schur.anti_stable;
        Matrix embed(n, n);
        embed(0, 0) = 1.0;
        embed.set_block(1, 1, schur.u);
        u_total = u0 * embed;
        a = schur.t.block(schur.anti_stable, schur.anti_stable, schur.stable, schur.stable);
    } else {
        const OrderedSchur schur = real_schur_ordered(m, opts.split);
        anti = schur.anti_stable;
        u_total = schur.u;
        a = schur.t.block(anti, anti, schur.stable, schur.stable);
    }

    const std::size_t b = n - anti;
    if (b == 0 || anti == 0)
        throw NumericalError("solve_steady_state: empty stable or anti-stable subspace",
                             static_cast<double>(anti));
    if (anti != spec.negative_drift_count())
        throw NumericalError(
            "solve_steady_state: fluid queue is not ergodic (anti-stable count " +
                std::to_string(anti) + " differs from negative-drift count " +
                std::to_string(spec.negative_drift_count()) + ")",
            static_cast<double>(anti));

    // H = last b rows of U^T, i.e. the transposed trailing columns of U.
    Matrix h(b, n);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = u_total(j, anti + i);

    // Step 2: [g d] [[H R | -A^-1 H 1], [-Qtilde* | 1]] = [0 | 1], made
    // square by replacing the last homogeneous column (the all-ones vector
    // spans the right null space) with the normalization column.
    const Vec hsum = h * Vec(n, 1.0);
    const Vec norm_top = solve_linear(a, hsum);  // -A^-1 H 1, sign folded below

    Matrix k(n, n + 1);
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < n; ++j) k(i, j) = h(i, j) * drift[j];
        k(i, n) = -norm_top[i];
    }
    const Matrix& qb = spec.boundary_generator();
    for (std::size_t i = 0; i < anti; ++i) {
        for (std::size_t j = 0; j < n; ++j) k(b + i, j) = -qb(n - anti + i, j);
        k(b + i, n) = 1.0;
    }

    Matrix ksq(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) ksq(i, j) = k(i, j);
        ksq(i, n - 1) = k(i, n);
    }
    Vec rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    Vec x;
    try {
        x = LuFactor(ksq).solve_transposed(rhs);
    } catch (const SingularMatrixError& e) {
        throw NumericalError(
            "solve_steady_state: singular boundary system, fluid queue not ergodic", e.pivot);
    }

    // Residual over all n+1 equations, including the dropped column.
    double residual = 0.0;
    double xnorm = 0.0;
    for (double v : x) xnorm = std::max(xnorm, std::abs(v));
    for (std::size_t j = 0; j <= n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i] * k(i, j);
        if (j == n) s -= 1.0;
        residual = std::max(residual, std::abs(s));
    }
    if (residual > 1e-8 * std::max(1.0, k.inf_norm() * xnorm))
        throw NumericalError("solve_steady_state: boundary solve residual too large", residual);

    SteadyStateSolution sol;
    sol.anti_stable = anti;
    sol.stable_dim = b;
    sol.size = n;
    sol.step2_residual = residual;
    sol.a = std::move(a);
    sol.h = std::move(h);
    sol.g.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(b));
    sol.d.assign(x.begin() + static_cast<std::ptrdiff_t>(b), x.end());
    sol.boundary.assign(n, 0.0);
    for (std::size_t i = 0; i < anti; ++i) sol.boundary[n - anti + i] = sol.d[i];
    return sol;
}

Vec boundary_mass(const SteadyStateSolution& solution, const MfqSpec& spec) {
    if (solution.size != spec.size())
        throw DomainError("boundary_mass: solution and spec sizes disagree");
    return solution.boundary;
}

}  // namespace aoif
