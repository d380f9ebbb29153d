#ifndef AOIF_SOLVER_HPP
#define AOIF_SOLVER_HPP

#include "aoif/linalg.hpp"
#include "aoif/matrix.hpp"
#include "aoif/mfq.hpp"

namespace aoif {

struct SolveOptions {
    enum class Path {
        deflated,  // Householder pre-reduction separating the zero eigenvalue
        general,   // full ordered Schur on Q R^-1
    };
    Path path = Path::deflated;
    double split = kSchurDefaultSplit;
};

// Steady state of a fluid queue in matrix-exponential form: joint density
// f(x) = g e^{Ax} H for x > 0 plus boundary mass vector c at x = 0.
struct SteadyStateSolution {
    Vec g;          // 1 x b
    Matrix a;       // b x b, stable
    Matrix h;       // b x n, last b rows of U^T
    Vec d;          // 1 x a, boundary masses of the negative-drift states
    Vec boundary;   // c, 1 x n: d embedded at the negative-drift positions
    std::size_t anti_stable = 0;
    std::size_t stable_dim = 0;
    std::size_t size = 0;
    double step2_residual = 0.0;

    Vec density(double x) const;  // g e^{Ax} H
    double total_mass() const;    // -g A^-1 H 1 + c 1
};

// Three-step solve: (1) ordered Schur separation of Q R^-1 into anti-stable
// and stable parts, (2) linear solve for (g, d) with the normalization
// condition, (3) assembly of the matrix-exponential form. The deflated path
// first reflects the known zero-eigenvalue direction R 1 onto the first
// coordinate, so the Schur work happens on the remaining (n-1) block.
SteadyStateSolution solve_steady_state(const MfqSpec& spec, const SolveOptions& opts = {});

// Probability mass accumulation vector at fluid level zero.
Vec boundary_mass(const SteadyStateSolution& solution, const MfqSpec& spec);

}  // namespace aoif

#endif
