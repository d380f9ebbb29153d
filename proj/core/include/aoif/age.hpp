#ifndef AOIF_AGE_HPP
#define AOIF_AGE_HPP

#include <vector>

#include "aoif/mfq.hpp"
#include "aoif/model.hpp"
#include "aoif/solver.hpp"

namespace aoif {

enum class AgeKind { aoi, paoi };

// Scalar matrix-exponential law: pdf(x) = g e^{Ax} h on x >= 0 with unit
// total mass and no atom at the origin.
class MatrixExpDensity {
  public:
    MatrixExpDensity(Vec g, Matrix a, Vec h, AgeKind kind);

    double pdf(double x) const;
    double cdf(double x) const;  // 1 + g A^-1 e^{Ax} h, zero at the origin
    // Non-central moment (-1)^{i+1} i! g A^-(i+1) h, i >= 1.
    double moment(int i) const;

    const Vec& gvec() const { return g_; }
    const Matrix& amat() const { return a_; }
    const Vec& hvec() const { return h_; }
    AgeKind kind() const { return kind_; }

  private:
    Vec g_;
    Matrix a_;
    Vec h_;
    AgeKind kind_;
};

// AoI law of the source at position 1: censor the steady state to stages 2
// and 3 and renormalize.
MatrixExpDensity aoi_density(const SteadyStateSolution& solution, const MfqSpec& spec);

// Peak AoI law: weight the stage-3 tagged-source states by their successful
// completion rates q_1 nu^(1).
MatrixExpDensity paoi_density(const SteadyStateSolution& solution, const MfqSpec& spec,
                              const SystemSpec& system);

struct GridPoint {
    double x;
    double pdf;
    double cdf;
};

// Uniform grid on [0, x_max]; e^{Ax} advances by one expm of A*step and
// cumulative products, exact at the grid nodes.
std::vector<GridPoint> evaluate_grid(const MatrixExpDensity& density, double x_max,
                                     std::size_t points);

struct AnalysisOptions {
    bool force_full_build = false;  // skip the Remark-2 reduced construction
    SolveOptions solve;
};

struct SourceAgeResult {
    std::size_t source = 1;
    MatrixExpDensity aoi;
    MatrixExpDensity paoi;
    double mean_aoi = 0.0;
    double m2_aoi = 0.0;
    double mean_paoi = 0.0;
    double m2_paoi = 0.0;
};

// Full pipeline for one source: retag it to position 1, build the fluid
// queue (reduced automatically for homogeneous global systems), solve, and
// extract both age laws.
SourceAgeResult analyze_source(const SystemSpec& system, std::size_t source,
                               const AnalysisOptions& opts = {});

}  // namespace aoif

#endif
