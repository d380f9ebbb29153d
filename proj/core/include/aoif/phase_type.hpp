#ifndef AOIF_PHASE_TYPE_HPP
#define AOIF_PHASE_TYPE_HPP

#include <random>

#include "aoif/matrix.hpp"

namespace aoif {

// Phase-type distribution: time to absorption of a CTMC with m transient
// phases, initial row vector sigma over the transient phases and
// sub-generator S. The exit rate vector nu = -S 1 and the mass at zero
// sigma0 = 1 - sigma 1 are derived. Immutable after construction.
class PhaseType {
  public:
    // Validates the pair on construction: sigma entries in [0,1] summing to
    // at most 1, S with negative diagonal, non-negative off-diagonal, row
    // sums <= 0 and nonsingular (every phase reaches absorption).
    PhaseType(Vec sigma, Matrix sub_generator);

    static PhaseType exponential(double rate);
    static PhaseType erlang(double mean, std::size_t order);
    // Two-phase hyperexponential with balanced means matching the first two
    // moments; requires scv >= 1.
    static PhaseType hyperexp_balanced(double mean, double scv);
    // Two-moment fit: Erlang when 1/scv is an integer, mixed Erlang of
    // consecutive orders when scv < 1, balanced hyperexponential when
    // scv > 1.
    static PhaseType fit_two_moments(double mean, double scv);

    std::size_t order() const { return sigma_.size(); }
    const Vec& sigma() const { return sigma_; }
    const Matrix& sub_generator() const { return s_; }
    const Vec& exit_rates() const { return nu_; }
    double mass_at_zero() const { return sigma0_; }

    // Continuous part of the density, -sigma e^{Sx} S 1; the atom at zero is
    // reported separately through mass_at_zero().
    double pdf(double x) const;
    double cdf(double x) const;  // 1 - sigma e^{Sx} 1; equals sigma0 at x = 0

    // Non-central moment E[X^k] = (-1)^k k! sigma S^{-k} 1, k >= 1.
    double moment(int k) const;
    double mean() const { return moment(1); }
    double scv() const;

    // Absorption time of one phase-by-phase walk through the chain.
    double sample(std::mt19937_64& rng) const;

    bool same_as(const PhaseType& other, double tol = 1e-12) const;

  private:
    Vec sigma_;
    Matrix s_;
    Vec nu_;
    double sigma0_;
};

}  // namespace aoif

#endif
