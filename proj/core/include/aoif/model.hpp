#ifndef AOIF_MODEL_HPP
#define AOIF_MODEL_HPP

#include <string>
#include <vector>

#include "aoif/matrix.hpp"
#include "aoif/phase_type.hpp"

namespace aoif {

// One information source: Poisson arrivals at rate lambda, PH service,
// per-source packet error probability and retransmission probability.
struct SourceSpec {
    double lambda;
    PhaseType service;
    double error_prob = 0.0;
    double retx_prob = 0.0;

    double success_prob() const { return 1.0 - error_prob; }   // q_n
    double discard_prob() const { return 1.0 - retx_prob; }    // d_n
    double service_rate() const { return 1.0 / service.mean(); }  // mu_n
};

enum class PreemptionPreset { non_preemptive, global, self_preemption, prioritized };

// P[n][m] = probability an arriving source-m packet preempts a source-n
// packet in service. Presets: zeros / ones / identity / lower-triangular
// ones (an arriving class-i packet preempts class-j in service iff i <= j).
Matrix preset_preemption(PreemptionPreset kind, std::size_t n);

// Immutable validated description of the status-update system. Source
// indices are 1-based on the public surface.
class SystemSpec {
  public:
    // Validates everything and caches derived rates; throws ConfigError with
    // the offending field path.
    SystemSpec(std::vector<SourceSpec> sources, Matrix preemption, std::size_t tagged = 1);

    std::size_t source_count() const { return sources_.size(); }
    const SourceSpec& source(std::size_t n) const { return sources_[n - 1]; }
    const std::vector<SourceSpec>& sources() const { return sources_; }
    const Matrix& preemption() const { return preemption_; }
    std::size_t tagged() const { return tagged_; }

    double total_arrival_rate() const { return total_arrival_rate_; }          // lambda
    double load(std::size_t n) const;                                          // rho_n
    double total_load() const { return total_load_; }                          // rho
    double preempting_rate(std::size_t n) const { return preempting_[n - 1]; } // lambda-bar_n
    std::size_t total_order() const { return total_order_; }                   // ell_T

    // Equivalent system with source n moved to position 1; the preemption
    // matrix is conjugated by the same permutation.
    SystemSpec retag(std::size_t n) const;

    // Same arrival/service/error structure everywhere.
    bool homogeneous(double tol = 1e-12) const;
    bool preemption_is(PreemptionPreset kind, double tol = 1e-12) const;

    // Scale every arrival rate by the same factor.
    SystemSpec with_scaled_rates(double factor) const;
    SystemSpec with_preemption(Matrix p) const;
    SystemSpec with_tagged(std::size_t n) const;

  private:
    std::vector<SourceSpec> sources_;
    Matrix preemption_;
    std::size_t tagged_;
    double total_arrival_rate_ = 0.0;
    double total_load_ = 0.0;
    std::vector<double> preempting_;
    std::size_t total_order_ = 0;
};

}  // namespace aoif

#endif
