#ifndef AOIF_SIM_HPP
#define AOIF_SIM_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "aoif/model.hpp"

namespace aoif {

struct SimOptions {
    std::uint64_t min_cycles_per_source = 100000;  // recorded cycles after warmup
    std::uint64_t seed = 1;
    std::uint64_t max_events = 0;  // 0: derived from the cycle target
    bool debug_checks = false;     // per-cycle regenerative identity asserts
};

// One AoI sawtooth cycle: the age starts at reset_age right after a
// successful reception and climbs linearly to peak_age at the next one.
struct CycleRecord {
    double reset_age;
    double peak_age;
};

class SourceSimStats {
  public:
    const std::vector<CycleRecord>& cycles() const { return cycles_; }
    const std::vector<double>& system_times() const { return system_times_; }
    double horizon() const { return horizon_; }
    std::uint64_t cycle_count() const { return cycles_.size(); }

    double mean_aoi() const { return mean_aoi_; }
    double mean_aoi_ci() const { return mean_aoi_ci_; }    // 95% half-width
    double mean_paoi() const { return mean_paoi_; }
    double mean_paoi_ci() const { return mean_paoi_ci_; }

    // Exact time-average cdf of the piecewise-linear age path.
    double aoi_cdf(double x) const;
    // Empirical cdf of the peak samples.
    double paoi_cdf(double x) const;

  private:
    friend struct SimBuilder;
    std::vector<CycleRecord> cycles_;
    std::vector<double> system_times_;
    double horizon_ = 0.0;
    double area_ = 0.0;
    double mean_aoi_ = 0.0, mean_aoi_ci_ = 0.0;
    double mean_paoi_ = 0.0, mean_paoi_ci_ = 0.0;
    // sorted views with prefix sums for O(log n) cdf evaluation
    std::vector<double> sorted_resets_, reset_prefix_;
    std::vector<double> sorted_peaks_, peak_prefix_;
};

struct SimResult {
    std::vector<SourceSimStats> per_source;  // index 0 is source 1
    double horizon = 0.0;
    std::uint64_t total_events = 0;
    std::uint64_t seed = 0;
    std::uint64_t warmup_cycles = 0;

    const SourceSimStats& source(std::size_t n) const { return per_source[n - 1]; }
};

// Event-driven simulation of the bufferless preemptive system. Runs until
// every source has recorded min_cycles_per_source sawtooth cycles beyond the
// warmup (1% of the target, at least 10 cycles). Throws StarvationError when
// some source stops accumulating successful deliveries.
SimResult simulate(const SystemSpec& system, const SimOptions& opts);

// Supremum distance between two cdfs over an evaluation grid.
double ks_distance(const std::function<double(double)>& lhs,
                   const std::function<double(double)>& rhs, const Vec& grid);

}  // namespace aoif

#endif
