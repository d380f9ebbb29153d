#ifndef AOIF_OPTIMIZE_HPP
#define AOIF_OPTIMIZE_HPP

#include <vector>

#include "aoif/age.hpp"
#include "aoif/model.hpp"

namespace aoif {

// Weighted-age objective: sum of w_n times the chosen per-source mean. The
// two-source study weights source 1 fully and source 2 by alpha.
struct CostSpec {
    enum class Metric { mean_aoi, mean_paoi };
    Vec weights;
    Metric metric = Metric::mean_aoi;

    static CostSpec alpha_form(double alpha) { return {{1.0, alpha}, Metric::mean_aoi}; }
};

double evaluate_cost(const SystemSpec& system, const CostSpec& cost);

struct GridResult {
    struct Entry {
        double p_diag, p12, p21, cost;
    };
    double best_diag = 0.0, best_p12 = 0.0, best_p21 = 0.0;
    double best_cost = 0.0;
    std::vector<Entry> lattice;  // full table, (p_diag, p12, p21) lexicographic order
};

// Exhaustive search over P = [[P_d, P12], [P21, P_d]] with every parameter
// on the lattice {0, res, ..., 1}. Ties resolve to the lexicographically
// smallest (P_d, P21, P12) triple. Lattice points evaluate in parallel.
GridResult grid_search(const SystemSpec& base_system, const CostSpec& cost, double resolution);

enum class Policy { non_preemptive, self_preemption, global, prioritized, optimum };

struct SweepRow {
    double load;
    Policy policy;
    double cost;
};

// Cost comparison across system loads: arrival rates scale with fixed
// proportions to hit each load, services stay put. The optimum policy runs a
// grid search at the given resolution per load.
std::vector<SweepRow> policy_sweep(const SystemSpec& base_system, const CostSpec& cost,
                                   const Vec& loads, const std::vector<Policy>& policies,
                                   double resolution = 0.05);

}  // namespace aoif

#endif
