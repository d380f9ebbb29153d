#ifndef AOIF_REFERENCE_HPP
#define AOIF_REFERENCE_HPP

#include <string>
#include <vector>

#include "aoif/model.hpp"
#include "aoif/optimize.hpp"

namespace aoif {

// Published closed-form mean-AoI values for three-source M/M/1/1 systems,
// used as regression oracles. Table 1: global preemption without errors.
// Table 2: self preemption with per-source error probability and no
// retransmissions.
struct ReferenceRow {
    Vec lambdas;
    double rho;
    double error_prob;          // zero for table 1
    double mean_aoi[3];         // reference values, rounded to 4 decimals
    double tolerance[3];        // absolute match tolerance per cell
};

const std::vector<ReferenceRow>& reference_table1();
const std::vector<ReferenceRow>& reference_table2();

struct CellCheck {
    std::size_t row;            // 0-based row in the reference table
    std::size_t source;         // 1-based
    double expected;
    double computed;
    double error;
    double tolerance;
    bool ok;
};

// Recomputes one reference table through the analytic pipeline.
std::vector<CellCheck> check_reference_table(const std::vector<ReferenceRow>& rows,
                                             PreemptionPreset preset);

// Cost-versus-load comparison of the four preemption policies for the
// two-source exponential system with mu = 1, r = 0.9, e = 0.1. `uneven`
// selects the 1:2 traffic mix instead of the even one.
struct PolicyComparison {
    double alpha;
    bool uneven;
    double load;
    double cost_non_preemptive;
    double cost_self;
    double cost_global;
    double cost_optimum;
};

std::vector<PolicyComparison> policy_comparison_sweep(const Vec& alphas, const Vec& loads,
                                                      double resolution);

// Ordering requirements on one comparison row: optimum <= global <= self <=
// non-preemptive, and optimum == global (1e-6) when alpha = 1 with even mix.
std::vector<std::string> policy_comparison_violations(const PolicyComparison& row);

}  // namespace aoif

#endif
