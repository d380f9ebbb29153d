#ifndef AOIF_MFQ_HPP
#define AOIF_MFQ_HPP

#include <iosfwd>
#include <vector>

#include "aoif/matrix.hpp"
#include "aoif/model.hpp"

namespace aoif {

// Background-state legend entry. Stage 1 tracks the tagged source's service
// phases at cycle start, stage 2 is the single waiting state, stage 3 tracks
// the in-service (source, phase) pair, stage 4 is the single drain state.
// `source` and `phase` are 1-based, zero when not applicable.
struct StateIndex {
    int stage;
    std::size_t source;
    std::size_t phase;
};

// Markov fluid queue (Q, Q-tilde, R): generator away from the boundary,
// generator at fluid level zero, and the diagonal drift rates. States are
// ordered with positive drifts first. Built specs additionally carry the
// stage legend of the age construction.
class MfqSpec {
  public:
    // General fluid queue without a stage legend (drifts may be any nonzero
    // reals, positive first). Validates generator row sums and signs.
    static MfqSpec raw(Matrix q, Matrix q_boundary, Vec drift);

    const Matrix& generator() const { return q_; }
    const Matrix& boundary_generator() const { return qb_; }
    const Vec& drift() const { return drift_; }
    std::size_t size() const { return q_.rows(); }
    std::size_t positive_drift_count() const { return positive_; }
    std::size_t negative_drift_count() const { return size() - positive_; }

    bool has_state_map() const { return !states_.empty(); }
    const std::vector<StateIndex>& states() const { return states_; }
    std::size_t tagged_order() const { return tagged_order_; }  // ell_1
    std::size_t total_order() const { return total_order_; }    // ell_T
    std::size_t stage2_index() const { return tagged_order_; }
    std::size_t stage3_begin(std::size_t source) const { return stage3_offsets_[source - 1]; }
    std::size_t stage4_index() const { return size() - 1; }

  private:
    friend MfqSpec build_mfq(const SystemSpec&);

    Matrix q_;
    Matrix qb_;
    Vec drift_;
    std::size_t positive_ = 0;
    std::vector<StateIndex> states_;
    std::size_t tagged_order_ = 0;
    std::size_t total_order_ = 0;
    std::vector<std::size_t> stage3_offsets_;
};

// Assembles the fluid queue of the age construction for the source at
// position 1. System size is ell_T + ell_1 + 2; drift is +1 everywhere
// except -1 in the final drain state.
MfqSpec build_mfq(const SystemSpec& system);

// Remark-2 reduction: for a homogeneous system under global preemption the
// tagged source's age laws coincide with those of an auxiliary two-source
// system whose second source superposes all others, giving a fluid queue of
// size 3*ell + 2 independent of N. Throws UnsupportedReductionError when the
// preconditions fail.
MfqSpec build_reduced_global(const SystemSpec& system);

bool reduction_applicable(const SystemSpec& system);

// Debug dump of Q, Q-tilde and R with the state legend, one CSV row per
// state per matrix.
void dump_generators_csv(const MfqSpec& spec, std::ostream& out);

}  // namespace aoif

#endif
