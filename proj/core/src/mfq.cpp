#include "aoif/mfq.hpp"

#include <cmath>
#include <ostream>

#include "aoif/errors.hpp"
#include "aoif/numfmt.hpp"

namespace aoif {

namespace {

void validate_generator_pair(const Matrix& q, const Matrix& qb, const Vec& drift) {
    const std::size_t n = q.rows();
    if (!q.square() || !qb.square() || qb.rows() != n || drift.size() != n)
        throw DomainError("MfqSpec: inconsistent dimensions");
    const double scale = std::max(1.0, std::max(q.max_abs(), qb.max_abs()));
    bool seen_negative = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (drift[i] == 0.0) throw DomainError("MfqSpec: zero drift states are not supported");
        if (drift[i] < 0.0)
            seen_negative = true;
        else if (seen_negative)
            throw DomainError("MfqSpec: positive-drift states must precede negative-drift states");
        double row_q = 0.0, row_qb = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && (q(i, j) < 0.0 || qb(i, j) < 0.0))
                throw DomainError("MfqSpec: negative off-diagonal rate");
            row_q += q(i, j);
            row_qb += qb(i, j);
        }
        if (std::abs(row_q) > 1e-12 * scale || std::abs(row_qb) > 1e-12 * scale)
            throw DomainError("MfqSpec: generator row sums must vanish");
    }
}

}  // namespace

MfqSpec MfqSpec::raw(Matrix q, Matrix q_boundary, Vec drift) {
    validate_generator_pair(q, q_boundary, drift);
    MfqSpec spec;
    spec.q_ = std::move(q);
    spec.qb_ = std::move(q_boundary);
    spec.drift_ = std::move(drift);
    for (double r : spec.drift_)
        if (r > 0.0) ++spec.positive_;
    return spec;
}

MfqSpec build_mfq(const SystemSpec& system) {
    const std::size_t count = system.source_count();
    const std::size_t ell1 = system.source(1).service.order();
    const std::size_t ellt = system.total_order();
    const std::size_t n = ellt + ell1 + 2;
    const std::size_t stage2 = ell1;
    const std::size_t stage4 = n - 1;

    std::vector<std::size_t> offsets(count);
    {
        std::size_t at = stage2 + 1;
        for (std::size_t s = 0; s < count; ++s) {
            offsets[s] = at;
            at += system.source(s + 1).service.order();
        }
    }

    Matrix q(n, n);
    const SourceSpec& tagged = system.source(1);
    const Vec& sigma1 = tagged.service.sigma();
    const Vec& nu1 = tagged.service.exit_rates();
    const Matrix& s1 = tagged.service.sub_generator();
    const double lbar1 = system.preempting_rate(1);
    const double q1 = tagged.success_prob();
    const double e1 = tagged.error_prob;
    const double r1 = tagged.retx_prob;
    const double d1 = tagged.discard_prob();

    // Stage 1: tagged service phases; preemption and errored-discard drain
    // the cycle to stage 4, success moves to stage 2, errored-retransmit
    // restarts the phase process.
    for (std::size_t i = 0; i < ell1; ++i) {
        for (std::size_t j = 0; j < ell1; ++j)
            q(i, j) = s1(i, j) + e1 * r1 * nu1[i] * sigma1[j];
        q(i, i) -= lbar1;
        q(i, stage2) = q1 * nu1[i];
        q(i, stage4) = lbar1 + e1 * d1 * nu1[i];
    }

    // Stage 2: wait for the next arrival from any source.
    q(stage2, stage2) = -system.total_arrival_rate();
    for (std::size_t s = 1; s <= count; ++s) {
        const SourceSpec& src = system.source(s);
        const Vec& sig = src.service.sigma();
        for (std::size_t j = 0; j < sig.size(); ++j)
            q(stage2, offsets[s - 1] + j) = src.lambda * sig[j];
    }

    // Stage 3: one block row per in-service source.
    for (std::size_t s = 1; s <= count; ++s) {
        const SourceSpec& src = system.source(s);
        const std::size_t o = offsets[s - 1];
        const std::size_t m = src.service.order();
        const Vec& sig = src.service.sigma();
        const Vec& nu = src.service.exit_rates();
        const Matrix& sg = src.service.sub_generator();
        const double lbar = system.preempting_rate(s);
        const double qs = src.success_prob();
        const double es = src.error_prob;
        const double rs = src.retx_prob;
        const double ds = src.discard_prob();

        for (std::size_t i = 0; i < m; ++i) {
            // diagonal block: phase moves, same-source preemption restarts,
            // errored retransmission restarts
            for (std::size_t j = 0; j < m; ++j)
                q(o + i, o + j) = sg(i, j) +
                                  src.lambda * system.preemption()(s - 1, s - 1) * sig[j] +
                                  es * rs * nu[i] * sig[j];
            q(o + i, o + i) -= lbar;
            // cross-source preemption
            for (std::size_t t = 1; t <= count; ++t) {
                if (t == s) continue;
                const SourceSpec& other = system.source(t);
                const Vec& osig = other.service.sigma();
                const double rate = other.lambda * system.preemption()(s - 1, t - 1);
                for (std::size_t j = 0; j < osig.size(); ++j)
                    q(o + i, offsets[t - 1] + j) += rate * osig[j];
            }
            if (s == 1) {
                q(o + i, stage2) = es * ds * nu[i];   // errored + discarded
                q(o + i, stage4) = qs * nu[i];        // tagged success ends the cycle
            } else {
                q(o + i, stage2) = qs * nu[i] + es * ds * nu[i];
            }
        }
    }

    // Stage 4 row is zero away from the boundary; at the boundary the drain
    // state restarts the cycle through the tagged service's initial vector.
    Matrix qb = q;
    for (std::size_t j = 0; j < ell1; ++j) qb(stage4, j) = sigma1[j];
    qb(stage4, stage4) = -1.0;

    Vec drift(n, 1.0);
    drift[stage4] = -1.0;

    validate_generator_pair(q, qb, drift);

    MfqSpec spec;
    spec.q_ = std::move(q);
    spec.qb_ = std::move(qb);
    spec.drift_ = std::move(drift);
    spec.positive_ = n - 1;
    spec.tagged_order_ = ell1;
    spec.total_order_ = ellt;
    spec.stage3_offsets_ = std::move(offsets);
    spec.states_.reserve(n);
    for (std::size_t j = 0; j < ell1; ++j) spec.states_.push_back({1, 1, j + 1});
    spec.states_.push_back({2, 0, 0});
    for (std::size_t s = 1; s <= count; ++s)
        for (std::size_t j = 0; j < system.source(s).service.order(); ++j)
            spec.states_.push_back({3, s, j + 1});
    spec.states_.push_back({4, 0, 0});
    return spec;
}

bool reduction_applicable(const SystemSpec& system) {
    return system.source_count() >= 2 && system.homogeneous() &&
           system.preemption_is(PreemptionPreset::global);
}

MfqSpec build_reduced_global(const SystemSpec& system) {
    if (system.source_count() < 2)
        throw UnsupportedReductionError(
            "build_reduced_global: need at least two sources to superpose");
    if (!system.homogeneous())
        throw UnsupportedReductionError(
            "build_reduced_global: sources must share service, error and retransmission laws");
    if (!system.preemption_is(PreemptionPreset::global))
        throw UnsupportedReductionError("build_reduced_global: preemption matrix must be global");

    const SourceSpec& first = system.source(1);
    const double rest = system.total_arrival_rate() - first.lambda;
    std::vector<SourceSpec> aux{
        first,
        {rest, first.service, first.error_prob, first.retx_prob},
    };
    return build_mfq(SystemSpec(std::move(aux), preset_preemption(PreemptionPreset::global, 2)));
}

void dump_generators_csv(const MfqSpec& spec, std::ostream& out) {
    const std::size_t n = spec.size();
    out << "matrix,state,stage,source,phase";
    for (std::size_t j = 0; j < n; ++j) out << ",c" << j;
    out << "\n";
    auto legend = [&](std::size_t i) -> StateIndex {
        if (spec.has_state_map()) return spec.states()[i];
        return {0, 0, 0};
    };
    auto emit = [&](const char* name, auto entry) {
        for (std::size_t i = 0; i < n; ++i) {
            const StateIndex s = legend(i);
            out << name << ',' << i << ',' << s.stage << ',' << s.source << ',' << s.phase;
            for (std::size_t j = 0; j < n; ++j) out << ',' << format_double(entry(i, j));
            out << "\n";
        }
    };
    emit("Q", [&](std::size_t i, std::size_t j) { return spec.generator()(i, j); });
    emit("Qtilde", [&](std::size_t i, std::size_t j) { return spec.boundary_generator()(i, j); });
    emit("R", [&](std::size_t i, std::size_t j) { return i == j ? spec.drift()[i] : 0.0; });
}

}  // namespace aoif
