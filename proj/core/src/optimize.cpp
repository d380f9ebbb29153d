#include "aoif/optimize.hpp"

#include <array>
#include <cmath>

#include "aoif/errors.hpp"
#include "aoif/parallel.hpp"

namespace aoif {

double evaluate_cost(const SystemSpec& system, const CostSpec& cost) {
    const std::size_t n = system.source_count();
    if (cost.weights.size() != n)
        throw DomainError("evaluate_cost: weight vector must have one entry per source");
    double positive = 0.0;
    for (double w : cost.weights) {
        if (w < 0.0) throw DomainError("evaluate_cost: weights must be non-negative");
        positive += w;
    }
    if (positive == 0.0) throw DomainError("evaluate_cost: weights must not all vanish");

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cost.weights[i] == 0.0) continue;
        const SourceAgeResult res = analyze_source(system, i + 1);
        total += cost.weights[i] *
                 (cost.metric == CostSpec::Metric::mean_aoi ? res.mean_aoi : res.mean_paoi);
    }
    return total;
}

GridResult grid_search(const SystemSpec& base_system, const CostSpec& cost, double resolution) {
    if (base_system.source_count() != 2)
        throw DomainError("grid_search: preemption search is defined for two-source systems");
    if (!(resolution > 0.0 && resolution <= 1.0))
        throw DomainError("grid_search: resolution must lie in (0, 1]");
    const double steps_real = 1.0 / resolution;
    const auto steps = static_cast<std::size_t>(std::round(steps_real));
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9)
        throw DomainError("grid_search: resolution must divide 1");

    const std::size_t per_axis = steps + 1;
    const std::size_t total = per_axis * per_axis * per_axis;
    auto level = [&](std::size_t i) { return static_cast<double>(i) / static_cast<double>(steps); };

    GridResult result;
    result.lattice.resize(total);
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t id = idx / (per_axis * per_axis);
        const std::size_t i12 = (idx / per_axis) % per_axis;
        const std::size_t i21 = idx % per_axis;
        const double pd = level(id), p12 = level(i12), p21 = level(i21);
        Matrix p(2, 2);
        p(0, 0) = pd;
        p(0, 1) = p12;
        p(1, 0) = p21;
        p(1, 1) = pd;
        const double c = evaluate_cost(base_system.with_preemption(std::move(p)), cost);
        result.lattice[idx] = {pd, p12, p21, c};
    });

    // Deterministic scan; ties resolve to the smallest (P_d, P21, P12).
    const GridResult::Entry* best = &result.lattice.front();
    for (const GridResult::Entry& e : result.lattice) {
        if (e.cost < best->cost)
            best = &e;
        else if (e.cost == best->cost) {
            const auto key = [](const GridResult::Entry& x) {
                return std::array<double, 3>{x.p_diag, x.p21, x.p12};
            };
            if (key(e) < key(*best)) best = &e;
        }
    }
    result.best_diag = best->p_diag;
    result.best_p12 = best->p12;
    result.best_p21 = best->p21;
    result.best_cost = best->cost;
    return result;
}

std::vector<SweepRow> policy_sweep(const SystemSpec& base_system, const CostSpec& cost,
                                   const Vec& loads, const std::vector<Policy>& policies,
                                   double resolution) {
    if (loads.empty()) throw DomainError("policy_sweep: no loads given");
    const double base_load = base_system.total_load();
    const std::size_t n_src = base_system.source_count();
    std::vector<SweepRow> rows;
    rows.reserve(loads.size() * policies.size());
    for (double load : loads) {
        if (!(load > 0.0)) throw DomainError("policy_sweep: loads must be positive");
        const SystemSpec scaled = base_system.with_scaled_rates(load / base_load);
        for (Policy policy : policies) {
            double c = 0.0;
            switch (policy) {
                case Policy::non_preemptive:
                    c = evaluate_cost(scaled.with_preemption(preset_preemption(
                                          PreemptionPreset::non_preemptive, n_src)),
                                      cost);
                    break;
                case Policy::self_preemption:
                    c = evaluate_cost(scaled.with_preemption(preset_preemption(
                                          PreemptionPreset::self_preemption, n_src)),
                                      cost);
                    break;
                case Policy::global:
                    c = evaluate_cost(
                        scaled.with_preemption(preset_preemption(PreemptionPreset::global, n_src)),
                        cost);
                    break;
                case Policy::prioritized:
                    c = evaluate_cost(scaled.with_preemption(preset_preemption(
                                          PreemptionPreset::prioritized, n_src)),
                                      cost);
                    break;
                case Policy::optimum:
                    c = grid_search(scaled, cost, resolution).best_cost;
                    break;
            }
            rows.push_back({load, policy, c});
        }
    }
    return rows;
}

}  // namespace aoif
