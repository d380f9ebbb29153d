#include "aoif/reference.hpp"

#include <cmath>

#include "aoif/age.hpp"
#include "aoif/parallel.hpp"

namespace aoif {

namespace {

// Cells sit on the half-ulp boundary when the unrounded value ends in ...5
// (e.g. 1.5/16 = 0.09375 printed as 0.0938), so the 4-decimal tolerance
// carries a one-ulp allowance.
constexpr double kFourDigits = 5e-5 + 1e-12;

std::vector<ReferenceRow> make_table1() {
    auto row = [](Vec l, double rho, double a, double b, double c) {
        return ReferenceRow{std::move(l), rho, 0.0, {a, b, c},
                            {kFourDigits, kFourDigits, kFourDigits}};
    };
    return {
        row({1, 2, 3}, 0.50, 1.5000, 0.7500, 0.5000),
        row({1, 2, 3}, 0.75, 1.7500, 0.8750, 0.5833),
        row({1, 2, 3}, 1.00, 2.0000, 1.0000, 0.6667),
        row({1, 2, 3}, 1.25, 2.2500, 1.1250, 0.7500),
        row({1, 2, 3}, 1.50, 2.5000, 1.2500, 0.8333),
        row({1, 4, 16}, 0.50, 1.5000, 0.3750, 0.0938),
        row({1, 4, 16}, 0.75, 1.7500, 0.4375, 0.1094),
        row({1, 4, 16}, 1.00, 2.0000, 0.5000, 0.1250),
        row({1, 4, 16}, 1.25, 2.2500, 0.5625, 0.1406),
        row({1, 4, 16}, 1.50, 2.5000, 0.6250, 0.1563),
    };
}

std::vector<ReferenceRow> make_table2() {
    auto row = [](Vec l, double rho, double e, double a, double b, double c) {
        return ReferenceRow{std::move(l), rho, e, {a, b, c},
                            {kFourDigits, kFourDigits, kFourDigits}};
    };
    std::vector<ReferenceRow> rows = {
        row({1, 2, 3}, 0.5, 0.04, 1.5839, 0.7971, 0.5319),
        row({1, 2, 3}, 0.5, 0.10, 1.6880, 0.8492, 0.5667),
        row({1, 2, 3}, 0.5, 0.25, 2.0214, 1.0159, 0.6778),
        row({1, 2, 3}, 1.0, 0.04, 2.1429, 1.0833, 0.7222),
        row({1, 2, 3}, 1.0, 0.10, 2.2817, 1.1528, 0.7685),
        row({1, 2, 3}, 1.0, 0.25, 2.7262, 1.3750, 0.9167),
        row({1, 2, 3}, 1.5, 0.04, 2.7042, 1.3688, 0.9109),
        row({1, 2, 3}, 1.5, 0.10, 2.8778, 1.4556, 0.9688),
        row({1, 2, 3}, 1.5, 0.25, 3.4333, 1.7333, 1.1540),
        row({1, 4, 16}, 0.5, 0.04, 1.5699, 0.3965, 0.0990),
        row({1, 4, 16}, 0.5, 0.10, 1.6740, 0.4225, 0.1055),
        row({1, 4, 16}, 0.5, 0.25, 2.0074, 0.5059, 0.1264),
        row({1, 4, 16}, 1.0, 0.04, 2.1050, 0.5370, 0.1334),
        row({1, 4, 16}, 1.0, 0.10, 2.2439, 0.5717, 0.1421),
        row({1, 4, 16}, 1.0, 0.25, 2.6883, 0.6829, 0.1699),
        row({1, 4, 16}, 1.5, 0.04, 2.6423, 0.6780, 0.1675),
        row({1, 4, 16}, 1.5, 0.10, 2.8159, 0.7214, 0.1784),
        row({1, 4, 16}, 1.5, 0.25, 3.3714, 0.8603, 0.2131),
    };
    // The published comparison documents one source-2 cell at rho = 1.5,
    // e = 0.04 matching only to three digits; allow 5e-4 there.
    rows[6].tolerance[1] = 5e-4;
    return rows;
}

}  // namespace

const std::vector<ReferenceRow>& reference_table1() {
    static const std::vector<ReferenceRow> table = make_table1();
    return table;
}

const std::vector<ReferenceRow>& reference_table2() {
    static const std::vector<ReferenceRow> table = make_table2();
    return table;
}

std::vector<CellCheck> check_reference_table(const std::vector<ReferenceRow>& rows,
                                             PreemptionPreset preset) {
    std::vector<CellCheck> cells(rows.size() * 3);
    parallel_for(rows.size(), [&](std::size_t r) {
        const ReferenceRow& row = rows[r];
        double total = 0.0;
        for (double l : row.lambdas) total += l;
        const double mu = total / row.rho;
        std::vector<SourceSpec> sources;
        for (double l : row.lambdas)
            sources.push_back({l, PhaseType::exponential(mu), row.error_prob, 0.0});
        SystemSpec sys(std::move(sources), preset_preemption(preset, row.lambdas.size()));
        for (std::size_t n = 1; n <= 3; ++n) {
            const double computed = analyze_source(sys, n).mean_aoi;
            const double err = std::abs(computed - row.mean_aoi[n - 1]);
            cells[r * 3 + (n - 1)] = {r,       n,   row.mean_aoi[n - 1],      computed,
                                      err,     row.tolerance[n - 1],
                                      err <= row.tolerance[n - 1]};
        }
    });
    return cells;
}

std::vector<PolicyComparison> policy_comparison_sweep(const Vec& alphas, const Vec& loads,
                                                      double resolution) {
    struct Task {
        double alpha;
        bool uneven;
        double load;
    };
    std::vector<Task> tasks;
    for (double alpha : alphas)
        for (bool uneven : {false, true})
            for (double load : loads) tasks.push_back({alpha, uneven, load});

    std::vector<PolicyComparison> out(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& t = tasks[i];
        // mu = 1; rho_1 = rho_2 for the even mix, rho_2 = 2 rho_1 otherwise
        const double l1 = t.uneven ? t.load / 3.0 : t.load / 2.0;
        const double l2 = t.load - l1;
        std::vector<SourceSpec> sources{{l1, PhaseType::exponential(1.0), 0.1, 0.9},
                                        {l2, PhaseType::exponential(1.0), 0.1, 0.9}};
        SystemSpec base(std::move(sources), preset_preemption(PreemptionPreset::global, 2));
        const CostSpec cost = CostSpec::alpha_form(t.alpha);

        PolicyComparison row{t.alpha, t.uneven, t.load, 0, 0, 0, 0};
        row.cost_non_preemptive = evaluate_cost(
            base.with_preemption(preset_preemption(PreemptionPreset::non_preemptive, 2)), cost);
        row.cost_self = evaluate_cost(
            base.with_preemption(preset_preemption(PreemptionPreset::self_preemption, 2)), cost);
        row.cost_global = evaluate_cost(base, cost);
        row.cost_optimum = grid_search(base, cost, resolution).best_cost;
        out[i] = row;
    });
    return out;
}

std::vector<std::string> policy_comparison_violations(const PolicyComparison& row) {
    std::vector<std::string> bad;
    const double slack = 1e-9;
    if (row.cost_optimum > row.cost_global + slack) bad.push_back("optimum > global");
    if (row.cost_global > row.cost_self + slack) bad.push_back("global > self");
    if (row.cost_self > row.cost_non_preemptive + slack) bad.push_back("self > non_preemptive");
    if (row.alpha == 1.0 && !row.uneven &&
        std::abs(row.cost_optimum - row.cost_global) > 1e-6)
        bad.push_back("optimum != global at alpha 1 even mix");
    return bad;
}

}  // namespace aoif
