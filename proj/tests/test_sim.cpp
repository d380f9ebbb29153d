#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aoif/age.hpp"
#include "aoif/errors.hpp"
#include "aoif/sim.hpp"

using namespace aoif;

namespace {

SystemSpec single_source(double lambda, double mu, double p, double e = 0.0, double r = 0.0) {
    std::vector<SourceSpec> src{{lambda, PhaseType::exponential(mu), e, r}};
    Matrix pm(1, 1);
    pm(0, 0) = p;
    return SystemSpec(std::move(src), pm);
}

SystemSpec fig_system(double scv, PreemptionPreset preset) {
    const double rho = 2.0 / 3.0, lambda = 6.0;
    PhaseType service = PhaseType::fit_two_moments(rho / lambda, scv);
    std::vector<SourceSpec> sources{{1.0, service}, {2.0, service}, {3.0, service}};
    return SystemSpec(std::move(sources), preset_preemption(preset, 3));
}

}  // namespace

TEST_CASE("identical seeds give identical results") {
    SystemSpec sys = fig_system(0.5, PreemptionPreset::self_preemption);
    SimOptions opts;
    opts.min_cycles_per_source = 2000;
    opts.seed = 99;
    SimResult a = simulate(sys, opts);
    SimResult b = simulate(sys, opts);
    CHECK(a.horizon == b.horizon);
    CHECK(a.total_events == b.total_events);
    for (std::size_t n = 1; n <= 3; ++n) {
        CHECK(a.source(n).mean_aoi() == b.source(n).mean_aoi());
        CHECK(a.source(n).mean_paoi() == b.source(n).mean_paoi());
        REQUIRE(a.source(n).cycle_count() == b.source(n).cycle_count());
        for (std::size_t j = 0; j < 100; ++j) {
            CHECK(a.source(n).cycles()[j].reset_age == b.source(n).cycles()[j].reset_age);
            CHECK(a.source(n).cycles()[j].peak_age == b.source(n).cycles()[j].peak_age);
        }
    }
    opts.seed = 100;
    SimResult c = simulate(sys, opts);
    CHECK(c.source(1).mean_aoi() != a.source(1).mean_aoi());
}

TEST_CASE("hopeless sources raise starvation errors") {
    SystemSpec sys = single_source(1.0, 1.0, 0.0, 1.0, 1.0);  // every packet errors, always retx
    SimOptions opts;
    opts.min_cycles_per_source = 50;
    opts.max_events = 20000;
    CHECK_THROWS_AS(simulate(sys, opts), StarvationError);
    try {
        simulate(sys, opts);
    } catch (const StarvationError& e) {
        CHECK(e.source == 1);
    }
}

TEST_CASE("simulated means bracket the analytic values") {
    SimOptions opts;
    opts.min_cycles_per_source = 200000;
    opts.seed = 7;

    // non-preemptive single source
    SystemSpec np = single_source(1.0, 1.0, 0.0);
    SourceAgeResult exact_np = analyze_source(np, 1);
    SimResult sim_np = simulate(np, opts);
    CHECK(std::abs(sim_np.source(1).mean_aoi() - exact_np.mean_aoi) <=
          3.0 * sim_np.source(1).mean_aoi_ci());
    CHECK(std::abs(sim_np.source(1).mean_paoi() - exact_np.mean_paoi) <=
          3.0 * sim_np.source(1).mean_paoi_ci());

    // globally preemptive single source: mean AoI = 1/lambda + 1/mu
    SystemSpec gp = single_source(2.0, 1.5, 1.0);
    SimResult sim_gp = simulate(gp, opts);
    CHECK(std::abs(sim_gp.source(1).mean_aoi() - (1.0 / 2.0 + 1.0 / 1.5)) <=
          3.0 * sim_gp.source(1).mean_aoi_ci());

    // three sources, errors and retransmissions, self preemption
    SystemSpec tri = fig_system(0.25, PreemptionPreset::self_preemption);
    SimOptions tri_opts;
    tri_opts.min_cycles_per_source = 60000;
    tri_opts.seed = 21;
    SimResult sim_tri = simulate(tri, tri_opts);
    for (std::size_t n = 1; n <= 3; ++n) {
        SourceAgeResult exact = analyze_source(tri, n);
        CHECK(std::abs(sim_tri.source(n).mean_aoi() - exact.mean_aoi) <=
              3.5 * sim_tri.source(n).mean_aoi_ci());
        CHECK(std::abs(sim_tri.source(n).mean_paoi() - exact.mean_paoi) <=
              3.5 * sim_tri.source(n).mean_paoi_ci());
    }
}

TEST_CASE("cycle bookkeeping is internally consistent") {
    SystemSpec sys = fig_system(0.5, PreemptionPreset::global);
    SimOptions opts;
    opts.min_cycles_per_source = 5000;
    opts.debug_checks = true;  // asserts the per-cycle regenerative identity
    SimResult res = simulate(sys, opts);

    for (std::size_t n = 1; n <= 3; ++n) {
        const SourceSimStats& s = res.source(n);
        CHECK(s.cycle_count() == opts.min_cycles_per_source);
        CHECK(s.system_times().size() == s.cycle_count());

        // double entry: triangle areas vs trapezoid areas
        double tri = 0.0, trap = 0.0, horizon = 0.0;
        for (const CycleRecord& c : s.cycles()) {
            tri += 0.5 * (c.peak_age * c.peak_age - c.reset_age * c.reset_age);
            trap += 0.5 * (c.peak_age + c.reset_age) * (c.peak_age - c.reset_age);
            horizon += c.peak_age - c.reset_age;
        }
        CHECK(tri == doctest::Approx(trap).epsilon(1e-12));
        CHECK(s.mean_aoi() == doctest::Approx(tri / horizon).epsilon(1e-12));
        CHECK(s.horizon() == doctest::Approx(horizon).epsilon(1e-12));

        // the empirical age cdf is a proper cdf
        CHECK(s.aoi_cdf(0.0) == 0.0);
        double prev = 0.0;
        for (double x = 0.0; x < 8.0; x += 0.05) {
            const double v = s.aoi_cdf(x);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        CHECK(s.aoi_cdf(1e9) == doctest::Approx(1.0));
        CHECK(s.paoi_cdf(1e9) == doctest::Approx(1.0));
    }
}

TEST_CASE("empirical cdfs approach the analytic laws") {
    SystemSpec sys = fig_system(0.25, PreemptionPreset::global);
    SimOptions opts;
    opts.min_cycles_per_source = 50000;
    opts.seed = 5;
    SimResult sim = simulate(sys, opts);

    for (std::size_t n = 1; n <= 3; ++n) {
        SourceAgeResult exact = analyze_source(sys, n);
        Vec grid;
        const double hi = 8.0 * exact.mean_paoi;
        for (int i = 0; i <= 400; ++i) grid.push_back(hi * i / 400);

        const SourceSimStats& s = sim.source(n);
        const double ks_aoi = ks_distance([&](double x) { return s.aoi_cdf(x); },
                                          [&](double x) { return exact.aoi.cdf(x); }, grid);
        const double ks_paoi = ks_distance([&](double x) { return s.paoi_cdf(x); },
                                           [&](double x) { return exact.paoi.cdf(x); }, grid);
        CHECK(ks_aoi <= 0.02);
        CHECK(ks_paoi <= 0.02);
    }
}

TEST_CASE("ks distance basics") {
    Vec grid{0.0, 0.5, 1.0, 2.0};
    auto f = [](double x) { return std::min(1.0, x); };
    CHECK(ks_distance(f, f, grid) == 0.0);
    auto shifted = [&](double x) { return std::min(1.0, std::min(1.0, x) + 0.5); };
    CHECK(ks_distance(f, shifted, grid) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ks_distance(f, f, Vec{}), DomainError);
}
