#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "aoif/age.hpp"
#include "aoif/errors.hpp"

using namespace aoif;

namespace {

SystemSpec mm11_system(std::vector<double> lambdas, double rho, PreemptionPreset preset,
                       double e = 0.0, double r = 0.0) {
    double total = 0.0;
    for (double l : lambdas) total += l;
    const double mu = total / rho;
    std::vector<SourceSpec> sources;
    for (double l : lambdas) sources.push_back({l, PhaseType::exponential(mu), e, r});
    return SystemSpec(std::move(sources), preset_preemption(preset, lambdas.size()));
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Panelled so that the opening Simpson points cannot miss the mass near the
// origin.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int panels = 40) {
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + (b - a) * k / panels;
        const double hi = a + (b - a) * (k + 1) / panels;
        const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(f, lo, hi, fa, fm, fb, whole, tol / panels, 24);
    }
    return total;
}

}  // namespace

TEST_CASE("mean AoI matches the published global-preemption table") {
    struct Row {
        std::vector<double> lambdas;
        double rho;
        double expect[3];
    };
    // Source: reference closed forms (1+rho)/lambda_n, tabulated to 4 digits.
    const Row rows[] = {
        {{1, 2, 3}, 0.50, {1.5000, 0.7500, 0.5000}},
        {{1, 2, 3}, 0.75, {1.7500, 0.8750, 0.5833}},
        {{1, 2, 3}, 1.00, {2.0000, 1.0000, 0.6667}},
        {{1, 2, 3}, 1.50, {2.5000, 1.2500, 0.8333}},
        {{1, 4, 16}, 0.50, {1.5000, 0.3750, 0.0938}},
        {{1, 4, 16}, 1.00, {2.0000, 0.5000, 0.1250}},
        {{1, 4, 16}, 1.50, {2.5000, 0.6250, 0.1563}},
    };
    for (const Row& row : rows) {
        SystemSpec sys = mm11_system(row.lambdas, row.rho, PreemptionPreset::global);
        for (std::size_t n = 1; n <= 3; ++n) {
            SourceAgeResult res = analyze_source(sys, n);
            // published cells sit exactly on the half-ulp boundary when the
            // true value ends in ...5, so absorb double roundoff
            CHECK(std::abs(res.mean_aoi - row.expect[n - 1]) <= 5e-5 + 1e-12);
            // exact closed form to solver accuracy
            CHECK(res.mean_aoi ==
                  doctest::Approx((1.0 + row.rho) / row.lambdas[n - 1]).epsilon(1e-9));
        }
    }
}

TEST_CASE("mean AoI matches the published self-preemption table with errors") {
    // self preemption, r = 0, homogeneous exponential service
    SystemSpec a = mm11_system({1, 2, 3}, 0.5, PreemptionPreset::self_preemption, 0.04, 0.0);
    CHECK(std::abs(analyze_source(a, 1).mean_aoi - 1.5839) <= 5e-5);
    CHECK(std::abs(analyze_source(a, 2).mean_aoi - 0.7971) <= 5e-5);
    CHECK(std::abs(analyze_source(a, 3).mean_aoi - 0.5319) <= 5e-5);

    SystemSpec b = mm11_system({1, 4, 16}, 1.5, PreemptionPreset::self_preemption, 0.25, 0.0);
    CHECK(std::abs(analyze_source(b, 1).mean_aoi - 3.3714) <= 5e-5);
    CHECK(std::abs(analyze_source(b, 2).mean_aoi - 0.8603) <= 5e-5);
    CHECK(std::abs(analyze_source(b, 3).mean_aoi - 0.2131) <= 5e-5);
}

TEST_CASE("single-source preemptive closed form") {
    // N = 1 with global preemption: E[Delta] = 1/lambda + 1/mu
    for (double lambda : {0.5, 1.0, 2.0}) {
        for (double mu : {1.0, 3.0}) {
            std::vector<SourceSpec> src{{lambda, PhaseType::exponential(mu)}};
            SystemSpec sys(std::move(src), preset_preemption(PreemptionPreset::global, 1));
            SourceAgeResult res = analyze_source(sys, 1);
            CHECK(res.mean_aoi == doctest::Approx(1.0 / lambda + 1.0 / mu).epsilon(1e-10));
        }
    }
}

TEST_CASE("densities normalize with no atom at the origin") {
    SystemSpec sys = mm11_system({1, 2, 3}, 0.5, PreemptionPreset::self_preemption, 0.1, 0.3);
    SourceAgeResult res = analyze_source(sys, 2);
    for (const MatrixExpDensity* d : {&res.aoi, &res.paoi}) {
        CHECK(d->cdf(0.0) == doctest::Approx(0.0).epsilon(1e-10));
        // normalization: -g A^-1 h = 1 means cdf tends to one
        CHECK(d->cdf(60.0 * d->moment(1)) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(d->moment(2) >= d->moment(1) * d->moment(1));  // non-negative variance
    }
    CHECK(res.mean_paoi >= res.mean_aoi);
}

TEST_CASE("first moment agrees with quadrature") {
    std::mt19937 rng(909);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t n = 1 + rep % 3;
        std::vector<SourceSpec> sources;
        for (std::size_t i = 0; i < n; ++i)
            sources.push_back({0.3 + 2.0 * unif(rng),
                               PhaseType::fit_two_moments(0.2 + unif(rng), 0.4 + 1.5 * unif(rng)),
                               0.4 * unif(rng), 0.8 * unif(rng)});
        Matrix p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) = unif(rng);
        SystemSpec sys(std::move(sources), std::move(p));
        SourceAgeResult res = analyze_source(sys, 1);

        for (const MatrixExpDensity* d : {&res.aoi, &res.paoi}) {
            const double mean = d->moment(1);
            const double hi = 80.0 * mean;
            const double quad =
                integrate([&](double x) { return x * d->pdf(x); }, 0.0, hi, 1e-10);
            CHECK(quad == doctest::Approx(mean).epsilon(1e-6));
        }
    }
}

TEST_CASE("grid evaluation is consistent") {
    SystemSpec sys = mm11_system({1, 2}, 0.8, PreemptionPreset::global);
    SourceAgeResult res = analyze_source(sys, 1);
    const double mean = res.mean_aoi;

    const auto grid = evaluate_grid(res.aoi, 50.0 * mean, 4000);
    REQUIRE(grid.size() == 4000);
    CHECK(grid.front().x == 0.0);
    CHECK(grid.front().cdf == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(grid.back().cdf >= 0.999);

    double trapezoid = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK(grid[k].cdf >= grid[k - 1].cdf - 1e-12);
        CHECK(grid[k].pdf >= -1e-10);
        trapezoid += 0.5 * (grid[k].pdf + grid[k - 1].pdf) * (grid[k].x - grid[k - 1].x);
    }
    CHECK(trapezoid == doctest::Approx(grid.back().cdf).epsilon(1e-4));

    // grid values agree with the pointwise evaluators
    const std::size_t probe = 1234;
    CHECK(grid[probe].pdf == doctest::Approx(res.aoi.pdf(grid[probe].x)).epsilon(1e-9));
    CHECK(grid[probe].cdf == doctest::Approx(res.aoi.cdf(grid[probe].x)).epsilon(1e-9));

    CHECK_THROWS_AS(evaluate_grid(res.aoi, 0.0, 100), DomainError);
    CHECK_THROWS_AS(evaluate_grid(res.aoi, 1.0, 1), DomainError);
}

TEST_CASE("reduced construction reproduces the full analysis") {
    std::mt19937 rng(434);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 2 + rep * 2;
        PhaseType service = PhaseType::fit_two_moments(0.2 + unif(rng), 0.5 + unif(rng));
        std::vector<SourceSpec> sources;
        for (std::size_t i = 0; i < n; ++i)
            sources.push_back({0.3 + 2.0 * unif(rng), service, 0.2 * unif(rng), 0.5 * unif(rng)});
        SystemSpec sys(std::move(sources), preset_preemption(PreemptionPreset::global, n));

        AnalysisOptions full;
        full.force_full_build = true;
        SourceAgeResult reduced = analyze_source(sys, 1);
        SourceAgeResult direct = analyze_source(sys, 1, full);
        CHECK(reduced.mean_aoi == doctest::Approx(direct.mean_aoi).epsilon(1e-9));
        CHECK(reduced.mean_paoi == doctest::Approx(direct.mean_paoi).epsilon(1e-9));
        CHECK(reduced.m2_aoi == doctest::Approx(direct.m2_aoi).epsilon(1e-9));
    }
}
