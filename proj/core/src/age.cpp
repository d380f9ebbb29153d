#include "aoif/age.hpp"

#include <cmath>

#include "aoif/errors.hpp"
#include "aoif/linalg.hpp"

namespace aoif {

MatrixExpDensity::MatrixExpDensity(Vec g, Matrix a, Vec h, AgeKind kind)
    : g_(std::move(g)), a_(std::move(a)), h_(std::move(h)), kind_(kind) {
    if (g_.size() != a_.rows() || h_.size() != a_.rows() || !a_.square())
        throw DomainError("MatrixExpDensity: inconsistent dimensions");
}

double MatrixExpDensity::pdf(double x) const {
    if (x < 0.0) throw DomainError("MatrixExpDensity::pdf: x must be non-negative");
    return dot(g_ * expm(a_ * x), h_);
}

double MatrixExpDensity::cdf(double x) const {
    if (x < 0.0) throw DomainError("MatrixExpDensity::cdf: x must be non-negative");
    const Vec y = solve_linear(a_, h_);
    return 1.0 + dot(g_ * expm(a_ * x), y);
}

double MatrixExpDensity::moment(int i) const {
    if (i < 1) throw DomainError("MatrixExpDensity::moment: order must be at least 1");
    const LuFactor lu(a_);
    Vec y = h_;
    double factorial = 1.0;
    for (int k = 1; k <= i + 1; ++k) {
        y = lu.solve(std::move(y));
        if (k <= i) factorial *= k;
    }
    const double sign = i % 2 == 0 ? -1.0 : 1.0;  // (-1)^(i+1)
    return sign * factorial * dot(g_, y);
}

namespace {

MatrixExpDensity censored_density(const SteadyStateSolution& solution, const Vec& selector,
                                  AgeKind kind) {
    const Vec h = solution.h * selector;
    const Vec y = solve_linear(solution.a, h);
    const double norm = -dot(solution.g, y);
    if (!(norm > 0.0))
        throw NumericalError("age law normalization is not positive", norm);
    return MatrixExpDensity(vec_scaled(solution.g, 1.0 / norm), solution.a, h, kind);
}

}  // namespace

MatrixExpDensity aoi_density(const SteadyStateSolution& solution, const MfqSpec& spec) {
    if (!spec.has_state_map())
        throw DomainError("aoi_density: spec carries no stage legend");
    Vec selector(spec.size(), 0.0);
    // stages 2 and 3 only
    const std::size_t begin = spec.stage2_index();
    const std::size_t end = spec.stage4_index();  // exclusive of the drain state
    for (std::size_t i = begin; i < end; ++i) selector[i] = 1.0;
    return censored_density(solution, selector, AgeKind::aoi);
}

MatrixExpDensity paoi_density(const SteadyStateSolution& solution, const MfqSpec& spec,
                              const SystemSpec& system) {
    if (!spec.has_state_map())
        throw DomainError("paoi_density: spec carries no stage legend");
    const SourceSpec& tagged = system.source(1);
    if (tagged.service.order() != spec.tagged_order())
        throw DomainError("paoi_density: system does not match the spec's tagged source");
    Vec selector(spec.size(), 0.0);
    const Vec& nu = tagged.service.exit_rates();
    const double q1 = tagged.success_prob();
    const std::size_t o = spec.stage3_begin(1);
    for (std::size_t j = 0; j < nu.size(); ++j) selector[o + j] = q1 * nu[j];
    return censored_density(solution, selector, AgeKind::paoi);
}

std::vector<GridPoint> evaluate_grid(const MatrixExpDensity& density, double x_max,
                                     std::size_t points) {
    if (!(x_max > 0.0)) throw DomainError("evaluate_grid: x_max must be positive");
    if (points < 2) throw DomainError("evaluate_grid: need at least two grid points");

    const double step = x_max / static_cast<double>(points - 1);
    const Matrix estep = expm(density.amat() * step);
    const Vec cdf_left = solve_linear(density.amat(), density.hvec());  // A^-1 h

    std::vector<GridPoint> out;
    out.reserve(points);
    Vec w = density.gvec();
    for (std::size_t k = 0; k < points; ++k) {
        const double x = step * static_cast<double>(k);
        out.push_back({x, dot(w, density.hvec()), 1.0 + dot(w, cdf_left)});
        if (k + 1 < points) w = w * estep;
    }
    return out;
}

SourceAgeResult analyze_source(const SystemSpec& system, std::size_t source,
                               const AnalysisOptions& opts) {
    const SystemSpec tagged = system.retag(source);
    const bool reduce = !opts.force_full_build && reduction_applicable(tagged);
    const MfqSpec spec = reduce ? build_reduced_global(tagged) : build_mfq(tagged);
    const SteadyStateSolution solution = solve_steady_state(spec, opts.solve);

    // The reduced spec describes the auxiliary two-source system; its tagged
    // source is the original one, which is all the extraction needs.
    SystemSpec aux = tagged;
    if (reduce) {
        const SourceSpec& first = tagged.source(1);
        std::vector<SourceSpec> pair{
            first,
            {tagged.total_arrival_rate() - first.lambda, first.service, first.error_prob,
             first.retx_prob}};
        aux = SystemSpec(std::move(pair), preset_preemption(PreemptionPreset::global, 2));
    }

    SourceAgeResult result{source,
                           aoi_density(solution, spec),
                           paoi_density(solution, spec, aux),
                           0.0,
                           0.0,
                           0.0,
                           0.0};
    result.mean_aoi = result.aoi.moment(1);
    result.m2_aoi = result.aoi.moment(2);
    result.mean_paoi = result.paoi.moment(1);
    result.m2_paoi = result.paoi.moment(2);
    return result;
}

}  // namespace aoif
