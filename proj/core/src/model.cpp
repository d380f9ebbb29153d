#include "aoif/model.hpp"

#include <cmath>

#include "aoif/errors.hpp"

namespace aoif {

Matrix preset_preemption(PreemptionPreset kind, std::size_t n) {
    if (n == 0) throw DomainError("preset_preemption: need at least one source");
    Matrix p(n, n);
    switch (kind) {
        case PreemptionPreset::non_preemptive:
            break;
        case PreemptionPreset::global:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) p(i, j) = 1.0;
            break;
        case PreemptionPreset::self_preemption:
            for (std::size_t i = 0; i < n; ++i) p(i, i) = 1.0;
            break;
        case PreemptionPreset::prioritized:
            // arriving class-i preempts class-j in service iff i <= j:
            // P[n][m] = 1 for m <= n, i.e. at and below the main diagonal
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j <= i; ++j) p(i, j) = 1.0;
            break;
    }
    return p;
}

SystemSpec::SystemSpec(std::vector<SourceSpec> sources, Matrix preemption, std::size_t tagged)
    : sources_(std::move(sources)), preemption_(std::move(preemption)), tagged_(tagged) {
    const std::size_t n = sources_.size();
    if (n == 0) throw ConfigError("sources", "at least one source is required");
    if (preemption_.rows() != n || preemption_.cols() != n)
        throw ConfigError("preemption",
                          "matrix must be " + std::to_string(n) + "x" + std::to_string(n) +
                              ", got " + std::to_string(preemption_.rows()) + "x" +
                              std::to_string(preemption_.cols()));
    if (tagged_ < 1 || tagged_ > n)
        throw ConfigError("tagged", "source index out of range 1.." + std::to_string(n));

    preempting_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string base = "sources[" + std::to_string(i + 1) + "]";
        const SourceSpec& s = sources_[i];
        if (!(s.lambda > 0.0) || !std::isfinite(s.lambda))
            throw ConfigError(base + ".lambda", "arrival rate must be positive");
        if (!(s.error_prob >= 0.0 && s.error_prob <= 1.0))
            throw ConfigError(base + ".error_prob", "probability must lie in [0,1]");
        if (!(s.retx_prob >= 0.0 && s.retx_prob <= 1.0))
            throw ConfigError(base + ".retx_prob", "probability must lie in [0,1]");
        if (s.service.mass_at_zero() > 1e-12)
            throw ConfigError(base + ".service",
                              "service distribution must not carry probability mass at zero");
        total_arrival_rate_ += s.lambda;
        total_load_ += s.lambda * s.service.mean();
        total_order_ += s.service.order();
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double p = preemption_(i, j);
            if (!(p >= 0.0 && p <= 1.0))
                throw ConfigError("preemption[" + std::to_string(i + 1) + "][" +
                                      std::to_string(j + 1) + "]",
                                  "probability must lie in [0,1]");
            preempting_[i] += sources_[j].lambda * p;
        }
}

double SystemSpec::load(std::size_t n) const {
    const SourceSpec& s = source(n);
    return s.lambda * s.service.mean();
}

SystemSpec SystemSpec::retag(std::size_t n) const {
    const std::size_t count = source_count();
    if (n < 1 || n > count) throw ConfigError("tagged", "source index out of range");
    if (n == 1) return *this;

    // permutation: new position k holds old source perm[k]
    std::vector<std::size_t> perm;
    perm.push_back(n - 1);
    for (std::size_t i = 0; i < count; ++i)
        if (i != n - 1) perm.push_back(i);

    std::vector<SourceSpec> reordered;
    reordered.reserve(count);
    for (std::size_t k = 0; k < count; ++k) reordered.push_back(sources_[perm[k]]);
    Matrix p(count, count);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) p(i, j) = preemption_(perm[i], perm[j]);
    return SystemSpec(std::move(reordered), std::move(p), 1);
}

bool SystemSpec::homogeneous(double tol) const {
    const SourceSpec& first = sources_.front();
    for (std::size_t i = 1; i < sources_.size(); ++i) {
        const SourceSpec& s = sources_[i];
        if (!s.service.same_as(first.service, tol)) return false;
        if (std::abs(s.error_prob - first.error_prob) > tol) return false;
        if (std::abs(s.retx_prob - first.retx_prob) > tol) return false;
    }
    return true;
}

bool SystemSpec::preemption_is(PreemptionPreset kind, double tol) const {
    const Matrix want = preset_preemption(kind, source_count());
    for (std::size_t i = 0; i < want.rows(); ++i)
        for (std::size_t j = 0; j < want.cols(); ++j)
            if (std::abs(preemption_(i, j) - want(i, j)) > tol) return false;
    return true;
}

SystemSpec SystemSpec::with_scaled_rates(double factor) const {
    if (!(factor > 0.0)) throw DomainError("with_scaled_rates: factor must be positive");
    std::vector<SourceSpec> scaled = sources_;
    for (SourceSpec& s : scaled) s.lambda *= factor;
    return SystemSpec(std::move(scaled), preemption_, tagged_);
}

SystemSpec SystemSpec::with_preemption(Matrix p) const {
    return SystemSpec(sources_, std::move(p), tagged_);
}

SystemSpec SystemSpec::with_tagged(std::size_t n) const {
    return SystemSpec(sources_, preemption_, n);
}

}  // namespace aoif
