#include "aoif/phase_type.hpp"

#include <cmath>

#include "aoif/errors.hpp"
#include "aoif/linalg.hpp"

namespace aoif {

PhaseType::PhaseType(Vec sigma, Matrix sub_generator)
    : sigma_(std::move(sigma)), s_(std::move(sub_generator)) {
    const std::size_t m = sigma_.size();
    if (m == 0) throw DomainError("PhaseType: order must be at least 1");
    if (s_.rows() != m || s_.cols() != m)
        throw DomainError("PhaseType: sigma and S dimensions disagree");

    double sum = 0.0;
    for (double p : sigma_) {
        if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
            throw DomainError("PhaseType: sigma entries must lie in [0,1]");
        sum += p;
    }
    if (sum > 1.0 + 1e-12) throw DomainError("PhaseType: sigma must sum to at most 1");
    sigma0_ = std::max(0.0, 1.0 - sum);

    const double scale = std::max(1.0, s_.max_abs());
    nu_.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double v = s_(i, j);
            if (!std::isfinite(v)) throw DomainError("PhaseType: S has non-finite entries");
            if (i == j) {
                if (v >= 0.0) throw DomainError("PhaseType: S diagonal must be strictly negative");
            } else if (v < 0.0) {
                throw DomainError("PhaseType: S off-diagonal must be non-negative");
            }
            row += v;
        }
        if (row > 1e-12 * scale)
            throw DomainError("PhaseType: S row sums must be non-positive");
        nu_[i] = std::max(0.0, -row);
    }
    try {
        LuFactor check(s_);
    } catch (const SingularMatrixError&) {
        throw DomainError("PhaseType: S is singular, some phase never reaches absorption");
    }
}

PhaseType PhaseType::exponential(double rate) {
    if (rate <= 0.0) throw DomainError("PhaseType::exponential: rate must be positive");
    Matrix s(1, 1);
    s(0, 0) = -rate;
    return PhaseType(Vec{1.0}, s);
}

PhaseType PhaseType::erlang(double mean, std::size_t order) {
    if (mean <= 0.0) throw DomainError("PhaseType::erlang: mean must be positive");
    if (order == 0) throw DomainError("PhaseType::erlang: order must be at least 1");
    const double rate = static_cast<double>(order) / mean;
    Matrix s(order, order);
    for (std::size_t i = 0; i < order; ++i) {
        s(i, i) = -rate;
        if (i + 1 < order) s(i, i + 1) = rate;
    }
    Vec sigma(order, 0.0);
    sigma[0] = 1.0;
    return PhaseType(std::move(sigma), std::move(s));
}

PhaseType PhaseType::hyperexp_balanced(double mean, double scv) {
    if (mean <= 0.0) throw DomainError("PhaseType::hyperexp_balanced: mean must be positive");
    if (scv < 1.0)
        throw DomainError("PhaseType::hyperexp_balanced: scv must be at least 1");
    const double p1 = 0.5 * (1.0 + std::sqrt((scv - 1.0) / (scv + 1.0)));
    const double p2 = 1.0 - p1;
    const double mu1 = 2.0 * p1 / mean;
    const double mu2 = 2.0 * p2 / mean;
    Matrix s(2, 2);
    s(0, 0) = -mu1;
    s(1, 1) = -mu2;
    return PhaseType(Vec{p1, p2}, std::move(s));
}

PhaseType PhaseType::fit_two_moments(double mean, double scv) {
    if (mean <= 0.0) throw DomainError("ph_fit_two_moments: mean must be positive");
    if (scv <= 0.0) throw DomainError("ph_fit_two_moments: scv must be positive");

    const double inv = 1.0 / scv;
    const double rounded = std::round(inv);
    if (rounded >= 1.0 && std::abs(inv - rounded) < 1e-9)
        return erlang(mean, static_cast<std::size_t>(rounded));
    if (scv > 1.0) return hyperexp_balanced(mean, scv);

    // Mixture of Erlang(j) and Erlang(j+1) with a common rate, weights from
    // the classical two-moment recipe.
    const auto j = static_cast<std::size_t>(std::floor(inv));
    const double k = static_cast<double>(j + 1);
    const double p = (k * scv - std::sqrt(k * (1.0 + scv) - k * k * scv)) / (1.0 + scv);
    const double rate = (k - p) / mean;

    const std::size_t m = j + 1;
    Matrix s(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        s(i, i) = -rate;
        if (i + 1 < m) s(i, i + 1) = rate;
    }
    Vec sigma(m, 0.0);
    sigma[0] = 1.0 - p;  // full chain: Erlang(j+1)
    sigma[1] = p;        // skip one stage: Erlang(j)
    return PhaseType(std::move(sigma), std::move(s));
}

double PhaseType::pdf(double x) const {
    if (x < 0.0) throw DomainError("PhaseType::pdf: x must be non-negative");
    const Vec w = sigma_ * expm(s_ * x);
    return dot(w, nu_);
}

double PhaseType::cdf(double x) const {
    if (x < 0.0) throw DomainError("PhaseType::cdf: x must be non-negative");
    const Vec w = sigma_ * expm(s_ * x);
    return 1.0 - vec_sum(w);
}

double PhaseType::moment(int k) const {
    if (k < 1) throw DomainError("PhaseType::moment: k must be at least 1");
    const LuFactor lu(s_);
    Vec y(order(), 1.0);
    double factorial = 1.0;
    for (int i = 1; i <= k; ++i) {
        y = lu.solve(std::move(y));
        factorial *= i;
    }
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    return sign * factorial * dot(sigma_, y);
}

double PhaseType::scv() const {
    const double m1 = moment(1);
    return moment(2) / (m1 * m1) - 1.0;
}

double PhaseType::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo;

    // Initial phase from [sigma, sigma0].
    double u = unif(rng);
    std::size_t phase = order();  // sentinel: absorbed immediately
    double acc = 0.0;
    for (std::size_t i = 0; i < order(); ++i) {
        acc += sigma_[i];
        if (u < acc) {
            phase = i;
            break;
        }
    }
    double t = 0.0;
    while (phase < order()) {
        const double total = -s_(phase, phase);
        t += expo(rng) / total;
        double v = unif(rng) * total;
        std::size_t next = order();  // absorption unless a transition wins
        for (std::size_t j = 0; j < order(); ++j) {
            if (j == phase) continue;
            v -= s_(phase, j);
            if (v < 0.0) {
                next = j;
                break;
            }
        }
        phase = next;
    }
    return t;
}

bool PhaseType::same_as(const PhaseType& other, double tol) const {
    if (order() != other.order()) return false;
    for (std::size_t i = 0; i < order(); ++i)
        if (std::abs(sigma_[i] - other.sigma_[i]) > tol) return false;
    for (std::size_t i = 0; i < order(); ++i)
        for (std::size_t j = 0; j < order(); ++j)
            if (std::abs(s_(i, j) - other.s_(i, j)) > tol) return false;
    return true;
}

}  // namespace aoif
