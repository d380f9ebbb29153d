#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aoif/errors.hpp"
#include "aoif/phase_type.hpp"

using namespace aoif;

namespace {

// Closed-form Erlang cdf, used as an oracle against the matrix-exponential
// evaluation path.
double erlang_cdf(double x, std::size_t order, double rate) {
    double term = 1.0;
    double sum = 1.0;
    for (std::size_t i = 1; i < order; ++i) {
        term *= rate * x / static_cast<double>(i);
        sum += term;
    }
    return 1.0 - std::exp(-rate * x) * sum;
}

}  // namespace

TEST_CASE("exponential pdf and cdf") {
    PhaseType d = PhaseType::exponential(1.0);
    CHECK(d.pdf(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(d.cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(d.cdf(0.0) == doctest::Approx(0.0));
    CHECK(d.mass_at_zero() == 0.0);
    CHECK_THROWS_AS(d.pdf(-0.1), DomainError);
    CHECK_THROWS_AS(d.cdf(-1e-9), DomainError);
}

TEST_CASE("erlang cdf against closed form") {
    PhaseType d = PhaseType::erlang(1.0, 2);
    CHECK(d.cdf(1.0) == doctest::Approx(1.0 - 3.0 * std::exp(-2.0)).epsilon(1e-12));
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.0})
        CHECK(d.cdf(x) == doctest::Approx(erlang_cdf(x, 2, 2.0)).epsilon(1e-11));

    PhaseType e4 = PhaseType::erlang(0.5, 4);
    for (double x : {0.05, 0.2, 0.5, 1.5})
        CHECK(e4.cdf(x) == doctest::Approx(erlang_cdf(x, 4, 8.0)).epsilon(1e-11));
}

TEST_CASE("moments of standard shapes") {
    CHECK(PhaseType::exponential(2.5).moment(1) == doctest::Approx(0.4).epsilon(1e-13));
    PhaseType e2 = PhaseType::erlang(1.0, 2);
    CHECK(e2.moment(1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e2.moment(2) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(e2.scv() == doctest::Approx(0.5).epsilon(1e-12));

    PhaseType h = PhaseType::fit_two_moments(1.0, 2.0);
    CHECK(h.moment(2) == doctest::Approx(3.0).epsilon(1e-12));  // (scv+1) mean^2
}

TEST_CASE("two-moment fit picks the documented branches") {
    PhaseType e4 = PhaseType::fit_two_moments(0.5, 0.25);
    CHECK(e4.order() == 4);
    CHECK(e4.sub_generator()(0, 0) == doctest::Approx(-8.0));
    CHECK(e4.sub_generator()(0, 1) == doctest::Approx(8.0));

    PhaseType ex = PhaseType::fit_two_moments(1.0, 1.0);
    CHECK(ex.order() == 1);
    CHECK(ex.sub_generator()(0, 0) == doctest::Approx(-1.0));

    PhaseType h = PhaseType::fit_two_moments(1.0, 2.0);
    CHECK(h.order() == 2);
    CHECK(h.sigma()[0] == doctest::Approx(0.788675).epsilon(1e-6));
    CHECK(h.sigma()[1] == doctest::Approx(0.211325).epsilon(1e-6));
    CHECK(-h.sub_generator()(0, 0) == doctest::Approx(1.577350).epsilon(1e-6));
    CHECK(-h.sub_generator()(1, 1) == doctest::Approx(0.422650).epsilon(1e-6));

    CHECK_THROWS_AS(PhaseType::fit_two_moments(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(PhaseType::fit_two_moments(1.0, -0.5), DomainError);
}

TEST_CASE("two-moment fit round trip") {
    for (double mean : {0.1, 1.0, 10.0}) {
        for (double scv = 0.05; scv <= 4.0 + 1e-12; scv += 0.05) {
            PhaseType d = PhaseType::fit_two_moments(mean, scv);
            CHECK(d.moment(1) == doctest::Approx(mean).epsilon(1e-10));
            CHECK(d.scv() == doctest::Approx(scv).epsilon(1e-10));
        }
    }
}

TEST_CASE("construction validation is strict") {
    // positive row sum
    Matrix bad(1, 1);
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(PhaseType(Vec{1.0}, bad), DomainError);

    // row sum above tolerance
    Matrix leak(2, 2);
    leak(0, 0) = -1.0;
    leak(0, 1) = 1.0 + 1e-9;
    leak(1, 1) = -1.0;
    CHECK_THROWS_AS(PhaseType(Vec{0.5, 0.5}, leak), DomainError);

    // negative off-diagonal
    Matrix neg(2, 2);
    neg(0, 0) = -1.0;
    neg(0, 1) = -0.1;
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(PhaseType(Vec{0.5, 0.5}, neg), DomainError);

    // singular S: phases never absorb
    Matrix cyc(2, 2);
    cyc(0, 0) = -1.0;
    cyc(0, 1) = 1.0;
    cyc(1, 0) = 1.0;
    cyc(1, 1) = -1.0;
    CHECK_THROWS_AS(PhaseType(Vec{1.0, 0.0}, cyc), DomainError);

    // sigma out of range
    Matrix ok(1, 1);
    ok(0, 0) = -1.0;
    CHECK_THROWS_AS(PhaseType(Vec{1.2}, ok), DomainError);
}

TEST_CASE("density integrates to one minus the atom") {
    // analytic identity: integral of pdf = sigma 1
    std::mt19937_64 seed(3);
    PhaseType d = PhaseType::fit_two_moments(2.0, 0.3);
    // trapezoid on a fine grid as a crude independent check
    const double hi = 40.0 * d.mean();
    const int steps = 20000;
    double integral = 0.0;
    double prev = d.pdf(0.0);
    for (int i = 1; i <= steps; ++i) {
        const double x = hi * i / steps;
        const double cur = d.pdf(x);
        integral += 0.5 * (prev + cur) * (hi / steps);
        prev = cur;
    }
    CHECK(integral + d.mass_at_zero() == doctest::Approx(1.0).epsilon(1e-6));

    // cdf is monotone and saturates
    double last = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double x = hi * i / 100;
        const double c = d.cdf(x);
        CHECK(c >= last - 1e-12);
        last = c;
    }
    CHECK(d.cdf(hi) >= 1.0 - 1e-6);
}

TEST_CASE("sampling matches moments") {
    std::mt19937_64 rng(12345);

    // atom at zero: sigma sums to 0
    Matrix s(1, 1);
    s(0, 0) = -1.0;
    PhaseType atom(Vec{0.0}, s);
    CHECK(atom.mass_at_zero() == doctest::Approx(1.0));
    for (int i = 0; i < 10; ++i) CHECK(atom.sample(rng) == 0.0);

    PhaseType ex = PhaseType::exponential(1.0);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += ex.sample(rng);
    CHECK(std::abs(sum / n - 1.0) < 0.005);

    PhaseType e4 = PhaseType::erlang(1.0, 4);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = e4.sample(rng);
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(var - 0.25) < 0.005);
}
