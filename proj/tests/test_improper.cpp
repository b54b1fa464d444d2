#include "daniell/improper.hpp"

#include "doctest.h"

#include <random>

using namespace daniell;

namespace {

double sinc(double t) { return t == 0 ? 1.0 : std::sin(t) / t; }

}  // namespace

TEST_CASE("power and gamma type improper integrals")
{
    auto r = improper_integral([](double t) { return 1 / (t * t); }, 1, INFINITY);
    CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.value.imag() == 0);
    CHECK(r.classification == Classification::absolutely_convergent);
    CHECK(r.upper.stabilized);
    REQUIRE(r.abs_integral);
    CHECK(*r.abs_integral == doctest::Approx(1.0).epsilon(1e-8));

    r = improper_integral([](double t) { return 1 / std::sqrt(t); }, 0, 1);
    CHECK(r.value.real() == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.classification == Classification::absolutely_convergent);

    r = improper_integral([](double t) { return t * t * t * std::exp(-2 * t); }, 0, INFINITY);
    CHECK(r.value.real() == doctest::Approx(6.0 / 16).epsilon(1e-9));

    // Oracle: 1/(r - 1) and 1/(1 - r) for the two power families.
    for (double p : {1.5, 2.5, 3.0}) {
        auto up = improper_integral([p](double t) { return std::pow(t, -p); }, 1, INFINITY);
        CHECK(up.value.real() == doctest::Approx(1 / (p - 1)).epsilon(1e-7));
    }
    for (double p : {0.25, 0.5, 0.75}) {
        auto lo = improper_integral([p](double t) { return std::pow(t, -p); }, 0, 1);
        CHECK(lo.value.real() == doctest::Approx(1 / (1 - p)).epsilon(1e-7));
    }
}

TEST_CASE("improper integrals over the whole line and reversed limits")
{
    auto r = improper_integral([](double t) { return 1 / (1 + t * t); }, -INFINITY, INFINITY);
    CHECK(r.value.real() == doctest::Approx(M_PI).epsilon(1e-8));
    auto rev = improper_integral([](double t) { return 1 / (t * t); }, INFINITY, 1);
    CHECK(rev.value.real() == doctest::Approx(-1.0).epsilon(1e-8));

    auto smooth = improper_integral([](double t) { return std::exp(-t * t); }, -INFINITY, INFINITY,
                                    ImproperOptions{1e-12, true});
    CHECK(smooth.value.real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(smooth.classification == Classification::absolutely_convergent);
}

TEST_CASE("divergent integrals are classified")
{
    CHECK(improper_integral([](double t) { return 1 / t; }, 1, INFINITY).classification == Classification::divergent);
    CHECK(improper_integral([](double t) { return 1 / t; }, 0, 1).classification == Classification::divergent);
    CHECK(improper_integral([](double t) { return 1 / (t * t); }, 0, 1).classification == Classification::divergent);
    auto r = improper_integral([](double) { return 1.0; }, 0, INFINITY);
    CHECK(r.classification == Classification::divergent);
    CHECK(r.upper.partials.size() > 3);
}

TEST_CASE("classification soundness on absolutely convergent integrands")
{
    const double tol = 1e-8;
    std::vector<std::pair<Function1, std::pair<double, double>>> cases = {
        {[](double t) { return std::exp(-t) * std::cos(3 * t); }, {0, INFINITY}},
        {[](double t) { return std::log(t); }, {0, 1}},
        {[](double t) { return std::sin(t) / (1 + t * t * t); }, {0, INFINITY}},
        {[](double t) { return (t - 0.3) / std::sqrt(std::abs(1 - t * t)); }, {-1, 1}},
    };
    for (const auto& [f, ab] : cases) {
        ImproperOptions opts;
        opts.tol = tol;
        auto r = improper_integral(f, ab.first, ab.second, opts);
        if (r.classification == Classification::absolutely_convergent) {
            REQUIRE(r.abs_integral);
            CHECK(std::isfinite(*r.abs_integral));
            CHECK(std::abs(r.value.real()) <= *r.abs_integral + 2 * tol);
        } else {
            FAIL_CHECK("expected absolute convergence, got " << to_string(r.classification));
        }
    }
}

TEST_CASE("aitken is exact on geometric sequences")
{
    std::vector<double> s;
    for (int k = 0; k < 8; ++k) s.push_back(3 - 2 * std::pow(0.4, k));
    auto a = aitken(s);
    for (std::size_t i = 2; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("dominated test")
{
    auto f = [](double t) { return std::exp(-t) * std::sin(t); };
    auto phi = [](double t) { return std::exp(-t); };
    auto rep = dominated_test(f, phi, 0, INFINITY);
    CHECK(rep.accepted);
    CHECK(rep.integral_f == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.integral_phi == doctest::Approx(1.0).epsilon(1e-8));

    auto same = dominated_test(phi, phi, 0, INFINITY);
    CHECK(same.accepted);
    CHECK(same.integral_f == same.integral_phi);

    auto bad = dominated_test([](double t) { return 2 * std::exp(-t); }, phi, 0, INFINITY);
    CHECK_FALSE(bad.accepted);
    CHECK(bad.violation_at);
}

TEST_CASE("frullani")
{
    auto at = frullani([](double t) { return std::atan(t); }, 1, std::exp(1.0));
    CHECK(at.formula == doctest::Approx(M_PI / 2).epsilon(1e-8));
    CHECK(at.difference() <= 1e-7);

    auto constant = frullani([](double) { return 4.0; }, 1, 3);
    CHECK(constant.formula == 0);
    CHECK(constant.quadrature == 0);

    auto decay = frullani([](double t) { return std::exp(-t); }, 2, 5);
    CHECK(decay.formula == doctest::Approx(-std::log(2.5)).epsilon(1e-10));
    CHECK(decay.difference() <= 1e-7);

    for (auto f : std::vector<Function1>{[](double t) { return std::tanh(t); }, [](double t) { return t / (1 + t); },
                                         [](double t) { return 1 / (1 + t * t); }}) {
        auto r = frullani(f, 1, 3);
        CHECK(r.difference() <= 1e-7);
    }
    CHECK_THROWS_AS(frullani([](double t) { return t; }, 1, 2), NumericError);
    CHECK_THROWS_AS(frullani([](double t) { return t; }, 2, 1), DomainError);
}

TEST_CASE("laplace transforms")
{
    for (double r : {0.5, 1.0, 3.0}) {
        CHECK(laplace_transform(sinc, r) == doctest::Approx(M_PI / 2 - std::atan(r)).epsilon(1e-10));
        CHECK(laplace_transform([](double) { return 1.0; }, r) == doctest::Approx(1 / r).epsilon(1e-10));
        CHECK(laplace_transform([](double t) { return t * t * t; }, r) == doctest::Approx(6 / std::pow(r, 4)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(laplace_transform(sinc, 0), DomainError);

    // Monotone in r for nonnegative f.
    auto g = [](double t) { return std::abs(std::sin(t)) / (1 + t); };
    double prev = INFINITY;
    for (double r = 0.25; r < 4; r *= 1.3) {
        const double v = laplace_transform(g, r);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("laplace limit as r tends to zero")
{
    auto dirichlet = laplace_limit_r0(sinc, 1e-6);
    CHECK(dirichlet.stabilized);
    CHECK(dirichlet.value == doctest::Approx(M_PI / 2).epsilon(1e-6));

    auto expo = laplace_limit_r0([](double t) { return std::exp(-t); }, 1e-8);
    CHECK(expo.value == doctest::Approx(1.0).epsilon(1e-8));

    auto cosdiff = laplace_limit_r0([](double t) { return t == 0 ? 0.0 : (std::cos(t) - std::cos(2 * t)) / t; }, 1e-6);
    CHECK(cosdiff.value == doctest::Approx(0.5 * std::log(4.0)).epsilon(1e-6));
}

TEST_CASE("fourier transforms")
{
    auto box = [](double x) { return std::abs(x) <= 1 ? 1.0 : 0.0; };
    CHECK(std::abs(fourier_transform(box, -1, 1, M_PI)) < 1e-12);
    auto v = fourier_transform(box, -1, 1, 2.0);
    CHECK(v.real() == doctest::Approx(std::sin(2.0)).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0));

    auto decay = [](double x) { return std::exp(-x); };
    auto w = fourier_transform(decay, 0, INFINITY, 1.0);
    CHECK(w.real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(w.imag() == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(fourier_transform(decay, 0, INFINITY, 0.0).real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fourier transforms of real functions are conjugate symmetric")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const double s = u(rng), m = u(rng);
        auto f = [=](double x) { return std::exp(-(x - m) * (x - m)) * (1 + s * x); };
        const double xi = u(rng);
        const complex_t plus = fourier_transform(f, -INFINITY, INFINITY, xi);
        const complex_t minus = fourier_transform(f, -INFINITY, INFINITY, -xi);
        CHECK(std::abs(minus - std::conj(plus)) < 1e-9);

        // Linearity.
        auto g = [](double x) { return 1 / (1 + x * x * x * x); };
        auto fg = [&](double x) { return 2 * f(x) - 3 * g(x); };
        const complex_t lhs = fourier_transform(fg, -INFINITY, INFINITY, xi);
        const complex_t rhs = 2.0 * plus - 3.0 * fourier_transform(g, -INFINITY, INFINITY, xi);
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("modulus of an integral is at most the integral of the modulus")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng);
        auto F = [=](double x) { return complex_t(std::sin(a * x) + b, std::cos(c * x) * x); };
        const auto lhs = integrate(ComplexFunction1(F), -1, 2, {1e-12});
        const auto rhs = integrate([&](double x) { return std::abs(F(x)); }, -1, 2, {1e-12});
        CHECK(std::abs(lhs.value) <= rhs.value + 1e-10);
    }
}
