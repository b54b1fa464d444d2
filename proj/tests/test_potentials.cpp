#include "daniell/potentials.hpp"

#include "doctest.h"

#include <random>

using namespace daniell;

namespace {

vector_t v3(double a, double b, double c)
{
    vector_t v(3);
    v << a, b, c;
    return v;
}

vector_t v2(double a, double b)
{
    vector_t v(2);
    v << a, b;
    return v;
}

Density gaussian3(double center_z = 0)
{
    Density g;
    g.d = 3;
    g.rho = [center_z](const vector_t& y) {
        vector_t c = y;
        c[2] -= center_z;
        return std::pow(M_PI, -1.5) * std::exp(-c.squaredNorm());
    };
    g.decay_m = 2 * std::pow(1 + std::abs(center_z), 4);
    g.decay_beta = 4;
    g.local_bound = [](const vector_t&, double) { return std::pow(M_PI, -1.5); };
    return g;
}

// Shell theorem: phi(r) = (1/r) 4 pi int_0^r s^2 rho + 4 pi int_r^inf s rho, by quadrature.
double shell_oracle(const std::function<double(double)>& radial, double r)
{
    const double inside = integrate([&](double s) { return s * s * radial(s); }, 0, r, {1e-14}).value;
    const double outside = integrate([&](double s) { return s * radial(s); }, r, INFINITY, {1e-14}).value;
    return 4 * M_PI * (inside / r + outside);
}

}  // namespace

TEST_CASE("sphere areas")
{
    CHECK(sphere_area(1) == doctest::Approx(2.0));
    CHECK(sphere_area(2) == doctest::Approx(2 * M_PI));
    CHECK(sphere_area(3) == doctest::Approx(4 * M_PI));
}

TEST_CASE("newton potential of a gaussian matches the shell theorem")
{
    const Density g = gaussian3();
    auto radial = [](double s) { return std::pow(M_PI, -1.5) * std::exp(-s * s); };
    for (double r : {0.5, 1.0, 2.0}) {
        const auto p = coulomb_potential(g, 1, v3(0, 0, r), 0.1, 1e-8);
        CHECK(p.inner_budget <= 0.5e-8);
        CHECK(p.value == doctest::Approx(shell_oracle(radial, r)).epsilon(1e-7));
        // Closed form erf(r)/r as a second check.
        CHECK(p.value == doctest::Approx(std::erf(r) / r).epsilon(1e-7));
        // Off axis as well.
        const auto q = coulomb_potential(g, 1, v3(r / std::sqrt(3.0), -r / std::sqrt(3.0), r / std::sqrt(3.0)), 0.1, 1e-8);
        CHECK(q.value == doctest::Approx(std::erf(r) / r).epsilon(1e-7));
    }
}

TEST_CASE("zero density and domain errors")
{
    Density z;
    z.d = 3;
    z.rho = [](const vector_t&) { return 0.0; };
    z.decay_m = 1;
    z.decay_beta = 5;
    CHECK(coulomb_potential(z, 1, v3(1, 2, 3)).value == 0);
    CHECK(coulomb_gradient(z, 1, v3(1, 2, 3)).value.norm() == 0);
    CHECK_THROWS_AS(coulomb_potential(z, 3, v3(0, 0, 0)), DomainError);
    Density slow = z;
    slow.decay_beta = 1.5;
    CHECK_THROWS_AS(coulomb_potential(slow, 1, v3(0, 0, 0)), DomainError);
    CHECK_THROWS_AS(coulomb_gradient(z, 2, v3(0, 0, 0)), DomainError);

    Density liar = gaussian3();
    liar.decay_m = 1e-6;
    CHECK_FALSE(check_decay(liar).ok);
    CHECK_THROWS_AS(coulomb_potential(liar, 1, v3(0, 0, 1)), DomainError);
}

TEST_CASE("uniform ball seen from outside")
{
    Density ball;
    ball.d = 3;
    ball.rho = [](const vector_t& y) { return y.squaredNorm() < 1 ? 1.0 : 0.0; };
    ball.decay_m = 16;
    ball.decay_beta = 4;
    ball.local_bound = [](const vector_t&, double) { return 1.0; };
    const double charge = 4 * M_PI / 3;
    SphereRule adaptive;
    adaptive.adaptive = true;
    const double tol = 1e-4;
    for (double r : {1.5, 3.0}) {
        const auto p = coulomb_potential(ball, 1, v3(0, 0, r), 0.1, tol, adaptive);
        CHECK(std::abs(p.value - charge / r) <= tol);
    }
}

TEST_CASE("gradient")
{
    const Density g = gaussian3();
    for (double r : {0.5, 1.0, 2.0}) {
        const vector_t x = v3(0, 0, r);
        const auto grad = coulomb_gradient(g, 1, x, 0.1, 1e-9);
        // Radial symmetry: parallel to -x.
        CHECK(std::abs(grad.value[0]) < 1e-8);
        CHECK(std::abs(grad.value[1]) < 1e-8);
        CHECK(grad.value[2] < 0);
        // d/dr erf(r)/r
        const double exact = 2 / std::sqrt(M_PI) * std::exp(-r * r) / r - std::erf(r) / (r * r);
        CHECK(grad.value[2] == doctest::Approx(exact).epsilon(1e-6));
    }

    // Against central differences of the potential at random points, non-radial density.
    Density two;
    two.d = 3;
    two.rho = [](const vector_t& y) {
        return std::exp(-(y - v3(0.5, 0, 0)).squaredNorm()) + 0.5 * std::exp(-2 * (y + v3(0, 0.7, 0.2)).squaredNorm());
    };
    two.decay_m = 60;
    two.decay_beta = 4;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 3; ++trial) {
        const vector_t x = v3(u(rng), u(rng), u(rng));
        const auto grad = coulomb_gradient(two, 1, x, 0.1, 1e-9);
        const double h = 1e-3;
        vector_t fd(3);
        for (int j = 0; j < 3; ++j) {
            vector_t p = x, m = x;
            p[j] += h;
            m[j] -= h;
            fd[j] = (coulomb_potential(two, 1, p, 0.1, 1e-11).value - coulomb_potential(two, 1, m, 0.1, 1e-11).value) /
                    (2 * h);
        }
        CHECK((grad.value - fd).norm() <= 1e-3 * grad.value.norm());
    }
}

TEST_CASE("poisson residual in 3d")
{
    const Density g = gaussian3();
    const auto rep = poisson_residual(g, v3(0, 0, 0), 0.05, 1e-10);
    CHECK(rep.expected == doctest::Approx(4 * M_PI * std::pow(M_PI, -1.5)));
    CHECK(rep.residual() <= 1e-2 * rep.expected);

    // Harmonic where the density vanishes.
    Density bump;
    bump.d = 3;
    bump.rho = [](const vector_t& y) {
        const double r2 = y.squaredNorm();
        return r2 < 1 ? std::exp(-1 / (1 - r2)) : 0.0;
    };
    bump.decay_m = 16;
    bump.decay_beta = 4;
    // The compact bump is only C-infinity, so the product rule needs more nodes than the default.
    SphereRule fine;
    fine.polar = 128;
    fine.azimuth = 256;
    const auto outside = poisson_residual(bump, v3(0, 0, 2), 0.05, 1e-10, fine);
    CHECK(outside.expected == 0);
    CHECK(std::abs(outside.minus_laplacian) <= 1e-2 * 4 * M_PI * std::exp(-1.0));

    // Linearity: residual of a combination.
    Density combo = g;
    combo.rho = [&](const vector_t& y) { return 2 * g.rho(y) - 0.5 * bump.rho(y); };
    combo.decay_m = 20;
    combo.local_bound = {};
    const auto c = poisson_residual(combo, v3(0.2, 0, 0), 0.05, 1e-10, fine);
    const auto a1 = poisson_residual(g, v3(0.2, 0, 0), 0.05, 1e-10, fine);
    const auto a2 = poisson_residual(bump, v3(0.2, 0, 0), 0.05, 1e-10, fine);
    CHECK(c.minus_laplacian == doctest::Approx(2 * a1.minus_laplacian - 0.5 * a2.minus_laplacian).epsilon(1e-4));
    CHECK(c.relative() <= 1e-2);
}

TEST_CASE("logarithmic potential in the plane")
{
    Density z;
    z.d = 2;
    z.rho = [](const vector_t&) { return 0.0; };
    z.decay_m = 1;
    z.decay_beta = 4;
    CHECK(log_potential_2d(z, v2(0.3, 0.1)).value == 0);

    Density bump;
    bump.d = 2;
    bump.rho = [](const vector_t& y) {
        const double r2 = y.squaredNorm();
        return r2 < 1 ? std::exp(-1 / (1 - r2)) : 0.0;
    };
    bump.decay_m = 16;
    bump.decay_beta = 4;
    SphereRule adaptive;
    adaptive.adaptive = true;
    const double q = 2 * M_PI * integrate([](double r) { return r < 1 ? r * std::exp(-1 / (1 - r * r)) : 0.0; }, 0, 1, {1e-14}).value;
    // Outside the support: -Q log|x| exactly.
    for (double r : {1.5, 3.0, 6.0}) {
        const auto p = log_potential_2d(bump, v2(r, 0), 0.1, 1e-9, adaptive);
        CHECK(p.value == doctest::Approx(-q * std::log(r)).epsilon(1e-6));
    }

    Density g;
    g.d = 2;
    g.rho = [](const vector_t& y) { return std::exp(-y.squaredNorm()) / M_PI; };
    g.decay_m = 2;
    g.decay_beta = 4;
    const auto rep = poisson_residual_2d(g, v2(0, 0), 0.05, 1e-10);
    CHECK(rep.expected == doctest::Approx(2.0));
    CHECK(rep.relative() <= 1e-2);
}

TEST_CASE("delta robustness and continuity")
{
    const Density g = gaussian3(0.3);
    const vector_t x = v3(0.1, 0.2, 0.4);
    const auto coarse = coulomb_potential(g, 1, x, 0.1, 1e-4);
    const auto fine = coulomb_potential(g, 1, x, coarse.delta / 2, 1e-4);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.inner_budget + coarse.quadrature_error + fine.quadrature_error);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        const double cz = u(rng);
        const Density rho = gaussian3(cz);
        const vector_t a = v3(u(rng), u(rng), u(rng));
        const auto pa = coulomb_potential(rho, 1, a, 0.1, 1e-7);
        const double slope = coulomb_gradient(rho, 1, a, 0.1, 1e-7).value.norm();
        double prev = INFINITY;
        for (double h : {0.1, 0.01, 0.001}) {
            const vector_t x = a + h * v3(1, -1, 1) / std::sqrt(3.0);
            const auto px = coulomb_potential(rho, 1, x, 0.1, 1e-7);
            const double diff = std::abs(px.value - pa.value);
            CHECK(diff <= pa.error_budget() + px.error_budget() + 2 * slope * h + h * h);
            CHECK(diff < prev);
            prev = diff;
        }
    }
}
