#include "daniell/determinants.hpp"
#include "daniell/geometry.hpp"

#include "doctest.h"

#include <random>

using namespace daniell;

namespace {

vector_t v2(double a, double b)
{
    vector_t v(2);
    v << a, b;
    return v;
}

vector_t v3(double a, double b, double c)
{
    vector_t v(3);
    v << a, b, c;
    return v;
}

matrix_t random_rotation(std::mt19937_64& rng)
{
    std::normal_distribution<double> n;
    matrix_t a(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = n(rng);
    Eigen::HouseholderQR<matrix_t> qr(a);
    return qr.householderQ();
}

std::vector<Chart> spheres(double v) { return {charts::sphere(v)}; }
std::vector<Chart> circles(double v) { return {charts::circle(v)}; }

vector_t radial_gradient(const vector_t& x)
{
    const double r = x.norm();
    return r > 0 ? vector_t(x / r) : vector_t(vector_t::Unit(x.size(), 0));
}

MatrixX<Rational> random_int_matrix(std::mt19937_64& rng, int rows, int cols)
{
    std::uniform_int_distribution<int> u(-5, 5);
    MatrixX<Rational> a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = u(rng);
    return a;
}

/// Cofactor expansion along the first row, an independent determinant oracle.
Rational cofactor_det(const MatrixX<Rational>& a)
{
    const auto n = a.rows();
    if (n == 0) return 1;
    if (n == 1) return a(0, 0);
    Rational s = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        MatrixX<Rational> minor(n - 1, n - 1);
        for (Eigen::Index i = 1; i < n; ++i)
            for (Eigen::Index k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = a(i, k);
        const Rational term = a(0, j) * cofactor_det(minor);
        s += (j % 2 == 0) ? term : Rational(-term);
    }
    return s;
}

}  // namespace

TEST_CASE("extent density")
{
    Chart id = charts::linear(matrix_t::Identity(3, 3), Box(vector_t::Zero(3), vector_t::Ones(3)));
    CHECK(gram_extent_density(id, v3(0.2, 0.3, 0.4)) == doctest::Approx(1.0));

    auto psi = [](const vector_t& u) { return u[0] * u[0] + std::sin(u[1]); };
    auto grad = [](const vector_t& u) { return v2(2 * u[0], std::cos(u[1])); };
    Chart g = charts::graph(psi, grad, Box(vector_t::Zero(2), vector_t::Ones(2)));
    Chart g_numeric = charts::graph(psi, {}, g.domain);
    for (double a : {0.1, 0.5, 0.9}) {
        const vector_t u = v2(a, 1 - a);
        const double expect = std::sqrt(1 + grad(u).squaredNorm());
        CHECK(gram_extent_density(g, u) == doctest::Approx(expect).epsilon(1e-14));
        CHECK(gram_extent_density(g_numeric, u) == doctest::Approx(expect).epsilon(1e-9));
        for (double r : {0.5, 2.0, 3.0})
            CHECK(gram_extent_density(scaled(g, r), u) == doctest::Approx(r * r * expect).epsilon(1e-13));
    }
}

TEST_CASE("change of variables")
{
    auto gauss = [](const vector_t& x) { return std::exp(-x.squaredNorm()); };
    CHECK(jacobian_integrate(charts::polar(), gauss, 1e-10).value == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(jacobian_integrate(charts::spherical(), [](const vector_t& x) { return std::exp(-x.squaredNorm()); }, 1e-9)
              .value == doctest::Approx(std::pow(M_PI, 1.5)).epsilon(1e-8));

    // Linear maps: integral of f(Tx) dx = |det T|^-1 integral of f.
    auto f = [](const vector_t& x) { return std::exp(-x[0] * x[0] - 2 * x[1] * x[1]) * (1 + x[0] * x[1] * x[1]); };
    const Box plane(v2(-INFINITY, -INFINITY), v2(INFINITY, INFINITY));
    const double base = integrate_box(f, plane, {1e-11}).value;
    for (auto [a, b] : {std::pair{2.0, 3.0}, {-0.5, 4.0}, {1.5, -1.5}}) {
        matrix_t t(2, 2);
        t << a, 0, 0, b;
        const double lhs = integrate_box([&](const vector_t& x) { return f(t * x); }, plane, {1e-11}).value;
        CHECK(lhs == doctest::Approx(base / std::abs(a * b)).epsilon(1e-8));
        // The same statement through the chart: integral of f equals integral of f(T u) |det T|.
        CHECK(jacobian_integrate(charts::linear(t, plane), f, 1e-11).value == doctest::Approx(base).epsilon(1e-8));
    }
    for (double gamma : {-2.0, 0.5, 3.0}) {
        matrix_t s(2, 2);
        s << 1, gamma, 0, 1;
        const double sheared = integrate_box([&](const vector_t& x) { return f(s * x); }, plane, {1e-11}).value;
        CHECK(sheared == doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("surface areas")
{
    CHECK(surface_area(charts::torus(2, 1)).value == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-10));
    CHECK(surface_area(charts::torus(3, 0.5)).value == doctest::Approx(4 * M_PI * M_PI * 1.5).epsilon(1e-10));
    CHECK(surface_area(charts::sphere()).value == doctest::Approx(4 * M_PI).epsilon(1e-10));
    CHECK(surface_area(charts::simplex(3)).value == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-9));
    // sqrt(d) / (d - 1)!
    CHECK(surface_area(charts::simplex(4), 1e-9).value == doctest::Approx(std::sqrt(4.0) / 6).epsilon(1e-8));
    CHECK(surface_area(charts::simplex(2)).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("curve lengths")
{
    CHECK(curve_length(charts::circle()).value == doctest::Approx(2 * M_PI).epsilon(1e-12));
    CHECK(curve_length(charts::segment(v2(0, 0), v2(3, 4))).value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(curve_length(charts::coil(1, 1, 2 * M_PI)).value == doctest::Approx(2 * M_PI * std::sqrt(2.0)).epsilon(1e-12));

    // a != b: oracle by composite Simpson on the speed with many panels.
    const double a = 2, b = 1, tau = 2 * M_PI;
    auto speed = [&](double t) { return std::sqrt(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t) + b * b); };
    const int n = 20000;
    double simpson = speed(0) + speed(tau);
    for (int i = 1; i < n; ++i) simpson += (i % 2 ? 4 : 2) * speed(tau * i / n);
    simpson *= tau / (3 * n);
    CHECK(curve_length(charts::coil(a, b, tau)).value == doctest::Approx(simpson).epsilon(1e-11));
    CHECK_THROWS_AS(curve_length(charts::sphere()), DomainError);
}

TEST_CASE("flux integrals")
{
    auto identity = [](const vector_t& x) { return x; };
    for (double r : {0.5, 1.0, 2.0})
        CHECK(flux_integral(charts::sphere(r), radial_gradient, identity).value ==
              doctest::Approx(4 * M_PI * r * r * r).epsilon(1e-10));

    // Closed torus, psi = distance to the core circle.
    const double a = 2, b = 1;
    auto tube_gradient = [a](const vector_t& x) {
        const double rho = std::hypot(x[0], x[1]);
        vector_t g(3);
        g << x[0] / rho * (rho - a), x[1] / rho * (rho - a), x[2];
        return vector_t(g / g.norm());
    };
    auto constant = [](const vector_t&) { return v3(1, -2, 0.5); };
    CHECK(std::abs(flux_integral(charts::torus(a, b), tube_gradient, constant).value) < 1e-10);
    CHECK(flux_integral(charts::torus(a, b), tube_gradient, tube_gradient).value ==
          doctest::Approx(8 * M_PI * M_PI).epsilon(1e-10));
    CHECK(flux_integral(charts::sphere(1.5), radial_gradient, radial_gradient).value ==
          doctest::Approx(4 * M_PI * 2.25).epsilon(1e-10));
}

TEST_CASE("coarea")
{
    auto bump = [](const vector_t& x) {
        const double r2 = x.squaredNorm();
        return r2 < 1 ? std::exp(-1 / (1 - r2)) : 0.0;
    };
    // Radial oracle: 2 pi integral of r f(r) dr.
    const double oracle = 2 * M_PI *
                          integrate([](double r) { return r < 1 ? r * std::exp(-1 / (1 - r * r)) : 0.0; }, 0, 1, {1e-13})
                              .value;
    auto rep = coarea_check(radial_gradient, bump, Box(v2(-1, -1), v2(1, 1)), circles, 0, 1, 1e-9);
    CHECK(rep.volume_side == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(rep.level_side == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(rep.discrepancy() < 1e-7);

    auto zero = coarea_check(radial_gradient, [](const vector_t&) { return 0.0; }, Box(v2(-1, -1), v2(1, 1)), circles,
                             0, 1);
    CHECK(zero.volume_side == 0);
    CHECK(zero.level_side == 0);

    auto gauss = coarea_check(radial_gradient, [](const vector_t& x) { return std::exp(-x.squaredNorm()); },
                              Box(v2(-INFINITY, -INFINITY), v2(INFINITY, INFINITY)), circles, 0, INFINITY, 1e-9);
    CHECK(gauss.volume_side == doctest::Approx(M_PI).epsilon(1e-8));
    CHECK(gauss.level_side == doctest::Approx(M_PI).epsilon(1e-8));
}

TEST_CASE("divergence theorem on shells")
{
    auto identity = [](const vector_t& x) { return x; };
    auto rep = divergence_check(radial_gradient, identity, [](const vector_t&) { return 3.0; }, spheres, 1, 2);
    CHECK(rep.volume_side == doctest::Approx(28 * M_PI).epsilon(1e-9));
    CHECK(rep.flux_side == doctest::Approx(28 * M_PI).epsilon(1e-9));

    auto constant = divergence_check(radial_gradient, [](const vector_t&) { return v3(1, 2, 3); },
                                     [](const vector_t&) { return 0.0; }, spheres, 1, 2);
    CHECK(std::abs(constant.volume_side) < 1e-12);
    CHECK(std::abs(constant.flux_side) < 1e-9);

    // Random quadratic fields on a planar annulus.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 5; ++trial) {
        std::array<double, 12> c;
        for (double& x : c) x = u(rng);
        auto field = [c](const vector_t& x) {
            const double p = x[0], q = x[1];
            return v2(c[0] + c[1] * p + c[2] * q + c[3] * p * p + c[4] * p * q + c[5] * q * q,
                      c[6] + c[7] * p + c[8] * q + c[9] * p * p + c[10] * p * q + c[11] * q * q);
        };
        auto div = [c](const vector_t& x) {
            const double p = x[0], q = x[1];
            return c[1] + 2 * c[3] * p + c[4] * q + c[8] + c[10] * p + 2 * c[11] * q;
        };
        auto r = divergence_check(radial_gradient, field, div, circles, 0.5, 1.5);
        // Independent oracle: polar cubature of div F over the annulus.
        auto polar = integrate_box(
            [&](const vector_t& w) { return div(v2(w[0] * std::cos(w[1]), w[0] * std::sin(w[1]))) * w[0]; },
            Box(v2(0.5, 0), v2(1.5, 2 * M_PI)), {1e-12});
        CHECK(r.volume_side == doctest::Approx(polar.value).epsilon(1e-9));
        CHECK(r.flux_side == doctest::Approx(polar.value).epsilon(1e-9));
    }
}

TEST_CASE("gram parallelotope volume")
{
    matrix_t a(2, 2);
    a << 1, 1, 0, 1;
    CHECK(gram_parallelotope_volume(a) == doctest::Approx(1.0));
    matrix_t o(3, 2);
    o << 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0), 0, 0, 1;
    CHECK(gram_parallelotope_volume(o) == doctest::Approx(1.0));
    matrix_t b(3, 2);
    b << 3, 0, 0, 4, 0, 0;
    CHECK(gram_parallelotope_volume(b) == doctest::Approx(12.0));
}

TEST_CASE("parametrization independence, rotation and scaling")
{
    auto f = [](const vector_t& x) { return 1 + x[2] + x[0] * x[0]; };
    const double angles = surface_integral(charts::hemisphere_angles(), f, 1e-10).value;
    const double stereo = surface_integral(charts::hemisphere_stereographic(), f, 1e-10).value;
    const double graph = surface_integral(charts::hemisphere_graph(), f, 1e-10).value;
    // Oracle: 2 pi + pi + 2 pi / 3.
    CHECK(angles == doctest::Approx(2 * M_PI + M_PI + 2 * M_PI / 3).epsilon(1e-10));
    CHECK(stereo == doctest::Approx(angles).epsilon(1e-10));
    // The graph chart is singular at the rim; double spacing near rho = 1 caps it near sqrt(eps).
    CHECK(graph == doctest::Approx(angles).epsilon(1e-7));

    std::mt19937_64 rng(11);
    auto g = [](const vector_t& x) { return std::exp(-x.squaredNorm()) * (2 + x[0]); };
    for (int trial = 0; trial < 3; ++trial) {
        const matrix_t q = random_rotation(rng);
        const Chart t = charts::torus(2, 0.5);
        auto g_rotated = [&](const vector_t& x) { return g(q.transpose() * x); };
        CHECK(surface_integral(transformed(t, q), g_rotated, 1e-10).value ==
              doctest::Approx(surface_integral(t, g, 1e-10).value).epsilon(1e-9));
        // Area alone is invariant.
        CHECK(surface_area(transformed(t, q)).value == doctest::Approx(2 * M_PI * 2 * 2 * M_PI * 0.5).epsilon(1e-10));
    }

    for (double r : {0.5, 2.0}) {
        CHECK(surface_area(scaled(charts::torus(2, 1), r)).value ==
              doctest::Approx(r * r * 8 * M_PI * M_PI).epsilon(1e-10));
        CHECK(curve_length(scaled(charts::coil(1, 1, 2 * M_PI), r)).value ==
              doctest::Approx(r * 2 * M_PI * std::sqrt(2.0)).epsilon(1e-10));
        CHECK(surface_area(scaled(charts::simplex(3), r)).value ==
              doctest::Approx(r * r * std::sqrt(3.0) / 2).epsilon(1e-9));
    }
}

TEST_CASE("open-set cubature on the unit disk")
{
    const OpenSet disk = unit_disk();
    for (int level : {3, 5}) {
        auto r = integrate_open([](const vector_t&) { return 1.0; }, disk, level);
        CHECK(r.tiles > 0);
        CHECK(r.value <= M_PI);
        CHECK(M_PI <= r.value + r.boundary_budget + r.quadrature_error);
    }
    auto fine = integrate_open([](const vector_t&) { return 1.0; }, disk, 6);
    auto coarse = integrate_open([](const vector_t&) { return 1.0; }, disk, 4);
    CHECK(fine.boundary_budget < coarse.boundary_budget);
    CHECK(fine.value >= coarse.value);

    auto lip = integrate_open([](const vector_t& x) { return x[0] + 1; }, disk, 4, 1e-3, Modulus::lipschitz(1));
    CHECK(lip.value <= M_PI + lip.quadrature_error);
    CHECK(std::abs(lip.value - M_PI) <= lip.boundary_budget + lip.quadrature_error + 1e-3);

    // Change of variables over the open parameter set: the polar image of the
    // unit disk in (r, theta) space is irrelevant here; use the identity chart.
    Chart id = charts::linear(matrix_t::Identity(2, 2), disk.bounding_box);
    auto j = jacobian_integrate(id, [](const vector_t& x) { return x.squaredNorm(); }, disk, 5);
    CHECK(j.value <= M_PI / 2);
    CHECK(M_PI / 2 <= j.value + j.boundary_budget + j.quadrature_error);
}

TEST_CASE("sylvester identity")
{
    MatrixX<Rational> a(1, 2), b(2, 1);
    a << 1, 2;
    b << 3, 4;
    auto r = sylvester_identity_check(a, b);
    CHECK(r.holds);
    // t^3 + 11 t^2 in full, t^2 + 11 t after removing the common t.
    CHECK(r.lhs == Polynomial<Rational>{0, 0, 11, 1});
    CHECK(r.rhs == Polynomial<Rational>{0, 0, 11, 1});
    CHECK(r.reduced_lhs == Polynomial<Rational>{0, 11, 1});
    CHECK(r.reduced_rhs == Polynomial<Rational>{0, 11, 1});

    MatrixX<Rational> z = MatrixX<Rational>::Zero(2, 3), w(3, 2);
    w << 1, 2, 3, 4, 5, 6;
    auto zr = sylvester_identity_check(z, w);
    CHECK(zr.holds);
    CHECK(zr.lhs == Polynomial<Rational>{0, 0, 0, 0, 0, 1});

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial)
        CHECK(sylvester_identity_check(random_int_matrix(rng, 2, 3), random_int_matrix(rng, 3, 2)).holds);
}

TEST_CASE("cauchy-binet")
{
    MatrixX<Rational> a(1, 2), b(2, 1);
    a << 1, 2;
    b << 3, 4;
    auto r = cauchy_binet_check(a, b);
    CHECK(r.det_ab == 11);
    CHECK(r.column_subsets == 11);
    CHECK(r.complementary == 11);
    CHECK(r.literal == 11);

    MatrixX<Rational> zr(2, 3), c(3, 2);
    zr << 1, 2, 3, 0, 0, 0;
    c << 1, -1, 2, 0, 5, 7;
    auto zero = cauchy_binet_check(zr, c);
    CHECK(zero.det_ab == 0);
    CHECK(zero.classical_holds);
    CHECK(zero.complementary_holds);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto rep = cauchy_binet_check(random_int_matrix(rng, 2, 3), random_int_matrix(rng, 3, 2));
        CHECK(rep.classical_holds);
        CHECK(rep.complementary_holds);
    }
    CHECK_THROWS_AS(cauchy_binet_check(MatrixX<Rational>(MatrixX<Rational>::Zero(2, 2)),
                                       MatrixX<Rational>(MatrixX<Rational>::Zero(2, 2))),
                    DomainError);

    // Deleting m indices (keeping n - m) only matches when n = 2m; for 2 x 3
    // it fails on a concrete instance.
    MatrixX<Rational> p(2, 3), q(3, 2);
    p << 1, 0, 0, 0, 1, 0;
    q << 1, 0, 0, 1, 0, 0;
    auto lit = cauchy_binet_check(p, q);
    CHECK(lit.det_ab == 1);
    CHECK(lit.complementary_holds);
    CHECK_FALSE(lit.literal_holds);
}

TEST_CASE("determinant identities on random integer matrices")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = size(rng);
        const int m = std::uniform_int_distribution<int>(1, n)(rng);
        const auto a = random_int_matrix(rng, m, n), b = random_int_matrix(rng, n, m);
        const auto sq = random_int_matrix(rng, n, n);
        CHECK(determinant<Rational>(sq) == cofactor_det(sq));
        CHECK(determinant<Rational>(MatrixX<Rational>(sq * sq)) == cofactor_det(sq) * cofactor_det(sq));
        // Characteristic polynomial at t = 2 against det(2I - M).
        const auto cp = characteristic_polynomial<Rational>(sq);
        Rational at2 = 0, power = 1;
        for (const auto& c : cp) {
            at2 += c * power;
            power *= 2;
        }
        CHECK(at2 == cofactor_det(MatrixX<Rational>(2 * MatrixX<Rational>::Identity(n, n) - sq)));
        CHECK(sylvester_identity_check(a, b).holds);
        if (m < n) {
            auto rep = cauchy_binet_check(a, b);
            CHECK(rep.classical_holds);
            CHECK(rep.complementary_holds);
            CHECK(rep.det_ab == cofactor_det(MatrixX<Rational>(a * b)));
        }
    }
}
