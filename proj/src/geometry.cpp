#include "daniell/geometry.hpp"

#include "daniell/darboux.hpp"

#include <cmath>

namespace daniell {

namespace {

QuadratureOptions with_tol(double tol)
{
    QuadratureOptions o;
    o.abs_tol = tol;
    return o;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Box to_box(const Rectangle& r)
{
    vector_t lo(Eigen::Index(r.dim())), hi(Eigen::Index(r.dim()));
    for (std::size_t j = 0; j < r.dim(); ++j) {
        lo[Eigen::Index(j)] = to_double(r.axis(j).lo());
        hi[Eigen::Index(j)] = to_double(r.axis(j).hi());
    }
    return Box(lo, hi);
}

vector_t vec(std::initializer_list<double> xs)
{
    vector_t v(Eigen::Index(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

Box box2(double a0, double b0, double a1, double b1) { return Box(vec({a0, a1}), vec({b0, b1})); }

void check_chart(const Chart& c)
{
    if (c.m < 1 || c.m > c.d) throw DomainError("chart needs 1 <= m <= d");
    if (!c.phi) throw DomainError("chart without a map");
    if (c.domain.dim() != c.m) throw DomainError("chart domain has the wrong dimension");
}

}  // namespace

matrix_t Chart::derivative(const vector_t& u) const
{
    if (dphi) return dphi(u);
    matrix_t j(d, m);
    for (int k = 0; k < m; ++k) {
        const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(u[k]));
        vector_t up = u, dn = u;
        up[k] += h;
        dn[k] -= h;
        j.col(k) = (phi(up) - phi(dn)) / (up[k] - dn[k]);
    }
    return j;
}

namespace charts {

Chart polar()
{
    Chart c;
    c.m = c.d = 2;
    c.phi = [](const vector_t& u) { return vec({u[0] * std::cos(u[1]), u[0] * std::sin(u[1])}); };
    c.dphi = [](const vector_t& u) {
        matrix_t j(2, 2);
        j << std::cos(u[1]), -u[0] * std::sin(u[1]), std::sin(u[1]), u[0] * std::cos(u[1]);
        return j;
    };
    c.domain = box2(0, INFINITY, 0, 2 * M_PI);
    return c;
}

Chart spherical()
{
    Chart c;
    c.m = c.d = 3;
    c.phi = [](const vector_t& u) {
        const double r = u[0], st = std::sin(u[1]), ct = std::cos(u[1]);
        return vec({r * st * std::cos(u[2]), r * st * std::sin(u[2]), r * ct});
    };
    c.dphi = [](const vector_t& u) {
        const double r = u[0], st = std::sin(u[1]), ct = std::cos(u[1]), sp = std::sin(u[2]), cp = std::cos(u[2]);
        matrix_t j(3, 3);
        j << st * cp, r * ct * cp, -r * st * sp,
             st * sp, r * ct * sp, r * st * cp,
             ct, -r * st, 0;
        return j;
    };
    c.domain = Box(vec({0, 0, 0}), vec({INFINITY, M_PI, 2 * M_PI}));
    return c;
}

Chart sphere(double r)
{
    if (!(r > 0)) throw DomainError("sphere radius must be positive");
    Chart c;
    c.m = 2;
    c.d = 3;
    c.phi = [r](const vector_t& u) {
        const double st = std::sin(u[0]);
        return vec({r * st * std::cos(u[1]), r * st * std::sin(u[1]), r * std::cos(u[0])});
    };
    c.dphi = [r](const vector_t& u) {
        const double st = std::sin(u[0]), ct = std::cos(u[0]), sp = std::sin(u[1]), cp = std::cos(u[1]);
        matrix_t j(3, 2);
        j << r * ct * cp, -r * st * sp,
             r * ct * sp, r * st * cp,
             -r * st, 0;
        return j;
    };
    c.domain = box2(0, M_PI, 0, 2 * M_PI);
    return c;
}

Chart hemisphere_angles(double r)
{
    Chart c = sphere(r);
    c.domain = box2(0, M_PI / 2, 0, 2 * M_PI);
    return c;
}

Chart hemisphere_graph(double r)
{
    if (!(r > 0)) throw DomainError("hemisphere radius must be positive");
    Chart c;
    c.m = 2;
    c.d = 3;
    c.phi = [r](const vector_t& u) {
        return vec({u[0] * std::cos(u[1]), u[0] * std::sin(u[1]), std::sqrt(std::max(0.0, (r - u[0]) * (r + u[0])))});
    };
    c.dphi = [r](const vector_t& u) {
        const double z = std::sqrt(std::max(0.0, (r - u[0]) * (r + u[0])));
        matrix_t j(3, 2);
        j << std::cos(u[1]), -u[0] * std::sin(u[1]),
             std::sin(u[1]), u[0] * std::cos(u[1]),
             -u[0] / z, 0;
        return j;
    };
    c.domain = box2(0, r, 0, 2 * M_PI);
    return c;
}

Chart hemisphere_stereographic(double r)
{
    if (!(r > 0)) throw DomainError("hemisphere radius must be positive");
    Chart c;
    c.m = 2;
    c.d = 3;
    c.phi = [r](const vector_t& u) {
        const double s = u[0], q = 1 + s * s;
        return vec({r * 2 * s * std::cos(u[1]) / q, r * 2 * s * std::sin(u[1]) / q, r * (1 - s * s) / q});
    };
    c.dphi = [r](const vector_t& u) {
        const double s = u[0], q = 1 + s * s, ct = std::cos(u[1]), st = std::sin(u[1]);
        const double ds = 2 * (1 - s * s) / (q * q);  // derivative of 2s / q
        matrix_t j(3, 2);
        j << r * ds * ct, -r * 2 * s * st / q,
             r * ds * st, r * 2 * s * ct / q,
             -r * 4 * s / (q * q), 0;
        return j;
    };
    c.domain = box2(0, 1, 0, 2 * M_PI);
    return c;
}

Chart coil(double a, double b, double tau)
{
    Chart c;
    c.m = 1;
    c.d = 3;
    c.phi = [a, b](const vector_t& u) { return vec({a * std::cos(u[0]), b * std::sin(u[0]), b * u[0]}); };
    c.dphi = [a, b](const vector_t& u) {
        matrix_t j(3, 1);
        j << -a * std::sin(u[0]), b * std::cos(u[0]), b;
        return j;
    };
    c.domain = Box::interval(0, tau);
    return c;
}

Chart torus(double a, double b)
{
    if (!(a > b && b > 0)) throw DomainError("torus needs a > b > 0");
    Chart c;
    c.m = 2;
    c.d = 3;
    c.phi = [a, b](const vector_t& u) {
        const double w = a + b * std::cos(u[0]);
        return vec({w * std::cos(u[1]), w * std::sin(u[1]), b * std::sin(u[0])});
    };
    c.dphi = [a, b](const vector_t& u) {
        const double w = a + b * std::cos(u[0]), s0 = std::sin(u[0]), c0 = std::cos(u[0]);
        const double s1 = std::sin(u[1]), c1 = std::cos(u[1]);
        matrix_t j(3, 2);
        j << -b * s0 * c1, -w * s1,
             -b * s0 * s1, w * c1,
             b * c0, 0;
        return j;
    };
    c.domain = box2(0, 2 * M_PI, 0, 2 * M_PI);
    return c;
}

Chart circle(double r)
{
    if (!(r > 0)) throw DomainError("circle radius must be positive");
    Chart c;
    c.m = 1;
    c.d = 2;
    c.phi = [r](const vector_t& u) { return vec({r * std::cos(u[0]), r * std::sin(u[0])}); };
    c.dphi = [r](const vector_t& u) {
        matrix_t j(2, 1);
        j << -r * std::sin(u[0]), r * std::cos(u[0]);
        return j;
    };
    c.domain = Box::interval(0, 2 * M_PI);
    return c;
}

Chart segment(const vector_t& p, const vector_t& q)
{
    if (p.size() != q.size() || p.size() == 0) throw DomainError("segment endpoints differ in dimension");
    Chart c;
    c.m = 1;
    c.d = int(p.size());
    c.phi = [p, q](const vector_t& u) -> vector_t { return p + u[0] * (q - p); };
    c.dphi = [p, q](const vector_t&) -> matrix_t { return q - p; };
    c.domain = Box::interval(0, 1);
    return c;
}

Chart graph(std::function<double(const vector_t&)> psi, std::function<vector_t(const vector_t&)> grad, const Box& domain)
{
    Chart c;
    c.m = int(domain.dim());
    c.d = c.m + 1;
    c.phi = [psi](const vector_t& u) {
        vector_t x(u.size() + 1);
        x[0] = psi(u);
        x.tail(u.size()) = u;
        return x;
    };
    if (grad) {
        c.dphi = [grad](const vector_t& u) {
            matrix_t j = matrix_t::Zero(u.size() + 1, u.size());
            j.row(0) = grad(u).transpose();
            j.bottomRows(u.size()).setIdentity();
            return j;
        };
    }
    c.domain = domain;
    return c;
}

Chart linear(const matrix_t& t, const Box& domain)
{
    if (t.cols() != domain.dim()) throw DomainError("linear chart: matrix and domain disagree");
    Chart c;
    c.m = int(t.cols());
    c.d = int(t.rows());
    c.phi = [t](const vector_t& u) -> vector_t { return t * u; };
    c.dphi = [t](const vector_t&) { return t; };
    c.domain = domain;
    return c;
}

Chart simplex(int m)
{
    if (m < 2) throw DomainError("simplex needs m >= 2");
    Chart c;
    c.m = m - 1;
    c.d = m;
    // x_k = u_k prod_{i<k} (1 - u_i), x_m = prod (1 - u_i).
    c.phi = [m](const vector_t& u) {
        vector_t x(m);
        double rest = 1;
        for (int k = 0; k + 1 < m; ++k) {
            x[k] = rest * u[k];
            rest *= 1 - u[k];
        }
        x[m - 1] = rest;
        return x;
    };
    c.domain = Box(vector_t::Zero(m - 1), vector_t::Ones(m - 1));
    return c;
}

}  // namespace charts

Chart scaled(const Chart& c, double r)
{
    Chart s = c;
    s.phi = [phi = c.phi, r](const vector_t& u) -> vector_t { return r * phi(u); };
    s.dphi = [c, r](const vector_t& u) -> matrix_t { return r * c.derivative(u); };
    return s;
}

Chart transformed(const Chart& c, const matrix_t& q)
{
    if (q.cols() != c.d) throw DomainError("transform does not match the ambient dimension");
    Chart s = c;
    s.d = int(q.rows());
    s.phi = [phi = c.phi, q](const vector_t& u) -> vector_t { return q * phi(u); };
    s.dphi = [c, q](const vector_t& u) -> matrix_t { return q * c.derivative(u); };
    return s;
}

double gram_extent_density(const Chart& c, const vector_t& u)
{
    const matrix_t j = c.derivative(u);
    if (j.cols() == j.rows()) return std::abs(j.determinant());
    return std::sqrt(std::max(0.0, (j.transpose() * j).determinant()));
}

double gram_parallelotope_volume(const matrix_t& vectors)
{
    if (vectors.cols() > vectors.rows()) return 0.0;
    return std::sqrt(std::max(0.0, (vectors.transpose() * vectors).determinant()));
}

QuadratureResult jacobian_integrate(const Chart& c, const Integrand& g, double tol)
{
    check_chart(c);
    if (c.m != c.d) throw DomainError("change of variables needs m = d");
    auto r = integrate_box([&](const vector_t& u) { return g(c.phi(u)) * std::abs(c.derivative(u).determinant()); },
                           c.domain, with_tol(tol));
    if (!r.converged) throw ResourceError("change-of-variables cubature did not converge");
    return r;
}

QuadratureResult surface_integral(const Chart& c, const Integrand& f, double tol)
{
    check_chart(c);
    auto r = integrate_box([&](const vector_t& u) { return f(c.phi(u)) * gram_extent_density(c, u); }, c.domain,
                           with_tol(tol));
    if (!r.converged) throw ResourceError("surface cubature did not converge");
    return r;
}

QuadratureResult surface_area(const Chart& c, double tol)
{
    return surface_integral(c, [](const vector_t&) { return 1.0; }, tol);
}

QuadratureResult curve_length(const Chart& c, double tol)
{
    if (c.m != 1) throw DomainError("curve length needs a one-dimensional chart");
    return surface_area(c, tol);
}

QuadratureResult flux_integral(const Chart& level_chart, const VectorMap& grad_psi, const VectorMap& field, double tol)
{
    check_chart(level_chart);
    auto integrand = [&](const vector_t& x) {
        const vector_t g = grad_psi(x);
        const double n = g.norm();
        if (!(n > 0)) throw DomainError("gradient vanishes on the level set");
        return field(x).dot(g) / n;
    };
    return surface_integral(level_chart, integrand, tol);
}

namespace {

double level_integral(const LevelCharts& levels, double v, const Integrand& f, double tol)
{
    double s = 0;
    for (const Chart& c : levels(v)) s += surface_integral(c, f, tol).value;
    return s;
}

}  // namespace

CoareaReport coarea_check(const VectorMap& grad_psi, const Integrand& f, const Box& box, const LevelCharts& levels,
                          double v0, double v1, double tol)
{
    CoareaReport r;
    auto vol = integrate_box([&](const vector_t& x) { return f(x) * grad_psi(x).norm(); }, box, with_tol(tol));
    if (!vol.converged) throw ResourceError("coarea volume cubature did not converge");
    r.volume_side = vol.value;
    auto lvl = integrate([&](double v) { return level_integral(levels, v, f, 0.1 * tol); }, v0, v1, with_tol(tol));
    if (!lvl.converged) throw ResourceError("coarea level quadrature did not converge");
    r.level_side = lvl.value;
    return r;
}

DivergenceReport divergence_check(const VectorMap& grad_psi, const VectorMap& field, const Integrand& div_field,
                                  const LevelCharts& levels, double a, double b, double tol)
{
    if (!(a < b)) throw DomainError("divergence check needs a < b");
    DivergenceReport r;
    auto weighted = [&](const vector_t& x) {
        const double n = grad_psi(x).norm();
        if (!(n > 0)) throw DomainError("gradient vanishes on the level set");
        return div_field(x) / n;
    };
    auto vol = integrate([&](double v) { return level_integral(levels, v, weighted, 0.1 * tol); }, a, b, with_tol(tol));
    if (!vol.converged) throw ResourceError("divergence volume quadrature did not converge");
    r.volume_side = vol.value;
    auto flux = [&](double v) {
        double s = 0;
        for (const Chart& c : levels(v)) s += flux_integral(c, grad_psi, field, 0.1 * tol).value;
        return s;
    };
    r.flux_side = flux(b) - flux(a);
    return r;
}

OpenCubature integrate_open(const Integrand& g, const OpenSet& set, int level, double tol,
                            const std::optional<Modulus>& modulus)
{
    if (!set.closure_inside || !set.contains) throw DomainError("open set needs a membership test and a cell test");
    const Box& bb = set.bounding_box;
    const auto d = std::size_t(bb.dim());
    if (d == 0) throw DomainError("open set in dimension 0");
    for (std::size_t j = 0; j < d; ++j)
        if (!std::isfinite(bb.lo[Eigen::Index(j)]) || !std::isfinite(bb.hi[Eigen::Index(j)]))
            throw DomainError("open set needs a bounded box");
    if (level < 0 || level > 30) throw DomainError("tiling level out of range");

    std::vector<Rational> lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
        lo[j] = Rational(bb.lo[Eigen::Index(j)]);
        hi[j] = Rational(bb.hi[Eigen::Index(j)]);
    }
    const Tiling tiling = dyadic_tiling(set.closure_inside, level, Rectangle::closed(lo, hi));
    const std::vector<Rectangle> tiles = tiling.tiles();

    OpenCubature out;
    out.tiles = tiles.size();
    const double per_tile = tol / double(std::max<std::size_t>(1, tiles.size()));
    for (const Rectangle& t : tiles) {
        const Box cell = to_box(t);
        if (modulus) {
            const Enclosure e = certified_integral(g, cell, *modulus, per_tile);
            out.value += e.value();
            out.quadrature_error += 0.5 * e.width();
        } else {
            auto r = integrate_box(g, cell, with_tol(per_tile));
            if (!r.converged) throw ResourceError("tile cubature did not converge");
            out.value += r.value;
            out.quadrature_error += r.error;
        }
    }

    // Boundary budget: grid cells that are not tiles but have a sampled point in the set.
    const double h = std::ldexp(1.0, -level);
    std::vector<long long> k0(d), k1(d);
    for (std::size_t j = 0; j < d; ++j) {
        k0[j] = (long long)std::floor(bb.lo[Eigen::Index(j)] / h);
        k1[j] = (long long)std::ceil(bb.hi[Eigen::Index(j)] / h);
    }
    std::vector<long long> k = k0;
    const double cell_volume = std::pow(h, double(d));
    std::size_t visited = 0;
    for (;;) {
        if (++visited > default_cell_cap) throw ResourceError("boundary scan exceeds the cell cap");
        std::vector<Rational> clo(d), chi(d);
        for (std::size_t j = 0; j < d; ++j) {
            clo[j] = Rational(k[j]) * Rational(h);
            chi[j] = Rational(k[j] + 1) * Rational(h);
        }
        if (!set.closure_inside(Rectangle::closed(clo, chi))) {
            // 3^d sample points: corners, edge midpoints, center.
            double worst = 0;
            bool meets = false;
            const std::size_t samples = std::size_t(std::pow(3.0, double(d)));
            vector_t x(static_cast<Eigen::Index>(d));
            for (std::size_t s = 0; s < samples; ++s) {
                std::size_t code = s;
                for (std::size_t j = 0; j < d; ++j) {
                    x[Eigen::Index(j)] = (double(k[j]) + 0.5 * double(code % 3)) * h;
                    code /= 3;
                }
                if (set.contains(x)) {
                    meets = true;
                    worst = std::max(worst, std::abs(g(x)));
                }
            }
            if (meets) out.boundary_budget += worst * cell_volume;
        }
        std::size_t j = 0;
        while (j < d && ++k[j] >= k1[j]) {
            k[j] = k0[j];
            ++j;
        }
        if (j == d) break;
    }
    return out;
}

OpenCubature jacobian_integrate(const Chart& c, const Integrand& g, const OpenSet& u, int level, double tol)
{
    if (c.m != c.d) throw DomainError("change of variables needs m = d");
    return integrate_open([&](const vector_t& x) { return g(c.phi(x)) * std::abs(c.derivative(x).determinant()); }, u,
                          level, tol);
}

OpenSet unit_disk()
{
    OpenSet s;
    s.contains = [](const vector_t& x) { return x.squaredNorm() < 1; };
    // The farthest point of a closed rectangle from the origin is a corner.
    s.closure_inside = [](const Rectangle& r) {
        if (r.dim() != 2) return false;
        for (const Rational& x : {r.axis(0).lo(), r.axis(0).hi()})
            for (const Rational& y : {r.axis(1).lo(), r.axis(1).hi()})
                if (!(x * x + y * y < 1)) return false;
        return true;
    };
    s.bounding_box = box2(-1, 1, -1, 1);
    return s;
}

}  // namespace daniell
