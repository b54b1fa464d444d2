#include "daniell/potentials.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace daniell {

namespace {

constexpr double delta_floor = 1e-12;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
const std::pair<std::vector<double>, std::vector<double>>& legendre(int n)
{
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[std::size_t(i)] = z;
        w[std::size_t(i)] = 2 / ((1 - z * z) * dp * dp);
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

/**
 * Sphere integrals of rho(x + r w) times (1, w_1, ..., w_d). Only the first
 * entry is computed unless with_direction is set.
 */
std::vector<double> sphere_integrals(const Density& rho, const vector_t& x, double r, const SphereRule& rule,
                                     bool with_direction, double tol, std::uint64_t& evals)
{
    const int d = rho.d;
    std::vector<double> out(with_direction ? std::size_t(d) + 1 : 1, 0.0);
    vector_t y(d), w(d);
    auto accumulate = [&](double weight) {
        y = x + r * w;
        const double v = rho.rho(y) * weight;
        ++evals;
        out[0] += v;
        if (with_direction)
            for (int j = 0; j < d; ++j) out[std::size_t(j) + 1] += v * w[j];
    };
    if (d == 1) {
        for (double s : {-1.0, 1.0}) {
            w[0] = s;
            accumulate(1.0);
        }
        return out;
    }
    if (rule.adaptive) {
        // One component at a time over a fixed partition (polar x azimuth / 8 cells), so that small
        // features such as tangential caps of a discontinuous density are not stepped over by the
        // first Kronrod panel. Each cell has its own evaluation cap; a cell that rounds off at a
        // jump stops there instead of consuming the global cap.
        const int nt = d == 2 ? 1 : std::max(1, rule.polar);
        const int np = std::max(1, rule.azimuth / 8);
        QuadratureOptions o;
        o.abs_tol = tol / double(nt * np);
        o.max_evaluations = 20'000;
        for (std::size_t c = 0; c < out.size(); ++c) {
            auto component = [&](double t, double phi) {
                if (d == 2) {
                    w << std::cos(phi), std::sin(phi);
                } else {
                    const double s = std::sqrt(std::max(0.0, 1 - t * t));
                    w << s * std::cos(phi), s * std::sin(phi), t;
                }
                ++evals;
                const double v = rho.rho(x + r * w);
                return c == 0 ? v : v * w[Eigen::Index(c) - 1];
            };
            double sum = 0;
            for (int j = 0; j < np; ++j) {
                const double p0 = 2 * M_PI * j / np, p1 = 2 * M_PI * (j + 1) / np;
                if (d == 2) {
                    sum += integrate([&](double phi) { return component(0, phi); }, p0, p1, o).value;
                    continue;
                }
                for (int i = 0; i < nt; ++i) {
                    vector_t lo(2), hi(2);
                    lo << -1 + 2.0 * i / nt, p0;
                    hi << -1 + 2.0 * (i + 1) / nt, p1;
                    sum += integrate_box([&](const vector_t& u) { return component(u[0], u[1]); }, Box(lo, hi), o)
                               .value;
                }
            }
            out[c] = sum;
        }
        return out;
    }
    const double dphi = 2 * M_PI / rule.azimuth;
    if (d == 2) {
        for (int k = 0; k < rule.azimuth; ++k) {
            w << std::cos(k * dphi), std::sin(k * dphi);
            accumulate(dphi);
        }
        return out;
    }
    const auto& [t, wt] = legendre(rule.polar);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double s = std::sqrt(std::max(0.0, 1 - t[i] * t[i]));
        for (int k = 0; k < rule.azimuth; ++k) {
            w << s * std::cos(k * dphi), s * std::sin(k * dphi), t[i];
            accumulate(wt[i] * dphi);
        }
    }
    return out;
}

double local_sup(const Density& rho, const vector_t& a, double delta)
{
    if (rho.local_bound) return rho.local_bound(a, delta);
    // Sampled: 3^d grid on the enclosing cube, doubled.
    const int d = rho.d;
    double m = 0;
    const int n = int(std::pow(3, d));
    vector_t y(d);
    for (int code = 0; code < n; ++code) {
        int c = code;
        for (int j = 0; j < d; ++j) {
            y[j] = a[j] + (c % 3 - 1) * delta;
            c /= 3;
        }
        m = std::max(m, std::abs(rho.rho(y)));
    }
    return 2 * m;
}

void validate(const Density& rho, const vector_t& x)
{
    if (rho.d < 1 || rho.d > 3) throw DomainError("potentials support d = 1, 2, 3");
    if (!rho.rho) throw DomainError("density without a callback");
    if (x.size() != rho.d) throw DomainError("evaluation point has the wrong dimension");
    if (!(rho.decay_m > 0)) throw DomainError("decay certificate needs M > 0");
    const DecayCheck c = check_decay(rho);
    if (!c.ok) throw DomainError("decay certificate violated at a sampled point");
}

struct Kernel {
    std::function<double(double)> radial;       // weight of the sphere integral at radius r
    std::function<double(double)> inner_bound;  // integral of the |kernel| r^{d-1} over (0, delta), times |S|
    bool direction = false;
};

struct Integrated {
    std::vector<double> value;
    double inner = 0.0;
    double error = 0.0;
    double delta = 0.0;
    std::uint64_t evaluations = 0;
};

Integrated integrate_kernel(const Density& rho, const Kernel& k, const vector_t& x, double delta, double tol,
                            const SphereRule& rule, bool refine)
{
    if (!(delta > 0)) throw DomainError("delta must be positive");
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
    Integrated out;
    double bound = local_sup(rho, x, delta);
    double inner = bound * k.inner_bound(delta);
    while (refine && inner > 0.5 * tol) {
        if (delta / 2 < delta_floor)
            throw ResourceError("singular-ball budget stays above tol at delta = " + std::to_string(delta));
        delta /= 2;
        bound = local_sup(rho, x, delta);
        inner = bound * k.inner_bound(delta);
    }
    out.delta = delta;
    out.inner = inner;
    const std::size_t comps = k.direction ? std::size_t(rho.d) + 1 : 1;
    out.value.assign(comps, 0.0);
    QuadratureOptions o;
    o.abs_tol = 0.5 * tol / double(comps);
    for (std::size_t c = 0; c < comps; ++c) {
        if (k.direction && c == 0) continue;
        auto f = [&](double r) {
            const double w = k.radial(r);
            if (w == 0) return 0.0;
            return w * sphere_integrals(rho, x, r, rule, k.direction, 0.01 * tol, out.evaluations)[c];
        };
        // Dyadic radial panels out to 64 (1 + |x|) so compact features are not stepped over by the tail map.
        std::vector<double> cuts{delta};
        for (double b = std::max(2 * delta, 0.25); b < 64 * (1 + x.norm()); b *= 2) cuts.push_back(b);
        cuts.push_back(INFINITY);
        QuadratureOptions po = o;
        po.abs_tol = o.abs_tol / double(cuts.size() - 1);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            auto q = integrate(f, cuts[i], cuts[i + 1], po);
            if (!q.converged) throw ResourceError("radial quadrature did not converge");
            out.value[c] += q.value;
            out.error += q.error;
        }
    }
    return out;
}

Kernel newton_kernel(int d, double gamma)
{
    const double area = sphere_area(d);
    Kernel k;
    k.radial = [=](double r) { return std::pow(r, d - gamma - 1); };
    k.inner_bound = [=](double delta) { return area * std::pow(delta, d - gamma) / (d - gamma); };
    return k;
}

Kernel log_kernel()
{
    Kernel k;
    k.radial = [](double r) { return -r * std::log(r); };
    // integral over (0, delta) of r |log r| dr, for delta < 1
    k.inner_bound = [](double delta) { return 2 * M_PI * (delta * delta / 4 - delta * delta / 2 * std::log(delta)); };
    return k;
}

void check_newton(const Density& rho, double gamma)
{
    if (!(gamma < rho.d)) throw DomainError("potential needs gamma < d");
    if (!(rho.decay_beta + gamma > rho.d)) throw DomainError("potential needs beta + gamma > d");
}

}  // namespace

double sphere_area(int d)
{
    if (d < 1) throw DomainError("sphere_area needs d >= 1");
    return 2 * std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0);
}

DecayCheck check_decay(const Density& rho, std::size_t samples, std::uint64_t seed)
{
    DecayCheck c;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> logr(-3, 3);
    vector_t y(rho.d);
    for (std::size_t i = 0; i < samples; ++i) {
        for (int j = 0; j < rho.d; ++j) y[j] = normal(rng);
        const double n = y.norm();
        if (n > 0) y *= std::pow(10.0, logr(rng)) / n;
        ++c.samples;
        const double allowed = rho.decay_m * std::pow(1 + y.norm(), -rho.decay_beta);
        if (std::abs(rho.rho(y)) > allowed * (1 + 1e-12)) {
            c.ok = false;
            c.violation = y;
            return c;
        }
    }
    return c;
}

PotentialResult coulomb_potential(const Density& rho, double gamma, const vector_t& x, double delta, double tol,
                                  const SphereRule& rule)
{
    validate(rho, x);
    check_newton(rho, gamma);
    const auto r = integrate_kernel(rho, newton_kernel(rho.d, gamma), x, delta, tol, rule, true);
    return {r.value[0], r.inner, r.error, r.delta, r.evaluations};
}

GradientResult coulomb_gradient(const Density& rho, double gamma, const vector_t& x, double delta, double tol,
                                const SphereRule& rule)
{
    validate(rho, x);
    check_newton(rho, gamma);
    const int d = rho.d;
    if (!(d - gamma - 1 > 0)) throw DomainError("gradient needs d - gamma - 1 > 0");
    const double area = sphere_area(d);
    Kernel k;
    k.direction = true;
    k.radial = [=](double r) { return gamma * std::pow(r, d - gamma - 2); };
    k.inner_bound = [=](double dl) { return gamma * area * std::pow(dl, d - gamma - 1) / (d - gamma - 1); };
    const auto r = integrate_kernel(rho, k, x, delta, tol, rule, true);
    GradientResult g;
    g.value.resize(d);
    for (int j = 0; j < d; ++j) g.value[j] = r.value[std::size_t(j) + 1];
    g.inner_budget = r.inner;
    g.quadrature_error = r.error;
    g.delta = r.delta;
    return g;
}

PotentialResult log_potential_2d(const Density& rho, const vector_t& x, double delta, double tol, const SphereRule& rule)
{
    if (rho.d != 2) throw DomainError("logarithmic potential needs d = 2");
    validate(rho, x);
    if (!(rho.decay_beta > 2)) throw DomainError("logarithmic potential needs beta > 2");
    const auto r = integrate_kernel(rho, log_kernel(), x, std::min(delta, 0.5), tol, rule, true);
    return {r.value[0], r.inner, r.error, r.delta, r.evaluations};
}

namespace {

PoissonReport second_differences(const Density& rho, const Kernel& k, const vector_t& a, double h, double tol,
                                 const SphereRule& rule, double expected)
{
    if (!(h > 0)) throw DomainError("finite-difference step must be positive");
    const auto center = integrate_kernel(rho, k, a, 0.1, tol, rule, true);
    double lap = 0;
    for (int j = 0; j < rho.d; ++j) {
        vector_t p = a, m = a;
        p[j] += h;
        m[j] -= h;
        const double fp = integrate_kernel(rho, k, p, center.delta, tol, rule, false).value[0];
        const double fm = integrate_kernel(rho, k, m, center.delta, tol, rule, false).value[0];
        lap += (fp - 2 * center.value[0] + fm) / (h * h);
    }
    return {-lap, expected};
}

}  // namespace

PoissonReport poisson_residual(const Density& rho, const vector_t& a, double h_fd, double tol, const SphereRule& rule)
{
    if (rho.d != 3) throw DomainError("poisson_residual needs d = 3");
    validate(rho, a);
    check_newton(rho, 1);
    return second_differences(rho, newton_kernel(3, 1), a, h_fd, tol, rule, 4 * M_PI * rho.rho(a));
}

PoissonReport poisson_residual_2d(const Density& rho, const vector_t& a, double h_fd, double tol,
                                  const SphereRule& rule)
{
    if (rho.d != 2) throw DomainError("poisson_residual_2d needs d = 2");
    validate(rho, a);
    if (!(rho.decay_beta > 2)) throw DomainError("logarithmic potential needs beta > 2");
    return second_differences(rho, log_kernel(), a, h_fd, tol, rule, 2 * M_PI * rho.rho(a));
}

}  // namespace daniell
