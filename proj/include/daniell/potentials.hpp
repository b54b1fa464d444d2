#pragma once

#include "daniell/quadrature.hpp"

#include <optional>

namespace daniell {

/**
 * Charge density on R^d with a caller-declared decay certificate
 * |rho(y)| <= M (1 + |y|)^-beta. local_bound(a, delta) bounds |rho| on the
 * ball of radius delta around a; when empty it is estimated from samples.
 */
struct Density {
    int d = 3;
    Integrand rho;
    double decay_m = 1.0;
    double decay_beta = 0.0;
    std::function<double(const vector_t& a, double delta)> local_bound;
};

struct DecayCheck {
    bool ok = true;
    std::size_t samples = 0;
    std::optional<vector_t> violation;
};

/// Spot-checks the decay certificate at random points (radii up to 10^3 on a log scale).
DecayCheck check_decay(const Density& rho, std::size_t samples = 1000, std::uint64_t seed = 1);

/// Node counts for the spherical average: Gauss-Legendre in cos(polar) by trapezoid in azimuth.
struct SphereRule {
    int polar = 32;
    int azimuth = 64;
    bool adaptive = false;  // adaptive cubature instead of the product rule (for discontinuous densities)
};

struct PotentialResult {
    double value = 0.0;
    double inner_budget = 0.0;      // bound on the omitted singular ball
    double quadrature_error = 0.0;  // radial quadrature estimate
    double delta = 0.0;             // radius actually used
    std::uint64_t evaluations = 0;
    double error_budget() const { return inner_budget + quadrature_error; }
};

struct GradientResult {
    vector_t value;
    double inner_budget = 0.0;
    double quadrature_error = 0.0;
    double delta = 0.0;
};

/**
 * phi_gamma(x) = integral of rho(y) / |x - y|^gamma over |y - x| > delta,
 * as the radial integral of r^{d-gamma-1} times the sphere integral of
 * rho(x + r w). The inner ball is bounded, not integrated; delta is halved
 * until the bound is below tol / 2, down to 1e-12 (then ResourceError).
 * Supports d in {1, 2, 3}.
 */
PotentialResult coulomb_potential(const Density& rho, double gamma, const vector_t& x, double delta = 0.1,
                                  double tol = 1e-8, const SphereRule& rule = {});

/// gamma times the integral of (y - x) / |x - y|^{gamma+2} rho(y); needs d - gamma - 1 > 0.
GradientResult coulomb_gradient(const Density& rho, double gamma, const vector_t& x, double delta = 0.1,
                                double tol = 1e-8, const SphereRule& rule = {});

/// -integral of rho(y) log|x - y| over R^2, inner ball bounded as above.
PotentialResult log_potential_2d(const Density& rho, const vector_t& x, double delta = 0.1, double tol = 1e-8,
                                 const SphereRule& rule = {});

struct PoissonReport {
    double minus_laplacian = 0.0;  // -Laplacian of phi at a by second central differences
    double expected = 0.0;         // |S^{d-1}| rho(a) for the Newton kernel, 2 pi rho(a) for the log kernel
    double residual() const { return std::abs(minus_laplacian - expected); }
    double relative() const { return expected != 0 ? residual() / std::abs(expected) : residual(); }
};

/// Newton potential (d = 3, gamma = 1). All stencil points share one delta.
PoissonReport poisson_residual(const Density& rho, const vector_t& a, double h_fd = 0.05, double tol = 1e-10,
                               const SphereRule& rule = {});
/// Logarithmic potential in the plane.
PoissonReport poisson_residual_2d(const Density& rho, const vector_t& a, double h_fd = 0.05, double tol = 1e-10,
                                  const SphereRule& rule = {});

/// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

}  // namespace daniell
