#pragma once

#include "daniell/quadrature.hpp"
#include "daniell/stepsnd.hpp"
#include "daniell/toolbox.hpp"

#include <optional>
#include <vector>

namespace daniell {

using VectorMap = std::function<vector_t(const vector_t&)>;
using MatrixMap = std::function<matrix_t(const vector_t&)>;

/**
 * Parametrization u -> phi(u) of an m-dimensional piece of R^d over a box
 * in R^m. When dphi is empty the d x m derivative is taken by central
 * differences.
 */
struct Chart {
    int m = 0;
    int d = 0;
    VectorMap phi;
    MatrixMap dphi;
    Box domain;

    matrix_t derivative(const vector_t& u) const;
};

namespace charts {

/// (r, theta) -> (r cos theta, r sin theta) on (0, inf) x (0, 2 pi).
Chart polar();
/// (r, theta, phi) -> r (sin theta cos phi, sin theta sin phi, cos theta) on (0, inf) x (0, pi) x (0, 2 pi).
Chart spherical();
/// Sphere of radius r in R^3 by colatitude and longitude.
Chart sphere(double r = 1.0);
/// Upper hemisphere of radius r by colatitude in (0, pi/2).
Chart hemisphere_angles(double r = 1.0);
/// Upper hemisphere as the graph z = sqrt(r^2 - rho^2) in polar coordinates (rho, t).
/// The density blows up like (r - rho)^-1/2 at the rim, so doubles resolve it to about 1e-8 relative.
Chart hemisphere_graph(double r = 1.0);
/// Upper hemisphere by stereographic projection from the south pole, polar coordinates (s, t), s in (0, 1).
Chart hemisphere_stereographic(double r = 1.0);
/// (a cos t, b sin t, b t) for t in (0, tau).
Chart coil(double a, double b, double tau);
/// Torus with center radius a and tube radius b.
Chart torus(double a, double b);
/// Circle of radius r in R^2.
Chart circle(double r = 1.0);
/// Straight segment from p to q, t in (0, 1).
Chart segment(const vector_t& p, const vector_t& q);
/// Graph u -> (psi(u), u) of a scalar function on a box in R^m.
Chart graph(std::function<double(const vector_t&)> psi, std::function<vector_t(const vector_t&)> grad, const Box& domain);
/// Linear map x -> T x on a box.
Chart linear(const matrix_t& t, const Box& domain);
/// Standard (m-1)-simplex {x_i >= 0, sum x_i = 1} in R^m over the unit box by the Duffy map.
Chart simplex(int m);

}  // namespace charts

/// Scales the image of a chart by r.
Chart scaled(const Chart& c, double r);
/// Applies an orthogonal (or any linear) map to the image of a chart.
Chart transformed(const Chart& c, const matrix_t& q);

/// sqrt(det(J^T J)), J the chart derivative at u.
double gram_extent_density(const Chart& c, const vector_t& u);

/// m-dimensional volume sqrt(det(v_i . v_j)) of the parallelotope spanned by the columns.
double gram_parallelotope_volume(const matrix_t& vectors);

/// Integral over the chart domain of g(phi(x)) |det phi'(x)| (requires m = d).
QuadratureResult jacobian_integrate(const Chart& c, const Integrand& g, double tol = 1e-10);

/// Integral of f over the chart image with the extent density.
QuadratureResult surface_integral(const Chart& c, const Integrand& f, double tol = 1e-10);
QuadratureResult surface_area(const Chart& c, double tol = 1e-10);
QuadratureResult curve_length(const Chart& c, double tol = 1e-10);

/// Flux of F through a chart of the level set [psi = v], oriented by grad psi.
QuadratureResult flux_integral(const Chart& level_chart, const VectorMap& grad_psi, const VectorMap& field,
                               double tol = 1e-10);

/// One chart per level value: the caller's family of level-set parametrizations.
using LevelCharts = std::function<std::vector<Chart>(double v)>;

struct CoareaReport {
    double volume_side = 0.0;
    double level_side = 0.0;
    double discrepancy() const { return std::abs(volume_side - level_side); }
};

/**
 * Compares the box integral of f |grad psi| with the integral over
 * v in [v0, v1] of the level-set integrals of f.
 */
CoareaReport coarea_check(const VectorMap& grad_psi, const Integrand& f, const Box& box, const LevelCharts& levels,
                          double v0, double v1, double tol = 1e-8);

struct DivergenceReport {
    double volume_side = 0.0;  // integral of div F over [a <= psi <= b], by the coarea formula
    double flux_side = 0.0;    // flux through [psi = b] minus flux through [psi = a]
    double discrepancy() const { return std::abs(volume_side - flux_side); }
};

DivergenceReport divergence_check(const VectorMap& grad_psi, const VectorMap& field, const Integrand& div_field,
                                  const LevelCharts& levels, double a, double b, double tol = 1e-8);

struct OpenSet {
    std::function<bool(const vector_t&)> contains;
    ClosureInside closure_inside;  // closed dyadic cell inside the set
    Box bounding_box;
};

struct OpenCubature {
    double value = 0.0;            // sum over the tiles inside the set
    double quadrature_error = 0.0;
    double boundary_budget = 0.0;  // sampled |g| times the volume of cells touching the boundary
    std::size_t tiles = 0;
};

/**
 * Integral over a bounded open set: dyadic tiles at the given level plus a
 * boundary budget. Each tile gets tol / tiles. With a modulus every tile is
 * enclosed by certified_integral and quadrature_error is the summed half-width.
 */
OpenCubature integrate_open(const Integrand& g, const OpenSet& set, int level, double tol = 1e-10,
                            const std::optional<Modulus>& modulus = std::nullopt);

/// Change of variables over an open parameter set U (chart domain ignored).
OpenCubature jacobian_integrate(const Chart& c, const Integrand& g, const OpenSet& u, int level, double tol = 1e-10);

/// Unit disk in R^2 with an exact closed-cell test.
OpenSet unit_disk();

}  // namespace daniell
