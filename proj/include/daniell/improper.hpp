#pragma once

#include "daniell/quadrature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace daniell {

enum class Classification { absolutely_convergent, conditionally_convergent_heuristic, divergent, unknown };

std::string to_string(Classification c);

/// Trend of one one-sided limit: partial integrals from the split point to each node.
struct EndpointReport {
    double endpoint = 0.0;
    std::vector<double> nodes;
    std::vector<double> partials;
    std::vector<double> accelerated;  // Aitken delta-squared of the partials
    bool stabilized = false;
    double limit = 0.0;
};

struct ImproperOptions {
    double tol = 1e-8;
    /// Integrate straight through infinite ends with the u / (1 - u) map (caller
    /// asserts absolute integrability and smoothness).
    bool smooth_tail = false;
    int max_steps = 24;
    std::optional<double> split;
    std::uint64_t max_evaluations = 0;  // 0 selects default_eval_cap()
};

struct ImproperResult {
    complex_t value;
    Classification classification = Classification::unknown;
    EndpointReport lower;  // limit x -> a+
    EndpointReport upper;  // limit y -> b-
    std::optional<double> abs_integral;  // finite value of the integral of |f| when found
    std::uint64_t evaluations = 0;
};

/**
 * Integral over (a, b) as lim_{x -> a+} of the integral from x to c plus
 * lim_{y -> b-} of the integral from c to y. Nodes approach finite ends
 * geometrically with ratio 1/2 and infinite ends as c -/+ 2^k. A limit is
 * stable after three consecutive changes below tol in the accelerated
 * sequence. Non-stable limits are classified, not thrown.
 */
ImproperResult improper_integral(const Function1& f, double a, double b, const ImproperOptions& opts = {});

/// Aitken delta-squared transform (same length; the first two entries are copied).
std::vector<double> aitken(const std::vector<double>& s);

struct DominationReport {
    bool accepted = false;
    std::optional<double> violation_at;
    double integral_f = 0.0;
    double integral_phi = 0.0;
};

/// Spot-checks |f| <= phi on samples, then integrates both.
DominationReport dominated_test(const Function1& f, const Function1& phi, double a, double b, double tol = 1e-8,
                                int samples = 1000);

struct FrullaniResult {
    double formula = 0.0;     // (f(inf) - f(0+)) log(b / a)
    double quadrature = 0.0;  // integral over (0, inf) of (f(bt) - f(at)) / t
    double f0 = 0.0;
    double finf = 0.0;
    double difference() const { return std::abs(formula - quadrature); }
};

FrullaniResult frullani(const Function1& f, double a, double b, double tol = 1e-8);

/// Integral over (0, inf) of e^{-rt} f(t). Throws NumericError when it does not converge.
double laplace_transform(const Function1& f, double r, double tol = 1e-10);

struct LimitResult {
    double value = 0.0;
    bool stabilized = false;
    std::vector<double> radii;
    std::vector<double> transforms;
    std::vector<double> estimates;  // diagonal of the extrapolation table
};

/// lim_{r -> 0+} of the Laplace transform along r_k = r0 2^-k with polynomial (Neville) extrapolation.
LimitResult laplace_limit_r0(const Function1& f, double tol = 1e-6, double r0 = 0.5, int levels = 12);

/// Integral over [lo, hi] (the support hint, may be infinite) of f(x) e^{-i x xi}.
complex_t fourier_transform(const Function1& f, double lo, double hi, double xi, double tol = 1e-10);

}  // namespace daniell
