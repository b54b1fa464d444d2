#pragma once

#include "daniell/improper.hpp"

#include <map>
#include <string>
#include <vector>

namespace daniell {

/// Gamma(s) as the integral of t^{s-1} e^{-t}, split at t = 1.
double gamma_integral(double s, double tol = 1e-12);

struct BetaReport {
    double direct = 0.0;         // integral over (0, 1) of u^{s-1} (1-u)^{t-1}
    double trigonometric = 0.0;  // 2 times the integral over (0, pi/2) of cos^{2s-1} sin^{2t-1}
    double gamma_s = 0.0, gamma_t = 0.0, gamma_st = 0.0;
    double polar_product = 0.0;  // Gamma(s) Gamma(t) as a quarter-plane Gaussian integral in polar coordinates

    /// B(s, t) Gamma(s + t) / (Gamma(s) Gamma(t)); 1 when the identity holds.
    double identity_ratio() const { return direct * gamma_st / (gamma_s * gamma_t); }
};

BetaReport beta_integral(double s, double t, double tol = 1e-12);

/**
 * Integral over t > -sqrt(x) of (1 + t/sqrt(x))^x e^{-t sqrt(x)}; tends to
 * sqrt(2 pi). The log-integrand is -x (w - log(1 + w)) with w = t / sqrt(x).
 */
double stirling_integral(double x, double tol = 1e-12);
/// Gamma(x + 1) / (sqrt(2 pi x) x^x e^{-x}) through stirling_integral.
double stirling_ratio(double x, double tol = 1e-12);

/**
 * Integral over R of e^{-a x^2 + b x}. Re a > 0 is integrated directly;
 * Re a = 0 (with Re b = 0) goes through a + t for t -> 0+ and polynomial
 * extrapolation.
 */
complex_t gaussian_complex(complex_t a, complex_t b, double tol = 1e-10);

struct FresnelResult {
    double cos_integral = 0.0;  // integral over (0, inf) of cos x^2
    double sin_integral = 0.0;
    bool stabilized = false;
    std::vector<double> t;
    std::vector<complex_t> g;  // G(t) = integral over (0, inf) of e^{-t x^2} e^{i x^2}
};

/// G(t) on t = 2^-k / 2 and Neville extrapolation to t = 0.
FresnelResult fresnel(double tol = 1e-8);

/// G(t) for one damping value.
complex_t fresnel_damped(double t, double tol = 1e-12);

struct LogSineReport {
    double value = 0.0;      // integral over (0, pi/2) of log sin
    double reflected = 0.0;  // the same with cos
    double dominating = 0.0; // integral of |log(2x/pi)|, a bound for the absolute integral
    double absolute = 0.0;   // integral of |log sin|
};

LogSineReport euler_log_sine(double tol = 1e-12);

using CatalogParams = std::map<std::string, double>;

struct CatalogEntry {
    std::string key;
    std::string anchor;
    std::string description;
    double tolerance = 0.0;  // declared absolute agreement
    CatalogParams defaults;
};

struct CatalogReport {
    std::string key;
    std::string anchor;
    complex_t value;
    complex_t target;
    double abs_error = 0.0;
    double tolerance = 0.0;
    Classification classification = Classification::absolutely_convergent;
    bool pass = false;
};

const std::vector<CatalogEntry>& catalog();

/// Evaluates a named integral and compares it with its closed form. Unknown keys throw DomainError.
CatalogReport named_catalog_eval(const std::string& key, double tol = 1e-8, const CatalogParams& params = {});

}  // namespace daniell
