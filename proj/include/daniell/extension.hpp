#pragma once

#include "daniell/stepsnd.hpp"

#include <optional>

namespace daniell {

/// Step-function sequence indexed from n = 1.
using Generator = std::function<StepFunctionND(std::size_t n)>;

enum class Direction { up, down };

/** A member of L-up (direction up, f_n increasing) or L-down (f_n decreasing). */
struct MonotoneRep {
    Direction direction = Direction::up;
    Generator generator;
    std::optional<double> limit_hint;
};

/// An ordering that should hold between two step functions fails at a point.
class OrderViolation : public DomainError {
public:
    OrderViolation(const std::string& what, std::size_t index, std::vector<Rational> witness)
        : DomainError(what), index_(index), witness_(std::move(witness)) {}
    std::size_t index() const { return index_; }
    const std::vector<Rational>& witness() const { return witness_; }

private:
    std::size_t index_;
    std::vector<Rational> witness_;
};

inline constexpr double divergence_threshold = 1e12;

struct ExtendedIntegral {
    enum class Status { converged, diverged, exhausted };
    Status status = Status::exhausted;
    std::size_t steps = 0;
    Rational previous;  // I(f_{n-1})
    Rational last;      // I(f_n)
    bool heuristic_limit = true;
};

/**
 * Follows I(f_n) until three consecutive gaps fall below tol, the partials
 * leave [-1e12, 1e12] (diverged), or n_max is reached. Monotonicity of the
 * consulted prefix is checked exactly; a failure throws OrderViolation.
 */
ExtendedIntegral extended_integral(const MonotoneRep& rep, double tol, std::size_t n_max);

/**
 * f_{-,n} <= f <= f_{+,n}. As n grows the minus side should increase and the
 * plus side decrease.
 */
struct Bracket {
    Generator minus;
    Generator plus;
};

struct BracketCertificate {
    std::size_t index = 0;
    Rational gap;    // I(f_+) - I(f_-)
    Rational lower;  // I(f_-)
    Rational upper;  // I(f_+)
};

/// The bracket never got narrower than eps within n_max steps.
class BracketFailure : public NumericError {
public:
    BracketFailure(const std::string& what, BracketCertificate best) : NumericError(what), best_(std::move(best)) {}
    const BracketCertificate& best() const { return best_; }

private:
    BracketCertificate best_;
};

/// First n <= n_max with gap <= eps. Throws OrderViolation if plus < minus somewhere.
BracketCertificate certify_bracket(const Bracket& bracket, const Rational& eps, std::size_t n_max);

/// A point where f < 0, if any.
std::optional<std::vector<Rational>> negative_witness(const StepFunctionND& f);

// Level approximation h_rho = sum_{j<n} [r_j <= h < r_{j+1}] r_j.

/// {k / 2^n : k = 1 .. n 2^n}.
std::vector<Rational> binary_partition(int n);
/// max{r_1, r_{j+1} - r_j, 1 / r_n}.
Rational level_mesh(const std::vector<Rational>& grid);

Rational level_value(const Rational& h, const std::vector<Rational>& grid);
double level_value(double h, const std::vector<Rational>& grid);

StepFunctionND level_approximation(const StepFunctionND& h, const std::vector<Rational>& grid);
Integrand level_approximation(Integrand h, std::vector<Rational> grid);

/// g_n = 1 ∧ (n (f - f ∧ t)), increasing to [f > t].
Integrand pushup(Integrand f, double t, int n);

/** Radial kernel with support in the closed ball of the given radius and unit mass. */
struct Kernel {
    enum class Shape { bump, triangle };  // (1 - s^2)^3 and 1 - s, s = |u| / r
    Shape shape = Shape::bump;
    double radius = 1.0;

    /// Normalized density at |u| = dist in dimension d (1 or 2).
    double operator()(double dist, int d) const;
    /// Total variation of the density, a Lipschitz constant for moving averages.
    double variation(int d) const;
};

using Membership = std::function<bool(const vector_t&)>;

/// A^rho(x) = integral over A of rho(y - x) dy, for d <= 2.
double moving_average(const Membership& A, const Kernel& kernel, const vector_t& x, double tol = 1e-8);

}  // namespace daniell
