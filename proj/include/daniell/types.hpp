#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace daniell {

/** Exact rational scalar used by the step-function layers. */
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/** Dense real types */
using scalar_t = double;
using vector_t = Eigen::Matrix<scalar_t, Eigen::Dynamic, 1>;
using matrix_t = Eigen::Matrix<scalar_t, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/** Real-valued integrand on R^d. */
using Integrand = std::function<double(const vector_t&)>;
/** Real-valued integrand on R. */
using Function1 = std::function<double(double)>;

// Error taxonomy. The CLI maps these onto exit codes.

/// Input outside an operation's domain (unbounded interval, gamma >= d, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numeric procedure did not produce a trustworthy answer.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An evaluation or cell cap was hit.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Axis-aligned real box; sides may be infinite where an operation allows it. */
struct Box {
    vector_t lo;
    vector_t hi;

    Box() = default;
    Box(vector_t lo_, vector_t hi_) : lo(std::move(lo_)), hi(std::move(hi_))
    {
        if (lo.size() != hi.size()) throw DomainError("box corners differ in dimension");
        for (Eigen::Index j = 0; j < lo.size(); ++j)
            if (!(lo[j] <= hi[j])) throw DomainError("box with lo > hi");
    }
    static Box interval(double a, double b) { return Box(vector_t::Constant(1, a), vector_t::Constant(1, b)); }

    Eigen::Index dim() const { return lo.size(); }
    bool bounded() const { return lo.allFinite() && hi.allFinite(); }
    double volume() const { return (hi - lo).prod(); }
    vector_t center() const { return 0.5 * (lo + hi); }
    double diagonal() const { return (hi - lo).norm(); }
};

/** A certified pair of bounds on an integral. */
struct Enclosure {
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t evaluations = 0;
    double mesh = 0.0;
    bool certified = true;

    double value() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
    bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Carries the best enclosure reached before a cap was hit.
class PartialEnclosureError : public ResourceError {
public:
    PartialEnclosureError(const std::string& what, Enclosure partial)
        : ResourceError(what), partial_(partial) {}
    const Enclosure& partial() const { return partial_; }

private:
    Enclosure partial_;
};

inline Rational to_rational(double x)
{
    if (!std::isfinite(x)) throw DomainError("non-finite value cannot be made rational");
    return Rational(x);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Largest double not above q.
inline double to_double_down(const Rational& q)
{
    double d = q.convert_to<double>();
    while (Rational(d) > q) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
    return d;
}

/// Smallest double not below q.
inline double to_double_up(const Rational& q)
{
    double d = q.convert_to<double>();
    while (Rational(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

std::string to_string(const Rational& q);

}  // namespace daniell
