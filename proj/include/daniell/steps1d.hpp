#pragma once

#include "daniell/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace daniell {

/**
 * Bounded interval with exact rational endpoints and independent open/closed
 * flags. The empty interval is representable (lo == hi with an open side) and
 * is the zero function when used as an indicator.
 */
class Interval {
public:
    Interval() = default;
    Interval(Rational lo, Rational hi, bool lo_closed, bool hi_closed);

    static Interval open(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), false, false}; }
    static Interval closed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, true}; }
    /// (lo, hi]
    static Interval open_closed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), false, true}; }
    /// [lo, hi)
    static Interval closed_open(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, false}; }
    static Interval point(const Rational& c) { return {c, c, true, true}; }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    bool lo_closed() const { return lo_closed_; }
    bool hi_closed() const { return hi_closed_; }

    bool empty() const { return lo_ == hi_ && !(lo_closed_ && hi_closed_); }
    bool is_point() const { return lo_ == hi_ && lo_closed_ && hi_closed_; }
    Rational width() const { return hi_ - lo_; }
    bool contains(const Rational& x) const;

    /// A rational point inside a nonempty interval.
    Rational interior_point() const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Rational lo_ = 0;
    Rational hi_ = 0;
    bool lo_closed_ = false;
    bool hi_closed_ = false;
};

struct Part {
    Interval interval;
    Rational coeff;
};

/**
 * Finite linear combination of bounded intervals, stored canonically as
 * disjoint interval parts (open intervals and single points) of the common
 * refinement of its defining intervals, ordered left to right, with no zero
 * coefficients. Adjacent parts with equal coefficients are kept apart, so two
 * equal functions may store different parts; operator== compares pointwise.
 */
class StepFunction1D {
public:
    StepFunction1D() = default;

    /// Pointwise sum of the given terms in canonical form.
    static StepFunction1D canonicalize(std::span<const Part> terms);
    static StepFunction1D indicator(const Interval& iv, const Rational& coeff = 1);

    const std::vector<Part>& parts() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }

    Rational operator()(const Rational& x) const;

    /// Sorted distinct endpoints of the stored parts.
    std::vector<Rational> breakpoints() const;

    friend bool operator==(const StepFunction1D& f, const StepFunction1D& g);

private:
    std::vector<Part> parts_;
};

enum class LatticeOp { join, meet, abs };
enum class AlgebraOp { add, sub, mul };

StepFunction1D join(const StepFunction1D& f, const StepFunction1D& g);
StepFunction1D meet(const StepFunction1D& f, const StepFunction1D& g);
StepFunction1D abs(const StepFunction1D& f);
/// abs ignores g.
StepFunction1D lattice(LatticeOp op, const StepFunction1D& f, const StepFunction1D& g);

StepFunction1D operator+(const StepFunction1D& f, const StepFunction1D& g);
StepFunction1D operator-(const StepFunction1D& f, const StepFunction1D& g);
StepFunction1D operator-(const StepFunction1D& f);
StepFunction1D operator*(const Rational& a, const StepFunction1D& f);
/// Pointwise product; for indicators this is intersection.
StepFunction1D operator*(const StepFunction1D& f, const StepFunction1D& g);
StepFunction1D algebra(AlgebraOp op, const StepFunction1D& f, const StepFunction1D& g);
StepFunction1D scale(const Rational& a, const StepFunction1D& f);

/// True when f(x) >= 0 everywhere.
bool is_nonnegative(const StepFunction1D& f);

/// Sum of coefficient times width; point parts contribute nothing.
Rational width_integral(const StepFunction1D& f);

/**
 * Increasing weight made of a continuous piecewise-linear part and point
 * jumps. slopes[k] applies on the k-th open piece cut out by breakpoints, so
 * slopes.size() == breakpoints.size() + 1 and the first and last slopes cover
 * the two unbounded pieces.
 */
class StieltjesWeight {
public:
    struct Jump {
        Rational at;
        Rational mass;
    };

    StieltjesWeight(std::vector<Rational> breakpoints, std::vector<Rational> slopes, std::vector<Jump> jumps = {});

    /// phi(x) = x.
    static StieltjesWeight lebesgue() { return StieltjesWeight({}, {Rational(1)}); }

    /// Mass assigned to a bounded interval: phi(b-0) - phi(a+0) plus endpoint jumps it contains.
    Rational mass(const Interval& iv) const;

    const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    const std::vector<Rational>& slopes() const { return slopes_; }
    const std::vector<Jump>& jumps() const { return jumps_; }

private:
    Rational continuous_part(const Rational& x) const;
    Rational jump_mass_between(const Rational& a, const Rational& b) const;  // open (a, b)
    Rational jump_at(const Rational& c) const;

    std::vector<Rational> breakpoints_;
    std::vector<Rational> slopes_;
    std::vector<Jump> jumps_;  // sorted by position, distinct
};

Rational stieltjes_integral(const StepFunction1D& f, const StieltjesWeight& w);

struct MonotoneTailReport {
    struct Violation {
        std::size_t index;  // offending element of the sequence
        Rational witness;   // point where the condition fails
        enum class Kind { negative, increase } kind;
    };

    bool ok = true;
    std::vector<Rational> integrals;
    std::optional<Violation> violation;
};

/// Verifies h[0] >= h[1] >= ... >= 0 exactly and reports the width integrals.
MonotoneTailReport monotone_tail_check(std::span<const StepFunction1D> hs);

}  // namespace daniell
