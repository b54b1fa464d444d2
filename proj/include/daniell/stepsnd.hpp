#pragma once

#include "daniell/steps1d.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace daniell {

/// Product of bounded intervals; dimension 0 is the one-point space.
class Rectangle {
public:
    Rectangle() = default;
    explicit Rectangle(std::vector<Interval> axes) : axes_(std::move(axes)) {}

    /// Product of open-closed intervals (lo, hi].
    static Rectangle open_closed(const std::vector<Rational>& lo, const std::vector<Rational>& hi);
    static Rectangle closed(const std::vector<Rational>& lo, const std::vector<Rational>& hi);

    std::size_t dim() const { return axes_.size(); }
    const Interval& axis(std::size_t j) const { return axes_[j]; }
    const std::vector<Interval>& axes() const { return axes_; }

    bool empty() const;
    Rational volume() const;
    bool contains(const std::vector<Rational>& x) const;
    Rectangle without_axis(std::size_t j) const;
    std::vector<Rational> interior_point() const;
    /// Closed hull of the rectangle.
    Rectangle closure() const;
    bool intersects(const Rectangle& other) const;

    friend bool operator==(const Rectangle&, const Rectangle&) = default;

private:
    std::vector<Interval> axes_;
};

struct PartND {
    Rectangle rect;
    Rational coeff;
};

inline constexpr std::size_t default_cell_cap = 1'000'000;

/**
 * Step function on R^d in canonical form: disjoint cells of the per-axis
 * common refinement (products of interval parts), zero cells dropped.
 * Canonicalization is recursive over axes and skips empty slices; it throws
 * ResourceError once more than cell_cap cells would be produced.
 */
class StepFunctionND {
public:
    explicit StepFunctionND(std::size_t dim = 1) : dim_(dim) {}

    static StepFunctionND canonicalize(std::size_t dim, std::span<const PartND> terms,
                                       std::size_t cell_cap = default_cell_cap);
    static StepFunctionND indicator(const Rectangle& r, const Rational& coeff = 1);
    static StepFunctionND from_1d(const StepFunction1D& f);

    using ValueOp = Rational (*)(const Rational&, const Rational&);
    /// Applies op cellwise on the common refinement of f and g; op(0, 0) must be 0.
    static StepFunctionND pointwise(const StepFunctionND& f, const StepFunctionND& g, ValueOp op,
                                    std::size_t cell_cap = default_cell_cap);

    std::size_t dim() const { return dim_; }
    const std::vector<PartND>& parts() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }

    Rational operator()(const std::vector<Rational>& x) const;

    friend bool operator==(const StepFunctionND& f, const StepFunctionND& g);

private:
    std::size_t dim_;
    std::vector<PartND> parts_;
};

StepFunctionND operator+(const StepFunctionND& f, const StepFunctionND& g);
StepFunctionND operator-(const StepFunctionND& f, const StepFunctionND& g);
StepFunctionND operator-(const StepFunctionND& f);
StepFunctionND operator*(const Rational& a, const StepFunctionND& f);
StepFunctionND operator*(const StepFunctionND& f, const StepFunctionND& g);
StepFunctionND join(const StepFunctionND& f, const StepFunctionND& g);
StepFunctionND meet(const StepFunctionND& f, const StepFunctionND& g);
StepFunctionND abs(const StepFunctionND& f);
bool is_nonnegative(const StepFunctionND& f);

Rational volume_integral(const StepFunctionND& f);

/// Integrates out axis (0-based); the result has dimension dim - 1.
StepFunctionND partial_integral(const StepFunctionND& f, std::size_t axis);

struct RepeatedIntegralReport {
    bool ok = true;
    Rational volume;
    std::size_t orders_checked = 0;
    std::optional<std::vector<std::size_t>> failing_order;
    Rational difference = 0;
};

/// Compares volume_integral with partial integration in every axis order.
RepeatedIntegralReport repeated_integral_check(const StepFunctionND& f);

/**
 * Decides soundly whether the closure of a cell lies in the target open set.
 * A false "yes" breaks the tiling invariant, a false "no" only loses volume.
 */
using ClosureInside = std::function<bool(const Rectangle& closed_cell)>;

/**
 * Level-n dyadic tiling of an open set: the cells
 * prod_j ((k_j - 1)/2^n, k_j/2^n] meeting the bounding box whose closures lie
 * in U. Enumeration is lazy; for_each visits cells in lexicographic order.
 */
class Tiling {
public:
    Tiling(ClosureInside inside, int level, Rectangle bounding_box, std::size_t cell_cap = default_cell_cap);

    int level() const { return level_; }
    std::size_t candidate_count() const { return candidates_; }

    void for_each(const std::function<void(const Rectangle&)>& visit) const;
    std::vector<Rectangle> tiles() const;
    Rational volume() const;

private:
    ClosureInside inside_;
    int level_;
    Rectangle box_;
    std::vector<BigInt> k_lo_, k_hi_;  // inclusive index ranges per axis
    std::size_t candidates_ = 0;
};

Tiling dyadic_tiling(ClosureInside inside, int level, const Rectangle& bounding_box,
                     std::size_t cell_cap = default_cell_cap);

}  // namespace daniell
