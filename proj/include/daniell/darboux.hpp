#pragma once

#include "daniell/stepsnd.hpp"
#include "daniell/toolbox.hpp"

#include <optional>

namespace daniell {

/**
 * Product partition of a closed box: per-axis strictly increasing rational
 * breakpoints whose ends are the box corners. Cells are open-closed.
 */
class MultiPartition {
public:
    explicit MultiPartition(std::vector<std::vector<Rational>> breakpoints);

    /// n equal gaps on every axis. Double corners are taken exactly.
    static MultiPartition uniform(const Box& box, int n);
    static MultiPartition uniform(const std::vector<Rational>& lo, const std::vector<Rational>& hi, int n);

    std::size_t dim() const { return axes_.size(); }
    const std::vector<Rational>& axis(std::size_t j) const { return axes_[j]; }
    std::size_t cell_count() const;
    /// Largest gap over all axes.
    Rational mesh() const;
    Box box() const;

    /// Bisects every gap on one axis.
    MultiPartition refine(std::size_t axis) const;

    /// Visits the cells in lexicographic order (last axis fastest).
    void for_each_cell(const std::function<void(const Rectangle&)>& visit) const;

private:
    std::vector<std::vector<Rational>> axes_;
};

struct DarbouxPair {
    StepFunctionND lower;
    StepFunctionND upper;
    bool certified = false;
};

/**
 * Lower and upper step approximants. With a modulus each cell gets
 * f(center) -/+ C_f(half diagonal); otherwise the cell corners and center are
 * sampled and the pair is not certified.
 */
DarbouxPair darboux_pair(const Integrand& f, const MultiPartition& partition,
                         const std::optional<Modulus>& modulus = std::nullopt);

enum class SampleRule { center, left, random };

/// Tag point per cell: center, lower corner of the closed cell, or uniform inside (seeded).
double riemann_sum(const Integrand& f, const MultiPartition& partition, SampleRule rule = SampleRule::center,
                   std::uint64_t seed = 0);

/**
 * Enclosure of the integral over a bounded box with width at most tol.
 * Uniform dyadic bisection of the widest axis; cell bounds come from the
 * modulus at the half diagonal, plus a floating-point rounding allowance.
 * Throws PartialEnclosureError carrying the finest affordable enclosure when
 * the evaluation cap (0 selects default_eval_cap()) would be exceeded.
 */
Enclosure certified_integral(const Integrand& f, const Box& box, const Modulus& modulus, double tol,
                             std::uint64_t max_evaluations = 0);

}  // namespace daniell
