#pragma once

#include "daniell/types.hpp"

#include <optional>
#include <vector>

namespace daniell {

/**
 * Modulus of continuity C_f(delta) = sup{|f(s) - f(t)| : |s - t| <= delta}.
 * "exact" means the callback is a proven bound (e.g. a declared Lipschitz
 * constant); only exact moduli may drive certified enclosures.
 */
struct Modulus {
    enum class Tag { exact, sampled };

    std::function<double(double)> bound;
    Tag tag = Tag::exact;

    static Modulus lipschitz(double L);

    double operator()(double delta) const { return bound(delta); }
    bool certified() const { return tag == Tag::exact; }
};

using FinitePointSet = std::vector<vector_t>;

struct SupNormEstimate {
    double value = 0.0;                 // sampled maximum of |f|, a lower bound on the sup
    std::optional<double> upper;        // present when a Lipschitz constant was declared
    bool approximate = false;
};

/// Exact maximum of |f| over a finite set.
double sup_norm(const Integrand& f, const FinitePointSet& points);

/// Grid-sampled |f| over a bounded box; with a Lipschitz constant the upper
/// bound adds L times the largest distance from any point to the grid.
SupNormEstimate sup_norm(const Integrand& f, const Box& box, int samples_per_axis,
                         std::optional<double> lipschitz = std::nullopt);

/// Sampled modulus on [a, b] from a uniform grid of n + 1 points, or L * delta
/// when a Lipschitz constant is declared.
double modulus_estimate(const Function1& f, double a, double b, double delta, int samples,
                        std::optional<double> lipschitz = std::nullopt);

double distance_function(const FinitePointSet& points, const vector_t& x);

/**
 * Continuous extension of nonnegative values h on a finite set K:
 * g(x) = d(x, K) * max_y h(y) / |x - y| off K, and g = h on K.
 */
double tietze_extend(const FinitePointSet& points, const std::vector<double>& values, const vector_t& x);

}  // namespace daniell
