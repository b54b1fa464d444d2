#include "daniell/toolbox.hpp"

#include <algorithm>
#include <cmath>

namespace daniell {

Modulus Modulus::lipschitz(double L)
{
    if (!(L >= 0)) throw DomainError("Lipschitz constant must be nonnegative");
    return {[L](double delta) { return L * delta; }, Tag::exact};
}

double sup_norm(const Integrand& f, const FinitePointSet& points)
{
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, std::abs(f(p)));
    return m;
}

SupNormEstimate sup_norm(const Integrand& f, const Box& box, int samples_per_axis, std::optional<double> lipschitz)
{
    if (!box.bounded()) throw DomainError("sup_norm needs a bounded box");
    if (samples_per_axis < 2) throw DomainError("sup_norm needs at least two samples per axis");
    const Eigen::Index d = box.dim();
    const vector_t step = (box.hi - box.lo) / double(samples_per_axis - 1);
    std::size_t total = 1;
    for (Eigen::Index j = 0; j < d; ++j) total *= static_cast<std::size_t>(samples_per_axis);
    vector_t x(d);
    double m = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t rest = t;
        for (Eigen::Index j = 0; j < d; ++j) {
            x[j] = box.lo[j] + step[j] * double(rest % static_cast<std::size_t>(samples_per_axis));
            rest /= static_cast<std::size_t>(samples_per_axis);
        }
        m = std::max(m, std::abs(f(x)));
    }
    SupNormEstimate out;
    out.value = m;
    if (lipschitz) out.upper = m + *lipschitz * 0.5 * step.norm();
    else out.approximate = true;
    return out;
}

double modulus_estimate(const Function1& f, double a, double b, double delta, int samples,
                        std::optional<double> lipschitz)
{
    if (!(delta > 0)) throw DomainError("modulus_estimate needs delta > 0");
    if (lipschitz) return *lipschitz * delta;
    if (samples < 1) throw DomainError("modulus_estimate needs samples >= 1");
    const double h = (b - a) / samples;
    std::vector<double> values(static_cast<std::size_t>(samples) + 1);
    for (int i = 0; i <= samples; ++i) values[static_cast<std::size_t>(i)] = f(i == samples ? b : a + i * h);
    // Offsets up to delta in grid units; the small slack keeps exact multiples of h.
    const auto reach = h > 0 ? static_cast<std::size_t>(std::floor(delta / h * (1 + 1e-12))) : 0;
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t k = 1; k <= reach && i + k < values.size(); ++k)
            m = std::max(m, std::abs(values[i + k] - values[i]));
    return m;
}

double distance_function(const FinitePointSet& points, const vector_t& x)
{
    if (points.empty()) throw DomainError("distance to an empty set is undefined");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) best = std::min(best, (x - p).norm());
    return best;
}

double tietze_extend(const FinitePointSet& points, const std::vector<double>& values, const vector_t& x)
{
    if (points.empty()) throw DomainError("tietze_extend needs a nonempty set");
    if (points.size() != values.size()) throw DomainError("tietze_extend needs one value per point");
    double ratio = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (values[i] < 0) throw DomainError("tietze_extend needs nonnegative values");
        const double r = (x - points[i]).norm();
        if (r == 0.0) return values[i];
        ratio = std::max(ratio, values[i] / r);
    }
    return distance_function(points, x) * ratio;
}

}  // namespace daniell
