#include "daniell/extension.hpp"

#include "daniell/quadrature.hpp"

#include <algorithm>

namespace daniell {

std::optional<std::vector<Rational>> negative_witness(const StepFunctionND& f)
{
    for (const auto& p : f.parts())
        if (p.coeff < 0) return p.rect.interior_point();
    return std::nullopt;
}

ExtendedIntegral extended_integral(const MonotoneRep& rep, double tol, std::size_t n_max)
{
    if (!rep.generator) throw DomainError("extended_integral needs a generator");
    if (n_max < 1) throw DomainError("extended_integral needs n_max >= 1");
    ExtendedIntegral out;
    const Rational threshold = to_rational(divergence_threshold);
    const Rational tolerance = to_rational(tol);
    StepFunctionND prev = rep.generator(1);
    out.last = volume_integral(prev);
    out.previous = out.last;
    out.steps = 1;
    std::vector<Rational> gaps;
    int small = 0;
    for (std::size_t n = 2; n <= n_max; ++n) {
        StepFunctionND next = rep.generator(n);
        const StepFunctionND step = rep.direction == Direction::up ? next - prev : prev - next;
        if (auto w = negative_witness(step))
            throw OrderViolation("generator is not monotone at index " + std::to_string(n), n, *w);
        out.previous = out.last;
        out.last = volume_integral(next);
        out.steps = n;
        const Rational gap = abs(out.last - out.previous);
        gaps.push_back(gap);
        if (abs(out.last) > threshold) {
            out.status = ExtendedIntegral::Status::diverged;
            return out;
        }
        small = gap < tolerance ? small + 1 : 0;
        if (small >= 3) {
            out.status = ExtendedIntegral::Status::converged;
            return out;
        }
        prev = std::move(next);
    }
    // Out of steps: increments that are not shrinking are read as divergence.
    if (gaps.size() >= 3) {
        const auto k = gaps.size();
        if (gaps[k - 3] >= tolerance && gaps[k - 2] >= gaps[k - 3] && gaps[k - 1] >= gaps[k - 2])
            out.status = ExtendedIntegral::Status::diverged;
    }
    return out;
}

BracketCertificate certify_bracket(const Bracket& bracket, const Rational& eps, std::size_t n_max)
{
    if (!bracket.minus || !bracket.plus) throw DomainError("certify_bracket needs both generators");
    if (n_max < 1) throw DomainError("certify_bracket needs n_max >= 1");
    BracketCertificate best;
    bool have = false;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const StepFunctionND lo = bracket.minus(n), hi = bracket.plus(n);
        const StepFunctionND diff = hi - lo;
        if (auto w = negative_witness(diff))
            throw OrderViolation("bracket has plus < minus at index " + std::to_string(n), n, *w);
        BracketCertificate c{n, volume_integral(diff), volume_integral(lo), volume_integral(hi)};
        if (c.gap <= eps) return c;
        if (!have || c.gap < best.gap) {
            best = c;
            have = true;
        }
    }
    throw BracketFailure("bracket gap " + to_string(best.gap) + " did not reach eps", best);
}

std::vector<Rational> binary_partition(int n)
{
    if (n < 1 || n > 20) throw DomainError("binary_partition needs 1 <= n <= 20");
    const BigInt den = BigInt(1) << n;
    const long count = long(n) << n;
    std::vector<Rational> grid;
    grid.reserve(std::size_t(count));
    for (long k = 1; k <= count; ++k) grid.emplace_back(BigInt(k), den);
    return grid;
}

namespace {

void check_grid(const std::vector<Rational>& grid)
{
    if (grid.empty()) throw DomainError("level grid must be nonempty");
    if (!(grid.front() > 0)) throw DomainError("level grid must be positive");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i - 1] < grid[i])) throw DomainError("level grid must increase strictly");
}

/// Index j with r_j <= h < r_{j+1}, or none (below r_1 or at/above r_n).
template <typename T>
std::optional<std::size_t> bucket(const T& h, const std::vector<Rational>& grid)
{
    // First grid value strictly above h.
    auto it = std::upper_bound(grid.begin(), grid.end(), h,
                               [](const T& v, const Rational& r) { return Rational(v) < r; });
    if (it == grid.begin() || it == grid.end()) return std::nullopt;
    return std::size_t(it - grid.begin()) - 1;
}

}  // namespace

Rational level_mesh(const std::vector<Rational>& grid)
{
    check_grid(grid);
    Rational m = std::max(grid.front(), Rational(1 / grid.back()));
    for (std::size_t i = 1; i < grid.size(); ++i) m = std::max(m, Rational(grid[i] - grid[i - 1]));
    return m;
}

Rational level_value(const Rational& h, const std::vector<Rational>& grid)
{
    auto j = bucket(h, grid);
    return j ? grid[*j] : Rational(0);
}

double level_value(double h, const std::vector<Rational>& grid)
{
    if (std::isnan(h)) throw DomainError("level_value of NaN");
    if (std::isinf(h)) return 0.0;
    auto j = bucket(h, grid);
    return j ? to_double_down(grid[*j]) : 0.0;
}

StepFunctionND level_approximation(const StepFunctionND& h, const std::vector<Rational>& grid)
{
    check_grid(grid);
    std::vector<PartND> parts;
    for (const auto& p : h.parts()) {
        if (p.coeff < 0) throw DomainError("level approximation needs h >= 0");
        const Rational v = level_value(p.coeff, grid);
        if (v != 0) parts.push_back({p.rect, v});
    }
    return StepFunctionND::canonicalize(h.dim(), parts);
}

Integrand level_approximation(Integrand h, std::vector<Rational> grid)
{
    check_grid(grid);
    return [h = std::move(h), grid = std::move(grid)](const vector_t& x) {
        const double v = h(x);
        if (v < 0) throw DomainError("level approximation needs h >= 0");
        return level_value(v, grid);
    };
}

Integrand pushup(Integrand f, double t, int n)
{
    if (n < 1) throw DomainError("pushup needs n >= 1");
    return [f = std::move(f), t, n](const vector_t& x) {
        const double v = f(x);
        return std::min(1.0, n * (v - std::min(v, t)));
    };
}

double Kernel::operator()(double dist, int d) const
{
    if (!(radius > 0)) throw DomainError("kernel radius must be positive");
    if (d < 1 || d > 2) throw DomainError("kernels are provided for d = 1, 2");
    const double s = dist / radius;
    if (s >= 1) return 0.0;
    const double r = radius;
    if (shape == Shape::bump) {
        const double u = 1 - s * s;
        const double mass = d == 1 ? 32 * r / 35 : M_PI * r * r / 4;
        return u * u * u / mass;
    }
    const double mass = d == 1 ? r : M_PI * r * r / 3;
    return (1 - s) / mass;
}

double Kernel::variation(int d) const
{
    if (d < 1 || d > 2) throw DomainError("kernels are provided for d = 1, 2");
    // 1D: twice the peak; 2D radial: 2 pi times the integral of the profile over [0, r].
    if (shape == Shape::bump) return d == 1 ? 2 * 35 / (32 * radius) : 128 / (35 * radius);
    return d == 1 ? 2 / radius : 3 / radius;
}

double moving_average(const Membership& A, const Kernel& kernel, const vector_t& x, double tol)
{
    const auto d = int(x.size());
    if (d < 1 || d > 2) throw DomainError("moving_average supports d = 1, 2");
    const double r = kernel.radius;
    QuadratureOptions opts{tol};
    QuadratureResult res;
    if (d == 1) {
        auto g = [&](double y) { return A(vector_t::Constant(1, y)) ? kernel(std::abs(y - x[0]), 1) : 0.0; };
        res = integrate(g, x[0] - r, x[0] + r, opts);
    } else {
        QuadratureOptions inner{tol * 0.1 / (2 * M_PI)};
        bool inner_ok = true;
        auto ring = [&](double s) {
            const double w = kernel(s, 2);
            if (w == 0.0) return 0.0;
            auto g = [&](double th) {
                return A(vector_t{{x[0] + s * std::cos(th), x[1] + s * std::sin(th)}}) ? 1.0 : 0.0;
            };
            auto q = integrate(g, 0.0, 2 * M_PI, inner);
            inner_ok = inner_ok && q.converged;
            return w * s * q.value;
        };
        res = integrate(ring, 0.0, r, opts);
        res.converged = res.converged && inner_ok;
    }
    if (!res.converged) throw ResourceError("moving average quadrature did not converge");
    return std::clamp(res.value, 0.0, 1.0);
}

}  // namespace daniell
