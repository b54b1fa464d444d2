#include "daniell/improper.hpp"

#include <algorithm>
#include <cmath>

namespace daniell {

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::absolutely_convergent: return "absolutely_convergent";
    case Classification::conditionally_convergent_heuristic: return "conditionally_convergent_heuristic";
    case Classification::divergent: return "divergent";
    case Classification::unknown: break;
    }
    return "unknown";
}

std::vector<double> aitken(const std::vector<double>& s)
{
    std::vector<double> out = s;
    for (std::size_t i = 2; i < s.size(); ++i) {
        const double d1 = s[i] - s[i - 1], d2 = s[i - 1] - s[i - 2];
        const double den = d1 - d2;
        if (den == 0.0) continue;
        const double v = s[i] - d1 * d1 / den;
        if (std::isfinite(v)) out[i] = v;
    }
    return out;
}

namespace {

/**
 * Shanks e_2 through Wynn's epsilon algorithm, aligned so entry i uses
 * s[i-4 .. i]. Exact when s_k - L obeys an order-two linear recurrence,
 * which covers k 2^-k tails from logarithmic endpoints. Entries that cannot
 * be formed fall back to the Aitken value.
 */
std::vector<double> shanks2(const std::vector<double>& s, const std::vector<double>& fallback)
{
    std::vector<double> out = fallback;
    for (std::size_t i = 4; i < s.size(); ++i) {
        // Columns eps_0 .. eps_4 over the window s[i-4 .. i].
        std::vector<double> prev(6, 0.0), cur(s.begin() + long(i) - 4, s.begin() + long(i) + 1);
        bool ok = true;
        for (int col = 1; col <= 4 && ok; ++col) {
            std::vector<double> next(cur.size() - 1);
            for (std::size_t n = 0; n + 1 < cur.size(); ++n) {
                const double diff = cur[n + 1] - cur[n];
                if (diff == 0.0) {
                    ok = false;
                    break;
                }
                next[n] = prev[n + 1] + 1.0 / diff;
            }
            prev = cur;
            cur = next;
        }
        if (ok && std::isfinite(cur[0])) out[i] = cur[0];
    }
    return out;
}

/**
 * Index i >= 3 where the last three changes of the accelerated sequence are
 * below tol while the raw increments keep shrinking (or are below tol). The
 * second condition keeps Aitken's antilimit of a growing sequence out.
 */
std::optional<std::size_t> stable_at(const std::vector<double>& acc, const std::vector<double>& raw, double tol,
                                     std::size_t from = 3)
{
    auto step = [&](std::size_t k) { return std::abs(raw[k] - raw[k - 1]); };
    for (std::size_t i = std::max<std::size_t>(from, 3); i < acc.size(); ++i) {
        bool ok = true;
        for (std::size_t k = i - 2; k <= i && ok; ++k) {
            ok = std::abs(acc[k] - acc[k - 1]) < tol;
            if (ok && k >= 2) ok = step(k) < tol || step(k) < step(k - 1);
        }
        if (ok) return i;
    }
    return std::nullopt;
}

struct Side {
    EndpointReport report;
    bool divergent = false;
    std::uint64_t evaluations = 0;
};

/// Limit of the integral from c to y as y -> end (toward +direction when end > c).
Side one_sided(const Function1& f, double c, double end, const ImproperOptions& opts, std::uint64_t budget)
{
    Side side;
    auto& rep = side.report;
    rep.endpoint = end;
    const double sign = end > c ? 1.0 : -1.0;
    const double seg_tol = opts.tol / (8.0 * opts.max_steps);
    const double scale = std::max(1.0, std::abs(c));
    double prev = c, sum = 0.0;
    for (int k = 1; k <= opts.max_steps; ++k) {
        // Infinite ends use y = +-2^k m, geometric in |y| so power-law tails are geometric in k.
        const double y = std::isinf(end) ? sign * std::ldexp(scale, k) : end - (end - c) * std::ldexp(1.0, -k);
        if (y == prev) break;
        QuadratureOptions q{seg_tol, 0.0, budget > side.evaluations ? budget - side.evaluations : 1};
        auto r = integrate(f, prev, y, q);
        side.evaluations += r.evaluations;
        if (!r.converged) break;
        sum += r.value;
        rep.nodes.push_back(y);
        rep.partials.push_back(sum);
        prev = y;
        rep.accelerated = aitken(rep.partials);
        if (auto i = stable_at(rep.accelerated, rep.partials, opts.tol)) {
            rep.stabilized = true;
            rep.limit = rep.accelerated[*i];
            return side;
        }
        if (rep.partials.size() >= 7) {
            const auto e2 = shanks2(rep.partials, rep.accelerated);
            if (auto i = stable_at(e2, rep.partials, opts.tol, 6)) {
                rep.stabilized = true;
                rep.limit = e2[*i];
                return side;
            }
        }
    }
    const auto& s = rep.partials;
    rep.limit = s.empty() ? 0.0 : s.back();
    if (s.size() >= 4) {
        const std::size_t n = s.size();
        const double d1 = s[n - 1] - s[n - 2], d2 = s[n - 2] - s[n - 3], d3 = s[n - 3] - s[n - 4];
        const bool same_sign = (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
        side.divergent = same_sign && std::abs(d1) > opts.tol && std::abs(d1) >= 0.75 * std::abs(d2) &&
                         std::abs(d2) >= 0.75 * std::abs(d3);
    }
    return side;
}

double default_split(double a, double b)
{
    const bool ia = std::isinf(a), ib = std::isinf(b);
    if (!ia && !ib) return 0.5 * (a + b);
    if (ia && ib) return 0.0;
    return ia ? b - 1.0 : a + 1.0;
}

struct Limits {
    Side lower, upper;
    bool stabilized() const { return lower.report.stabilized && upper.report.stabilized; }
    bool divergent() const { return lower.divergent || upper.divergent; }
    double value() const { return lower.report.limit + upper.report.limit; }
};

Limits both_limits(const Function1& f, double a, double b, double c, const ImproperOptions& opts,
                   std::uint64_t budget)
{
    Limits l;
    l.lower = one_sided(f, c, a, opts, budget / 2);
    l.lower.report.limit = -l.lower.report.limit;  // integral from a to c
    for (auto& p : l.lower.report.partials) p = -p;
    for (auto& p : l.lower.report.accelerated) p = -p;
    l.upper = one_sided(f, c, b, opts, budget - l.lower.evaluations);
    return l;
}

}  // namespace

ImproperResult improper_integral(const Function1& f, double a, double b, const ImproperOptions& opts)
{
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integration limits must not be NaN");
    if (!(opts.tol > 0)) throw DomainError("tol must be positive");
    if (a > b) {
        auto r = improper_integral(f, b, a, opts);
        r.value = -r.value;
        std::swap(r.lower, r.upper);
        return r;
    }
    ImproperResult out;
    if (a == b) {
        out.classification = Classification::absolutely_convergent;
        out.abs_integral = 0.0;
        return out;
    }
    const std::uint64_t budget = opts.max_evaluations ? opts.max_evaluations : default_eval_cap();
    auto absf = [&f](double t) { return std::abs(f(t)); };

    if (opts.smooth_tail) {
        QuadratureOptions q{opts.tol, 0.0, budget};
        auto r = integrate(f, a, b, q);
        auto ra = integrate(Function1(absf), a, b, q);
        out.value = r.value;
        out.evaluations = r.evaluations + ra.evaluations;
        if (r.converged && ra.converged) {
            out.classification = Classification::absolutely_convergent;
            out.abs_integral = ra.value;
        }
        return out;
    }

    const double c = opts.split.value_or(default_split(a, b));
    if (!(a <= c && c <= b) || std::isinf(c)) throw DomainError("split point must lie in [a, b]");
    Limits value = both_limits(f, a, b, c, opts, budget);
    out.lower = value.lower.report;
    out.upper = value.upper.report;
    out.value = value.value();
    out.evaluations = value.lower.evaluations + value.upper.evaluations;
    if (!value.stabilized()) {
        out.classification = value.divergent() ? Classification::divergent : Classification::unknown;
        return out;
    }
    Limits mag = both_limits(absf, a, b, c, opts, budget);
    out.evaluations += mag.lower.evaluations + mag.upper.evaluations;
    if (mag.stabilized()) {
        out.classification = Classification::absolutely_convergent;
        out.abs_integral = mag.value();
    } else {
        out.classification = Classification::conditionally_convergent_heuristic;
    }
    return out;
}

namespace {

/// Point i of n strictly inside (a, b), spread over infinite ranges.
double sample_point(double a, double b, int i, int n)
{
    const double t = (i + 0.5) / n;
    const bool ia = std::isinf(a), ib = std::isinf(b);
    if (!ia && !ib) return a + t * (b - a);
    if (ia && ib) return std::tan(M_PI * (t - 0.5));
    return ia ? b - t / (1 - t) : a + t / (1 - t);
}

}  // namespace

DominationReport dominated_test(const Function1& f, const Function1& phi, double a, double b, double tol, int samples)
{
    if (samples < 1) throw DomainError("dominated_test needs samples >= 1");
    DominationReport rep;
    for (int i = 0; i < samples; ++i) {
        const double x = sample_point(a, b, i, samples);
        const double fx = std::abs(f(x)), px = phi(x);
        if (fx > px + 1e-12 * std::abs(px)) {
            rep.violation_at = x;
            return rep;
        }
    }
    ImproperOptions opts;
    opts.tol = tol;
    auto rp = improper_integral(phi, a, b, opts);
    if (rp.classification != Classification::absolutely_convergent) return rep;
    auto rf = improper_integral(f, a, b, opts);
    rep.integral_phi = rp.value.real();
    rep.integral_f = rf.value.real();
    rep.accepted = std::abs(rep.integral_f) <= rep.integral_phi + 2 * tol;
    return rep;
}

namespace {

/// Limit of f along the node sequence node(k), k = 0, 1, ...
double sequence_limit(const Function1& f, double (*node)(int), double tol, const char* what)
{
    std::vector<double> s;
    for (int k = 0; k < 64; ++k) {
        const double v = f(node(k));
        if (!std::isfinite(v)) break;
        s.push_back(v);
        const auto acc = aitken(s);
        if (auto i = stable_at(acc, s, tol)) return acc[*i];
    }
    throw NumericError(std::string("Frullani: the limit ") + what + " does not stabilize");
}

}  // namespace

FrullaniResult frullani(const Function1& f, double a, double b, double tol)
{
    if (!(0 < a && a < b)) throw DomainError("frullani needs 0 < a < b");
    FrullaniResult out;
    out.f0 = sequence_limit(f, [](int k) { return std::ldexp(1.0, -k); }, tol, "f(0+)");
    out.finf = sequence_limit(f, [](int k) { return std::ldexp(1.0, k); }, tol, "f(inf)");
    out.formula = (out.finf - out.f0) * std::log(b / a);
    auto g = [&](double t) { return (f(b * t) - f(a * t)) / t; };
    ImproperOptions opts;
    opts.tol = tol;
    auto r = improper_integral(g, 0.0, INFINITY, opts);
    if (r.classification == Classification::divergent || r.classification == Classification::unknown)
        throw NumericError("Frullani integral did not stabilize");
    out.quadrature = r.value.real();
    return out;
}

double laplace_transform(const Function1& f, double r, double tol)
{
    if (!(r > 0)) throw DomainError("laplace_transform needs r > 0");
    auto g = [&](double t) {
        const double w = std::exp(-r * t);
        return w == 0.0 ? 0.0 : w * f(t);
    };
    auto res = integrate(g, 0.0, INFINITY, {tol});
    if (!res.converged) throw NumericError("Laplace transform did not converge at r = " + std::to_string(r));
    return res.value;
}

LimitResult laplace_limit_r0(const Function1& f, double tol, double r0, int levels)
{
    if (!(r0 > 0)) throw DomainError("laplace_limit_r0 needs r0 > 0");
    if (levels < 2) throw DomainError("laplace_limit_r0 needs at least two levels");
    LimitResult out;
    std::vector<std::vector<double>> table;
    int small = 0;
    for (int k = 0; k < levels; ++k) {
        const double r = std::ldexp(r0, -k);
        out.radii.push_back(r);
        out.transforms.push_back(laplace_transform(f, r, std::min(1e-11, tol * 1e-4)));
        // Neville recursion evaluated at r = 0.
        std::vector<double> row{out.transforms.back()};
        for (int j = 1; j <= k; ++j) {
            const double ri = out.radii[std::size_t(k)], rj = out.radii[std::size_t(k - j)];
            row.push_back((ri * table[std::size_t(k - 1)][std::size_t(j - 1)] - rj * row[std::size_t(j - 1)]) /
                          (ri - rj));
        }
        table.push_back(row);
        out.estimates.push_back(row.back());
        if (k >= 1) {
            const auto n = out.estimates.size();
            small = std::abs(out.estimates[n - 1] - out.estimates[n - 2]) < tol ? small + 1 : 0;
        }
        out.value = out.estimates.back();
        if (small >= 2) {
            out.stabilized = true;
            return out;
        }
    }
    return out;
}

complex_t fourier_transform(const Function1& f, double lo, double hi, double xi, double tol)
{
    auto g = [&](double x) -> complex_t {
        const double v = f(x);
        return v == 0.0 ? complex_t{} : v * std::exp(complex_t(0.0, -x * xi));
    };
    auto r = integrate(ComplexFunction1(g), lo, hi, {tol});
    if (!r.converged) throw NumericError("Fourier transform quadrature did not converge");
    return r.value;
}

}  // namespace daniell
