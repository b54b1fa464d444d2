#include "daniell/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstdlib>
#include <algorithm>
#include <string>

namespace daniell {

std::uint64_t default_eval_cap()
{
    if (const char* env = std::getenv("DANIELL_EVAL_CAP")) {
        try {
            const auto v = std::stoull(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 10'000'000;
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct PanelFault {};

template <typename T>
struct Panel {
    double a, b;
    T value;
    double error;
    double l1;
    bool operator<(const Panel& o) const { return error < o.error; }
};

bool finite(double x) { return std::isfinite(x); }
bool finite(const complex_t& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <typename T, typename F>
Panel<T> gk15(const F& f, double a, double b, std::uint64_t& evals)
{
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    auto sample = [&](double x) {
        T v = f(x);
        if (!finite(v)) throw PanelFault{};
        return v;
    };
    T fc = sample(c);
    T kronrod = fc * wk[0];
    T gauss = fc * wg[0];
    double l1 = std::abs(fc) * wk[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const T fp = sample(c + h * xk[i]);
        const T fm = sample(c - h * xk[i]);
        kronrod += (fp + fm) * wk[i];
        l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
        if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
    }
    evals += 2 * xk.size() - 1;
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h), l1 * std::abs(h)};
}

template <typename T, typename F>
QuadratureResultT<T> adaptive(const F& f, double a, double b, const QuadratureOptions& opts)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const std::uint64_t cap = opts.max_evaluations ? opts.max_evaluations : default_eval_cap();
    QuadratureResultT<T> out;
    std::vector<Panel<T>> heap;  // max-heap on error
    T value{};
    double err = 0.0, l1 = 0.0;
    int faults = 0;

    // Evaluates [lo, hi]; a faulting panel is replaced by its two halves.
    auto add = [&](auto&& self, double lo, double hi) -> void {
        try {
            auto p = gk15<T>(f, lo, hi, out.evaluations);
            value += p.value;
            err += p.error;
            l1 += p.l1;
            heap.push_back(p);
            std::push_heap(heap.begin(), heap.end());
        } catch (const PanelFault&) {
            if (++faults > 200 || !(hi - lo > 64 * eps * std::max(std::abs(lo), std::abs(hi))))
                throw NumericError("integrand is not finite near x = " + std::to_string(0.5 * (lo + hi)));
            const double mid = 0.5 * (lo + hi);
            self(self, lo, mid);
            self(self, mid, hi);
        }
    };
    add(add, a, b);

    for (std::size_t iter = 1;; ++iter) {
        if (iter % 256 == 0) {
            // Refresh running sums to shed accumulated cancellation.
            value = T{};
            err = l1 = 0.0;
            for (const auto& p : heap) {
                value += p.value;
                err += p.error;
                l1 += p.l1;
            }
        }
        const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
        if (err <= target || err <= 50 * eps * l1) break;
        if (out.evaluations >= cap) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        const Panel<T> worst = heap.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            std::push_heap(heap.begin(), heap.end());
            out.converged = false;
            break;
        }
        heap.pop_back();
        value -= worst.value;
        err -= worst.error;
        l1 -= worst.l1;
        add(add, worst.a, mid);
        add(add, mid, worst.b);
    }
    out.value = T{};
    out.error = 0.0;
    for (const auto& p : heap) {
        out.value += p.value;
        out.error += p.error;
    }
    return out;
}

template <typename T, typename F>
QuadratureResultT<T> integrate_mapped(const F& f, double a, double b, const QuadratureOptions& opts)
{
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integration limits must not be NaN");
    if (a == b) return {};
    if (a > b) {
        auto r = integrate_mapped<T>(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    const bool inf_a = std::isinf(a), inf_b = std::isinf(b);
    if (!inf_a && !inf_b) return adaptive<T>(f, a, b, opts);
    if (inf_a && inf_b) {
        auto g = [&f](double t) -> T {
            const double s = 1.0 - t * t;
            const double x = t / s;
            const T v = f(x);
            return v == T{} ? T{} : v * ((1.0 + t * t) / (s * s));
        };
        return adaptive<T>(g, -1.0, 1.0, opts);
    }
    // Half lines scale the map by the distance of the finite end from 0, so a
    // tail starting far out is not squeezed into a sliver next to t = 1.
    if (inf_b) {
        const double scale = std::max(1.0, std::abs(a));
        auto g = [&f, a, scale](double t) -> T {
            const double s = 1.0 - t;
            const T v = f(a + scale * t / s);
            return v == T{} ? T{} : v * (scale / (s * s));
        };
        return adaptive<T>(g, 0.0, 1.0, opts);
    }
    const double scale = std::max(1.0, std::abs(b));
    auto g = [&f, b, scale](double t) -> T {
        const double s = 1.0 - t;
        const T v = f(b - scale * t / s);
        return v == T{} ? T{} : v * (scale / (s * s));
    };
    return adaptive<T>(g, 0.0, 1.0, opts);
}

}  // namespace

QuadratureResult integrate(const Function1& f, double a, double b, const QuadratureOptions& opts)
{
    return integrate_mapped<double>(f, a, b, opts);
}

ComplexQuadratureResult integrate(const ComplexFunction1& f, double a, double b, const QuadratureOptions& opts)
{
    return integrate_mapped<complex_t>(f, a, b, opts);
}

namespace {

QuadratureResult integrate_axes(const Integrand& f, const Box& box, Eigen::Index axis, vector_t& x,
                                const QuadratureOptions& opts, std::uint64_t& evals, bool& converged)
{
    const Eigen::Index d = box.dim();
    if (axis + 1 == d) {
        auto g = [&](double t) {
            x[axis] = t;
            return f(x);
        };
        auto r = integrate(Function1(g), box.lo[axis], box.hi[axis], opts);
        evals += r.evaluations;
        converged = converged && r.converged;
        return r;
    }
    QuadratureOptions inner = opts;
    const double extent = box.hi[axis] - box.lo[axis];
    inner.abs_tol = opts.abs_tol * 0.1 / (std::isfinite(extent) ? std::max(1.0, extent) : 10.0);
    inner.rel_tol = opts.rel_tol * 0.1;
    auto g = [&](double t) {
        x[axis] = t;
        return integrate_axes(f, box, axis + 1, x, inner, evals, converged).value;
    };
    auto r = integrate(Function1(g), box.lo[axis], box.hi[axis], opts);
    return r;
}

}  // namespace

QuadratureResult integrate_box(const Integrand& f, const Box& box, const QuadratureOptions& opts)
{
    if (box.dim() == 0) return {f(vector_t()), 0.0, 1, true};
    vector_t x(box.dim());
    std::uint64_t evals = 0;
    bool converged = true;
    auto r = integrate_axes(f, box, 0, x, opts, evals, converged);
    if (box.dim() > 1) r.evaluations = evals;
    r.converged = r.converged && converged;
    return r;
}

}  // namespace daniell
