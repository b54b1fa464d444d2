#pragma once

#include "daniell/types.hpp"

#include <complex>
#include <type_traits>

namespace daniell {

using complex_t = std::complex<double>;
using ComplexFunction1 = std::function<complex_t(double)>;

/// Evaluation cap: DANIELL_EVAL_CAP when set, else 10^7.
std::uint64_t default_eval_cap();

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    std::uint64_t max_evaluations = 0;  // 0 selects default_eval_cap()
};

template <typename T>
struct QuadratureResultT {
    T value{};
    double error = 0.0;
    std::uint64_t evaluations = 0;
    bool converged = true;
};

using QuadratureResult = QuadratureResultT<double>;
using ComplexQuadratureResult = QuadratureResultT<complex_t>;

/**
 * Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Infinite
 * endpoints are mapped onto a finite range. The panel with the largest
 * |K15 - G7| is bisected until the summed estimate meets the tolerance, the
 * roundoff floor is reached, or the evaluation cap runs out (converged = false).
 * A non-finite sample rejects the panel, which is bisected instead of used.
 */
QuadratureResult integrate(const Function1& f, double a, double b, const QuadratureOptions& opts = {});
ComplexQuadratureResult integrate(const ComplexFunction1& f, double a, double b, const QuadratureOptions& opts = {});

/// Picks the real or complex overload from the callable's result type.
template <typename F>
    requires std::is_invocable_v<const F&, double>
auto integrate(const F& f, double a, double b, const QuadratureOptions& opts = {})
{
    if constexpr (std::is_convertible_v<std::invoke_result_t<const F&, double>, double>)
        return integrate(Function1(f), a, b, opts);
    else
        return integrate(ComplexFunction1(f), a, b, opts);
}

/// Iterated one-dimensional quadrature over a box (axis 0 outermost).
QuadratureResult integrate_box(const Integrand& f, const Box& box, const QuadratureOptions& opts = {});

}  // namespace daniell
