#pragma once

// Seeded generators of exact step functions shared by the unit tests and the acceptance driver.

#include "daniell/stepsnd.hpp"

#include <random>

namespace daniell::testing {

class StepGenerator {
public:
    explicit StepGenerator(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return uniform_int(0, 1) == 1; }

    /// k/q with small k and q, so refinements stay small.
    Rational grid_rational(int span = 8)
    {
        static const int dens[] = {1, 2, 3, 4, 6};
        const int q = dens[uniform_int(0, 4)];
        return Rational(uniform_int(-span * q, span * q), q);
    }

    Rational coefficient()
    {
        Rational c(uniform_int(-9, 9), uniform_int(1, 5));
        return c == 0 ? Rational(1) : c;
    }

    Interval interval()
    {
        Rational a = grid_rational(), b = grid_rational();
        if (b < a) std::swap(a, b);
        return Interval(a, b, coin(), coin());
    }

    StepFunction1D step1d(int max_terms = 6)
    {
        std::vector<Part> terms;
        const int n = uniform_int(0, max_terms);
        for (int i = 0; i < n; ++i) terms.push_back({interval(), coefficient()});
        return StepFunction1D::canonicalize(terms);
    }

    /// Indicator of a finite union of intervals.
    StepFunction1D set_indicator(int max_pieces = 3)
    {
        StepFunction1D a;
        const int n = uniform_int(1, max_pieces);
        for (int i = 0; i < n; ++i) a = join(a, StepFunction1D::indicator(interval()));
        return a;
    }

    Rectangle rectangle(std::size_t d, int span = 3)
    {
        std::vector<Interval> axes;
        for (std::size_t j = 0; j < d; ++j) {
            Rational a(uniform_int(-span * 2, span * 2), 2), b(uniform_int(-span * 2, span * 2), 2);
            if (b < a) std::swap(a, b);
            axes.emplace_back(a, b, coin(), coin());
        }
        return Rectangle(std::move(axes));
    }

    StepFunctionND stepnd(std::size_t d, int max_terms = 20)
    {
        std::vector<PartND> terms;
        const int n = uniform_int(1, max_terms);
        for (int i = 0; i < n; ++i) terms.push_back({rectangle(d), coefficient()});
        return StepFunctionND::canonicalize(d, terms);
    }

    /// Random finite decomposition of the closed interval [a, b] into interval parts.
    std::vector<Interval> decomposition(const Rational& a, const Rational& b, int cuts)
    {
        std::vector<Rational> pts{a, b};
        for (int i = 0; i < cuts; ++i) {
            Rational t(uniform_int(1, 99), 100);
            pts.push_back(a + (b - a) * t);
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        std::vector<Interval> out;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back(Interval::open(pts[i], pts[i + 1]));
        for (const auto& p : pts) out.push_back(Interval::point(p));
        return out;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace daniell::testing
