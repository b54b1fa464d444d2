#include "daniell/darboux.hpp"

#include "daniell/quadrature.hpp"

#include <random>

namespace daniell {

MultiPartition::MultiPartition(std::vector<std::vector<Rational>> breakpoints) : axes_(std::move(breakpoints))
{
    for (const auto& a : axes_) {
        if (a.size() < 2) throw DomainError("partition axis needs at least two breakpoints");
        for (std::size_t i = 1; i < a.size(); ++i)
            if (!(a[i - 1] < a[i])) throw DomainError("partition breakpoints must increase strictly");
    }
}

MultiPartition MultiPartition::uniform(const std::vector<Rational>& lo, const std::vector<Rational>& hi, int n)
{
    if (n < 1) throw DomainError("uniform partition needs n >= 1");
    if (lo.size() != hi.size()) throw DomainError("partition corners differ in dimension");
    std::vector<std::vector<Rational>> axes(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (!(lo[j] < hi[j])) throw DomainError("partition box must have positive width");
        for (int i = 0; i <= n; ++i) axes[j].push_back(lo[j] + (hi[j] - lo[j]) * i / n);
    }
    return MultiPartition(std::move(axes));
}

MultiPartition MultiPartition::uniform(const Box& box, int n)
{
    if (!box.bounded()) throw DomainError("partition box must be bounded");
    std::vector<Rational> lo, hi;
    for (Eigen::Index j = 0; j < box.dim(); ++j) {
        lo.push_back(to_rational(box.lo[j]));
        hi.push_back(to_rational(box.hi[j]));
    }
    return uniform(lo, hi, n);
}

std::size_t MultiPartition::cell_count() const
{
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.size() - 1;
    return n;
}

Rational MultiPartition::mesh() const
{
    Rational m = 0;
    for (const auto& a : axes_)
        for (std::size_t i = 1; i < a.size(); ++i) m = std::max(m, Rational(a[i] - a[i - 1]));
    return m;
}

Box MultiPartition::box() const
{
    vector_t lo(dim()), hi(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        lo[Eigen::Index(j)] = to_double(axes_[j].front());
        hi[Eigen::Index(j)] = to_double(axes_[j].back());
    }
    return Box(lo, hi);
}

MultiPartition MultiPartition::refine(std::size_t axis) const
{
    if (axis >= dim()) throw DomainError("refine axis out of range");
    auto axes = axes_;
    const auto& old = axes_[axis];
    auto& a = axes[axis];
    a.clear();
    for (std::size_t i = 0; i + 1 < old.size(); ++i) {
        a.push_back(old[i]);
        a.push_back((old[i] + old[i + 1]) / 2);
    }
    a.push_back(old.back());
    return MultiPartition(std::move(axes));
}

void MultiPartition::for_each_cell(const std::function<void(const Rectangle&)>& visit) const
{
    const std::size_t d = dim();
    std::vector<std::size_t> idx(d, 0);
    std::vector<Interval> sides(d, Interval::point(0));
    for (std::size_t j = 0; j < d; ++j) sides[j] = Interval::open_closed(axes_[j][0], axes_[j][1]);
    const std::size_t total = cell_count();
    for (std::size_t c = 0; c < total; ++c) {
        visit(Rectangle(sides));
        for (std::size_t j = d; j-- > 0;) {
            if (++idx[j] + 1 < axes_[j].size()) {
                sides[j] = Interval::open_closed(axes_[j][idx[j]], axes_[j][idx[j] + 1]);
                break;
            }
            idx[j] = 0;
            sides[j] = Interval::open_closed(axes_[j][0], axes_[j][1]);
        }
    }
}

namespace {

vector_t corner(const Rectangle& cell, bool upper)
{
    vector_t x(Eigen::Index(cell.dim()));
    for (std::size_t j = 0; j < cell.dim(); ++j)
        x[Eigen::Index(j)] = to_double(upper ? cell.axis(j).hi() : cell.axis(j).lo());
    return x;
}

vector_t center(const Rectangle& cell)
{
    vector_t x(Eigen::Index(cell.dim()));
    for (std::size_t j = 0; j < cell.dim(); ++j)
        x[Eigen::Index(j)] = to_double((cell.axis(j).lo() + cell.axis(j).hi()) / 2);
    return x;
}

double half_diagonal(const Rectangle& cell)
{
    Rational s = 0;
    for (const auto& side : cell.axes()) s += (side.hi() - side.lo()) * (side.hi() - side.lo());
    // Round up so the ball of this radius covers the closed cell.
    double r = std::sqrt(to_double_up(s));
    while (Rational(r) * Rational(r) < s) r = std::nextafter(r, INFINITY);
    return 0.5 * r;
}

double finite_value(const Integrand& f, const vector_t& x)
{
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericError("integrand is not finite on the partition");
    return v;
}

}  // namespace

DarbouxPair darboux_pair(const Integrand& f, const MultiPartition& partition, const std::optional<Modulus>& modulus)
{
    std::vector<PartND> lower, upper;
    lower.reserve(partition.cell_count());
    upper.reserve(partition.cell_count());
    const std::size_t d = partition.dim();
    partition.for_each_cell([&](const Rectangle& cell) {
        Rational lo, hi;
        if (modulus) {
            const Rational c = to_rational(finite_value(f, center(cell)));
            const double bound = (*modulus)(half_diagonal(cell));
            const Rational spread = to_rational(bound);
            lo = c - spread;
            hi = c + spread;
        } else {
            double mn = finite_value(f, center(cell)), mx = mn;
            vector_t x = vector_t::Zero(Eigen::Index(d));
            for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
                for (std::size_t j = 0; j < d; ++j)
                    x[Eigen::Index(j)] = to_double((mask >> j) & 1 ? cell.axis(j).hi() : cell.axis(j).lo());
                const double v = finite_value(f, x);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            lo = to_rational(mn);
            hi = to_rational(mx);
        }
        lower.push_back({cell, lo});
        upper.push_back({cell, hi});
    });
    const std::size_t cap = std::max(default_cell_cap, partition.cell_count());
    return {StepFunctionND::canonicalize(d, lower, cap), StepFunctionND::canonicalize(d, upper, cap),
            modulus && modulus->certified()};
}

namespace {

/// Neumaier compensated sum.
struct Accumulator {
    double sum = 0.0, comp = 0.0, abs = 0.0;
    void add(double v)
    {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
        abs += std::abs(v);
    }
    double value() const { return sum + comp; }
};

}  // namespace

double riemann_sum(const Integrand& f, const MultiPartition& partition, SampleRule rule, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Accumulator acc;
    partition.for_each_cell([&](const Rectangle& cell) {
        vector_t x;
        switch (rule) {
        case SampleRule::center: x = center(cell); break;
        case SampleRule::left: x = corner(cell, false); break;
        case SampleRule::random:
            x.resize(Eigen::Index(cell.dim()));
            for (std::size_t j = 0; j < cell.dim(); ++j) {
                const double a = to_double(cell.axis(j).lo()), b = to_double(cell.axis(j).hi());
                double t;
                do {
                    t = a + unit(rng) * (b - a);
                } while (!(t > a && t < b));
                x[Eigen::Index(j)] = t;
            }
            break;
        }
        acc.add(finite_value(f, x) * to_double(cell.volume()));
    });
    return acc.value();
}

namespace {

/// Midpoint sums on a uniform grid with counts[j] cells per axis, in doubles.
Enclosure grid_enclosure(const Integrand& f, const Box& box, const std::vector<std::uint64_t>& counts,
                         const Modulus& modulus)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const Eigen::Index d = box.dim();
    vector_t width(d);
    std::uint64_t total = 1;
    for (Eigen::Index j = 0; j < d; ++j) {
        width[j] = (box.hi[j] - box.lo[j]) / double(counts[std::size_t(j)]);
        total *= counts[std::size_t(j)];
    }
    const double cell_volume = width.prod();
    const double radius = 0.5 * width.norm() * (1 + 16 * eps * double(d + 1));
    const double spread = modulus(radius);
    if (!(spread >= 0) || !std::isfinite(spread)) throw NumericError("modulus bound is not a finite nonnegative value");

    Accumulator acc;
    std::vector<std::uint64_t> idx(std::size_t(d), 0);
    vector_t x(d);
    for (Eigen::Index j = 0; j < d; ++j) x[j] = box.lo[j] + 0.5 * width[j];
    for (std::uint64_t c = 0; c < total; ++c) {
        acc.add(finite_value(f, x));
        for (Eigen::Index j = d; j-- > 0;) {
            auto& i = idx[std::size_t(j)];
            if (++i < counts[std::size_t(j)]) {
                x[j] = box.lo[j] + (double(i) + 0.5) * width[j];
                break;
            }
            i = 0;
            x[j] = box.lo[j] + 0.5 * width[j];
        }
    }
    const double volume = box.volume();
    const double mid = cell_volume * acc.value();
    const double half = volume * spread;
    // Allowance for summation, the cell volume product and the final operations.
    const double rounding = eps * (double(2 * d + 8) * cell_volume * acc.abs + 4 * half + 4 * std::abs(mid)) +
                            std::numeric_limits<double>::denorm_min();
    Enclosure e;
    e.lower = mid - half - rounding;
    e.upper = mid + half + rounding;
    e.evaluations = total;
    e.mesh = width.maxCoeff();
    e.certified = modulus.certified();
    return e;
}

}  // namespace

Enclosure certified_integral(const Integrand& f, const Box& box, const Modulus& modulus, double tol,
                             std::uint64_t max_evaluations)
{
    if (!box.bounded()) throw DomainError("certified_integral needs a bounded box");
    if (!(tol > 0)) throw DomainError("certified_integral needs tol > 0");
    const std::uint64_t cap = max_evaluations ? max_evaluations : default_eval_cap();
    const Eigen::Index d = box.dim();
    if (d == 0) {
        const double v = finite_value(f, vector_t());
        return {v, v, 1, 0.0, modulus.certified()};
    }
    std::vector<std::uint64_t> counts(std::size_t(d), 1);
    auto cells = [&] {
        std::uint64_t n = 1;
        for (auto c : counts) n *= c;
        return n;
    };
    auto bisect_widest = [&] {
        Eigen::Index widest = 0;
        double best = -1;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double w = (box.hi[j] - box.lo[j]) / double(counts[std::size_t(j)]);
            if (w > best) {
                best = w;
                widest = j;
            }
        }
        counts[std::size_t(widest)] *= 2;
    };
    auto predicted = [&] {
        vector_t w(d);
        for (Eigen::Index j = 0; j < d; ++j) w[j] = (box.hi[j] - box.lo[j]) / double(counts[std::size_t(j)]);
        return 2 * box.volume() * modulus(0.5 * w.norm());
    };

    std::uint64_t spent = 0;
    for (;;) {
        // Skip levels whose modulus term alone is already too wide.
        while (predicted() > tol && cells() <= cap / 2) bisect_widest();
        if (cells() > cap || spent + cells() > cap) {
            while (cells() > cap) {
                // Undo one bisection on the finest axis.
                auto it = std::max_element(counts.begin(), counts.end());
                *it /= 2;
            }
            Enclosure partial = grid_enclosure(f, box, counts, modulus);
            partial.evaluations += spent;
            throw PartialEnclosureError("evaluation cap reached before the enclosure width met tol", partial);
        }
        Enclosure e = grid_enclosure(f, box, counts, modulus);
        spent += e.evaluations;
        e.evaluations = spent;
        if (e.width() <= tol) return e;
        if (cells() > cap / 2) throw PartialEnclosureError("evaluation cap reached before the enclosure width met tol", e);
        bisect_widest();
    }
}

}  // namespace daniell
