#include "daniell/stepsnd.hpp"

#include "atoms.hpp"

#include <algorithm>
#include <numeric>

namespace daniell {

// --- Rectangle ---------------------------------------------------------------

Rectangle Rectangle::open_closed(const std::vector<Rational>& lo, const std::vector<Rational>& hi)
{
    if (lo.size() != hi.size()) throw DomainError("rectangle corners differ in dimension");
    std::vector<Interval> axes;
    for (std::size_t j = 0; j < lo.size(); ++j) axes.push_back(Interval::open_closed(lo[j], hi[j]));
    return Rectangle(std::move(axes));
}

Rectangle Rectangle::closed(const std::vector<Rational>& lo, const std::vector<Rational>& hi)
{
    if (lo.size() != hi.size()) throw DomainError("rectangle corners differ in dimension");
    std::vector<Interval> axes;
    for (std::size_t j = 0; j < lo.size(); ++j) axes.push_back(Interval::closed(lo[j], hi[j]));
    return Rectangle(std::move(axes));
}

bool Rectangle::empty() const
{
    return std::any_of(axes_.begin(), axes_.end(), [](const Interval& iv) { return iv.empty(); });
}

Rational Rectangle::volume() const
{
    if (empty()) return 0;
    Rational v = 1;
    for (const auto& iv : axes_) v *= iv.width();
    return v;
}

bool Rectangle::contains(const std::vector<Rational>& x) const
{
    if (x.size() != axes_.size()) throw DomainError("point dimension does not match rectangle");
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!axes_[j].contains(x[j])) return false;
    return true;
}

Rectangle Rectangle::without_axis(std::size_t j) const
{
    std::vector<Interval> axes;
    axes.reserve(axes_.size() - 1);
    for (std::size_t k = 0; k < axes_.size(); ++k)
        if (k != j) axes.push_back(axes_[k]);
    return Rectangle(std::move(axes));
}

std::vector<Rational> Rectangle::interior_point() const
{
    std::vector<Rational> x;
    for (const auto& iv : axes_) x.push_back(iv.interior_point());
    return x;
}

Rectangle Rectangle::closure() const
{
    std::vector<Interval> axes;
    for (const auto& iv : axes_) axes.push_back(Interval::closed(iv.lo(), iv.hi()));
    return Rectangle(std::move(axes));
}

bool Rectangle::intersects(const Rectangle& other) const
{
    if (dim() != other.dim()) throw DomainError("rectangles differ in dimension");
    if (empty() || other.empty()) return false;
    for (std::size_t j = 0; j < dim(); ++j) {
        const auto& a = axes_[j];
        const auto& b = other.axes_[j];
        // Intersection of two nonempty intervals is [max lo, min hi] with flags.
        const bool lo_from_a = a.lo() > b.lo() || (a.lo() == b.lo() && !a.lo_closed());
        const Rational& lo = lo_from_a ? a.lo() : b.lo();
        const bool lo_closed = a.lo() == b.lo() ? (a.lo_closed() && b.lo_closed())
                                                : (lo_from_a ? a.lo_closed() : b.lo_closed());
        const Rational& hi = a.hi() < b.hi() ? a.hi() : b.hi();
        const bool hi_closed = a.hi() == b.hi() ? (a.hi_closed() && b.hi_closed())
                                                : (a.hi() < b.hi() ? a.hi_closed() : b.hi_closed());
        if (lo > hi) return false;
        if (lo == hi && !(lo_closed && hi_closed)) return false;
    }
    return true;
}

// --- canonical form ----------------------------------------------------------

namespace {

using ValueOp = StepFunctionND::ValueOp;

struct CombineContext {
    std::size_t dim;
    std::size_t cap;
    ValueOp op;
    std::vector<Interval> prefix;
    std::vector<PartND> out;
};

void combine_rec(const std::vector<const PartND*>& f, const std::vector<const PartND*>& g, std::size_t axis,
                 CombineContext& ctx)
{
    if (axis == ctx.dim) {
        Rational a = 0, b = 0;
        for (const auto* p : f) a += p->coeff;
        for (const auto* p : g) b += p->coeff;
        Rational v = ctx.op(a, b);
        if (v != 0) {
            if (ctx.out.size() >= ctx.cap)
                throw ResourceError("step function canonicalization exceeds cell cap " + std::to_string(ctx.cap));
            ctx.out.push_back({Rectangle(ctx.prefix), std::move(v)});
        }
        return;
    }
    std::vector<Rational> bps;
    for (const auto* lst : {&f, &g})
        for (const auto* p : *lst) {
            bps.push_back(p->rect.axis(axis).lo());
            bps.push_back(p->rect.axis(axis).hi());
        }
    detail::sort_unique(bps);

    using Range = std::pair<std::size_t, std::size_t>;
    auto ranges_of = [&](const std::vector<const PartND*>& lst) {
        std::vector<Range> r;
        r.reserve(lst.size());
        for (const auto* p : lst) r.push_back(*detail::atom_range(p->rect.axis(axis), bps));
        return r;
    };
    const auto rf = ranges_of(f);
    const auto rg = ranges_of(g);

    std::vector<const PartND*> sf, sg;
    for (std::size_t k = 0; k < detail::atom_count(bps); ++k) {
        sf.clear();
        sg.clear();
        for (std::size_t i = 0; i < f.size(); ++i)
            if (rf[i].first <= k && k <= rf[i].second) sf.push_back(f[i]);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (rg[i].first <= k && k <= rg[i].second) sg.push_back(g[i]);
        if (sf.empty() && sg.empty()) continue;
        ctx.prefix.push_back(detail::atom_interval(bps, k));
        combine_rec(sf, sg, axis + 1, ctx);
        ctx.prefix.pop_back();
    }
}

std::vector<const PartND*> live_terms(std::span<const PartND> terms, std::size_t dim)
{
    std::vector<const PartND*> out;
    for (const auto& t : terms) {
        if (t.rect.dim() != dim) throw DomainError("term dimension does not match step function dimension");
        if (t.coeff != 0 && !t.rect.empty()) out.push_back(&t);
    }
    return out;
}

Rational keep_first(const Rational& a, const Rational&) { return a; }
Rational add_op(const Rational& a, const Rational& b) { return a + b; }
Rational max_op(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min_op(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational mul_op(const Rational& a, const Rational& b) { return a * b; }

std::vector<PartND> combine(std::size_t dim, std::span<const PartND> f, std::span<const PartND> g, ValueOp op,
                            std::size_t cap)
{
    CombineContext ctx{dim, cap, op, {}, {}};
    combine_rec(live_terms(f, dim), live_terms(g, dim), 0, ctx);
    return std::move(ctx.out);
}

}  // namespace

StepFunctionND StepFunctionND::canonicalize(std::size_t dim, std::span<const PartND> terms, std::size_t cell_cap)
{
    StepFunctionND out(dim);
    out.parts_ = combine(dim, terms, {}, keep_first, cell_cap);
    return out;
}

StepFunctionND StepFunctionND::pointwise(const StepFunctionND& f, const StepFunctionND& g, ValueOp op,
                                         std::size_t cell_cap)
{
    if (f.dim() != g.dim()) throw DomainError("step functions differ in dimension");
    StepFunctionND out(f.dim());
    out.parts_ = combine(f.dim(), f.parts(), g.parts(), op, cell_cap);
    return out;
}

StepFunctionND StepFunctionND::indicator(const Rectangle& r, const Rational& coeff)
{
    const PartND p{r, coeff};
    return canonicalize(r.dim(), std::span<const PartND>(&p, 1));
}

StepFunctionND StepFunctionND::from_1d(const StepFunction1D& f)
{
    StepFunctionND out(1);
    for (const auto& p : f.parts()) out.parts_.push_back({Rectangle({p.interval}), p.coeff});
    return out;
}

Rational StepFunctionND::operator()(const std::vector<Rational>& x) const
{
    for (const auto& p : parts_)
        if (p.rect.contains(x)) return p.coeff;
    return 0;
}

bool operator==(const StepFunctionND& f, const StepFunctionND& g) { return f.dim() == g.dim() && (f - g).is_zero(); }

namespace {

StepFunctionND binary(const StepFunctionND& f, const StepFunctionND& g, ValueOp op)
{
    return StepFunctionND::pointwise(f, g, op);
}

}  // namespace

StepFunctionND operator+(const StepFunctionND& f, const StepFunctionND& g) { return binary(f, g, add_op); }

StepFunctionND operator-(const StepFunctionND& f)
{
    std::vector<PartND> parts(f.parts());
    for (auto& p : parts) p.coeff = -p.coeff;
    return StepFunctionND::canonicalize(f.dim(), parts);
}

StepFunctionND operator-(const StepFunctionND& f, const StepFunctionND& g) { return f + (-g); }

StepFunctionND operator*(const Rational& a, const StepFunctionND& f)
{
    std::vector<PartND> parts(f.parts());
    for (auto& p : parts) p.coeff *= a;
    return StepFunctionND::canonicalize(f.dim(), parts);
}

StepFunctionND operator*(const StepFunctionND& f, const StepFunctionND& g) { return binary(f, g, mul_op); }
StepFunctionND join(const StepFunctionND& f, const StepFunctionND& g) { return binary(f, g, max_op); }
StepFunctionND meet(const StepFunctionND& f, const StepFunctionND& g) { return binary(f, g, min_op); }

StepFunctionND abs(const StepFunctionND& f)
{
    std::vector<PartND> parts(f.parts());
    for (auto& p : parts)
        if (p.coeff < 0) p.coeff = -p.coeff;
    return StepFunctionND::canonicalize(f.dim(), parts);
}

bool is_nonnegative(const StepFunctionND& f)
{
    return std::all_of(f.parts().begin(), f.parts().end(), [](const PartND& p) { return p.coeff > 0; });
}

Rational volume_integral(const StepFunctionND& f)
{
    Rational sum = 0;
    for (const auto& p : f.parts()) sum += p.coeff * p.rect.volume();
    return sum;
}

StepFunctionND partial_integral(const StepFunctionND& f, std::size_t axis)
{
    if (axis >= f.dim()) throw DomainError("partial_integral axis out of range");
    std::vector<PartND> terms;
    terms.reserve(f.parts().size());
    for (const auto& p : f.parts()) {
        const Rational w = p.rect.axis(axis).width();
        if (w == 0) continue;
        terms.push_back({p.rect.without_axis(axis), p.coeff * w});
    }
    return StepFunctionND::canonicalize(f.dim() - 1, terms);
}

RepeatedIntegralReport repeated_integral_check(const StepFunctionND& f)
{
    RepeatedIntegralReport report;
    report.volume = volume_integral(f);
    std::vector<std::size_t> order(f.dim());
    std::iota(order.begin(), order.end(), 0);
    do {
        StepFunctionND g = f;
        std::vector<std::size_t> remaining(order.size());
        std::iota(remaining.begin(), remaining.end(), 0);
        for (std::size_t axis : order) {
            auto pos = static_cast<std::size_t>(std::find(remaining.begin(), remaining.end(), axis) - remaining.begin());
            g = partial_integral(g, pos);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
        }
        const Rational value = volume_integral(g);  // dimension 0: the single coefficient
        ++report.orders_checked;
        if (value != report.volume && report.ok) {
            report.ok = false;
            report.failing_order = order;
            report.difference = value - report.volume;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return report;
}

// --- dyadic tiling -----------------------------------------------------------

namespace {

BigInt floor_div(const Rational& q)
{
    BigInt n = boost::multiprecision::numerator(q);
    BigInt d = boost::multiprecision::denominator(q);
    BigInt r = n / d;  // truncates toward zero
    if (n % d != 0 && n < 0) r -= 1;
    return r;
}

BigInt ceil_div(const Rational& q) { return -floor_div(-q); }

}  // namespace

Tiling::Tiling(ClosureInside inside, int level, Rectangle bounding_box, std::size_t cell_cap)
    : inside_(std::move(inside)), level_(level), box_(std::move(bounding_box))
{
    if (level < 0) throw DomainError("tiling level must be nonnegative");
    if (level > 60) throw ResourceError("tiling level " + std::to_string(level) + " exceeds cell cap " + std::to_string(cell_cap));
    const Rational scale = Rational(BigInt(1) << level);
    BigInt count = 1;
    for (const auto& iv : box_.axes()) {
        k_lo_.push_back(floor_div(iv.lo() * scale) + 1);
        k_hi_.push_back(ceil_div(iv.hi() * scale));
        if (k_hi_.back() < k_lo_.back()) count = 0;
        else count *= k_hi_.back() - k_lo_.back() + 1;
        if (count > cell_cap)
            throw ResourceError("dyadic tiling at level " + std::to_string(level) + " exceeds cell cap " +
                                std::to_string(cell_cap));
    }
    candidates_ = box_.dim() == 0 ? 0 : count.convert_to<std::size_t>();
}

void Tiling::for_each(const std::function<void(const Rectangle&)>& visit) const
{
    if (candidates_ == 0) return;
    const std::size_t d = box_.dim();
    const BigInt denom = BigInt(1) << level_;
    std::vector<BigInt> k(k_lo_);
    std::vector<Interval> axes(d);
    // Endpoint k/2^n is reused as the next cell's lower endpoint along the last axis.
    while (true) {
        for (std::size_t j = 0; j < d; ++j) {
            if (j + 1 == d && k[j] != k_lo_[j])
                axes[j] = Interval::open_closed(axes[j].hi(), Rational(k[j], denom));
            else
                axes[j] = Interval::open_closed(Rational(k[j] - 1, denom), Rational(k[j], denom));
        }
        Rectangle cell(axes);
        if (inside_(cell.closure())) visit(cell);
        std::size_t j = d;
        while (j > 0) {
            --j;
            if (k[j] < k_hi_[j]) {
                ++k[j];
                break;
            }
            k[j] = k_lo_[j];
            if (j == 0) return;
        }
    }
}

std::vector<Rectangle> Tiling::tiles() const
{
    std::vector<Rectangle> out;
    for_each([&out](const Rectangle& r) { out.push_back(r); });
    return out;
}

Rational Tiling::volume() const
{
    std::size_t count = 0;
    for_each([&](const Rectangle&) { ++count; });
    return Rational(BigInt(count), BigInt(1) << (level_ * static_cast<int>(box_.dim())));
}

Tiling dyadic_tiling(ClosureInside inside, int level, const Rectangle& bounding_box, std::size_t cell_cap)
{
    return Tiling(std::move(inside), level, bounding_box, cell_cap);
}

}  // namespace daniell
