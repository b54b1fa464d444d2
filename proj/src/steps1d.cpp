#include "daniell/steps1d.hpp"

#include "atoms.hpp"

#include <algorithm>
#include <sstream>

namespace daniell {

std::string to_string(const Rational& q)
{
    std::ostringstream os;
    os << q;
    return os.str();
}

Interval::Interval(Rational lo, Rational hi, bool lo_closed, bool hi_closed)
    : lo_(std::move(lo)), hi_(std::move(hi)), lo_closed_(lo_closed), hi_closed_(hi_closed)
{
    if (lo_ > hi_) throw DomainError("interval with lo > hi: " + to_string(lo_) + " > " + to_string(hi_));
}

bool Interval::contains(const Rational& x) const
{
    if (x < lo_ || x > hi_) return false;
    if (x == lo_ && !lo_closed_) return false;
    if (x == hi_ && !hi_closed_) return false;
    return true;
}

Rational Interval::interior_point() const
{
    if (empty()) throw DomainError("empty interval has no points");
    if (is_point()) return lo_;
    return (lo_ + hi_) / 2;
}

namespace {

StepFunction1D from_atoms(const std::vector<Rational>& bps, const std::vector<Rational>& values)
{
    std::vector<Part> parts;
    for (std::size_t k = 0; k < values.size(); ++k)
        if (values[k] != 0) parts.push_back({detail::atom_interval(bps, k), values[k]});
    // Parts are already disjoint atoms; canonicalize over them is the identity.
    return StepFunction1D::canonicalize(parts);
}

template <typename Op>
StepFunction1D combine(const StepFunction1D& f, const StepFunction1D& g, Op op)
{
    auto bps = f.breakpoints();
    auto gb = g.breakpoints();
    bps.insert(bps.end(), gb.begin(), gb.end());
    detail::sort_unique(bps);
    auto vf = detail::atom_values(f.parts(), bps);
    auto vg = detail::atom_values(g.parts(), bps);
    for (std::size_t k = 0; k < vf.size(); ++k) vf[k] = op(vf[k], vg[k]);
    return from_atoms(bps, vf);
}

template <typename Op>
StepFunction1D map_values(const StepFunction1D& f, Op op)
{
    std::vector<Part> parts;
    parts.reserve(f.parts().size());
    for (const auto& p : f.parts()) parts.push_back({p.interval, op(p.coeff)});
    return StepFunction1D::canonicalize(parts);
}

}  // namespace

StepFunction1D StepFunction1D::canonicalize(std::span<const Part> terms)
{
    const auto bps = detail::endpoints_of(terms);
    const auto values = detail::atom_values(terms, bps);
    StepFunction1D out;
    for (std::size_t k = 0; k < values.size(); ++k)
        if (values[k] != 0) out.parts_.push_back({detail::atom_interval(bps, k), values[k]});
    return out;
}

StepFunction1D StepFunction1D::indicator(const Interval& iv, const Rational& coeff)
{
    const Part p{iv, coeff};
    return canonicalize(std::span<const Part>(&p, 1));
}

Rational StepFunction1D::operator()(const Rational& x) const
{
    // Parts are ordered; find the first whose upper end is not left of x.
    auto it = std::lower_bound(parts_.begin(), parts_.end(), x,
                               [](const Part& p, const Rational& v) { return p.interval.hi() < v; });
    for (; it != parts_.end() && it->interval.lo() <= x; ++it)
        if (it->interval.contains(x)) return it->coeff;
    return 0;
}

std::vector<Rational> StepFunction1D::breakpoints() const { return detail::endpoints_of(parts_); }

bool operator==(const StepFunction1D& f, const StepFunction1D& g) { return (f - g).is_zero(); }

StepFunction1D join(const StepFunction1D& f, const StepFunction1D& g)
{
    return combine(f, g, [](const Rational& a, const Rational& b) { return a < b ? b : a; });
}

StepFunction1D meet(const StepFunction1D& f, const StepFunction1D& g)
{
    return combine(f, g, [](const Rational& a, const Rational& b) { return a < b ? a : b; });
}

StepFunction1D abs(const StepFunction1D& f)
{
    return map_values(f, [](const Rational& a) { return a < 0 ? Rational(-a) : a; });
}

StepFunction1D lattice(LatticeOp op, const StepFunction1D& f, const StepFunction1D& g)
{
    switch (op) {
    case LatticeOp::join: return join(f, g);
    case LatticeOp::meet: return meet(f, g);
    case LatticeOp::abs: return abs(f);
    }
    return {};
}

StepFunction1D operator+(const StepFunction1D& f, const StepFunction1D& g)
{
    std::vector<Part> terms(f.parts());
    terms.insert(terms.end(), g.parts().begin(), g.parts().end());
    return StepFunction1D::canonicalize(terms);
}

StepFunction1D operator-(const StepFunction1D& f) { return map_values(f, [](const Rational& a) { return Rational(-a); }); }

StepFunction1D operator-(const StepFunction1D& f, const StepFunction1D& g) { return f + (-g); }

StepFunction1D operator*(const Rational& a, const StepFunction1D& f)
{
    if (a == 0) return {};
    return map_values(f, [&a](const Rational& c) { return Rational(a * c); });
}

StepFunction1D scale(const Rational& a, const StepFunction1D& f) { return a * f; }

StepFunction1D operator*(const StepFunction1D& f, const StepFunction1D& g)
{
    return combine(f, g, [](const Rational& a, const Rational& b) { return Rational(a * b); });
}

StepFunction1D algebra(AlgebraOp op, const StepFunction1D& f, const StepFunction1D& g)
{
    switch (op) {
    case AlgebraOp::add: return f + g;
    case AlgebraOp::sub: return f - g;
    case AlgebraOp::mul: return f * g;
    }
    return {};
}

bool is_nonnegative(const StepFunction1D& f)
{
    return std::all_of(f.parts().begin(), f.parts().end(), [](const Part& p) { return p.coeff > 0; });
}

Rational width_integral(const StepFunction1D& f)
{
    Rational sum = 0;
    for (const auto& p : f.parts()) sum += p.coeff * p.interval.width();
    return sum;
}

// --- Stieltjes -------------------------------------------------------------

StieltjesWeight::StieltjesWeight(std::vector<Rational> breakpoints, std::vector<Rational> slopes,
                                 std::vector<Jump> jumps)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)), jumps_(std::move(jumps))
{
    if (slopes_.size() != breakpoints_.size() + 1)
        throw DomainError("StieltjesWeight needs one slope per open piece (breakpoints + 1)");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i - 1] < breakpoints_[i]))
            throw DomainError("StieltjesWeight breakpoints must be strictly increasing");
    for (const auto& s : slopes_)
        if (s < 0) throw DomainError("StieltjesWeight slopes must be nonnegative");
    for (const auto& j : jumps_)
        if (j.mass < 0) throw DomainError("StieltjesWeight jump masses must be nonnegative");
    std::sort(jumps_.begin(), jumps_.end(), [](const Jump& a, const Jump& b) { return a.at < b.at; });
    // Merge jumps stated twice at the same point.
    std::vector<Jump> merged;
    for (auto& j : jumps_) {
        if (!merged.empty() && merged.back().at == j.at)
            merged.back().mass += j.mass;
        else
            merged.push_back(j);
    }
    jumps_ = std::move(merged);
}

Rational StieltjesWeight::continuous_part(const Rational& x) const
{
    // Antiderivative of the slope function anchored at 0.
    auto integral_to = [this](const Rational& t) {
        Rational acc = 0;
        const Rational a = t < 0 ? t : Rational(0);
        const Rational b = t < 0 ? Rational(0) : t;
        Rational left = a;
        // piece k is (bp[k-1], bp[k]); piece 0 is unbounded on the left
        std::size_t k = 0;
        while (k < breakpoints_.size() && breakpoints_[k] <= left) ++k;
        while (left < b) {
            Rational right = (k < breakpoints_.size() && breakpoints_[k] < b) ? breakpoints_[k] : b;
            acc += slopes_[k] * (right - left);
            left = right;
            ++k;
        }
        return t < 0 ? Rational(-acc) : acc;
    };
    return integral_to(x);
}

Rational StieltjesWeight::jump_mass_between(const Rational& a, const Rational& b) const
{
    Rational m = 0;
    for (const auto& j : jumps_)
        if (a < j.at && j.at < b) m += j.mass;
    return m;
}

Rational StieltjesWeight::jump_at(const Rational& c) const
{
    for (const auto& j : jumps_)
        if (j.at == c) return j.mass;
    return 0;
}

Rational StieltjesWeight::mass(const Interval& iv) const
{
    if (iv.empty()) return 0;
    if (iv.is_point()) return jump_at(iv.lo());
    Rational m = continuous_part(iv.hi()) - continuous_part(iv.lo()) + jump_mass_between(iv.lo(), iv.hi());
    if (iv.lo_closed()) m += jump_at(iv.lo());
    if (iv.hi_closed()) m += jump_at(iv.hi());
    return m;
}

Rational stieltjes_integral(const StepFunction1D& f, const StieltjesWeight& w)
{
    Rational sum = 0;
    for (const auto& p : f.parts()) sum += p.coeff * w.mass(p.interval);
    return sum;
}

MonotoneTailReport monotone_tail_check(std::span<const StepFunction1D> hs)
{
    MonotoneTailReport report;
    for (std::size_t n = 0; n < hs.size(); ++n) {
        report.integrals.push_back(width_integral(hs[n]));
        if (report.violation) continue;
        for (const auto& p : hs[n].parts()) {
            if (p.coeff < 0) {
                report.violation = {n, p.interval.interior_point(), MonotoneTailReport::Violation::Kind::negative};
                break;
            }
        }
        if (report.violation || n == 0) continue;
        const auto increase = hs[n] - hs[n - 1];
        for (const auto& p : increase.parts()) {
            if (p.coeff > 0) {
                report.violation = {n, p.interval.interior_point(), MonotoneTailReport::Violation::Kind::increase};
                break;
            }
        }
    }
    report.ok = !report.violation.has_value();
    return report;
}

}  // namespace daniell
