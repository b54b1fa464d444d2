#pragma once

// Interval parts of a finite partition. For sorted distinct breakpoints
// p[0] < ... < p[m-1] the atoms are indexed 0 .. 2m-2: atom 2i is the point
// {p[i]}, atom 2i+1 is the open interval (p[i], p[i+1]).

#include "daniell/steps1d.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace daniell::detail {

inline void sort_unique(std::vector<Rational>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline std::size_t atom_count(const std::vector<Rational>& bps)
{
    return bps.empty() ? 0 : 2 * bps.size() - 1;
}

inline std::size_t index_of(const std::vector<Rational>& bps, const Rational& x)
{
    auto it = std::lower_bound(bps.begin(), bps.end(), x);
    return static_cast<std::size_t>(it - bps.begin());
}

/// Inclusive atom index range covered by iv; both endpoints must be breakpoints.
inline std::optional<std::pair<std::size_t, std::size_t>> atom_range(const Interval& iv,
                                                                     const std::vector<Rational>& bps)
{
    if (iv.empty()) return std::nullopt;
    const std::size_t i = index_of(bps, iv.lo());
    const std::size_t j = index_of(bps, iv.hi());
    const std::size_t first = iv.lo_closed() ? 2 * i : 2 * i + 1;
    if (j == 0 && !iv.hi_closed()) return std::nullopt;
    const std::size_t last = iv.hi_closed() ? 2 * j : 2 * j - 1;
    if (first > last) return std::nullopt;
    return std::make_pair(first, last);
}

inline Interval atom_interval(const std::vector<Rational>& bps, std::size_t k)
{
    if (k % 2 == 0) return Interval::point(bps[k / 2]);
    return Interval::open(bps[k / 2], bps[k / 2 + 1]);
}

/// Values on atoms of bps of a sum of terms whose endpoints lie in bps.
inline std::vector<Rational> atom_values(std::span<const Part> terms, const std::vector<Rational>& bps)
{
    const std::size_t n = atom_count(bps);
    std::vector<Rational> diff(n + 1, Rational(0));
    for (const auto& t : terms) {
        if (t.coeff == 0) continue;
        if (auto r = atom_range(t.interval, bps)) {
            diff[r->first] += t.coeff;
            diff[r->second + 1] -= t.coeff;
        }
    }
    std::vector<Rational> values(n);
    Rational running = 0;
    for (std::size_t k = 0; k < n; ++k) {
        running += diff[k];
        values[k] = running;
    }
    return values;
}

inline std::vector<Rational> endpoints_of(std::span<const Part> terms)
{
    std::vector<Rational> bps;
    bps.reserve(2 * terms.size());
    for (const auto& t : terms) {
        if (t.interval.empty()) continue;
        bps.push_back(t.interval.lo());
        bps.push_back(t.interval.hi());
    }
    sort_unique(bps);
    return bps;
}

}  // namespace daniell::detail
