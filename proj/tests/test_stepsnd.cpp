#include "daniell/stepsnd.hpp"

#include "doctest.h"
#include "daniell/random_steps.hpp"

using namespace daniell;
using daniell::testing::StepGenerator;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

bool closed_in_unit_disk(const Rectangle& r)
{
    // Closed rectangle lies in the open disk iff all corners do.
    for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < 2; ++cy) {
            const Rational& x = cx ? r.axis(0).hi() : r.axis(0).lo();
            const Rational& y = cy ? r.axis(1).hi() : r.axis(1).lo();
            if (!(x * x + y * y < 1)) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("volume integral")
{
    const auto box = StepFunctionND::indicator(Rectangle::open_closed({0, 0}, {1, 2}));
    CHECK(volume_integral(box) == 2);
    const auto segment = StepFunctionND::indicator(Rectangle({Interval::point(0), Interval::open_closed(0, 1)}));
    CHECK_FALSE(segment.is_zero());
    CHECK(volume_integral(segment) == 0);
}

TEST_CASE("partial integral")
{
    const auto box = StepFunctionND::indicator(Rectangle::open_closed({0, 0}, {1, 2}));
    const auto p = partial_integral(box, 1);
    CHECK(p.dim() == 1);
    CHECK(p == StepFunctionND::indicator(Rectangle({Interval::open_closed(0, 1)}), 2));

    const auto segment = StepFunctionND::indicator(Rectangle({Interval::point(0), Interval::open_closed(0, 1)}));
    CHECK(partial_integral(segment, 0).is_zero());
    CHECK_THROWS_AS(partial_integral(box, 2), DomainError);
}

TEST_CASE("repeated integral check")
{
    CHECK(repeated_integral_check(StepFunctionND(3)).ok);
    CHECK(repeated_integral_check(StepFunctionND(3)).volume == 0);

    const auto single = StepFunctionND::indicator(Rectangle::open_closed({0, 0, 0}, {q(1, 2), 3, q(2, 3)}));
    const auto r = repeated_integral_check(single);
    CHECK(r.ok);
    CHECK(r.orders_checked == 6);
    CHECK(r.volume == 1);

    StepGenerator gen(41);
    for (std::size_t d = 2; d <= 4; ++d) {
        const auto f = gen.stepnd(d, 8);
        const auto report = repeated_integral_check(f);
        CHECK(report.ok);
        CHECK(report.orders_checked == (d == 2 ? 2u : d == 3 ? 6u : 24u));
    }
}

TEST_CASE("nd canonical form preserves values")
{
    StepGenerator gen(43);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PartND> terms;
        for (int i = 0; i < 6; ++i) terms.push_back({gen.rectangle(2), gen.coefficient()});
        const auto f = StepFunctionND::canonicalize(2, terms);
        for (int i = 0; i < f.parts().size(); ++i)
            for (int j = i + 1; j < f.parts().size(); ++j)
                REQUIRE_FALSE(f.parts()[i].rect.intersects(f.parts()[j].rect));
        for (int a = -12; a <= 12; a += 1)
            for (int b = -12; b <= 12; b += 3) {
                const std::vector<Rational> x{q(a, 4), q(b, 4)};
                Rational expect = 0;
                for (const auto& t : terms)
                    if (t.rect.contains(x)) expect += t.coeff;
                REQUIRE(f(x) == expect);
            }
    }
}

TEST_CASE("lattice and algebra identities in d dimensions")
{
    StepGenerator gen(47);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = gen.uniform_int(1, 3);
        const auto f = gen.stepnd(d, 6);
        const auto g = gen.stepnd(d, 6);
        REQUIRE(join(f, g) + meet(f, g) == f + g);
        REQUIRE(volume_integral(f + g) == volume_integral(f) + volume_integral(g));
        REQUIRE(volume_integral(abs(f)) >= 0);
        const auto a = StepFunctionND::indicator(gen.rectangle(d));
        const auto b = StepFunctionND::indicator(gen.rectangle(d));
        REQUIRE(join(a, b) == a + b - a * b);
    }
}

TEST_CASE("canonicalization respects the cell cap")
{
    StepGenerator gen(53);
    const auto f = gen.stepnd(3, 10);
    std::vector<PartND> terms(f.parts());
    CHECK_THROWS_AS(StepFunctionND::canonicalize(3, terms, 1), ResourceError);
}

TEST_CASE("dyadic tiling of an interval")
{
    auto inside_unit = [](const Rectangle& r) { return r.axis(0).lo() > 0 && r.axis(0).hi() < 1; };
    const auto t = dyadic_tiling(inside_unit, 3, Rectangle::closed({0}, {1}));
    CHECK(t.volume() == q(6, 8));
    CHECK(t.volume() >= 1 - 2 * q(1, 8));
    CHECK(t.tiles().front() == Rectangle({Interval::open_closed(q(1, 8), q(2, 8))}));

    const auto none = dyadic_tiling([](const Rectangle&) { return false; }, 4, Rectangle::closed({0}, {1}));
    CHECK(none.tiles().empty());
    CHECK(none.volume() == 0);
}

TEST_CASE("dyadic tiling of the unit disk")
{
    const auto box = Rectangle::closed({-1, -1}, {1, 1});
    Rational previous = 0;
    for (int level = 1; level <= 8; ++level) {
        const auto t = dyadic_tiling(closed_in_unit_disk, level, box);
        const Rational v = t.volume();
        CHECK(v >= previous);
        CHECK(to_double(v) <= M_PI);
        previous = v;
        if (level == 8) CHECK(std::abs(to_double(v) - M_PI) < 0.05);
        if (level == 4) {
            const auto tiles = t.tiles();
            for (std::size_t i = 0; i < tiles.size(); ++i)
                for (std::size_t j = i + 1; j < tiles.size(); ++j) REQUIRE_FALSE(tiles[i].intersects(tiles[j]));
        }
    }
}

TEST_CASE("tiling levels nest")
{
    const auto box = Rectangle::closed({-1, -1}, {1, 1});
    const auto coarse = dyadic_tiling(closed_in_unit_disk, 3, box).tiles();
    const auto fine = dyadic_tiling(closed_in_unit_disk, 4, box);
    // Each coarse tile is a union of fine tiles.
    for (const auto& c : coarse) {
        Rational covered = 0;
        fine.for_each([&](const Rectangle& r) {
            if (c.intersects(r)) covered += r.volume();
        });
        REQUIRE(covered == c.volume());
    }
}

TEST_CASE("tiling cap")
{
    CHECK_THROWS_AS(dyadic_tiling(closed_in_unit_disk, 12, Rectangle::closed({-1, -1}, {1, 1})), ResourceError);
}
