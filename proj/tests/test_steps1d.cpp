#include "daniell/steps1d.hpp"

#include "doctest.h"
#include "daniell/random_steps.hpp"

using namespace daniell;
using daniell::testing::StepGenerator;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

StepFunction1D ind(const Interval& iv, const Rational& c = 1) { return StepFunction1D::indicator(iv, c); }

}  // namespace

TEST_CASE("canonicalize splits overlaps into interval parts")
{
    const std::vector<Part> terms{{Interval::open_closed(0, 2), 1}, {Interval::closed_open(1, 3), 1}};
    const auto f = StepFunction1D::canonicalize(terms);
    REQUIRE(f.parts().size() == 5);
    CHECK(f.parts()[0].interval == Interval::open(0, 1));
    CHECK(f.parts()[0].coeff == 1);
    CHECK(f.parts()[1].interval == Interval::point(1));
    CHECK(f.parts()[1].coeff == 2);
    CHECK(f.parts()[2].interval == Interval::open(1, 2));
    CHECK(f.parts()[2].coeff == 2);
    CHECK(f.parts()[3].interval == Interval::point(2));
    CHECK(f.parts()[3].coeff == 2);
    CHECK(f.parts()[4].interval == Interval::open(2, 3));
    CHECK(f.parts()[4].coeff == 1);
}

TEST_CASE("canonicalize trivial inputs")
{
    const auto p = ind(Interval::point(0), 5);
    REQUIRE(p.parts().size() == 1);
    CHECK(p.parts()[0].interval.is_point());
    CHECK(p.parts()[0].coeff == 5);

    CHECK(StepFunction1D::canonicalize({}).is_zero());
    // Empty intervals vanish.
    CHECK(ind(Interval::open(2, 2)).is_zero());
    CHECK(ind(Interval::closed_open(2, 2), 7).is_zero());
}

TEST_CASE("interval rejects reversed endpoints")
{
    CHECK_THROWS_AS(Interval(q(2), q(1), true, true), DomainError);
}

TEST_CASE("pointwise evaluation preserved by canonicalization")
{
    StepGenerator gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Part> terms;
        for (int i = 0; i < 5; ++i) terms.push_back({gen.interval(), gen.coefficient()});
        const auto f = StepFunction1D::canonicalize(terms);
        for (int probe = -36; probe <= 36; ++probe) {
            const Rational x(probe, 4);
            Rational expect = 0;
            for (const auto& t : terms)
                if (t.interval.contains(x)) expect += t.coeff;
            REQUIRE(f(x) == expect);
        }
    }
}

TEST_CASE("lattice operations")
{
    const auto f = ind(Interval::open_closed(0, 1));
    const auto g = ind(Interval::open_closed(q(1, 2), 2));
    CHECK(join(f, g) + meet(f, g) == f + g);
    CHECK(abs(ind(Interval::open_closed(0, 1), -3)) == ind(Interval::open_closed(0, 1), 3));
    CHECK(join(f, f) == f);
    CHECK(lattice(LatticeOp::meet, f, g) == ind(Interval::open_closed(q(1, 2), 1)));
}

TEST_CASE("algebra operations")
{
    const auto a = ind(Interval::open_closed(0, 2));
    const auto b = ind(Interval::open_closed(1, 3));
    CHECK(a * b == ind(Interval::open_closed(1, 2)));
    CHECK(scale(q(1, 3), ind(Interval::open_closed(0, 1), 3)) == ind(Interval::open_closed(0, 1)));
    CHECK(algebra(AlgebraOp::sub, a, a).is_zero());

    // Sieve with three sets.
    const auto c = ind(Interval::closed(q(3, 2), 5));
    const auto unite = join(join(a, b), c);
    const auto sieve = a + b + c - (a * b) - (a * c) - (b * c) + a * b * c;
    CHECK(unite == sieve);
}

TEST_CASE("sieve formula on random sets")
{
    StepGenerator gen(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = gen.uniform_int(2, 5);
        std::vector<StepFunction1D> sets;
        for (int i = 0; i < n; ++i) sets.push_back(gen.set_indicator());
        StepFunction1D unite;
        for (const auto& s : sets) unite = join(unite, s);
        StepFunction1D sieve;
        for (int mask = 1; mask < (1 << n); ++mask) {
            StepFunction1D prod;
            bool first = true;
            for (int i = 0; i < n; ++i) {
                if (!(mask & (1 << i))) continue;
                prod = first ? sets[i] : prod * sets[i];
                first = false;
            }
            sieve = (__builtin_popcount(mask) % 2 == 1) ? sieve + prod : sieve - prod;
        }
        REQUIRE(unite == sieve);
    }
}

TEST_CASE("width integral")
{
    const auto f = ind(Interval::open_closed(0, 1), 2) + ind(Interval::open_closed(1, 2), 3);
    CHECK(width_integral(f) == 5);
    CHECK(width_integral(ind(Interval::point(1), 7)) == 0);

    StepGenerator gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        Rational total = 0;
        for (const auto& d : gen.decomposition(0, 1, gen.uniform_int(0, 12))) total += d.width();
        CHECK(total == 1);
    }
}

TEST_CASE("width integral is linear and positive")
{
    StepGenerator gen(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = gen.step1d();
        const auto g = gen.step1d();
        const Rational alpha = gen.coefficient(), beta = gen.coefficient();
        REQUIRE(width_integral(alpha * f + beta * g) == alpha * width_integral(f) + beta * width_integral(g));
        REQUIRE(width_integral(abs(f)) >= 0);
        const Rational i = width_integral(f);
        REQUIRE((i < 0 ? Rational(-i) : i) <= width_integral(abs(f)));
        REQUIRE(join(f, g) + meet(f, g) == f + g);
    }
}

TEST_CASE("stieltjes integral")
{
    const StieltjesWeight jump({}, {q(0)}, {{q(1), q(1)}});
    CHECK(stieltjes_integral(ind(Interval::point(1)), jump) == 1);
    CHECK(stieltjes_integral(ind(Interval::open(0, 1)), jump) == 0);
    CHECK(stieltjes_integral(ind(Interval::closed(0, 1)), jump) == 1);

    StepGenerator gen(23);
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = gen.step1d();
        CHECK(stieltjes_integral(f, StieltjesWeight::lebesgue()) == width_integral(f));
    }
}

TEST_CASE("stieltjes mass reassembles over decompositions")
{
    const StieltjesWeight w({q(0), q(1, 2), q(2)}, {q(0), q(3), q(1, 5), q(2)},
                            {{q(1, 4), q(2)}, {q(1), q(1, 3)}, {q(2), q(5)}});
    StepGenerator gen(29);
    for (int trial = 0; trial < 30; ++trial) {
        const Rational a(gen.uniform_int(-4, 0), 2), b(gen.uniform_int(1, 6), 2);
        const Rational whole = w.mass(Interval::closed(a, b));
        Rational sum = 0;
        for (const auto& piece : gen.decomposition(a, b, gen.uniform_int(0, 10))) sum += w.mass(piece);
        REQUIRE(sum == whole);
    }
    // Open interval mass excludes endpoint jumps.
    CHECK(w.mass(Interval::open(q(1), q(2))) == q(1, 5));
    CHECK(w.mass(Interval::closed(q(1), q(2))) == q(1, 5) + q(1, 3) + q(5));
}

TEST_CASE("stieltjes weight validation")
{
    CHECK_THROWS_AS(StieltjesWeight({q(0)}, {q(1)}), DomainError);
    CHECK_THROWS_AS(StieltjesWeight({}, {q(-1)}), DomainError);
    CHECK_THROWS_AS(StieltjesWeight({}, {q(1)}, {{q(0), q(-1)}}), DomainError);
}

TEST_CASE("monotone tail check")
{
    std::vector<StepFunction1D> hs;
    for (int n = 1; n <= 3; ++n) hs.push_back(ind(Interval::open_closed(0, q(1, n))));
    auto report = monotone_tail_check(hs);
    CHECK(report.ok);
    CHECK(report.integrals == std::vector<Rational>{1, q(1, 2), q(1, 3)});

    std::vector<StepFunction1D> constant(4, ind(Interval::open(0, 2), 3));
    report = monotone_tail_check(constant);
    CHECK(report.ok);
    CHECK(report.integrals == std::vector<Rational>(4, 6));

    std::vector<StepFunction1D> bad{ind(Interval::open(0, 1)), ind(Interval::open(0, 2))};
    report = monotone_tail_check(bad);
    REQUIRE_FALSE(report.ok);
    CHECK(report.violation->index == 1);
    CHECK(report.violation->kind == MonotoneTailReport::Violation::Kind::increase);
    CHECK(bad[1](report.violation->witness) > bad[0](report.violation->witness));

    std::vector<StepFunction1D> negative{ind(Interval::open(0, 1), -1)};
    report = monotone_tail_check(negative);
    REQUIRE_FALSE(report.ok);
    CHECK(report.violation->kind == MonotoneTailReport::Violation::Kind::negative);
}

TEST_CASE("monotone tail check on shrinking meets")
{
    StepGenerator gen(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto h = abs(gen.step1d(8));
        std::vector<StepFunction1D> hs{h};
        for (int n = 0; n < 6; ++n) {
            h = meet(h, ind(gen.interval(), gen.uniform_int(0, 4)));
            hs.push_back(h);
        }
        const auto report = monotone_tail_check(hs);
        REQUIRE(report.ok);
        for (std::size_t n = 1; n < report.integrals.size(); ++n)
            REQUIRE(report.integrals[n] <= report.integrals[n - 1]);
    }
}
