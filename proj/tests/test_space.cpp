#include <gtest/gtest.h>

#include <cstdlib>

#include "fuzzy/space.hpp"
#include "test_support.hpp"

using namespace fuzzy;
using fuzzy::test::q;

namespace {

// Oracle for the case split of the pathological space, written from the
// definition independently of FuzzyMetricSpace.
Rational pathological_oracle(Point x, Point y) {
    if (x == y)
        return q(1);
    if (x != 1 && y != 1)
        return q(1, 2);
    return q(1, x == 1 ? y : x);
}

} // namespace

TEST(SpaceEval, ClosedForms) {
    EXPECT_EQ(eval_M(FuzzyMetricSpace::standard_integers(), 0, 1, q(1)), q(1, 2));
    EXPECT_EQ(eval_M(FuzzyMetricSpace::reciprocal_product(), 2, 3, q(5)), q(1, 6));
    EXPECT_EQ(eval_M(FuzzyMetricSpace::ratio_minmax(), 4, 9, q(1, 3)), q(4, 9));
    EXPECT_EQ(eval_M(FuzzyMetricSpace::ratio_minmax(), 9, 4, q(2)), q(4, 9));
    EXPECT_EQ(eval_M(FuzzyMetricSpace::ultrametric_standard(), 3, 5, q(10)), q(10, 15));
    auto path = FuzzyMetricSpace::pathological();
    for (Point x = 1; x <= 6; ++x)
        for (Point y = 1; y <= 6; ++y)
            EXPECT_EQ(eval_M(path, x, y, q(1)), pathological_oracle(x, y));
}

TEST(SpaceEval, Errors) {
    auto std_z = FuzzyMetricSpace::standard_integers();
    EXPECT_THROW(eval_M(std_z, 0, 1, q(0)), DomainError);
    EXPECT_THROW(eval_M(std_z, 0, 1, q(-1, 2)), DomainError);
    EXPECT_THROW(eval_M(FuzzyMetricSpace::reciprocal_product(), 0, 1, q(1)), DomainError);
    EXPECT_THROW(eval_M(FuzzyMetricSpace::ultrametric_standard(), 1, -3, q(1)), DomainError);
}

TEST(SpaceEval, ScaledLineAndLattice) {
    auto line = FuzzyMetricSpace::standard(MetricDescriptor::scaled(2));
    // points 1 and 4 stand for 1/2 and 2: distance 3/2
    EXPECT_EQ(eval_M(line, 1, 4, q(3, 2)), q(1, 2));
    auto lat = FuzzyMetricSpace::standard(MetricDescriptor::lattice(2, 10));
    // 12 = (2,1), 35 = (5,3): taxicab 3 + 2 = 5
    EXPECT_EQ(lat.metric()->distance(12, 35), q(5));
    EXPECT_EQ(eval_M(lat, 12, 35, q(5)), q(1, 2));
    EXPECT_THROW(eval_M(lat, 0, 100, q(1)), DomainError);
}

TEST(SpaceAxioms, ReciprocalProductPasses) {
    auto rep = check_axioms(FuzzyMetricSpace::reciprocal_product(), range(1, 20), {q(1)});
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.find("axiom_continuous")->verdict, Verdict::sampled_only);
}

TEST(SpaceAxioms, RatioMinMaxPasses) {
    EXPECT_TRUE(check_axioms(FuzzyMetricSpace::ratio_minmax(), range(1, 20), {q(1), q(2)}).passed());
}

TEST(SpaceAxioms, PathologicalUnderProductFailsTriangleWithOracleTriple) {
    // Oracle: brute-force search for a triangle violation under the product.
    bool oracle_found = false;
    for (Point x = 1; x <= 5 && !oracle_found; ++x)
        for (Point y = 1; y <= 5 && !oracle_found; ++y)
            for (Point z = 1; z <= 5 && !oracle_found; ++z)
                oracle_found = pathological_oracle(x, z) < pathological_oracle(x, y) * pathological_oracle(y, z);
    ASSERT_TRUE(oracle_found);

    auto rep = check_axioms(FuzzyMetricSpace::pathological(TNormKind::product), range(1, 5), {q(1)});
    EXPECT_FALSE(rep.passed());
    const Record* tri = rep.find("axiom_triangle");
    ASSERT_NE(tri, nullptr);
    EXPECT_EQ(tri->verdict, Verdict::fail);
    ASSERT_EQ(tri->witness.size(), 3u);
    Point x = tri->witness[0], y = tri->witness[1], z = tri->witness[2];
    EXPECT_LT(pathological_oracle(x, z), pathological_oracle(x, y) * pathological_oracle(y, z));
    EXPECT_EQ(*tri->find_value("M(x,z,t+s)"), pathological_oracle(x, z));
}

TEST(SpaceAxioms, PathologicalUnderLukasiewiczPasses) {
    EXPECT_TRUE(check_axioms(FuzzyMetricSpace::pathological(), range(1, 12), {q(1), q(2)}).passed());
}

TEST(SpaceAxioms, BrokenTableIsCaught) {
    // 0-1 and 1-2 at distance 1 but 0-2 at 5: triangle violated, and the
    // fuzzy triangle of the standard metric fails with it.
    auto m = MetricDescriptor::table({{q(0), q(1), q(5)}, {q(1), q(0), q(1)}, {q(5), q(1), q(0)}});
    EXPECT_FALSE(check_metric_axioms(m, range(0, 2)).passed());
    // at t = s = 10: (10/11)^2 > 20/25
    EXPECT_FALSE(check_axioms(FuzzyMetricSpace::standard(m), range(0, 2), {q(10)}).passed());
    EXPECT_THROW(MetricDescriptor::table({{q(0), q(1)}, {q(2), q(0)}}), DomainError);
}

TEST(SpaceAxioms, BuiltinMetricsSatisfyMetricAxioms) {
    EXPECT_TRUE(check_metric_axioms(MetricDescriptor::integers(), range(-8, 8)).passed());
    EXPECT_TRUE(check_metric_axioms(MetricDescriptor::max_ultrametric(), range(1, 20)).passed());
    EXPECT_TRUE(check_metric_axioms(MetricDescriptor::lattice(2, 4), range(0, 15)).passed());
    EXPECT_TRUE(check_metric_axioms(MetricDescriptor::scaled(3), range(-6, 6)).passed());
}

TEST(SpaceAxioms, UltrametricIsNonArchimedean) {
    EXPECT_TRUE(
        check_non_archimedean(FuzzyMetricSpace::ultrametric_standard(), range(1, 30), {q(1), q(10)}).passed());
    EXPECT_FALSE(
        check_non_archimedean(FuzzyMetricSpace::standard_integers(TNormKind::minimum), range(0, 5), {q(1)}).passed());
}

TEST(Subspace, RestrictionKeepsValues) {
    auto z = FuzzyMetricSpace::standard_integers();
    auto sub = subspace(z, {0, 2, 4});
    EXPECT_EQ(eval_M(sub, 0, 2, q(1)), q(1, 3));
    EXPECT_THROW(eval_M(sub, 0, 1, q(1)), DomainError);
    auto empty = subspace(z, {});
    EXPECT_FALSE(empty.contains(0));
    EXPECT_THROW(subspace(FuzzyMetricSpace::reciprocal_product(), {0, 1}), DomainError);
}

TEST(Subspace, RestrictingToWholeFiniteUniverseIsIdentity) {
    auto finite = subspace(FuzzyMetricSpace::ratio_minmax(), range(1, 6));
    EXPECT_EQ(subspace(finite, range(1, 6)), finite);
    auto table = FuzzyMetricSpace::standard(MetricDescriptor::table({{q(0), q(2)}, {q(2), q(0)}}));
    EXPECT_EQ(subspace(table, {0, 1}).restriction()->size(), 2u);
    EXPECT_EQ(eval_M(subspace(table, {0, 1}), 0, 1, q(2)), eval_M(table, 0, 1, q(2)));
}

TEST(MetricThreshold, KnownValues) {
    EXPECT_EQ(metric_threshold(q(3), ScaleParams(q(1, 2), q(4))), (ThresholdSides{true, true}));
    EXPECT_EQ(metric_threshold(q(0), ScaleParams(q(1, 9), q(1, 5))), (ThresholdSides{true, true}));
    EXPECT_EQ(metric_threshold(q(5), ScaleParams(q(1, 2), q(5))), (ThresholdSides{false, false}));
    EXPECT_EQ(metric_radius(ScaleParams(q(1, 2), q(4))), q(4));
}

TEST(MetricThreshold, SidesAgreeOnRandomCases) {
    fuzzy::test::Gen gen(0);
    for (int i = 0; i < 1000; ++i) {
        ScaleParams p(gen.unit_open(), gen.rational(q(1, 64), q(50)));
        Rational d = gen.rational(q(0), q(100));
        auto s = metric_threshold(d, p);
        EXPECT_EQ(s.fuzzy_side, s.metric_side) << d << " " << p.str();
        auto at = metric_threshold(metric_radius(p), p);
        EXPECT_EQ(at, (ThresholdSides{false, false}));
    }
}

TEST(Ball, StandardIntegersMatchesRadiusOracle) {
    auto z = FuzzyMetricSpace::standard_integers();
    EXPECT_EQ(ball(z, 0, ScaleParams(q(1, 2), q(5)), range(-10, 10)), range(-4, 4));
    fuzzy::test::Gen gen(3);
    for (int i = 0; i < 200; ++i) {
        ScaleParams p(gen.unit_open(16), gen.rational(q(1, 8), q(6), 8));
        Point x = gen.integer(-10, 10);
        // Oracle: the metric form |y - x| (1 - r) < r t.
        PointSet expect;
        for (Point y = -20; y <= 20; ++y)
            if (Rational(std::llabs(y - x)) * p.level() < p.r() * p.t())
                expect.push_back(y);
        EXPECT_EQ(ball(z, x, p, range(-20, 20)), expect);
    }
}

TEST(Ball, UltrametricBallIsAnInitialSegment) {
    auto u = FuzzyMetricSpace::ultrametric_standard();
    EXPECT_EQ(ball(u, 1, ScaleParams(q(1, 2), q(10)), range(1, 200)), range(1, 9));
    EXPECT_EQ(ball(u, 10, ScaleParams(q(1, 2), q(10)), range(1, 200)), PointSet{10});
}

TEST(Ball, TinyRadiusGivesCentreOnly) {
    auto r = FuzzyMetricSpace::ratio_minmax();
    EXPECT_EQ(ball(r, 7, ScaleParams(q(1, 1000), q(1)), range(1, 50)), PointSet{7});
}

TEST(Ball, ContainsCentreAndIsMonotone) {
    fuzzy::test::Gen gen(5);
    const FuzzyMetricSpace spaces[] = {FuzzyMetricSpace::ratio_minmax(), FuzzyMetricSpace::reciprocal_product(),
                                       FuzzyMetricSpace::ultrametric_standard(),
                                       FuzzyMetricSpace::standard_integers()};
    for (const auto& s : spaces) {
        for (int i = 0; i < 60; ++i) {
            Point x = gen.integer(1, 30);
            Rational r1 = gen.unit_open(20), r2 = gen.unit_open(20);
            Rational t1 = gen.rational(q(1, 4), q(8), 4), t2 = gen.rational(q(1, 4), q(8), 4);
            if (r2 < r1)
                std::swap(r1, r2);
            if (t2 < t1)
                std::swap(t1, t2);
            auto w = range(1, 40);
            auto small = ball(s, x, ScaleParams(r1, t1), w);
            EXPECT_TRUE(contains(small, x));
            EXPECT_TRUE(is_subset(small, ball(s, x, ScaleParams(r2, t1), w)));
            EXPECT_TRUE(is_subset(small, ball(s, x, ScaleParams(r1, t2), w)));
        }
    }
}

TEST(Bounded, PathologicalValues) {
    auto path = FuzzyMetricSpace::pathological();
    EXPECT_TRUE(is_bounded(path, {1, 2}, ScaleParams(q(3, 4), q(1))));
    EXPECT_FALSE(is_bounded(path, range(1, 4), ScaleParams(q(3, 4), q(1))));
    EXPECT_FALSE(is_bounded(path, range(1, 30), ScaleParams(q(3, 4), q(9))));
    EXPECT_TRUE(is_bounded(path, {17}, ScaleParams(q(1, 100), q(1))));
    // the tail {2, 3, ...} is bounded on its own
    EXPECT_TRUE(is_bounded(path, range(2, 30), ScaleParams(q(3, 4), q(1))));
}

TEST(Bounded, StandardAtHalfEqualsMetricDiameter) {
    // At r = 1/2 the fuzzy bound is exactly diameter < t.
    auto z = FuzzyMetricSpace::standard_integers();
    fuzzy::test::Gen gen(9);
    for (int i = 0; i < 300; ++i) {
        PointSet s = gen.subset(range(-25, 24), 0.1);
        Rational t = gen.rational(q(1, 2), q(60), 4);
        Point diam = s.empty() ? 0 : s.back() - s.front();
        EXPECT_EQ(is_bounded(z, s, ScaleParams(q(1, 2), t)), Rational(diam) < t);
    }
}

TEST(UnionBound, ProductChain) {
    auto rp = FuzzyMetricSpace::reciprocal_product();
    ScaleParams half(q(1, 2), q(2));
    // M(1,3,t) = 1/3
    auto ub = union_bound_params(rp, half, ScaleParams(q(1, 2), q(5)), 1, 3);
    EXPECT_EQ(ub.lower_bound, q(1, 12));
    EXPECT_EQ(ub.s, q(11, 12));
    EXPECT_EQ(ub.t_out, q(2 * 2 + 5));
    auto same = union_bound_params(rp, half, half, 4, 4);
    EXPECT_EQ(same.lower_bound, q(1, 4));
}

TEST(UnionBound, LukasiewiczUnsupported) {
    EXPECT_THROW(union_bound_params(FuzzyMetricSpace::pathological(), ScaleParams(q(1, 2), q(1)),
                                    ScaleParams(q(1, 2), q(1)), 1, 2),
                 UnsupportedOperation);
}

TEST(UnionBound, CertifiesUnionOfBoundedSets) {
    // Two bounded blocks of the reciprocal-product space; the derived scale
    // must bound every pair of the union.
    auto rp = FuzzyMetricSpace::reciprocal_product();
    PointSet a{1, 2}, b{2, 3};
    ScaleParams pa(q(3, 4), q(1)), pb(q(7, 8), q(1));
    ASSERT_TRUE(is_bounded(rp, a, pa));
    ASSERT_TRUE(is_bounded(rp, b, pb));
    auto ub = union_bound_params(rp, pa, pb, 1, 3);
    for (Point x : set_union(a, b))
        for (Point y : set_union(a, b))
            EXPECT_GE(eval_M(rp, x, y, ub.t_out), ub.lower_bound);
}

TEST(ScaleParamsTest, Validation) {
    EXPECT_THROW(ScaleParams(q(0), q(1)), DomainError);
    EXPECT_THROW(ScaleParams(q(1), q(1)), DomainError);
    EXPECT_THROW(ScaleParams(q(1, 2), q(0)), DomainError);
    EXPECT_EQ(ScaleParams::parse("1/2:3"), ScaleParams(q(1, 2), q(3)));
    EXPECT_THROW(ScaleParams::parse("1/2"), ParseError);
    EXPECT_THROW(ScaleParams::parse("3/2:1"), ParseError);
}
