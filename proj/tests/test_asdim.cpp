#include <gtest/gtest.h>

#include "fuzzy/asdim.hpp"
#include "test_support.hpp"

using namespace fuzzy;
using fuzzy::test::q;

namespace {

const Rational kRGrid[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(9, 10)};

// Hand evaluation of the block recursion with integer cross-multiplication:
// for 1 - r = p/q, c/a < p/q iff c q < a p.
std::vector<std::pair<Point, Point>> ratio_recursion_by_hand(const Rational& level, Point last) {
    const Point p = level.num(), qq = level.den();
    std::vector<std::pair<Point, Point>> out;
    Point c = 1;
    while (true) {
        Point a = c + 1;
        while (!(c * qq < a * p))
            ++a;
        if (a > last)
            break;
        Point m = 0;
        while (!((a - 1) * qq < (a + m + 1) * p))
            ++m;
        out.emplace_back(a, m);
        c = a + m;
    }
    return out;
}

} // namespace

TEST(WitnessBounded, SingletonAndFiniteWindows) {
    auto rp = FuzzyMetricSpace::reciprocal_product();
    auto w = witness_bounded(rp, {5}, ScaleParams(q(1, 2), q(1)));
    EXPECT_EQ(w.bound_params, ScaleParams(q(1, 2), q(1)));
    EXPECT_TRUE(verify_witness(rp, w).passed());
    auto w2 = witness_bounded(rp, range(1, 6), ScaleParams(q(1, 2), q(1)));
    EXPECT_EQ(w2.n, 0);
    EXPECT_TRUE(verify_witness(rp, w2).passed());
}

TEST(WitnessBounded, PathologicalWindowDegrades) {
    auto path = FuzzyMetricSpace::pathological();
    auto w = witness_bounded(path, range(1, 100), ScaleParams(q(1, 2), q(1)));
    EXPECT_LT(w.bound_params.level(), q(1, 100));
    EXPECT_NE(w.note.find("beyond the grid"), std::string::npos);
    EXPECT_TRUE(verify_witness(path, w).passed());
    EXPECT_THROW(witness_bounded(path, range(1, 100), ScaleParams(q(1, 2), q(1)), BoundSearch{64, 10, false}),
                 SearchFailure);
}

TEST(WitnessReciprocal, HeadSizes) {
    EXPECT_EQ(reciprocal_head_size(ScaleParams(q(1, 2), q(1))), 2);
    EXPECT_EQ(reciprocal_head_size(ScaleParams(q(9, 10), q(1))), 10);
    for (const auto& r : kRGrid) {
        // Oracle: least N >= 1 with 1/(N+1) < 1 - r.
        std::int64_t n = 1;
        while (!(Rational(1, n + 1) < Rational(1) - r))
            ++n;
        EXPECT_EQ(reciprocal_head_size(ScaleParams(r, q(1))), n) << r.str();
    }
    auto w = witness_reciprocal(ScaleParams(q(1, 2), q(1)), 6);
    ASSERT_EQ(w.families.size(), 1u);
    EXPECT_EQ(w.families[0].sets, (std::vector<PointSet>{{1, 2}, {3}, {4}, {5}, {6}}));
}

TEST(WitnessReciprocal, VerifiesAcrossGrid) {
    auto rp = FuzzyMetricSpace::reciprocal_product();
    for (const auto& r : kRGrid) {
        auto rep = verify_witness(rp, witness_reciprocal(ScaleParams(r, q(3)), 1500));
        EXPECT_TRUE(rep.passed()) << r.str() << " " << (rep.first_failure() ? rep.first_failure()->predicate : "");
    }
}

TEST(WitnessRatio, SequenceAtHalf) {
    auto seq = ratio_block_sequence(ScaleParams(q(1, 2), q(1)), 40);
    ASSERT_EQ(seq.size(), 3u);
    EXPECT_EQ(seq[0].a, 3);
    EXPECT_EQ(seq[0].m, 1);
    EXPECT_EQ(seq[1].a, 9);
    EXPECT_EQ(seq[1].m, 7);
    EXPECT_EQ(seq[2].a, 33);
    auto w = witness_ratio(ScaleParams(q(1, 2), q(1)), 40);
    EXPECT_EQ(w.families[0].sets[1], (PointSet{3, 4}));
    EXPECT_EQ(w.families[0].sets[2], range(9, 16));
    EXPECT_EQ(w.families[1].sets[0], (PointSet{2}));
    EXPECT_EQ(w.families[1].sets[1], range(5, 8));
}

TEST(WitnessRatio, QuarterStartsWithSingletonBlock) {
    auto seq = ratio_block_sequence(ScaleParams(q(1, 4), q(1)), 100);
    ASSERT_FALSE(seq.empty());
    EXPECT_EQ(seq[0].a, 2);
    EXPECT_EQ(seq[0].m, 0);
}

TEST(WitnessRatio, MatchesHandRecursionAndBoundaryInequalities) {
    for (const auto& r : kRGrid) {
        ScaleParams p(r, q(1));
        auto seq = ratio_block_sequence(p, 10000);
        auto hand = ratio_recursion_by_hand(p.level(), 10000);
        ASSERT_EQ(seq.size(), hand.size()) << r.str();
        Point prev = 1;
        for (std::size_t k = 0; k < seq.size(); ++k) {
            EXPECT_EQ(seq[k].a, hand[k].first);
            EXPECT_EQ(seq[k].m, hand[k].second);
            const Point a = seq[k].a, m = seq[k].m;
            EXPECT_LT(Rational(prev, a), p.level());
            EXPECT_LT(Rational(a - 1, a + m + 1), p.level());
            EXPECT_GT(Rational(a, a + m), p.level());
            if (m > 0) {
                EXPECT_GE(Rational(a - 1, a + m), p.level());
            }
            prev = a + m;
        }
    }
}

TEST(WitnessRatio, VerifiesAndMergedFailsDisjointness) {
    auto rm = FuzzyMetricSpace::ratio_minmax();
    ScaleParams p(q(1, 2), q(1));
    auto w = witness_ratio(p, 3000);
    EXPECT_TRUE(verify_witness(rm, w).passed());
    DimensionWitness merged = w;
    auto all = w.members();
    merged.n = 0;
    merged.families = {Family::make("UV", all)};
    auto rep = verify_witness(rm, merged);
    const Record* d = rep.find("disjoint:UV");
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->verdict, Verdict::fail);
    ASSERT_EQ(d->witness.size(), 2u);
    EXPECT_GE(*d->find_value("sup M"), q(1, 2));
}

TEST(WitnessNonArchimedean, PartitionAtHalfTimeTen) {
    auto um = FuzzyMetricSpace::ultrametric_standard();
    auto w = witness_non_archimedean(um, ScaleParams(q(1, 4), q(10)), range(1, 200), q(1, 4));
    EXPECT_EQ(w.bound_params, ScaleParams(q(1, 2), q(10)));
    const auto& sets = w.families[0].sets;
    ASSERT_EQ(sets.size(), 192u);
    EXPECT_EQ(sets[0], range(1, 9));
    EXPECT_EQ(sets[1], PointSet{10});
    EXPECT_EQ(sets.back(), PointSet{200});
    EXPECT_TRUE(verify_witness(um, w).passed());
}

TEST(WitnessNonArchimedean, SingletonsAtTimeOne) {
    auto um = FuzzyMetricSpace::ultrametric_standard();
    auto w = witness_non_archimedean(um, ScaleParams(q(1, 4), q(1)), range(1, 50), q(1, 4));
    EXPECT_EQ(w.families[0].size(), 50u);
    EXPECT_TRUE(verify_witness(um, w).passed());
}

TEST(WitnessNonArchimedean, VerifiesAcrossGridWithDefaultEpsilon) {
    auto um = FuzzyMetricSpace::ultrametric_standard();
    for (const auto& r : kRGrid)
        for (Rational t : {q(1), q(10), q(57)}) {
            auto w = witness_non_archimedean(um, ScaleParams(r, t), range(1, 120));
            EXPECT_TRUE(verify_witness(um, w).passed()) << r.str() << " " << t.str();
        }
}

TEST(WitnessNonArchimedean, RejectsArchimedeanSpace) {
    auto z = FuzzyMetricSpace::standard_integers(TNormKind::minimum);
    EXPECT_THROW(witness_non_archimedean(z, ScaleParams(q(1, 2), q(1)), range(0, 10)), NonArchimedeanViolation);
    EXPECT_THROW(witness_non_archimedean(FuzzyMetricSpace::standard_integers(), ScaleParams(q(1, 2), q(1)),
                                         range(0, 10)),
                 PreconditionError);
}

TEST(TranslateMetric, KnownValues) {
    auto z = FuzzyMetricSpace::standard_integers();
    PointSet window = range(0, 99);
    std::vector<PointSet> blocks;
    for (Point k = 0; k < 10; ++k)
        blocks.push_back(range(10 * k, 10 * k + 4));
    PointSet covered;
    for (const auto& b : blocks)
        covered = set_union(covered, b);
    auto w = translate_metric_witness(z, {Family::make("B", blocks)}, q(5), ScaleParams(q(1, 3), q(2)), covered);
    EXPECT_TRUE(verify_witness(z, w).passed());

    auto single = translate_metric_witness(z, {Family::make("W", {window})}, q(1000), ScaleParams(q(1, 3), q(2)),
                                           window);
    EXPECT_TRUE(verify_witness(z, single).passed());

    std::vector<PointSet> pairs;
    for (Point k = 0; k < 50; ++k)
        pairs.push_back({2 * k, 2 * k + 1});
    EXPECT_THROW(translate_metric_witness(z, {Family::make("P", pairs)}, q(1), ScaleParams(q(1, 2), q(4)), window),
                 CertificationError);
    // Claimed separation above the threshold but not achieved on the window.
    EXPECT_THROW(translate_metric_witness(z, {Family::make("P", pairs)}, q(20), ScaleParams(q(1, 2), q(4)), window),
                 CertificationError);
}

TEST(LineBlocks, IntegersAndScaledLine) {
    for (const auto& r : kRGrid)
        for (Rational t : {q(1), q(5, 2), q(9)}) {
            auto z = FuzzyMetricSpace::standard_integers();
            auto w = witness_line_blocks(z, ScaleParams(r, t), range(-50, 150));
            EXPECT_EQ(w.n, 1);
            EXPECT_TRUE(verify_witness(z, w).passed()) << r.str() << " " << t.str();
            auto line = FuzzyMetricSpace::standard(MetricDescriptor::scaled(4));
            auto wl = witness_line_blocks(line, ScaleParams(r, t), range(0, 200));
            EXPECT_TRUE(verify_witness(line, wl).passed()) << r.str() << " " << t.str();
        }
}

TEST(RestrictWitness, HereditaryAndDegenerate) {
    auto rm = FuzzyMetricSpace::ratio_minmax();
    auto w = witness_ratio(ScaleParams(q(1, 2), q(1)), 2000);
    EXPECT_EQ(restrict_witness(w, w.window).families, w.families);
    PointSet evens;
    for (Point x = 2; x <= 2000; x += 2)
        evens.push_back(x);
    EXPECT_TRUE(verify_witness(rm, restrict_witness(w, evens)).passed());
    auto empty = restrict_witness(w, {});
    EXPECT_TRUE(empty.window.empty());
    EXPECT_TRUE(verify_witness(rm, empty).passed());

    fuzzy::test::Gen gen(17);
    for (int trial = 0; trial < 10; ++trial) {
        Point lo = gen.integer(1, 1500);
        EXPECT_TRUE(verify_witness(rm, restrict_witness(w, range(lo, lo + gen.integer(0, 400)))).passed());
    }
}

TEST(DerivedParams, ProductAtHalf) {
    auto d = derived_params(TNormKind::product, ScaleParams(q(1, 2), q(3)));
    EXPECT_EQ(d.r(), q(7, 8));
    EXPECT_EQ(d.t(), q(6));
    EXPECT_EQ(derived_params(TNormKind::minimum, ScaleParams(q(1, 2), q(1))).level(), q(1, 4));
    EXPECT_THROW(derived_params(TNormKind::lukasiewicz, ScaleParams(q(1, 2), q(1))), UnsupportedOperation);
}

TEST(Pipeline, MultiplicityCoverRequiresDerivedParams) {
    auto rm = FuzzyMetricSpace::ratio_minmax();
    ScaleParams p(q(1, 2), q(1));
    auto w = witness_ratio(p, 200);
    EXPECT_THROW(asdim_to_multiplicity_cover(rm, w, p), PreconditionError);
    auto wd = witness_ratio(derived_params(rm.tnorm(), p), 2000);
    auto step = asdim_to_multiplicity_cover(rm, wd, p);
    EXPECT_TRUE(step.report.passed());
    EXPECT_LE(rt_multiplicity(rm, step.cover, p, step.cover.window), 2u);
}

TEST(Pipeline, ReciprocalZeroWitnessGivesMultiplicityOne) {
    auto rp = FuzzyMetricSpace::reciprocal_product();
    ScaleParams p(q(1, 2), q(1));
    auto w = witness_reciprocal(derived_params(rp.tnorm(), p), 300);
    auto step = asdim_to_multiplicity_cover(rp, w, p);
    EXPECT_TRUE(step.report.passed());
    EXPECT_EQ(rt_multiplicity(rp, step.cover, p, w.window), 1u);
}

TEST(Pipeline, EndToEndOnRatioSpace) {
    auto rm = FuzzyMetricSpace::ratio_minmax();
    for (Rational r : {q(1, 4), q(1, 2)}) {
        auto res = run_pipeline(rm, ScaleParams(r, q(1)), range(1, 2000));
        EXPECT_TRUE(res.report.passed()) << r.str() << " "
                                         << (res.report.first_failure() ? res.report.first_failure()->predicate : "");
        EXPECT_LE(multiplicity(res.lebesgue.cover, res.lebesgue.cover.window), 2u);
    }
}

TEST(Pipeline, EndToEndOnIntegers) {
    auto z = FuzzyMetricSpace::standard_integers();
    auto res = run_pipeline(z, ScaleParams(q(1, 2), q(1)), range(-100, 100));
    EXPECT_TRUE(res.report.passed());
    EXPECT_EQ(res.witness.n, 1);
}

TEST(Pipeline, SingletonBallCoverOnIntegers) {
    auto z = FuzzyMetricSpace::standard_integers();
    ScaleParams p(q(1, 2), q(1));
    PointSet window = range(-100, 100);
    std::vector<PointSet> singles;
    for (Point x : window)
        singles.push_back({x});
    Cover c = Cover::single(Family::make("pts", singles), window);
    auto up = rt_multiplicity(z, c, derived_params(z.tnorm(), p), window);
    EXPECT_EQ(up, 27u);
    auto step = multiplicity_to_lebesgue_cover(z, c, p, static_cast<int>(up) - 1, ScaleParams(q(1, 2), q(1)));
    EXPECT_TRUE(step.report.passed());
    for (const auto& s : step.cover.members())
        EXPECT_EQ(s, range(s.front(), s.back()));
}

TEST(Pipeline, WindowCoverAndPreconditions) {
    auto z = FuzzyMetricSpace::standard_integers();
    ScaleParams p(q(1, 2), q(1));
    PointSet window = range(0, 30);
    Cover whole = Cover::single(Family::make("W", {window}), window);
    auto step = multiplicity_to_lebesgue_cover(z, whole, p, 0, ScaleParams(q(99, 100), q(1)));
    EXPECT_EQ(step.report.find("lebesgue_pair")->verdict, Verdict::pass);

    std::vector<PointSet> overlap{range(0, 20), range(5, 30), range(10, 25)};
    EXPECT_THROW(multiplicity_to_lebesgue_cover(z, Cover::single(Family::make("o", overlap), window), p, 1,
                                                ScaleParams(q(99, 100), q(1))),
                 PreconditionError);
}

TEST(Refinement, Hypotheses) {
    auto z = FuzzyMetricSpace::standard_integers();
    PointSet window = range(0, 99);
    std::vector<PointSet> singles, blocks;
    for (Point x : window)
        singles.push_back({x});
    for (Point a = 0; a < 100; a += 10)
        blocks.push_back(range(a, a + 9));
    Cover u = Cover::single(Family::make("pts", singles), window);
    Cover v = Cover::single(Family::make("blocks", blocks), window);
    EXPECT_TRUE(lebesgue_refinement_check(z, u, v, ScaleParams(q(1, 2), q(1))).passed());
    EXPECT_THROW(lebesgue_refinement_check(z, u, v, ScaleParams(q(1, 2), q(3))), PreconditionError);
    EXPECT_THROW(lebesgue_refinement_check(z, v, v, ScaleParams(q(1, 2), q(1))), PreconditionError);
}

TEST(ZeroDim, FromPartitions) {
    auto um = FuzzyMetricSpace::ultrametric_standard();
    ScaleParams p(q(1, 2), q(10));
    auto part = witness_non_archimedean(um, p, range(1, 60));
    auto w = zero_dim_from_refinement(um, p, range(1, 60), part.families[0].sets);
    EXPECT_TRUE(verify_witness(um, w).passed());
    auto searched = zero_dim_from_refinement(um, p, range(1, 60));
    EXPECT_TRUE(verify_witness(um, searched).passed());

    auto rp = FuzzyMetricSpace::reciprocal_product();
    // The partition must be refined by the balls at (1 + r)/2, so build it there.
    auto w62 = witness_reciprocal(ScaleParams((q(1) + p.r()) / q(2), p.t()), 100);
    auto wr = zero_dim_from_refinement(rp, p, range(1, 100), w62.families[0].sets);
    EXPECT_EQ(wr.n, 0);
    EXPECT_TRUE(verify_witness(rp, wr).passed());
}

TEST(ZeroDim, RatioSpaceIsInconclusive) {
    EXPECT_THROW(zero_dim_from_refinement(FuzzyMetricSpace::ratio_minmax(), ScaleParams(q(1, 2), q(1)), range(1, 100)),
                 SearchFailure);
}

TEST(ScaleGraph, KnownValues) {
    auto rm = FuzzyMetricSpace::ratio_minmax();
    for (Point n : {5, 40, 300}) {
        auto g = scale_graph(rm, ScaleParams(q(1, 2), q(1)), range(2, n));
        EXPECT_TRUE(g.spanning);
        EXPECT_EQ(g.min_internal_M, Rational(2, n));
    }
    auto g1 = scale_graph(rm, ScaleParams(q(1, 2), q(1)), range(1, 50));
    EXPECT_TRUE(g1.spanning);
    EXPECT_EQ(g1.min_internal_M, Rational(1, 50));

    auto rp = FuzzyMetricSpace::reciprocal_product();
    auto g2 = scale_graph(rp, ScaleParams(q(1, 2), q(1)), range(3, 40));
    EXPECT_EQ(g2.components.size(), 38u);
    EXPECT_EQ(g2.min_internal_M, q(1));

    auto g3 = scale_graph(rp, ScaleParams(q(99999, 100000), q(1)), range(1, 30));
    EXPECT_TRUE(g3.spanning);
}

TEST(ScaleGraph, ComponentsMatchBfsOracle) {
    auto z = FuzzyMetricSpace::standard_integers();
    fuzzy::test::Gen gen(23);
    for (int trial = 0; trial < 40; ++trial) {
        PointSet window = gen.subset(range(0, 60), 0.3);
        ScaleParams p(gen.unit_open(10), Rational(gen.integer(1, 4)));
        auto g = scale_graph(z, p, window);
        // Oracle: on a line the components are maximal runs whose consecutive gaps
        // d satisfy t/(t+d) >= 1 - r.
        std::vector<PointSet> runs;
        for (Point x : window) {
            if (!runs.empty()) {
                Rational d(x - runs.back().back());
                if (p.level() <= p.t() / (p.t() + d)) {
                    runs.back().push_back(x);
                    continue;
                }
            }
            runs.push_back({x});
        }
        EXPECT_EQ(g.components, runs);
    }
}
