#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzy/covers.hpp"
#include "fuzzy/error.hpp"
#include "fuzzy/points.hpp"
#include "fuzzy/report.hpp"
#include "fuzzy/scale.hpp"
#include "fuzzy/space.hpp"

namespace fuzzy {

/// n+1 families meant to be (r,t)-disjoint at `params` whose union covers the
/// window and is uniformly bounded at `bound_params`.
struct DimensionWitness {
    int n = 0;
    ScaleParams params;
    std::vector<Family> families;
    ScaleParams bound_params;
    PointSet window;
    std::string note;

    [[nodiscard]] std::vector<PointSet> members() const {
        std::vector<PointSet> out;
        for (const auto& f : families)
            out.insert(out.end(), f.sets.begin(), f.sets.end());
        return out;
    }

    [[nodiscard]] Cover cover() const { return Cover{families, window}; }
};

/// Cover, per-family disjointness and union boundedness, each with the
/// extremal pair that decides it.
inline CertReport verify_witness(const FuzzyMetricSpace& space, const DimensionWitness& w) {
    CertReport rep("witness n=" + std::to_string(w.n) + " at " + w.params.str() + " on " + space.describe());
    const std::string win = describe(w.window);
    if (!w.note.empty()) {
        Record c = info_record("construction");
        c.note = w.note;
        rep.add(std::move(c));
    }

    Record count = pass_fail("family_count", w.families.size() == static_cast<std::size_t>(w.n) + 1);
    count.value("n+1", Rational(w.n + 1)).value("families", Rational(static_cast<std::int64_t>(w.families.size())));
    rep.add(std::move(count));

    auto members = w.members();
    for (const auto& s : members)
        space.require_within(s);
    space.require_within(w.window);

    auto miss = first_uncovered(members, w.window);
    Record cov = pass_fail("cover", !miss.has_value());
    cov.window = win;
    if (miss)
        cov.witness = {*miss};
    rep.add(std::move(cov));

    for (const auto& f : w.families) {
        auto d = check_rt_disjoint(space, f.sets, w.params);
        Record r = pass_fail("disjoint:" + f.label, d.ok);
        r.params = w.params;
        r.window = win;
        if (d.strongest) {
            r.witness = {d.strongest->x, d.strongest->y};
            r.value("sup M", d.strongest->value).value("1-r", w.params.level());
        }
        rep.add(std::move(r));
    }

    auto b = check_uniformly_bounded(space, members, w.bound_params);
    Record r = pass_fail("bounded", b.ok);
    r.params = w.bound_params;
    r.window = win;
    r.note = "boundedness is certified at explicit parameters on the window";
    if (b.weakest) {
        r.witness = {b.weakest->x, b.weakest->y};
        r.value("min M", b.weakest->value).value("1-r'", w.bound_params.level());
    }
    rep.add(std::move(r));
    return rep;
}

/// Grid for bound-parameter searches: r' = 1 - 1/k for k in 2..k_max and
/// t' = 2^j for j in 0..j_max. With `extend`, a failed grid search falls back
/// to the smallest k beyond the grid that works at t' = 2^j_max.
struct BoundSearch {
    int k_max = 64;
    int j_max = 10;
    bool extend = true;
};

struct BoundFound {
    ScaleParams params;
    bool extended = false;
};

inline std::optional<BoundFound> search_bound_params(const FuzzyMetricSpace& space,
                                                     const std::vector<PointSet>& sets,
                                                     const BoundSearch& grid = {}) {
    for (const auto& s : sets)
        space.require_within(s);
    std::vector<Rational> mins;
    for (int j = 0; j <= grid.j_max; ++j) {
        Rational t(std::int64_t(1) << j);
        std::optional<Rational> worst;
        for (const auto& s : sets)
            if (auto w = weakest_pair(space, s, t); w && (!worst || w->value < *worst))
                worst = w->value;
        mins.push_back(worst.value_or(Rational(1)));
    }
    for (int k = 2; k <= grid.k_max; ++k)
        for (int j = 0; j <= grid.j_max; ++j)
            if (Rational(1, k) < mins[static_cast<std::size_t>(j)])
                return BoundFound{ScaleParams(Rational(k - 1, k), Rational(std::int64_t(1) << j)), false};
    if (!grid.extend)
        return std::nullopt;
    const Rational& w = mins.back();
    if (w.sign() <= 0)
        return std::nullopt;
    std::int64_t k = (Rational(1) / w).floor() + 1;
    return BoundFound{ScaleParams(Rational(k - 1, k), Rational(std::int64_t(1) << grid.j_max)), true};
}

/// The single family {window}: vacuously disjoint, bounded at searched parameters.
inline DimensionWitness witness_bounded(const FuzzyMetricSpace& space, const PointSet& window,
                                        const ScaleParams& params, const BoundSearch& grid = {}) {
    space.require_within(window);
    auto found = search_bound_params(space, {window}, grid);
    if (!found)
        throw SearchFailure("no bound parameters for " + describe(window) + " on the search grid");
    DimensionWitness w{0, params, {Family::make("U", {window})}, found->params, window, {}};
    w.note = "single bounded family; bound " + found->params.str();
    if (found->extended)
        w.note += " found beyond the grid (1-r' = " + found->params.level().str() + ")";
    return w;
}

/// Smallest positive N with 1/(N+1) < 1 - r.
inline std::int64_t reciprocal_head_size(const ScaleParams& params) {
    return std::max<std::int64_t>(1, (Rational(1) / params.level()).floor());
}

/// Reciprocal-product witness on {1..W}: head {1..N} and singletons beyond.
/// The head is bounded at 1 - r' = 1/(N^2 + 1).
inline DimensionWitness witness_reciprocal(const ScaleParams& params, Point last) {
    const std::int64_t n = reciprocal_head_size(params);
    std::vector<PointSet> sets;
    sets.push_back(range(1, std::min<Point>(n, last)));
    for (Point x = n + 1; x <= last; ++x)
        sets.push_back({x});
    ScaleParams bound = ScaleParams::at_level(Rational(1, n * n + 1), params.t());
    DimensionWitness w{0, params, {Family::make("U", sets)}, bound, range(1, last), {}};
    w.note = "head {1.." + std::to_string(n) + "} and singletons";
    return w;
}

/// One step (a_k, m_k) of the two-family block recursion on the ratio space.
struct RatioBlock {
    Point a = 0;
    Point m = 0;
};

/// Blocks U_k = {a_k .. a_k + m_k} for k >= 1 while a_k <= last:
///   a_k = least integer > c with c / a_k < 1 - r, c the end of the previous
///         block (c = 1 for k = 1),
///   m_k = least m >= 0 with (a_k - 1)/(a_k + m + 1) < 1 - r.
inline std::vector<RatioBlock> ratio_block_sequence(const ScaleParams& params, Point last) {
    const Rational level = params.level();
    std::vector<RatioBlock> out;
    Point c = 1;
    while (true) {
        Point a = (Rational(c) / level).floor() + 1;
        if (a > last)
            break;
        Point m = std::max<Point>(0, (Rational(a - 1) / level).floor() - a);
        out.push_back({a, m});
        c = a + m;
    }
    return out;
}

/// Two-family witness on {1..W}: U = {{1}, U_1, U_2, ...} and V the gaps
/// between consecutive U blocks. Bounded at the target parameters themselves.
inline DimensionWitness witness_ratio(const ScaleParams& params, Point last) {
    auto seq = ratio_block_sequence(params, last);
    std::vector<PointSet> u{{1}}, v;
    Point prev_end = 1;
    for (const auto& b : seq) {
        v.push_back(range(prev_end + 1, b.a - 1));
        u.push_back(range(b.a, std::min(b.a + b.m, last)));
        prev_end = b.a + b.m;
    }
    v.push_back(range(prev_end + 1, last));
    DimensionWitness w{1, params, {Family::make("U", u), Family::make("V", v)}, params, range(1, last), {}};
    w.note = std::to_string(seq.size()) + " blocks";
    return w;
}

/// Distinct balls B(x, r + eps, t) over the window. They partition the window
/// in a non-Archimedean space with the minimum t-norm; default eps = (1 - r)/2.
inline DimensionWitness witness_non_archimedean(const FuzzyMetricSpace& space, const ScaleParams& params,
                                                const PointSet& window,
                                                std::optional<Rational> epsilon = std::nullopt) {
    if (space.tnorm().kind() != TNormKind::minimum)
        throw PreconditionError("ball partition needs the minimum t-norm, got " + space.tnorm().tag());
    Rational eps = epsilon.value_or(params.level() / Rational(2));
    ScaleParams wide(params.r() + eps, params.t());
    auto na = check_non_archimedean(space, window, {params.t()});
    if (!na.passed()) {
        const auto* f = na.first_failure();
        throw NonArchimedeanViolation("space is not non-Archimedean at t=" + params.t().str() + " on triple (" +
                                      std::to_string(f->witness[0]) + "," + std::to_string(f->witness[1]) + "," +
                                      std::to_string(f->witness[2]) + ")");
    }
    std::vector<PointSet> balls;
    std::vector<std::size_t> owner(window.size(), SIZE_MAX);
    for (std::size_t i = 0; i < window.size(); ++i) {
        PointSet b = ball(space, window[i], wide, window);
        if (owner[i] != SIZE_MAX && balls[owner[i]] == b)
            continue;
        for (Point p : b) {
            std::size_t j = detail::window_index(window, p);
            if (owner[j] != SIZE_MAX && balls[owner[j]] != b)
                throw NonArchimedeanViolation("balls around " + std::to_string(window[i]) + " and " +
                                              std::to_string(balls[owner[j]].front()) +
                                              " are neither equal nor disjoint");
        }
        for (Point p : b)
            owner[detail::window_index(window, p)] = balls.size();
        balls.push_back(std::move(b));
    }
    DimensionWitness w{0, params, {Family::make("balls", balls)}, wide, window, {}};
    w.note = "balls at " + wide.str();
    return w;
}

/// Re-certifies metric families as fuzzy (r,t)-disjoint in a standard space.
/// With s = (1 + r)/2, metric separation >= s t/(1 - s) forces M <= 1 - s < 1 - r.
/// Bound parameters are (1/2, D + 1) for D the largest member diameter.
inline DimensionWitness translate_metric_witness(const FuzzyMetricSpace& space, std::vector<Family> families,
                                                 const Rational& metric_sep, const ScaleParams& params,
                                                 const PointSet& window) {
    if (space.kind() != SpaceKind::standard && space.kind() != SpaceKind::ultrametric_standard)
        throw PreconditionError("metric witnesses translate only into standard fuzzy spaces");
    const MetricDescriptor& d = *space.metric();
    Rational s = (Rational(1) + params.r()) / Rational(2);
    Rational needed = s * params.t() / (Rational(1) - s);
    if (metric_sep < needed)
        throw CertificationError("separation " + metric_sep.str() + " is below s t/(1-s) = " + needed.str() +
                                 " for s = " + s.str());
    Rational diam(0);
    for (const auto& f : families) {
        for (const auto& u : f.sets) {
            space.require_within(u);
            for (std::size_t i = 0; i < u.size(); ++i)
                for (std::size_t j = i + 1; j < u.size(); ++j)
                    diam = max(diam, d.distance(u[i], u[j]));
        }
        for (std::size_t a = 0; a < f.sets.size(); ++a)
            for (std::size_t b = a + 1; b < f.sets.size(); ++b)
                for (Point x : f.sets[a])
                    for (Point y : f.sets[b])
                        if (d.distance(x, y) < metric_sep)
                            throw CertificationError("points " + std::to_string(x) + " and " + std::to_string(y) +
                                                     " of family " + f.label + " are at distance " +
                                                     d.distance(x, y).str() + " < " + metric_sep.str());
    }
    const int n = static_cast<int>(families.size()) - 1;
    DimensionWitness w{n, params, std::move(families), ScaleParams(Rational(1, 2), diam + Rational(1)), window, {}};
    w.note = "metric separation " + metric_sep.str() + " >= " + needed.str() + " with s = " + s.str();
    return w;
}

/// Two alternating families of consecutive blocks on a line metric (integers or
/// points k/q), long enough that same-family blocks are s t/(1 - s) apart.
inline DimensionWitness witness_line_blocks(const FuzzyMetricSpace& space, const ScaleParams& params,
                                            const PointSet& window) {
    if (space.kind() != SpaceKind::standard)
        throw PreconditionError("line blocks need a standard space");
    const auto& m = *space.metric();
    Rational step(1);
    if (m.rule() == MetricDescriptor::Rule::scaled)
        step = Rational(1, m.denominator());
    else if (m.rule() != MetricDescriptor::Rule::integers)
        throw PreconditionError("line blocks need the integer or scaled line metric");
    Rational s = (Rational(1) + params.r()) / Rational(2);
    Rational needed = s * params.t() / (Rational(1) - s);
    Point len = std::max<Point>(1, (needed / step).ceil());
    std::vector<PointSet> fam[2];
    if (!window.empty()) {
        Point lo = window.front();
        for (Point a = lo; a <= window.back(); a += len) {
            PointSet block = set_intersection(window, range(a, a + len - 1));
            fam[((a - lo) / len) % 2].push_back(std::move(block));
        }
    }
    return translate_metric_witness(space, {Family::make("even", fam[0]), Family::make("odd", fam[1])},
                                    Rational(len + 1) * step, params, window);
}

/// Every set intersected with `subset`; empties dropped, parameters kept.
inline DimensionWitness restrict_witness(const DimensionWitness& w, const PointSet& subset) {
    DimensionWitness out = w;
    out.window = set_intersection(w.window, subset);
    for (auto& f : out.families) {
        std::vector<PointSet> cut;
        for (const auto& s : f.sets)
            cut.push_back(set_intersection(s, subset));
        std::size_t dropped = f.dropped_empty;
        f = Family::make(f.label, std::move(cut));
        f.dropped_empty += dropped;
    }
    return out;
}

/// Constructor appropriate to the space: line blocks, reciprocal head,
/// ratio blocks, ball partition, or a single bounded family.
inline DimensionWitness construct_witness(const FuzzyMetricSpace& space, const ScaleParams& params,
                                          const PointSet& window) {
    // Windows inside N are served by the {1..max} construction, restricted.
    const bool natural = !window.empty() && window.front() >= 1;
    switch (space.kind()) {
    case SpaceKind::standard: {
        auto rule = space.metric()->rule();
        if (rule == MetricDescriptor::Rule::integers || rule == MetricDescriptor::Rule::scaled)
            return witness_line_blocks(space, params, window);
        return witness_bounded(space, window, params);
    }
    case SpaceKind::reciprocal_product:
        if (natural)
            return restrict_witness(witness_reciprocal(params, window.back()), window);
        break;
    case SpaceKind::ratio_minmax:
        if (natural)
            return restrict_witness(witness_ratio(params, window.back()), window);
        break;
    case SpaceKind::ultrametric_standard:
        if (space.tnorm().kind() == TNormKind::minimum)
            return witness_non_archimedean(space, params, window);
        break;
    case SpaceKind::pathological:
        break;
    }
    return witness_bounded(space, window, params);
}

/// Target scale (r,t) to the scale the implication chain needs one step up:
/// t' = 2t and 1 - r' = ((1 - r) * (1 - r))/2.
inline ScaleParams derived_params(const TNorm& star, const ScaleParams& p) {
    Rational sq = star(p.level(), p.level());
    if (sq.sign() <= 0)
        throw UnsupportedOperation("(1-r)*(1-r) = 0 under " + star.tag() + "; no derived scale exists");
    return ScaleParams::at_level(sq / Rational(2), Rational(2) * p.t());
}

struct CoverStep {
    Cover cover;
    CertReport report;
};

/// The union of the witness families, with its (r,t)-multiplicity measured.
/// The witness must sit at derived_params(params).
inline CoverStep asdim_to_multiplicity_cover(const FuzzyMetricSpace& space, const DimensionWitness& w,
                                             const ScaleParams& params) {
    ScaleParams need = derived_params(space.tnorm(), params);
    if (!(w.params == need))
        throw PreconditionError("witness is at " + w.params.str() + " but " + need.str() + " is required");
    CertReport rep("multiplicity cover at " + params.str());
    CertReport v = verify_witness(space, w);
    rep.append(v);
    if (!v.passed())
        throw PreconditionError("witness does not verify: " + v.first_failure()->predicate);
    Cover c{{Family::make("union", w.members())}, w.window};
    auto m = rt_multiplicity_of(space, c.members(), params, w.window);
    Record r = pass_fail("rt_multiplicity", m.value <= static_cast<std::size_t>(w.n) + 1);
    r.params = params;
    r.window = describe(w.window);
    if (m.at)
        r.witness = {*m.at};
    r.value("measured", Rational(static_cast<std::int64_t>(m.value))).value("n+1", Rational(w.n + 1));
    rep.add(std::move(r));
    return {std::move(c), std::move(rep)};
}

/// Neighbourhoods N_{r',t'}(U) of a cover with (r',t')-multiplicity <= n+1,
/// (r',t') = derived_params(params). The result has Lebesgue pair (r,t),
/// multiplicity <= n+1, and is bounded by the neighbourhood chain from `bound`.
inline CoverStep multiplicity_to_lebesgue_cover(const FuzzyMetricSpace& space, const Cover& cover,
                                                const ScaleParams& params, int n, const ScaleParams& bound) {
    ScaleParams up = derived_params(space.tnorm(), params);
    const PointSet& window = cover.window;
    auto members = cover.members();
    auto pre = rt_multiplicity_of(space, members, up, window);
    if (pre.value > static_cast<std::size_t>(n) + 1)
        throw PreconditionError("input cover has " + up.str() + "-multiplicity " + std::to_string(pre.value) +
                                " > " + std::to_string(n + 1));
    CertReport rep("Lebesgue cover at " + params.str());
    Record in = pass_fail("input_rt_multiplicity", true);
    in.params = up;
    in.value("measured", Rational(static_cast<std::int64_t>(pre.value)));
    rep.add(std::move(in));

    Cover out{{}, window};
    for (const auto& f : cover.families) {
        auto nf = neighborhood_family(space, f, up, bound, window);
        rep.append(nf.report);
        out.families.push_back(std::move(nf.family));
    }
    auto out_members = out.members();

    auto leb = check_lebesgue_pair(space, out_members, params, window);
    Record l = pass_fail("lebesgue_pair", leb.ok);
    l.params = params;
    l.window = describe(window);
    if (leb.failing_centre)
        l.witness = {*leb.failing_centre};
    rep.add(std::move(l));

    auto mult = multiplicity_of(out_members, window);
    Record m = pass_fail("multiplicity", mult.value <= static_cast<std::size_t>(n) + 1);
    m.window = describe(window);
    if (mult.at)
        m.witness = {*mult.at};
    m.value("measured", Rational(static_cast<std::int64_t>(mult.value))).value("n+1", Rational(n + 1));
    rep.add(std::move(m));
    return {std::move(out), std::move(rep)};
}

/// Every member of U lies in a member of V, given U bounded at (r,t) and
/// V with Lebesgue pair (r,t): U is inside B(u,r,t) which fits in some V.
inline CertReport lebesgue_refinement_check(const FuzzyMetricSpace& space, const Cover& cover_u,
                                            const Cover& cover_v, const ScaleParams& params) {
    auto u = cover_u.members();
    auto v = cover_v.members();
    auto b = check_uniformly_bounded(space, u, params);
    if (!b.ok)
        throw PreconditionError("cover U is not uniformly bounded at " + params.str() + ": pair (" +
                                std::to_string(b.weakest->x) + "," + std::to_string(b.weakest->y) + ")");
    auto leb = check_lebesgue_pair(space, v, params, cover_v.window);
    if (!leb.ok)
        throw PreconditionError("cover V has no Lebesgue pair " + params.str() + ": ball at " +
                                std::to_string(*leb.failing_centre) + " fits in no member");
    CertReport rep("refinement at " + params.str());
    rep.add(pass_fail("hypothesis_bounded", true)).params = params;
    rep.add(pass_fail("hypothesis_lebesgue", true)).params = params;
    Record r = pass_fail("refines", true);
    for (const auto& s : u)
        if (std::none_of(v.begin(), v.end(), [&](const PointSet& big) { return is_subset(s, big); })) {
            r.verdict = Verdict::fail;
            r.witness = s;
            break;
        }
    rep.add(std::move(r));
    return rep;
}

/// Greedy cover of the window by consecutive runs bounded at (r,t).
inline Cover greedy_bounded_cover(const FuzzyMetricSpace& space, const ScaleParams& params, const PointSet& window) {
    space.require_within(window);
    std::vector<PointSet> chunks;
    PointSet cur;
    const Rational level = params.level();
    for (Point x : window) {
        bool fits = std::all_of(cur.begin(), cur.end(),
                                [&](Point y) { return level < space.eval_unchecked(x, y, params.t()); });
        if (!fits) {
            chunks.push_back(std::move(cur));
            cur.clear();
        }
        cur.push_back(x);
    }
    if (!cur.empty())
        chunks.push_back(std::move(cur));
    return Cover{{Family::make("greedy", std::move(chunks))}, window};
}

/// All three implication steps at target (r,t) from a witness at the doubly
/// derived scale.
struct PipelineResult {
    DimensionWitness witness;
    CoverStep multiplicity;
    CoverStep lebesgue;
    Cover bounded;
    CertReport refinement;
    CertReport report;
};

using WitnessBuilder = std::function<DimensionWitness(const ScaleParams&, const PointSet&)>;

inline PipelineResult run_pipeline(const FuzzyMetricSpace& space, const ScaleParams& params, const PointSet& window,
                                   const WitnessBuilder& build = {}) {
    ScaleParams p1 = derived_params(space.tnorm(), params);
    ScaleParams p2 = derived_params(space.tnorm(), p1);
    DimensionWitness w = build ? build(p2, window) : construct_witness(space, p2, window);
    CoverStep step1 = asdim_to_multiplicity_cover(space, w, p1);
    auto at_target = rt_multiplicity_of(space, step1.cover.members(), params, window);
    Record tr = pass_fail("rt_multiplicity_at_target", at_target.value <= static_cast<std::size_t>(w.n) + 1);
    tr.params = params;
    tr.value("measured", Rational(static_cast<std::int64_t>(at_target.value)));
    step1.report.add(std::move(tr));
    CoverStep step2 = multiplicity_to_lebesgue_cover(space, step1.cover, params, w.n, w.bound_params);
    Cover u = greedy_bounded_cover(space, params, window);
    CertReport step3 = lebesgue_refinement_check(space, u, step2.cover, params);

    CertReport all("pipeline at " + params.str() + " on " + space.describe());
    all.append(step1.report);
    all.append(step2.report);
    all.append(step3);
    return {std::move(w), std::move(step1), std::move(step2), std::move(u), std::move(step3), std::move(all)};
}

/// Components of the graph joining x, y when M(x,y,t) >= 1 - r.
struct ScaleGraphReport {
    std::vector<PointSet> components;
    Rational min_internal_M{1};
    bool spanning = false;
};

inline ScaleGraphReport scale_graph(const FuzzyMetricSpace& space, const ScaleParams& params,
                                    const PointSet& window) {
    space.require_within(window);
    const std::size_t n = window.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    const Rational level = params.level();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (level <= space.eval_unchecked(window[i], window[j], params.t())) {
                std::size_t a = find(i), b = find(j);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
    std::map<std::size_t, PointSet> groups;
    for (std::size_t i = 0; i < n; ++i)
        groups[find(i)].push_back(window[i]);
    ScaleGraphReport rep;
    for (auto& [root, pts] : groups)
        rep.components.push_back(std::move(pts));
    std::size_t largest = 0;
    for (std::size_t k = 1; k < rep.components.size(); ++k)
        if (rep.components[k].size() > rep.components[largest].size())
            largest = k;
    if (!rep.components.empty()) {
        if (auto w = weakest_pair(space, rep.components[largest], params.t()))
            rep.min_internal_M = w->value;
        rep.spanning = rep.components.size() == 1;
    }
    return rep;
}

/// A multiplicity-1 bounded cover refined by the balls B(x, r', t),
/// 1 - r' = (1 - r)/2, returned as one (r,t)-disjoint family. Without a
/// candidate the finest such cover is used: components of M > 1 - r'.
/// SearchFailure here is inconclusive about dimension.
inline DimensionWitness zero_dim_from_refinement(const FuzzyMetricSpace& space, const ScaleParams& params,
                                                 const PointSet& window,
                                                 std::optional<std::vector<PointSet>> candidate = std::nullopt,
                                                 const BoundSearch& grid = BoundSearch{64, 10, false}) {
    space.require_within(window);
    ScaleParams finer((Rational(1) + params.r()) / Rational(2), params.t());
    std::vector<PointSet> blocks;
    if (candidate) {
        for (auto& s : *candidate)
            blocks.push_back(make_point_set(s));
        if (multiplicity_of(blocks, window).value != 1 || first_uncovered(blocks, window))
            throw PreconditionError("candidate is not a multiplicity-1 cover of the window");
        for (Point x : window) {
            PointSet b = ball(space, x, finer, window);
            if (std::none_of(blocks.begin(), blocks.end(), [&](const PointSet& v) { return is_subset(b, v); }))
                throw PreconditionError("ball around " + std::to_string(x) + " fits in no candidate block");
        }
    } else {
        // M > 1 - r' is the "ball overlap" relation; its components are the
        // blocks of the finest partition the ball cover refines.
        ScaleParams edge = ScaleParams::at_level(finer.level(), params.t());
        const std::size_t n = window.size();
        std::vector<std::size_t> comp(n, SIZE_MAX);
        std::size_t next = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (comp[i] != SIZE_MAX)
                continue;
            std::vector<std::size_t> stack{i};
            comp[i] = next;
            PointSet block;
            while (!stack.empty()) {
                std::size_t a = stack.back();
                stack.pop_back();
                block.push_back(window[a]);
                for (std::size_t b = 0; b < n; ++b)
                    if (comp[b] == SIZE_MAX && edge.level() < space.eval_unchecked(window[a], window[b], params.t())) {
                        comp[b] = next;
                        stack.push_back(b);
                    }
            }
            blocks.push_back(make_point_set(std::move(block)));
            ++next;
        }
    }
    auto found = search_bound_params(space, blocks, grid);
    if (!found)
        throw SearchFailure("no bounded multiplicity-1 cover refined by balls at " + finer.str() +
                            " on the search grid (inconclusive)");
    DimensionWitness w{0, params, {Family::make("V", blocks)}, found->params, window, {}};
    w.note = std::to_string(blocks.size()) + " blocks refined by balls at " + finer.str();
    return w;
}

} // namespace fuzzy
