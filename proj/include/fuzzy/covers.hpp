#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzy/error.hpp"
#include "fuzzy/points.hpp"
#include "fuzzy/report.hpp"
#include "fuzzy/scale.hpp"
#include "fuzzy/space.hpp"

namespace fuzzy {

/// A labelled family of finite point sets. Empty members are dropped on
/// construction and counted in `dropped_empty`.
struct Family {
    std::string label;
    std::vector<PointSet> sets;
    std::size_t dropped_empty = 0;

    static Family make(std::string label, std::vector<PointSet> raw) {
        Family f;
        f.label = std::move(label);
        for (auto& s : raw) {
            PointSet norm = make_point_set(std::move(s));
            if (norm.empty())
                ++f.dropped_empty;
            else
                f.sets.push_back(std::move(norm));
        }
        return f;
    }

    [[nodiscard]] std::size_t size() const noexcept { return sets.size(); }
    [[nodiscard]] bool empty() const noexcept { return sets.empty(); }

    friend bool operator==(const Family& a, const Family& b) { return a.label == b.label && a.sets == b.sets; }
};

/// Families whose union is meant to cover `window`.
struct Cover {
    std::vector<Family> families;
    PointSet window;

    [[nodiscard]] std::vector<PointSet> members() const {
        std::vector<PointSet> out;
        for (const auto& f : families)
            out.insert(out.end(), f.sets.begin(), f.sets.end());
        return out;
    }

    static Cover single(Family f, PointSet window) { return Cover{{std::move(f)}, std::move(window)}; }
};

/// First window point not in any member, if any.
inline std::optional<Point> first_uncovered(const std::vector<PointSet>& members, const PointSet& window) {
    for (Point p : window) {
        bool hit = std::any_of(members.begin(), members.end(), [&](const PointSet& s) { return contains(s, p); });
        if (!hit)
            return p;
    }
    return std::nullopt;
}

inline bool covers_window(const Cover& c) { return !first_uncovered(c.members(), c.window).has_value(); }

namespace detail {
inline void require_family_within(const FuzzyMetricSpace& space, const Family& f) {
    for (const auto& s : f.sets)
        space.require_within(s);
}
} // namespace detail

/// Outcome of a uniform-boundedness scan. `weakest` is the intra-set pair with
/// the smallest M (the pair that decides the verdict); `set_index` its set.
struct BoundCheck {
    bool ok = true;
    std::optional<PairValue> weakest;
    std::size_t set_index = 0;
};

inline BoundCheck check_uniformly_bounded(const FuzzyMetricSpace& space, const std::vector<PointSet>& sets,
                                          const ScaleParams& p) {
    BoundCheck out;
    for (std::size_t k = 0; k < sets.size(); ++k) {
        space.require_within(sets[k]);
        auto w = weakest_pair(space, sets[k], p.t());
        if (w && (!out.weakest || w->value < out.weakest->value)) {
            out.weakest = w;
            out.set_index = k;
        }
    }
    out.ok = !out.weakest || p.level() < out.weakest->value;
    return out;
}

/// M(x,y,t) > 1 - r for every pair inside every member.
inline bool is_uniformly_bounded_family(const FuzzyMetricSpace& space, const Family& family, const ScaleParams& p) {
    return check_uniformly_bounded(space, family.sets, p).ok;
}

/// Pair realising max M(x, y, t) over U x V (the supremum of finite sets).
inline PairValue set_sup_pair(const FuzzyMetricSpace& space, const PointSet& u, const PointSet& v,
                              const Rational& t) {
    if (u.empty() || v.empty())
        throw DomainError("M(U,V,t) is undefined for an empty set");
    space.require_within(u);
    space.require_within(v);
    PairValue best{u.front(), v.front(), space.eval_unchecked(u.front(), v.front(), t)};
    for (Point x : u)
        for (Point y : v) {
            Rational m = space.eval_unchecked(x, y, t);
            if (best.value < m)
                best = PairValue{x, y, m};
        }
    return best;
}

inline Rational set_sup_M(const FuzzyMetricSpace& space, const PointSet& u, const PointSet& v, const Rational& t) {
    return set_sup_pair(space, u, v, t).value;
}

/// Outcome of an (r,t)-disjointness scan. `strongest` is the cross pair with
/// the largest M between two distinct members.
struct DisjointCheck {
    bool ok = true;
    std::optional<PairValue> strongest;
    std::size_t set_a = 0;
    std::size_t set_b = 0;
};

/// Scans every pair of points lying in distinct members. Ties keep the first
/// pair in canonical (member index, point) order.
inline DisjointCheck check_rt_disjoint(const FuzzyMetricSpace& space, const std::vector<PointSet>& sets,
                                       const ScaleParams& p) {
    DisjointCheck out;
    for (const auto& s : sets)
        space.require_within(s);
    const Rational& t = p.t();
    for (std::size_t a = 0; a < sets.size(); ++a)
        for (std::size_t b = a + 1; b < sets.size(); ++b)
            for (Point x : sets[a])
                for (Point y : sets[b]) {
                    Rational m = space.eval_unchecked(x, y, t);
                    if (!out.strongest || out.strongest->value < m) {
                        out.strongest = PairValue{x, y, m};
                        out.set_a = a;
                        out.set_b = b;
                    }
                }
    out.ok = !out.strongest || out.strongest->value < p.level();
    return out;
}

/// sup M(U, U', t) < 1 - r for all distinct members U, U'.
inline bool is_rt_disjoint(const FuzzyMetricSpace& space, const Family& family, const ScaleParams& p) {
    return check_rt_disjoint(space, family.sets, p).ok;
}

/// N_{r,t}(U) within the window: points x with M(x, y, t) > 1 - r for some y in U.
inline PointSet rt_neighborhood(const FuzzyMetricSpace& space, const PointSet& u, const ScaleParams& p,
                                const PointSet& window) {
    space.require_within(u);
    space.require_within(window);
    PointSet out;
    if (u.empty())
        return out;
    const Rational level = p.level();
    for (Point x : window) {
        if (contains(u, x)) {
            out.push_back(x);
            continue;
        }
        for (Point y : u)
            if (level < space.eval_unchecked(x, y, p.t())) {
                out.push_back(x);
                break;
            }
    }
    return out;
}

/// Neighbourhoods of every member, with the scale at which they are
/// certified uniformly bounded.
struct NeighborhoodFamily {
    Family family;
    ScaleParams bound;
    CertReport report;
};

/*
 * {N_{r,t}(U)} for a family already bounded at `inner`. For x, y in
 * neighbourhoods of one U there are a, b in U with
 *
 *     M(x, y, 2t + t') >= M(x,a,t) * M(a,b,t') * M(b,y,t)
 *                      >  (1 - r) * (1 - r') * (1 - r)  =  L
 *
 * (strict: every factor is a strict bound and the product and minimum are
 * strict in each argument). The output is certified at (1 - L, 2t + t') and
 * the certificate is re-checked on the window.
 */
inline NeighborhoodFamily neighborhood_family(const FuzzyMetricSpace& space, const Family& family,
                                              const ScaleParams& p, const ScaleParams& inner,
                                              const PointSet& window) {
    if (!is_positivity_preserving(space.tnorm()))
        throw UnsupportedOperation("neighbourhood bound needs a positivity-preserving t-norm");
    const TNorm& star = space.tnorm();
    Rational lower = star.fold({p.level(), inner.level(), p.level()});
    ScaleParams bound = ScaleParams::at_level(lower, Rational(2) * p.t() + inner.t());

    std::vector<PointSet> nbhds;
    nbhds.reserve(family.size());
    for (const auto& u : family.sets)
        nbhds.push_back(rt_neighborhood(space, u, p, window));

    NeighborhoodFamily out{Family::make("N(" + family.label + ")", std::move(nbhds)), bound,
                           CertReport("neighbourhood family of " + family.label)};

    auto in_check = check_uniformly_bounded(space, family.sets, inner);
    Record pre = pass_fail("input_bounded", in_check.ok);
    pre.params = inner;
    if (in_check.weakest) {
        pre.witness = {in_check.weakest->x, in_check.weakest->y};
        pre.value("M", in_check.weakest->value);
    }
    out.report.add(std::move(pre));

    Record chain = info_record("bound_chain");
    chain.params = bound;
    chain.value("(1-r)*(1-r')*(1-r)", lower).value("time", bound.t());
    out.report.add(std::move(chain));

    auto o_check = check_uniformly_bounded(space, out.family.sets, bound);
    Record post = pass_fail("output_bounded", o_check.ok);
    post.params = bound;
    post.window = describe(window);
    if (o_check.weakest) {
        post.witness = {o_check.weakest->x, o_check.weakest->y};
        post.value("M", o_check.weakest->value).value("1-s", bound.level());
    }
    out.report.add(std::move(post));
    return out;
}

/// Point attaining a multiplicity, with the count.
struct MultiplicityResult {
    std::size_t value = 0;
    std::optional<Point> at;
};

namespace detail {
/// For each window point, the indices of members containing it.
inline std::vector<std::vector<std::size_t>> membership(const std::vector<PointSet>& members,
                                                        const PointSet& window) {
    std::vector<std::vector<std::size_t>> in(window.size());
    for (std::size_t k = 0; k < members.size(); ++k)
        for (Point p : members[k]) {
            auto it = std::lower_bound(window.begin(), window.end(), p);
            if (it != window.end() && *it == p)
                in[static_cast<std::size_t>(it - window.begin())].push_back(k);
        }
    return in;
}

inline std::size_t window_index(const PointSet& window, Point p) {
    return static_cast<std::size_t>(std::lower_bound(window.begin(), window.end(), p) - window.begin());
}
} // namespace detail

/// Largest number of members containing a single window point.
inline MultiplicityResult multiplicity_of(const std::vector<PointSet>& members, const PointSet& window) {
    MultiplicityResult out;
    auto in = detail::membership(members, window);
    for (std::size_t i = 0; i < window.size(); ++i)
        if (in[i].size() > out.value) {
            out.value = in[i].size();
            out.at = window[i];
        }
    return out;
}

inline std::size_t multiplicity(const Cover& cover, const PointSet& window) {
    return multiplicity_of(cover.members(), window).value;
}

/// Largest number of members met by a ball B(x, r, t), x in the window.
inline MultiplicityResult rt_multiplicity_of(const FuzzyMetricSpace& space, const std::vector<PointSet>& members,
                                             const ScaleParams& p, const PointSet& window) {
    space.require_within(window);
    MultiplicityResult out;
    auto in = detail::membership(members, window);
    std::vector<std::size_t> stamp(members.size(), 0);
    std::size_t epoch = 0;
    const Rational level = p.level();
    for (Point x : window) {
        ++epoch;
        std::size_t met = 0;
        for (std::size_t j = 0; j < window.size(); ++j) {
            if (in[j].empty() || !(level < space.eval_unchecked(x, window[j], p.t())))
                continue;
            for (std::size_t k : in[j])
                if (stamp[k] != epoch) {
                    stamp[k] = epoch;
                    ++met;
                }
        }
        if (met > out.value) {
            out.value = met;
            out.at = x;
        }
    }
    return out;
}

inline std::size_t rt_multiplicity(const FuzzyMetricSpace& space, const Cover& cover, const ScaleParams& p,
                                   const PointSet& window) {
    return rt_multiplicity_of(space, cover.members(), p, window).value;
}

/// Every window ball B(x, r, t) lies inside one member. `failing_centre` is the
/// first centre whose ball fits nowhere.
struct LebesgueCheck {
    bool ok = true;
    std::optional<Point> failing_centre;
};

inline LebesgueCheck check_lebesgue_pair(const FuzzyMetricSpace& space, const std::vector<PointSet>& members,
                                         const ScaleParams& p, const PointSet& window) {
    if (auto miss = first_uncovered(members, window))
        throw PreconditionError("Lebesgue pair needs a cover; point " + std::to_string(*miss) + " is uncovered");
    auto in = detail::membership(members, window);
    LebesgueCheck out;
    for (Point x : window) {
        PointSet b = ball(space, x, p, window);
        // x lies in its own ball, so only members containing x can hold it.
        const auto& candidates = in[detail::window_index(window, x)];
        bool fits = std::any_of(candidates.begin(), candidates.end(),
                                [&](std::size_t k) { return is_subset(b, members[k]); });
        if (!fits) {
            out.ok = false;
            out.failing_centre = x;
            return out;
        }
    }
    return out;
}

inline bool has_lebesgue_pair(const FuzzyMetricSpace& space, const Cover& cover, const ScaleParams& p,
                              const PointSet& window) {
    return check_lebesgue_pair(space, cover.members(), p, window).ok;
}

/// Each member of `finer` is a subset of some member of `coarser`.
inline bool refines_members(const std::vector<PointSet>& finer, const std::vector<PointSet>& coarser) {
    return std::all_of(finer.begin(), finer.end(), [&](const PointSet& v) {
        return std::any_of(coarser.begin(), coarser.end(), [&](const PointSet& u) { return is_subset(v, u); });
    });
}

inline bool refines(const Cover& finer, const Cover& coarser) {
    return refines_members(finer.members(), coarser.members());
}

} // namespace fuzzy
