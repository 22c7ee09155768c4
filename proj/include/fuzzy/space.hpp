#pragma once

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fuzzy/error.hpp"
#include "fuzzy/points.hpp"
#include "fuzzy/rational.hpp"
#include "fuzzy/report.hpp"
#include "fuzzy/scale.hpp"
#include "fuzzy/tnorm.hpp"

namespace fuzzy {

/*
 * A metric on integer-encoded points.
 *
 *   integers         d(x,y) = |x - y| on Z
 *   lattice(n, s)    Z^n box {0..s-1}^n; point p encodes the coordinates
 *                    (p mod s, (p / s) mod s, ...); taxicab distance
 *   scaled(q)        point k stands for k/q on the real line; d = |k - l| / q
 *   max_ultrametric  d(x,y) = max(x,y) for x != y on N = {1, 2, ...}
 *   table            explicit symmetric matrix on points 0..n-1
 */
class MetricDescriptor {
public:
    enum class Rule { integers, lattice, scaled, max_ultrametric, table };

    static MetricDescriptor integers() { return MetricDescriptor(Rule::integers); }

    static MetricDescriptor lattice(int dim, Point side) {
        if (dim < 1 || side < 1)
            throw DomainError("lattice needs dim >= 1 and side >= 1");
        MetricDescriptor m(Rule::lattice);
        m.dim_ = dim;
        m.side_ = side;
        Point size = 1;
        for (int i = 0; i < dim; ++i) {
            if (size > (Point(1) << 40) / side)
                throw DomainError("lattice box too large");
            size *= side;
        }
        m.size_ = size;
        return m;
    }

    static MetricDescriptor scaled(Point denominator) {
        if (denominator < 1)
            throw DomainError("scaled line needs a positive denominator");
        MetricDescriptor m(Rule::scaled);
        m.side_ = denominator;
        return m;
    }

    static MetricDescriptor max_ultrametric() { return MetricDescriptor(Rule::max_ultrametric); }

    /// Rejects tables that are not square, not symmetric, have a non-zero
    /// diagonal or a non-positive off-diagonal entry. The triangle inequality
    /// is left to check_metric_axioms.
    static MetricDescriptor table(std::vector<std::vector<Rational>> rows) {
        const auto n = rows.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n)
                throw DomainError("distance table is not square");
            if (rows[i][i] != Rational(0))
                throw DomainError("distance table has a non-zero diagonal entry");
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (rows[i][j] != rows[j][i])
                    throw DomainError("distance table is not symmetric");
                if (i != j && rows[i][j].sign() <= 0)
                    throw DomainError("distance table has a non-positive off-diagonal entry");
            }
        MetricDescriptor m(Rule::table);
        m.size_ = static_cast<Point>(n);
        m.table_ = std::make_shared<const std::vector<std::vector<Rational>>>(std::move(rows));
        return m;
    }

    [[nodiscard]] Rule rule() const noexcept { return rule_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] Point side() const noexcept { return side_; }
    [[nodiscard]] Point denominator() const noexcept { return side_; }
    [[nodiscard]] const std::vector<std::vector<Rational>>* table_rows() const { return table_.get(); }

    [[nodiscard]] bool contains(Point p) const {
        switch (rule_) {
        case Rule::integers:
        case Rule::scaled:
            return true;
        case Rule::max_ultrametric:
            return p >= 1;
        case Rule::lattice:
        case Rule::table:
            return p >= 0 && p < size_;
        }
        return false;
    }

    /// Caller guarantees both points are in the universe.
    [[nodiscard]] Rational distance(Point x, Point y) const {
        switch (rule_) {
        case Rule::integers:
            return Rational(x < y ? y - x : x - y);
        case Rule::scaled:
            return Rational(x < y ? y - x : x - y, side_);
        case Rule::max_ultrametric:
            return x == y ? Rational(0) : Rational(std::max(x, y));
        case Rule::lattice: {
            Point d = 0;
            for (int i = 0; i < dim_; ++i) {
                d += std::llabs(x % side_ - y % side_);
                x /= side_;
                y /= side_;
            }
            return Rational(d);
        }
        case Rule::table:
            return (*table_)[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        }
        return Rational(0);
    }

    /// Coordinates of a lattice point.
    [[nodiscard]] std::vector<Point> coordinates(Point p) const {
        std::vector<Point> c;
        for (int i = 0; i < dim_; ++i) {
            c.push_back(p % side_);
            p /= side_;
        }
        return c;
    }

    [[nodiscard]] std::string tag() const {
        switch (rule_) {
        case Rule::integers:
            return "integers";
        case Rule::lattice:
            return "lattice:" + std::to_string(dim_) + ":" + std::to_string(side_);
        case Rule::scaled:
            return "scaled:" + std::to_string(side_);
        case Rule::max_ultrametric:
            return "max_ultrametric";
        case Rule::table:
            return "table:" + std::to_string(size_);
        }
        return "?";
    }

    friend bool operator==(const MetricDescriptor& a, const MetricDescriptor& b) {
        if (a.rule_ != b.rule_ || a.dim_ != b.dim_ || a.side_ != b.side_ || a.size_ != b.size_)
            return false;
        if (a.rule_ == Rule::table)
            return *a.table_ == *b.table_;
        return true;
    }

private:
    explicit MetricDescriptor(Rule rule) : rule_(rule) {}

    Rule rule_;
    int dim_ = 1;
    Point side_ = 1;
    Point size_ = 0;
    std::shared_ptr<const std::vector<std::vector<Rational>>> table_;
};

/// Metric axioms on a window: symmetry, identity, positivity, triangle
/// inequality, and for the max-ultrametric the strong triangle inequality.
inline CertReport check_metric_axioms(const MetricDescriptor& m, const PointSet& window) {
    CertReport rep("metric " + m.tag());
    for (Point p : window)
        if (!m.contains(p))
            throw DomainError("point " + std::to_string(p) + " is outside the metric's universe");
    Record sym = pass_fail("metric_symmetric", true);
    Record ident = pass_fail("metric_identity", true);
    for (Point x : window)
        for (Point y : window) {
            if (sym.verdict == Verdict::pass && m.distance(x, y) != m.distance(y, x)) {
                sym.verdict = Verdict::fail;
                sym.witness = {x, y};
            }
            bool ok = (x == y) ? m.distance(x, y).sign() == 0 : m.distance(x, y).sign() > 0;
            if (ident.verdict == Verdict::pass && !ok) {
                ident.verdict = Verdict::fail;
                ident.witness = {x, y};
                ident.value("d", m.distance(x, y));
            }
        }
    Record tri = pass_fail("metric_triangle", true);
    Record ultra = pass_fail("metric_ultrametric", true);
    const bool want_ultra = m.rule() == MetricDescriptor::Rule::max_ultrametric;
    for (Point x : window)
        for (Point y : window)
            for (Point z : window) {
                Rational xz = m.distance(x, z);
                Rational xy = m.distance(x, y);
                Rational yz = m.distance(y, z);
                if (tri.verdict == Verdict::pass && xy + yz < xz) {
                    tri.verdict = Verdict::fail;
                    tri.witness = {x, y, z};
                    tri.value("d(x,y)+d(y,z)", xy + yz).value("d(x,z)", xz);
                }
                if (want_ultra && ultra.verdict == Verdict::pass && max(xy, yz) < xz) {
                    ultra.verdict = Verdict::fail;
                    ultra.witness = {x, y, z};
                    ultra.value("max(d(x,y),d(y,z))", max(xy, yz)).value("d(x,z)", xz);
                }
            }
    rep.add(std::move(sym));
    rep.add(std::move(ident));
    rep.add(std::move(tri));
    if (want_ultra)
        rep.add(std::move(ultra));
    return rep;
}

enum class SpaceKind {
    standard,             // t / (t + d(x,y)) for a metric d
    pathological,         // the 1/x construction on N with a non-standard case split
    reciprocal_product,   // 1 if x = y, else 1/(xy), on N
    ratio_minmax,         // min(x,y)/max(x,y), on N
    ultrametric_standard, // standard fuzzy metric of the max-ultrametric
};

inline std::string to_string(SpaceKind k) {
    switch (k) {
    case SpaceKind::standard:
        return "standard";
    case SpaceKind::pathological:
        return "pathological";
    case SpaceKind::reciprocal_product:
        return "reciprocal_product";
    case SpaceKind::ratio_minmax:
        return "ratio_minmax";
    case SpaceKind::ultrametric_standard:
        return "ultrametric";
    }
    return "?";
}

/// Immutable fuzzy metric space (X, M, *). Universes may be infinite; every
/// scan is relative to an explicit finite window.
class FuzzyMetricSpace {
public:
    static FuzzyMetricSpace standard(MetricDescriptor metric, TNorm tnorm = TNormKind::product) {
        FuzzyMetricSpace s(SpaceKind::standard, tnorm);
        s.metric_ = std::move(metric);
        return s;
    }
    static FuzzyMetricSpace standard_integers(TNorm tnorm = TNormKind::product) {
        return standard(MetricDescriptor::integers(), tnorm);
    }
    static FuzzyMetricSpace pathological(TNorm tnorm = TNormKind::lukasiewicz) {
        return {SpaceKind::pathological, tnorm};
    }
    static FuzzyMetricSpace reciprocal_product(TNorm tnorm = TNormKind::product) {
        return {SpaceKind::reciprocal_product, tnorm};
    }
    static FuzzyMetricSpace ratio_minmax(TNorm tnorm = TNormKind::product) {
        return {SpaceKind::ratio_minmax, tnorm};
    }
    static FuzzyMetricSpace ultrametric_standard(TNorm tnorm = TNormKind::minimum) {
        FuzzyMetricSpace s(SpaceKind::ultrametric_standard, tnorm);
        s.metric_ = MetricDescriptor::max_ultrametric();
        return s;
    }

    [[nodiscard]] SpaceKind kind() const noexcept { return kind_; }
    [[nodiscard]] const TNorm& tnorm() const noexcept { return tnorm_; }
    [[nodiscard]] const std::optional<MetricDescriptor>& metric() const noexcept { return metric_; }
    [[nodiscard]] const std::optional<PointSet>& restriction() const noexcept { return restriction_; }

    [[nodiscard]] bool contains(Point p) const {
        bool base = false;
        switch (kind_) {
        case SpaceKind::standard:
        case SpaceKind::ultrametric_standard:
            base = metric_->contains(p);
            break;
        case SpaceKind::pathological:
        case SpaceKind::reciprocal_product:
        case SpaceKind::ratio_minmax:
            base = p >= 1;
            break;
        }
        return base && (!restriction_ || fuzzy::contains(*restriction_, p));
    }

    /// Throws DomainError unless every point is in the universe.
    void require_within(const PointSet& pts) const {
        for (Point p : pts)
            if (!contains(p))
                throw DomainError("point " + std::to_string(p) + " is outside the universe of " + describe());
    }

    /// M(x, y, t) with full argument checking.
    [[nodiscard]] Rational eval(Point x, Point y, const Rational& t) const {
        if (t.sign() <= 0)
            throw DomainError("M(x,y,t) needs t > 0, got t=" + t.str());
        if (!contains(x))
            throw DomainError("point " + std::to_string(x) + " is outside the universe of " + describe());
        if (!contains(y))
            throw DomainError("point " + std::to_string(y) + " is outside the universe of " + describe());
        return eval_unchecked(x, y, t);
    }

    /// M(x, y, t) for points already validated (see require_within) and t > 0.
    [[nodiscard]] Rational eval_unchecked(Point x, Point y, const Rational& t) const {
        switch (kind_) {
        case SpaceKind::standard:
        case SpaceKind::ultrametric_standard:
            if (x == y)
                return Rational(1);
            return t / (t + metric_->distance(x, y));
        case SpaceKind::pathological:
            if (x == y)
                return Rational(1);
            if (x != 1 && y != 1)
                return Rational(1, 2);
            return Rational(1, x == 1 ? y : x);
        case SpaceKind::reciprocal_product:
            if (x == y)
                return Rational(1);
            if (x > (Point(1) << 31) || y > (Point(1) << 31))
                throw OverflowError("reciprocal product of points beyond 2^31");
            return Rational(1, x * y);
        case SpaceKind::ratio_minmax:
            return x <= y ? Rational(x, y) : Rational(y, x);
        }
        return Rational(0);
    }

    [[nodiscard]] std::string describe() const {
        std::string s = to_string(kind_);
        if (kind_ == SpaceKind::standard)
            s += "(" + metric_->tag() + ")";
        s += "[" + tnorm_.tag() + "]";
        if (restriction_)
            s += " restricted to " + fuzzy::describe(*restriction_);
        return s;
    }

    [[nodiscard]] FuzzyMetricSpace restricted_to(const PointSet& subset) const {
        require_within(subset);
        FuzzyMetricSpace s = *this;
        s.restriction_ = subset;
        return s;
    }

    friend bool operator==(const FuzzyMetricSpace& a, const FuzzyMetricSpace& b) {
        return a.kind_ == b.kind_ && a.tnorm_ == b.tnorm_ && a.metric_ == b.metric_ &&
               a.restriction_ == b.restriction_;
    }

private:
    FuzzyMetricSpace(SpaceKind kind, TNorm tnorm) : kind_(kind), tnorm_(std::move(tnorm)) {}

    SpaceKind kind_;
    TNorm tnorm_;
    std::optional<MetricDescriptor> metric_;
    std::optional<PointSet> restriction_;
};

inline Rational eval_M(const FuzzyMetricSpace& space, Point x, Point y, const Rational& t) {
    return space.eval(x, y, t);
}

/// Restriction of M to `subset`. Restricting to the current (finite) universe
/// returns the space unchanged.
inline FuzzyMetricSpace subspace(const FuzzyMetricSpace& space, const PointSet& subset) {
    PointSet s = make_point_set(subset);
    if (space.restriction() && *space.restriction() == s)
        return space;
    return space.restricted_to(s);
}

/// A pair of points with the exact value of M that decides a predicate.
struct PairValue {
    Point x = 0;
    Point y = 0;
    Rational value;
};

/// Exhaustive exact check of the fuzzy metric axioms on window^3 x t_grid^2:
/// positivity and M <= 1, M = 1 iff x = y, symmetry, the fuzzy triangle
/// inequality M(x,y,t) * M(y,z,s) <= M(x,z,t+s), and monotonicity in t along
/// the sorted grid. Continuity in t is reported sampled-only.
inline CertReport check_axioms(const FuzzyMetricSpace& space, const PointSet& window,
                               std::vector<Rational> t_grid) {
    if (t_grid.empty())
        throw PreconditionError("check_axioms needs a non-empty t grid");
    for (const auto& t : t_grid)
        if (t.sign() <= 0)
            throw DomainError("t grid entry " + t.str() + " is not positive");
    space.require_within(window);
    std::sort(t_grid.begin(), t_grid.end());
    t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());

    // Every time that appears: grid values and pairwise sums.
    std::vector<Rational> times = t_grid;
    for (const auto& t : t_grid)
        for (const auto& s : t_grid)
            times.push_back(t + s);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    auto time_index = [&](const Rational& t) {
        return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
    };

    const std::size_t n = window.size();
    // table[k][i*n + j] = M(window[i], window[j], times[k])
    std::vector<std::vector<Rational>> table(times.size(), std::vector<Rational>(n * n));
    for (std::size_t k = 0; k < times.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                table[k][i * n + j] = space.eval_unchecked(window[i], window[j], times[k]);

    CertReport rep("axioms of " + space.describe() + " on " + describe(window));
    const std::string wdesc = describe(window);
    auto record = [&](const char* name) {
        Record r = pass_fail(name, true);
        r.window = wdesc;
        return r;
    };

    Record positive = record("axiom_positive");
    Record identity = record("axiom_identity");
    Record symmetric = record("axiom_symmetric");
    for (std::size_t k = 0; k < times.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Rational& m = table[k][i * n + j];
                if (positive.verdict == Verdict::pass && (m.sign() <= 0 || Rational(1) < m)) {
                    positive.verdict = Verdict::fail;
                    positive.witness = {window[i], window[j]};
                    positive.value("t", times[k]).value("M", m);
                }
                bool is_one = m == Rational(1);
                if (identity.verdict == Verdict::pass && is_one != (i == j)) {
                    identity.verdict = Verdict::fail;
                    identity.witness = {window[i], window[j]};
                    identity.value("t", times[k]).value("M", m);
                }
                const Rational& mt = table[k][j * n + i];
                if (symmetric.verdict == Verdict::pass && m != mt) {
                    symmetric.verdict = Verdict::fail;
                    symmetric.witness = {window[i], window[j]};
                    symmetric.value("t", times[k]).value("M(x,y)", m).value("M(y,x)", mt);
                }
            }

    Record triangle = record("axiom_triangle");
    std::int64_t violations = 0;
    const TNorm& star = space.tnorm();
    for (const auto& t : t_grid) {
        const auto& mt = table[time_index(t)];
        for (const auto& s : t_grid) {
            const auto& ms = table[time_index(s)];
            const auto& mts = table[time_index(t + s)];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t l = 0; l < n; ++l) {
                        Rational lhs = star(mt[i * n + j], ms[j * n + l]);
                        const Rational& rhs = mts[i * n + l];
                        if (rhs < lhs) {
                            if (violations == 0) {
                                triangle.verdict = Verdict::fail;
                                triangle.witness = {window[i], window[j], window[l]};
                                triangle.value("t", t).value("s", s);
                                triangle.value("M(x,y,t)*M(y,z,s)", lhs).value("M(x,z,t+s)", rhs);
                            }
                            ++violations;
                        }
                    }
        }
    }
    if (violations > 0)
        triangle.value("violations", Rational(violations));

    Record monotone = record("monotone_in_t");
    monotone.note = "checked on the t grid only";
    for (std::size_t a = 0; a + 1 < t_grid.size() && monotone.verdict == Verdict::pass; ++a) {
        const auto& lo = table[time_index(t_grid[a])];
        const auto& hi = table[time_index(t_grid[a + 1])];
        for (std::size_t i = 0; i < n * n; ++i)
            if (hi[i] < lo[i]) {
                monotone.verdict = Verdict::fail;
                monotone.witness = {window[i / n], window[i % n]};
                monotone.value("t", t_grid[a]).value("t'", t_grid[a + 1]);
                monotone.value("M(x,y,t)", lo[i]).value("M(x,y,t')", hi[i]);
                break;
            }
    }

    rep.add(std::move(positive));
    rep.add(std::move(identity));
    rep.add(std::move(symmetric));
    rep.add(std::move(triangle));
    rep.add(std::move(monotone));
    rep.add("axiom_continuous", Verdict::sampled_only, "continuity in t is not decidable from samples");
    return rep;
}

/// Exhaustive check of M(x,y,t) * M(y,z,t) <= M(x,z,t) on the window.
inline CertReport check_non_archimedean(const FuzzyMetricSpace& space, const PointSet& window,
                                        const std::vector<Rational>& t_grid) {
    space.require_within(window);
    CertReport rep("non-archimedean " + space.describe());
    Record r = pass_fail("non_archimedean", true);
    r.window = describe(window);
    const std::size_t n = window.size();
    std::vector<Rational> m(n * n);
    for (const auto& t : t_grid) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m[i * n + j] = space.eval_unchecked(window[i], window[j], t);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l) {
                    Rational lhs = space.tnorm()(m[i * n + j], m[j * n + l]);
                    if (m[i * n + l] < lhs) {
                        r.verdict = Verdict::fail;
                        r.witness = {window[i], window[j], window[l]};
                        r.value("t", t).value("M(x,y,t)*M(y,z,t)", lhs).value("M(x,z,t)", m[i * n + l]);
                        rep.add(std::move(r));
                        return rep;
                    }
                }
    }
    rep.add(std::move(r));
    return rep;
}

/// Both sides of the standard-metric threshold equivalence
///   t/(t+d) > 1 - r   <=>   d < r t / (1 - r).
struct ThresholdSides {
    bool fuzzy_side = false;
    bool metric_side = false;
    friend bool operator==(const ThresholdSides&, const ThresholdSides&) = default;
};

/// r t / (1 - r): the metric radius of a standard-fuzzy ball at scale (r, t).
inline Rational metric_radius(const ScaleParams& p) { return p.r() * p.t() / p.level(); }

inline ThresholdSides metric_threshold(const Rational& d, const ScaleParams& p) {
    if (d.sign() < 0)
        throw DomainError("distance " + d.str() + " is negative");
    ThresholdSides out;
    out.fuzzy_side = p.level() < p.t() / (p.t() + d);
    out.metric_side = d < metric_radius(p);
    return out;
}

/// B(x, r, t) within the window: points y with M(x,y,t) > 1 - r.
inline PointSet ball(const FuzzyMetricSpace& space, Point x, const ScaleParams& p, const PointSet& window) {
    if (!space.contains(x))
        throw DomainError("ball centre " + std::to_string(x) + " is outside the universe");
    space.require_within(window);
    const Rational level = p.level();
    PointSet out;
    for (Point y : window)
        if (level < space.eval_unchecked(x, y, p.t()))
            out.push_back(y);
    return out;
}

/// Smallest M(x, y, t) over pairs of the set (the pair deciding boundedness);
/// nullopt for sets with fewer than two points.
inline std::optional<PairValue> weakest_pair(const FuzzyMetricSpace& space, const PointSet& set,
                                             const Rational& t) {
    std::optional<PairValue> worst;
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            Rational m = space.eval_unchecked(set[i], set[j], t);
            if (!worst || m < worst->value)
                worst = PairValue{set[i], set[j], m};
        }
    return worst;
}

/// Every pair of the subset satisfies M(x,y,t) > 1 - r.
inline bool is_bounded(const FuzzyMetricSpace& space, const PointSet& subset, const ScaleParams& p) {
    space.require_within(subset);
    auto worst = weakest_pair(space, subset, p.t());
    return !worst || p.level() < worst->value;
}

/// Parameters at which A u B is bounded, from boundedness of A at pa and of B
/// at pb and anchors a in A, b in B:
///   M(x, y, 2 tA + tB) >= (1 - rA) * M(a, b, tA) * (1 - rB) = L,
/// returned as the scale (1 - L, 2 tA + tB).
struct UnionBound {
    Rational lower_bound;
    Rational s;
    Rational t_out;
};

inline UnionBound union_bound_params(const FuzzyMetricSpace& space, const ScaleParams& pa, const ScaleParams& pb,
                                     Point a, Point b) {
    if (!is_positivity_preserving(space.tnorm()))
        throw UnsupportedOperation("union of bounded sets needs a positivity-preserving t-norm; " +
                                   space.tnorm().tag() + " is not");
    const TNorm& star = space.tnorm();
    Rational lower = star.fold({pa.level(), space.eval(a, b, pa.t()), pb.level()});
    if (lower.sign() <= 0)
        throw CertificationError("union bound collapsed to 0");
    return {lower, Rational(1) - lower, Rational(2) * pa.t() + pb.t()};
}

} // namespace fuzzy
