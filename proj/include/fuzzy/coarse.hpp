#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzy/asdim.hpp"
#include "fuzzy/covers.hpp"
#include "fuzzy/error.hpp"
#include "fuzzy/points.hpp"
#include "fuzzy/report.hpp"
#include "fuzzy/scale.hpp"
#include "fuzzy/space.hpp"

namespace fuzzy {

/// Point map: identity, affine x -> a x + b, or a finite table.
class Mapping {
public:
    enum class Kind { identity, affine, table };

    static Mapping identity() { return Mapping(Kind::identity); }
    static Mapping affine(Point a, Point b) {
        Mapping m(Kind::affine);
        m.a_ = a;
        m.b_ = b;
        return m;
    }
    /// The integers inside the line sampled at spacing 1/q: x -> q x.
    static Mapping inclusion(Point q) {
        Mapping m = affine(q, 0);
        m.inclusion_ = true;
        return m;
    }
    static Mapping table(std::map<Point, Point> entries) {
        Mapping m(Kind::table);
        m.table_ = std::move(entries);
        return m;
    }

    [[nodiscard]] Point operator()(Point x) const {
        switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::affine:
            return a_ * x + b_;
        case Kind::table: {
            auto it = table_.find(x);
            if (it == table_.end())
                throw DomainError("map is not defined at " + std::to_string(x));
            return it->second;
        }
        }
        return x;
    }

    [[nodiscard]] bool defined_at(Point x) const { return kind_ != Kind::table || table_.count(x) > 0; }

    [[nodiscard]] PointSet image(const PointSet& s) const {
        std::vector<Point> out;
        out.reserve(s.size());
        for (Point x : s)
            out.push_back((*this)(x));
        return make_point_set(std::move(out));
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] Point a() const noexcept { return a_; }
    [[nodiscard]] Point b() const noexcept { return b_; }
    [[nodiscard]] const std::map<Point, Point>& entries() const noexcept { return table_; }

    [[nodiscard]] std::string tag() const {
        switch (kind_) {
        case Kind::identity:
            return "identity";
        case Kind::affine:
            if (inclusion_)
                return "inclusion " + std::to_string(a_);
            return "affine " + std::to_string(a_) + "," + std::to_string(b_);
        case Kind::table:
            return "table";
        }
        return "?";
    }

private:
    explicit Mapping(Kind k) : kind_(k) {}

    Kind kind_;
    Point a_ = 1;
    Point b_ = 0;
    bool inclusion_ = false;
    std::map<Point, Point> table_;
};

/// g o f tabulated over the window.
inline Mapping compose_on(const Mapping& g, const Mapping& f, const PointSet& window) {
    std::map<Point, Point> t;
    for (Point x : window)
        t[x] = g(f(x));
    return Mapping::table(std::move(t));
}

/// One row of a modulus: value >= a at time t implies value >= b at time t_out.
struct ModulusEntry {
    Rational a;
    Rational t;
    Rational b;
    Rational t_out;
};

struct CoarseMap {
    Mapping mapping = Mapping::identity();
    std::vector<ModulusEntry> expansive;
    std::vector<ModulusEntry> proper;
    std::optional<ScaleParams> onto;
};

/// (A, t) -> (A, t) rows for every A and t given: the modulus of a map that
/// preserves M exactly.
inline std::vector<ModulusEntry> isometric_modulus(const std::vector<Rational>& levels,
                                                   const std::vector<Rational>& times) {
    std::vector<ModulusEntry> out;
    for (const auto& t : times)
        for (const auto& a : levels)
            out.push_back({a, t, a, t});
    return out;
}

inline constexpr const char* kModulusNote = "only the listed modulus rows are checked";

namespace detail {

inline std::string entry_str(const ModulusEntry& e) {
    return "(" + e.a.str() + "," + e.t.str() + ")->(" + e.b.str() + "," + e.t_out.str() + ")";
}

inline CertReport check_modulus(const std::string& name, const FuzzyMetricSpace& from, const FuzzyMetricSpace& to,
                                const CoarseMap& f, const PointSet& window, const std::vector<ModulusEntry>& rows,
                                bool forward) {
    if (rows.empty())
        throw PreconditionError(name + " modulus is empty; nothing to verify");
    from.require_within(window);
    PointSet img = f.mapping.image(window);
    to.require_within(img);
    CertReport rep(name + " of " + f.mapping.tag());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& e = rows[k];
        Record r = pass_fail(name + "[" + std::to_string(k) + "]", true);
        r.window = describe(window);
        r.note = entry_str(e) + "; " + kModulusNote;
        for (std::size_t i = 0; i < window.size() && r.verdict == Verdict::pass; ++i)
            for (std::size_t j = i + 1; j < window.size(); ++j) {
                Point x = window[i], y = window[j];
                Point fx = f.mapping(x), fy = f.mapping(y);
                // Forward: M1 >= a => M2 >= b. Backward: M2 >= a => M1 >= b.
                Rational hyp = forward ? from.eval_unchecked(x, y, e.t) : to.eval_unchecked(fx, fy, e.t);
                if (hyp < e.a)
                    continue;
                Rational con = forward ? to.eval_unchecked(fx, fy, e.t_out) : from.eval_unchecked(x, y, e.t_out);
                if (con < e.b) {
                    r.verdict = Verdict::fail;
                    r.witness = {x, y};
                    r.value("hypothesis", hyp).value("conclusion", con);
                    break;
                }
            }
        rep.add(std::move(r));
    }
    return rep;
}

} // namespace detail

/// Every expansiveness row: M1(x,y,t) >= A implies M2(f x, f y, t') >= B.
inline CertReport check_expansive(const FuzzyMetricSpace& x_space, const FuzzyMetricSpace& y_space,
                                  const CoarseMap& f, const PointSet& window_x) {
    return detail::check_modulus("expansive", x_space, y_space, f, window_x, f.expansive, true);
}

/// Every properness row: M2(f x, f y, t) >= C implies M1(x,y,t') >= D.
inline CertReport check_proper(const FuzzyMetricSpace& x_space, const FuzzyMetricSpace& y_space, const CoarseMap& f,
                               const PointSet& window_x) {
    return detail::check_modulus("proper", x_space, y_space, f, window_x, f.proper, false);
}

/// Each y in the target window has some x in the source window with
/// M2(f x, y, t) > 1 - r.
inline CertReport check_coarsely_onto(const FuzzyMetricSpace& y_space, const CoarseMap& f, const ScaleParams& p,
                                      const PointSet& window_y, const PointSet& window_x) {
    PointSet img = f.mapping.image(window_x);
    y_space.require_within(img);
    y_space.require_within(window_y);
    CertReport rep("coarsely onto " + f.mapping.tag());
    Record r = pass_fail("onto", true);
    r.params = p;
    r.window = describe(window_y);
    const Rational level = p.level();
    for (Point y : window_y) {
        bool hit = std::any_of(img.begin(), img.end(),
                               [&](Point fx) { return level < y_space.eval_unchecked(fx, y, p.t()); });
        if (!hit) {
            r.verdict = Verdict::fail;
            r.witness = {y};
            break;
        }
    }
    rep.add(std::move(r));
    return rep;
}

/// Closeness at explicit parameters. `inclusive` certifies M >= 1 - s rather
/// than M > 1 - s; `strict()` trades that for a strict bound at half the level.
struct ClosenessCert {
    ScaleParams params;
    bool inclusive = false;

    [[nodiscard]] ScaleParams strict() const {
        return inclusive ? ScaleParams::at_level(params.level() / Rational(2), params.t()) : params;
    }
};

/// M(f x, g x, t) > 1 - r (or >= for an inclusive certificate) on the window.
inline CertReport check_close(const FuzzyMetricSpace& y_space, const Mapping& f, const Mapping& g,
                              const ClosenessCert& cert, const PointSet& window_x) {
    CertReport rep("close " + f.tag() + " ~ " + g.tag());
    Record r = pass_fail("close", true);
    r.params = cert.params;
    r.window = describe(window_x);
    if (cert.inclusive)
        r.note = "inclusive bound";
    const Rational level = cert.params.level();
    std::optional<std::pair<Point, Rational>> worst;
    for (Point x : window_x) {
        Point fx = f(x), gx = g(x);
        if (!y_space.contains(fx) || !y_space.contains(gx))
            throw DomainError("image of " + std::to_string(x) + " is outside the target universe");
        Rational m = y_space.eval_unchecked(fx, gx, cert.params.t());
        if (!worst || m < worst->second)
            worst = std::make_pair(x, m);
    }
    if (worst) {
        r.verdict = (cert.inclusive ? level <= worst->second : level < worst->second) ? Verdict::pass : Verdict::fail;
        r.witness = {worst->first};
        r.value("min M", worst->second).value("1-r", level);
    }
    rep.add(std::move(r));
    return rep;
}

inline CertReport check_close(const FuzzyMetricSpace& y_space, const Mapping& f, const Mapping& g,
                              const ScaleParams& p, const PointSet& window_x) {
    return check_close(y_space, f, g, ClosenessCert{p, false}, window_x);
}

/// g o f ~ g' o f' from f ~ f' at (r,t), g ~ g' at (r',t') and an expansive
/// row of g' covering level 1 - r at time t:
///   M3(g f x, g' f' x, t' + t'') >= (1 - r') * B.
/// Strict when the t-norm is strictly monotone, inclusive otherwise.
inline ClosenessCert compose_closeness(const FuzzyMetricSpace& z_space, const ClosenessCert& fg,
                                       const ClosenessCert& gg, const ModulusEntry& g_row) {
    if (fg.params.level() < g_row.a || g_row.t < fg.params.t())
        throw DerivationError("expansive row " + detail::entry_str(g_row) + " does not cover level " +
                              fg.params.level().str() + " at time " + fg.params.t().str());
    if (g_row.b.sign() <= 0)
        throw CertificationError("expansive row has B = 0; the closeness chain collapses");
    Rational b = min(g_row.b, Rational(1));
    Rational lower = z_space.tnorm()(gg.params.level(), b);
    if (lower.sign() <= 0)
        throw CertificationError("(1-r') * B = 0 under " + z_space.tnorm().tag());
    bool strict = !gg.inclusive && is_strictly_monotone(z_space.tnorm());
    return ClosenessCert{ScaleParams::at_level(lower, gg.params.t() + g_row.t_out), !strict};
}

/// Coarse inverse by smallest qualifying preimage, with the two closeness
/// certificates: f o g ~ id at (r,t) and g o f ~ id from a properness row.
struct CoarseInverse {
    Mapping g;
    ClosenessCert fg;
    ClosenessCert gf;
    CertReport report;
};

inline CoarseInverse construct_coarse_inverse(const FuzzyMetricSpace& x_space, const FuzzyMetricSpace& y_space,
                                              const CoarseMap& f, const ScaleParams& p, const PointSet& window_y,
                                              const PointSet& window_x) {
    auto onto = check_coarsely_onto(y_space, f, p, window_y, window_x);
    if (!onto.passed())
        throw PreconditionError("map is not coarsely onto at " + p.str() + ": no preimage near " +
                                std::to_string(onto.first_failure()->witness.at(0)));
    const Rational level = p.level();
    std::map<Point, Point> table;
    for (Point y : window_y)
        for (Point x : window_x)
            if (level < y_space.eval_unchecked(f.mapping(x), y, p.t())) {
                table[y] = x;
                break;
            }
    Mapping g = Mapping::table(std::move(table));

    CertReport rep("coarse inverse of " + f.mapping.tag());
    rep.append(onto);
    ClosenessCert fg{p, false};
    rep.append(check_close(y_space, compose_on(f.mapping, g, window_y), Mapping::identity(), fg, window_y));

    // M2(f x, f g f x, t) > 1 - r, so a row (C, tC) -> (D, t''') with C <= 1 - r
    // and tC <= t gives M1(x, g f x, t''') >= D.
    auto row = std::find_if(f.proper.begin(), f.proper.end(),
                            [&](const ModulusEntry& e) { return e.a <= level && e.t <= p.t() && e.b.sign() > 0; });
    if (row == f.proper.end())
        throw DerivationError("need a properness row (C, t) with C <= " + level.str() + " and t <= " + p.t().str());
    for (Point x : window_x)
        if (!contains(window_y, f.mapping(x)))
            throw PreconditionError("f(" + std::to_string(x) + ") is outside the target window");
    ClosenessCert gf{ScaleParams::at_level(min(row->b, Rational(1)) / Rational(2), row->t_out), false};
    rep.append(check_close(x_space, compose_on(g, f.mapping, window_x), Mapping::identity(), gf, window_x));
    Record d = info_record("gf_derivation");
    d.note = "properness row " + detail::entry_str(*row) + ", strict at D/2";
    rep.add(std::move(d));
    return {std::move(g), fg, gf, std::move(rep)};
}

/// Parameters of a witness transport to target (r,t): the onto scale (r1,t1),
/// the threshold eps, and the source scale (R,T) read from a properness row.
struct TransportDerivation {
    ScaleParams onto;
    Rational epsilon;
    ScaleParams source;
    ModulusEntry proper_row;
};

inline constexpr std::int64_t kEpsilonGrid = 256;

/// eps = phi(s*) for the largest grid s* = k/256 with 0 < phi(s*) < phi(1 - r),
/// phi(s) = (1 - r1) * s * (1 - r1). Then phi(s) <= eps forces s < 1 - r.
inline Rational transport_epsilon(const TNorm& star, const ScaleParams& onto, const ScaleParams& target) {
    auto phi = [&](const Rational& s) { return star.fold({onto.level(), s, onto.level()}); };
    const Rational cap = phi(target.level());
    for (std::int64_t k = kEpsilonGrid - 1; k >= 1; --k) {
        Rational v = phi(Rational(k, kEpsilonGrid));
        if (v.sign() > 0 && v < cap)
            return v;
    }
    throw DerivationError("(1-r1) * s * (1-r1) is constant below " + cap.str() + " on the 1/256 grid");
}

inline TransportDerivation derive_transport(const FuzzyMetricSpace& y_space, const CoarseMap& f,
                                            const ScaleParams& target) {
    if (!f.onto)
        throw DerivationError("map has no coarsely-onto parameters");
    const ScaleParams& onto = *f.onto;
    Rational eps = transport_epsilon(y_space.tnorm(), onto, target);
    Rational need_t = Rational(2) * onto.t() + target.t();
    auto row = std::find_if(f.proper.begin(), f.proper.end(), [&](const ModulusEntry& e) {
        return e.a <= eps && need_t <= e.t && e.b.sign() > 0 && e.b < Rational(1);
    });
    if (row == f.proper.end())
        throw DerivationError("missing properness row (C, t) -> (D, t') with C <= " + eps.str() + ", t >= " +
                              need_t.str() + " and 0 < D < 1");
    return {onto, eps, ScaleParams::at_level(row->b, row->t_out), *row};
}

struct PushResult {
    DimensionWitness witness;
    TransportDerivation derivation;
    CertReport report;
};

/// Transports a witness along f to target (r,t) on the target window: the
/// families N_{r1,t1}(f(U)). The source witness must sit at the derived
/// (R,T); `build` constructs it on the source window.
inline PushResult push_witness(const FuzzyMetricSpace& x_space, const FuzzyMetricSpace& y_space, const CoarseMap& f,
                               const ScaleParams& target, const PointSet& window_x, const PointSet& window_y,
                               const WitnessBuilder& build = {}) {
    TransportDerivation d = derive_transport(y_space, f, target);
    DimensionWitness src = build ? build(d.source, window_x) : construct_witness(x_space, d.source, window_x);
    if (!(src.params == d.source))
        throw PreconditionError("source witness is at " + src.params.str() + ", transport needs " + d.source.str());

    CertReport rep("push " + f.mapping.tag() + " to " + target.str());
    Record dr = info_record("derivation");
    dr.params = target;
    dr.value("r1", d.onto.r()).value("t1", d.onto.t()).value("epsilon", d.epsilon);
    dr.value("R", d.source.r()).value("T", d.source.t());
    dr.note = "properness row " + detail::entry_str(d.proper_row);
    rep.add(std::move(dr));

    CertReport sv = verify_witness(x_space, src);
    rep.append(sv);
    if (!sv.passed())
        throw PreconditionError("source witness does not verify: " + sv.first_failure()->predicate);
    rep.append(check_coarsely_onto(y_space, f, d.onto, window_y, window_x));

    // Images are bounded through an expansive row reaching the source bound.
    const ScaleParams& sb = src.bound_params;
    auto row = std::find_if(f.expansive.begin(), f.expansive.end(), [&](const ModulusEntry& e) {
        return e.a <= sb.level() && sb.t() <= e.t && e.b.sign() > 0;
    });
    if (row == f.expansive.end())
        throw DerivationError("missing expansive row (A, t) with A <= " + sb.level().str() + " and t >= " +
                              sb.t().str());
    ScaleParams image_bound = ScaleParams::at_level(min(row->b, Rational(1)) / Rational(2), row->t_out);

    DimensionWitness out{src.n, target, {}, image_bound, window_y, {}};
    std::optional<ScaleParams> chain;
    for (const auto& fam : src.families) {
        std::vector<PointSet> imgs;
        for (const auto& u : fam.sets)
            imgs.push_back(f.mapping.image(u));
        auto nf = neighborhood_family(y_space, Family::make("f(" + fam.label + ")", imgs), d.onto, image_bound,
                                      window_y);
        rep.append(nf.report);
        chain = nf.bound;
        out.families.push_back(std::move(nf.family));
    }
    if (chain)
        out.bound_params = *chain;
    out.note = "transported from " + src.params.str() + " along " + f.mapping.tag();
    return {std::move(out), d, std::move(rep)};
}

} // namespace fuzzy
