#pragma once

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzy/error.hpp"
#include "fuzzy/rational.hpp"
#include "fuzzy/report.hpp"

namespace fuzzy {

enum class TNormKind { product, minimum, lukasiewicz, custom };

/// A t-norm on [0,1]. The three closed forms are exact; a custom rule is
/// accepted but its axioms can only be checked on sampled grids.
class TNorm {
public:
    using Rule = std::function<Rational(const Rational&, const Rational&)>;

    TNorm() = default;
    TNorm(TNormKind kind) noexcept : kind_(kind) {} // NOLINT(google-explicit-constructor)

    static TNorm custom(std::string name, Rule rule) {
        TNorm t(TNormKind::custom);
        t.name_ = std::move(name);
        t.rule_ = std::move(rule);
        return t;
    }

    [[nodiscard]] TNormKind kind() const noexcept { return kind_; }

    [[nodiscard]] Rational operator()(const Rational& a, const Rational& b) const {
        check_unit(a);
        check_unit(b);
        switch (kind_) {
        case TNormKind::product:
            return a * b;
        case TNormKind::minimum:
            return min(a, b);
        case TNormKind::lukasiewicz:
            return max(Rational(0), a + b - Rational(1));
        case TNormKind::custom:
            break;
        }
        Rational v = rule_(a, b);
        check_unit(v);
        return v;
    }

    /// Left fold a1 * a2 * ... * ak (associativity makes the grouping immaterial).
    [[nodiscard]] Rational fold(std::initializer_list<Rational> values) const {
        Rational acc(1);
        for (const auto& v : values)
            acc = (*this)(acc, v);
        return acc;
    }

    [[nodiscard]] std::string tag() const {
        switch (kind_) {
        case TNormKind::product:
            return "product";
        case TNormKind::minimum:
            return "min";
        case TNormKind::lukasiewicz:
            return "lukasiewicz";
        case TNormKind::custom:
            break;
        }
        return name_;
    }

    static TNorm from_tag(std::string_view tag) {
        if (tag == "product")
            return TNormKind::product;
        if (tag == "min" || tag == "minimum")
            return TNormKind::minimum;
        if (tag == "lukasiewicz")
            return TNormKind::lukasiewicz;
        throw ParseError("unknown t-norm '" + std::string(tag) + "' (product|min|lukasiewicz)");
    }

    friend bool operator==(const TNorm& a, const TNorm& b) {
        return a.kind_ == b.kind_ && (a.kind_ != TNormKind::custom || a.name_ == b.name_);
    }

private:
    TNormKind kind_ = TNormKind::product;
    std::string name_;
    Rule rule_;

    static void check_unit(const Rational& v) {
        if (v < Rational(0) || Rational(1) < v)
            throw DomainError("t-norm argument " + v.str() + " is outside [0,1]");
    }
};

inline Rational tnorm_eval(const TNorm& t, const Rational& a, const Rational& b) { return t(a, b); }

/// Searches the grid for a, b > 0 with a*b = 0.
inline std::optional<std::pair<Rational, Rational>> find_zero_divisor(const TNorm& t,
                                                                       const std::vector<Rational>& grid) {
    for (const auto& a : grid) {
        if (a.sign() <= 0)
            continue;
        for (const auto& b : grid) {
            if (b.sign() > 0 && t(a, b).sign() == 0)
                return std::make_pair(a, b);
        }
    }
    return std::nullopt;
}

/// Rational grid {0, 1/n, 2/n, ..., 1}.
inline std::vector<Rational> uniform_grid(Rational::int_type n) {
    std::vector<Rational> g;
    g.reserve(static_cast<std::size_t>(n + 1));
    for (Rational::int_type k = 0; k <= n; ++k)
        g.emplace_back(k, n);
    return g;
}

/// a*b != 0 whenever a, b != 0. Closed forms are decided analytically; a
/// custom rule falls back to a counterexample search on a 101-point grid.
inline bool is_positivity_preserving(const TNorm& t) {
    switch (t.kind()) {
    case TNormKind::product:
    case TNormKind::minimum:
        return true;
    case TNormKind::lukasiewicz:
        return false;
    case TNormKind::custom:
        break;
    }
    return !find_zero_divisor(t, uniform_grid(100)).has_value();
}

/// a > c, b >= d > 0 implies a*b > c*d. Holds for the product; fails for the
/// minimum (min(1, d) = min(c, d) when d <= c).
inline bool is_strictly_monotone(const TNorm& t) { return t.kind() == TNormKind::product; }

/// Exhaustive exact check of commutativity, associativity, monotonicity and
/// the identity over all grid pairs and triples. Continuity is not checkable
/// from samples and is reported as such.
inline CertReport check_tnorm_axioms(const TNorm& t, const std::vector<Rational>& grid) {
    CertReport rep("tnorm " + t.tag());
    const bool has_zero = std::find(grid.begin(), grid.end(), Rational(0)) != grid.end();
    const bool has_one = std::find(grid.begin(), grid.end(), Rational(1)) != grid.end();
    if (grid.empty() || !has_zero || !has_one)
        throw PreconditionError("t-norm grid must be non-empty and contain 0 and 1");

    auto with_values = [](std::string name, std::initializer_list<std::pair<const char*, Rational>> vals) {
        Record r = pass_fail(std::move(name), false);
        for (const auto& [k, v] : vals)
            r.value(k, v);
        return r;
    };

    rep.add([&] {
        for (const auto& a : grid)
            for (const auto& b : grid)
                if (t(a, b) != t(b, a))
                    return with_values("commutative", {{"a", a}, {"b", b}, {"a*b", t(a, b)}, {"b*a", t(b, a)}});
        return pass_fail("commutative", true);
    }());

    rep.add([&] {
        for (const auto& a : grid)
            for (const auto& b : grid)
                for (const auto& c : grid) {
                    Rational left = t(a, t(b, c));
                    Rational right = t(t(a, b), c);
                    if (left != right)
                        return with_values("associative",
                                           {{"a", a}, {"b", b}, {"c", c}, {"a*(b*c)", left}, {"(a*b)*c", right}});
                }
        return pass_fail("associative", true);
    }());

    rep.add([&] {
        for (const auto& a : grid)
            if (t(a, Rational(1)) != a || t(a, Rational(0)) != Rational(0))
                return with_values("identity", {{"a", a}, {"a*1", t(a, Rational(1))}, {"a*0", t(a, Rational(0))}});
        return pass_fail("identity", true);
    }());

    // Monotone in the first argument; together with commutativity this gives
    // the two-argument form without scanning quadruples.
    rep.add([&] {
        for (const auto& a : grid)
            for (const auto& c : grid) {
                if (c < a)
                    continue;
                for (const auto& b : grid)
                    if (t(c, b) < t(a, b))
                        return with_values("monotone",
                                           {{"a", a}, {"c", c}, {"b", b}, {"a*b", t(a, b)}, {"c*b", t(c, b)}});
            }
        return pass_fail("monotone", true);
    }());

    rep.add("continuous", Verdict::sampled_only, "continuity is not decidable from a finite grid");
    return rep;
}

} // namespace fuzzy
