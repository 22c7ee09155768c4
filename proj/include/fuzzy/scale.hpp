#pragma once

#include <string>

#include "fuzzy/error.hpp"
#include "fuzzy/rational.hpp"

namespace fuzzy {

/// A scale (r, t): 0 < r < 1, t > 0. Balls B(x,r,t), boundedness, disjointness
/// and multiplicity are all stated at an explicit scale.
class ScaleParams {
public:
    ScaleParams(Rational r, Rational t) : r_(r), t_(t) {
        if (!(Rational(0) < r_ && r_ < Rational(1)))
            throw DomainError("scale r=" + r_.str() + " is not in (0,1)");
        if (!(Rational(0) < t_))
            throw DomainError("scale t=" + t_.str() + " is not positive");
    }

    /// Scale whose ball threshold 1 - r equals `level` (0 < level < 1).
    static ScaleParams at_level(Rational level, Rational t) { return {Rational(1) - level, t}; }

    [[nodiscard]] const Rational& r() const noexcept { return r_; }
    [[nodiscard]] const Rational& t() const noexcept { return t_; }

    /// 1 - r, the value M must strictly exceed.
    [[nodiscard]] Rational level() const { return Rational(1) - r_; }

    [[nodiscard]] std::string str() const { return r_.str() + ":" + t_.str(); }

    friend bool operator==(const ScaleParams&, const ScaleParams&) = default;

    /// Parses "r:t" with both sides "p/q".
    static ScaleParams parse(const std::string& text) {
        auto colon = text.find(':');
        if (colon == std::string::npos)
            throw ParseError("scale '" + text + "' is not of the form r:t");
        try {
            return {Rational::parse(text.substr(0, colon)), Rational::parse(text.substr(colon + 1))};
        } catch (const DomainError& e) {
            throw ParseError(std::string("scale '") + text + "': " + e.what());
        }
    }

private:
    Rational r_;
    Rational t_;
};

} // namespace fuzzy
