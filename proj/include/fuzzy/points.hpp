#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fuzzy/error.hpp"

namespace fuzzy {

/// Points are integers. Spaces whose natural points are not integers (lattices,
/// sampled lines) encode them; see MetricDescriptor.
using Point = std::int64_t;

/// Sorted, duplicate-free list of points. All windows, members of families and
/// balls are PointSets; canonical order is ascending.
using PointSet = std::vector<Point>;

inline PointSet make_point_set(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// Inclusive range lo..hi; empty when hi < lo.
inline PointSet range(Point lo, Point hi) {
    PointSet out;
    if (hi >= lo) {
        out.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (Point p = lo; p <= hi; ++p)
            out.push_back(p);
    }
    return out;
}

inline bool contains(const PointSet& s, Point p) { return std::binary_search(s.begin(), s.end(), p); }

inline bool is_subset(const PointSet& a, const PointSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline PointSet set_intersection(const PointSet& a, const PointSet& b) {
    PointSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline PointSet set_union(const PointSet& a, const PointSet& b) {
    PointSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool intersects(const PointSet& a, const PointSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return true;
    }
    return false;
}

/// Compact text form: maximal runs of consecutive points of length >= 3 are
/// written "a..b", other points individually, comma separated.
inline std::string describe(const PointSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1] == s[j] + 1)
            ++j;
        if (i != 0)
            out += ",";
        if (j - i >= 2) {
            out += std::to_string(s[i]) + ".." + std::to_string(s[j]);
        } else {
            for (std::size_t k = i; k <= j; ++k) {
                if (k != i)
                    out += ",";
                out += std::to_string(s[k]);
            }
        }
        i = j + 1;
    }
    return out + "}";
}

/// Parses "a..b" (inclusive).
inline PointSet parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos)
        throw ParseError("window '" + text + "' is not of the form a..b");
    try {
        std::size_t used = 0;
        std::string lo_s = text.substr(0, dots);
        std::string hi_s = text.substr(dots + 2);
        Point lo = std::stoll(lo_s, &used);
        if (used != lo_s.size())
            throw ParseError("window '" + text + "' is not of the form a..b");
        Point hi = std::stoll(hi_s, &used);
        if (used != hi_s.size())
            throw ParseError("window '" + text + "' is not of the form a..b");
        if (hi < lo)
            throw ParseError("window '" + text + "' is empty");
        return range(lo, hi);
    } catch (const std::logic_error&) {
        throw ParseError("window '" + text + "' is not of the form a..b");
    }
}

} // namespace fuzzy
