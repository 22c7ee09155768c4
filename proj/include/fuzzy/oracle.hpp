#pragma once

#include <cstddef>
#include <vector>

#include "fuzzy/error.hpp"
#include "fuzzy/points.hpp"
#include "fuzzy/scale.hpp"
#include "fuzzy/space.hpp"

namespace fuzzy {

inline constexpr std::size_t kOracleMaxPoints = 10;

namespace detail {

// Smallest k for which the graph is k-colourable, by backtracking.
inline int chromatic_number(const std::vector<std::vector<bool>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0)
        return 0;
    std::vector<int> colour(static_cast<std::size_t>(n), -1);
    for (int k = 1; k <= n; ++k) {
        auto place = [&](auto&& self, int v) -> bool {
            if (v == n)
                return true;
            for (int c = 0; c < k; ++c) {
                bool ok = true;
                for (int u = 0; u < v && ok; ++u)
                    ok = !(adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] &&
                           colour[static_cast<std::size_t>(u)] == c);
                if (!ok)
                    continue;
                colour[static_cast<std::size_t>(v)] = c;
                if (self(self, v + 1))
                    return true;
            }
            colour[static_cast<std::size_t>(v)] = -1;
            return false;
        };
        if (place(place, 0))
            return k;
    }
    return n;
}

} // namespace detail

/// Minimum number of (r,t)-disjoint families whose union is a cover of the
/// window bounded at `bound`. This is a statement at the fixed scales only.
///
/// Any valid configuration shrinks to a partition into bounded blocks, so the
/// search runs over set partitions (restricted growth strings) and takes the
/// chromatic number of the "not (r,t)-disjoint" graph on blocks.
inline int oracle_min_families(const FuzzyMetricSpace& space, const ScaleParams& params, const ScaleParams& bound,
                               const PointSet& window) {
    const std::size_t n = window.size();
    if (n > kOracleMaxPoints)
        throw PreconditionError("oracle window has " + std::to_string(n) + " points; at most " +
                                std::to_string(kOracleMaxPoints) + " allowed");
    if (n == 0)
        return 0;
    std::vector<std::vector<Rational>> mt(n, std::vector<Rational>(n)), mb(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mt[i][j] = space.eval(window[i], window[j], params.t());
            mb[i][j] = space.eval(window[i], window[j], bound.t());
        }
    const Rational level = params.level();
    const Rational bound_level = bound.level();

    int best = static_cast<int>(n) + 1;
    std::vector<int> block(n, -1);
    auto evaluate = [&](int blocks) {
        std::vector<std::vector<bool>> adj(static_cast<std::size_t>(blocks),
                                           std::vector<bool>(static_cast<std::size_t>(blocks), false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                int a = block[i], b = block[j];
                if (a != b && level <= mt[i][j])
                    adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
            }
        best = std::min(best, detail::chromatic_number(adj));
    };
    auto assign = [&](auto&& self, std::size_t i, int blocks) -> void {
        if (best == 1)
            return;
        if (i == n) {
            evaluate(blocks);
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            bool bounded = true;
            for (std::size_t j = 0; j < i && bounded; ++j)
                bounded = block[j] != b || bound_level < mb[i][j];
            if (!bounded)
                continue;
            block[i] = b;
            self(self, i + 1, std::max(blocks, b + 1));
        }
        block[i] = -1;
    };
    assign(assign, 0, 0);
    return best;
}

} // namespace fuzzy
