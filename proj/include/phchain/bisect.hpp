#pragma once

#include <cmath>
#include <vector>

namespace phchain {

/// Two parameter values on either side of a predicate change.
struct Bracket {
    double inside = 0.0;   ///< predicate holds here
    double outside = 0.0;  ///< predicate fails here

    double width() const noexcept { return std::abs(outside - inside); }
};

inline constexpr double kBracketWidth = 1e-12;

/// Shrinks [inside, outside] until it is at most `width` wide (or one ulp).
/// The caller guarantees pred(inside) && !pred(outside); orientation is free.
template <typename Predicate>
Bracket bisect(Predicate&& pred, double inside, double outside, double width = kBracketWidth) {
    Bracket b{inside, outside};
    while (b.width() > width) {
        const double mid = 0.5 * (b.inside + b.outside);
        if (mid == b.inside || mid == b.outside) {
            break;
        }
        if (pred(mid)) {
            b.inside = mid;
        } else {
            b.outside = mid;
        }
    }
    return b;
}

/// Brackets of every sign change of f over a uniform grid of `cells` cells on
/// [a, b], in grid order. A grid point where f vanishes is returned as a
/// zero-width bracket.
template <typename Function>
std::vector<Bracket> sign_change_cells(Function&& f, double a, double b, int cells) {
    std::vector<Bracket> out;
    double t0 = a;
    double f0 = f(t0);
    if (f0 == 0.0) {
        out.push_back({t0, t0});
    }
    for (int i = 1; i <= cells; ++i) {
        const double t1 = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
        const double f1 = f(t1);
        if (f1 == 0.0) {
            out.push_back({t1, t1});
        } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
            out.push_back({t0, t1});
        }
        t0 = t1;
        f0 = f1;
    }
    return out;
}

}  // namespace phchain
