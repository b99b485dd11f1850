#pragma once

// Spectra along the parameter t: single samples, label-tracked scans,
// threshold location by bisection and merger classification.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "assignment.hpp"
#include "bisect.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "patterns.hpp"
#include "polynomial.hpp"

namespace phchain {

struct SpectrumSample {
    double t = 0.0;
    RootSet roots;
    /// Positive odd label of each sRoot (same order). Empty until tracked.
    std::vector<int> labels;
    bool ok = true;
    std::string error;

    /// Energy carrying a signed label: +sqrt(s) for +m, -sqrt(s) for -m.
    std::complex<double> energy(int label) const {
        const int m = std::abs(label);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == m) {
                const auto e = std::sqrt(roots.sRoots[i]);
                return label > 0 ? e : -e;
            }
        }
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    }
};

enum class ThresholdKind { QhLoss, XiRoot, ZeroCrossing };

inline const char* to_string(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::QhLoss: return "QH_LOSS";
        case ThresholdKind::XiRoot: return "XI_ROOT";
        case ThresholdKind::ZeroCrossing: return "ZERO_CROSSING";
    }
    return "?";
}

struct ThresholdReport {
    ThresholdKind kind = ThresholdKind::XiRoot;
    std::optional<int> couplingIndex;
    double t = 0.0;
    Bracket bracket;
    double residual = 0.0;
};

struct Domain4Point {
    double alpha = 0.0;
    double beta = 0.0;
    bool inside = false;
};

inline SpectrumSample spectrum_at(const ChainModel& model, double t) {
    SpectrumSample sample;
    sample.t = t;
    sample.roots = all_roots(char_poly(model, t));
    return sample;
}

// ---------------------------------------------------------------------------
// The four-level member in its native (alpha, beta) coordinates: the central
// bond carries 4 (1 - alpha), the two outer bonds 3 (1 - beta).

inline std::vector<double> weights_from_alpha_beta(double alpha, double beta) {
    return {3.0 * (1.0 - beta), 4.0 * (1.0 - alpha)};
}

/// s_+ and s_- of 3 beta + 2 alpha +- 2 sqrt(3 beta alpha + alpha^2 + 9 beta - 9 alpha).
inline std::array<std::complex<double>, 2> closed_form_4(double alpha, double beta) {
    const double radicand = 3.0 * beta * alpha + alpha * alpha + 9.0 * beta - 9.0 * alpha;
    const std::complex<double> root = std::sqrt(std::complex<double>(radicand, 0.0));
    const double centre = 3.0 * beta + 2.0 * alpha;
    return {centre + 2.0 * root, centre - 2.0 * root};
}

/// Lower boundary curve in beta: beta >= (9 alpha - alpha^2) / (9 + 3 alpha).
inline double domain4_beta_min(double alpha) {
    return (9.0 * alpha - alpha * alpha) / (9.0 + 3.0 * alpha);
}

/// Lower boundary curve in alpha: alpha >= beta - beta^2 / 4.
inline double domain4_alpha_min(double beta) { return beta - beta * beta / 4.0; }

inline Domain4Point domain4_contains(double alpha, double beta) {
    constexpr double tol = 1e-12;
    const bool first = beta >= domain4_beta_min(alpha) - tol;
    const bool second = alpha >= domain4_alpha_min(beta) - tol;
    return {alpha, beta, first && second};
}

// ---------------------------------------------------------------------------

inline constexpr int kXiScanCells = 10000;

/// Smallest t in (0, search_max] with xi_n(t) = 1.
inline ThresholdReport xi_root(const ChainModel& model, int n, double search_max,
                               int cells = kXiScanCells, double width = kBracketWidth) {
    model.check_index(n);
    if (!(search_max > 0.0)) {
        throw std::invalid_argument("search_max must be positive");
    }
    // xi_n(0) = 0, so t = 0 is never a root and the grid may start there.
    const auto excess = [&](double t) { return xi(model, n, t) - 1.0; };
    const auto changes = sign_change_cells(excess, 0.0, search_max, cells);
    if (changes.empty()) {
        throw NoRootInRange("xi_" + std::to_string(n) + "(t) = 1 has no root in (0, " +
                            std::to_string(search_max) + "]");
    }
    const Bracket cell = changes.front();
    ThresholdReport r;
    r.kind = ThresholdKind::XiRoot;
    r.couplingIndex = n;
    if (cell.width() == 0.0) {
        r.bracket = cell;
    } else {
        const bool sign_in = excess(cell.inside) < 0.0;
        r.bracket = bisect([&](double t) { return (excess(t) < 0.0) == sign_in; }, cell.inside,
                           cell.outside, width);
    }
    const double a = excess(r.bracket.inside);
    const double b = excess(r.bracket.outside);
    r.t = std::abs(a) <= std::abs(b) ? r.bracket.inside : r.bracket.outside;
    r.residual = std::abs(excess(r.t));
    return r;
}

inline constexpr int kQhScanCells = 2000;

/// Largest t below t_high where the spectrum stops being real. The walk uses
/// a uniform grid toward t_low, then bisects the first failing cell. The
/// reported t is the real-spectrum end of the final bracket.
inline ThresholdReport qh_threshold(const ChainModel& model, double t_high, double t_low,
                                    int cells = kQhScanCells, double width = kBracketWidth) {
    const auto real_at = [&](double t) { return spectrum_is_real(char_poly(model, t)); };
    if (!real_at(t_high) || real_at(t_low)) {
        throw PredicateNotBracketed("spectrum must be real at t_high and complex at t_low");
    }
    double inside = t_high;
    double outside = t_low;
    for (int i = 1; i <= cells; ++i) {
        const double t = t_high + (t_low - t_high) * static_cast<double>(i) / cells;
        if (!real_at(t)) {
            outside = t;
            break;
        }
        inside = t;
    }
    ThresholdReport r;
    r.kind = ThresholdKind::QhLoss;
    r.bracket = bisect(real_at, inside, outside, width);
    r.t = r.bracket.inside;
    r.residual = r.bracket.width();
    return r;
}

// ---------------------------------------------------------------------------
// Label tracking

/// Carries labels from `ref` onto `next` by minimum total |s| displacement.
inline void track_labels(const SpectrumSample& ref, SpectrumSample& next) {
    const int J = static_cast<int>(ref.roots.sRoots.size());
    std::vector<double> cost(static_cast<std::size_t>(J) * static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        for (int j = 0; j < J; ++j) {
            cost[static_cast<std::size_t>(i * J + j)] =
                std::abs(ref.roots.sRoots[static_cast<std::size_t>(i)] -
                         next.roots.sRoots[static_cast<std::size_t>(j)]);
        }
    }
    const auto col = min_cost_assignment(cost, J);
    next.labels.assign(static_cast<std::size_t>(J), 0);
    for (int i = 0; i < J; ++i) {
        next.labels[static_cast<std::size_t>(col[static_cast<std::size_t>(i)])] =
            ref.labels[static_cast<std::size_t>(i)];
    }
}

/// Unperturbed labels 1, 3, ..., 2J-1 in ascending-s order.
inline void assign_initial_labels(SpectrumSample& s) {
    s.labels.resize(s.roots.sRoots.size());
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
        s.labels[i] = static_cast<int>(2 * i + 1);
    }
}

inline double grid_point(double t_start, double t_end, int steps, int i) {
    return t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

/// Uniform grid of `steps` points from t_start to t_end (either direction).
/// Failed samples are flagged and skipped by the tracker.
inline std::vector<SpectrumSample> scan(const ChainModel& model, double t_start, double t_end,
                                        int steps) {
    if (steps < 2) {
        throw std::invalid_argument("scan needs at least 2 steps");
    }
    std::vector<SpectrumSample> out;
    out.reserve(static_cast<std::size_t>(steps));
    std::optional<std::size_t> last_good;
    for (int i = 0; i < steps; ++i) {
        const double t = grid_point(t_start, t_end, steps, i);
        SpectrumSample s;
        try {
            s = spectrum_at(model, t);
        } catch (const NumericalError& e) {
            s.t = t;
            s.ok = false;
            s.error = e.what();
            out.push_back(std::move(s));
            continue;
        }
        if (last_good) {
            track_labels(out[*last_good], s);
        } else {
            assign_initial_labels(s);
        }
        out.push_back(std::move(s));
        last_good = out.size() - 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Merger classification

enum class MergerKind { Collision, ZeroCrossing, Degenerate };

inline const char* to_string(MergerKind k) {
    switch (k) {
        case MergerKind::Collision: return "collision";
        case MergerKind::ZeroCrossing: return "zero_crossing";
        case MergerKind::Degenerate: return "degenerate";
    }
    return "?";
}

struct MergerEvent {
    MergerKind kind = MergerKind::Degenerate;
    double t = 0.0;
    Bracket bracket;
    /// Recorded label pairs: two mirror images for a collision, one [-m, m]
    /// for a zero crossing, none for a degenerate event.
    std::vector<std::pair<int, int>> pairs;
};

struct MergerResult {
    MergerPattern pattern;
    std::vector<MergerEvent> events;
};

inline constexpr int kClassifySteps = 4000;

namespace detail {

struct LevelCounts {
    int nonneg = 0;  ///< s-roots >= kRealityLowerBound, i.e. real energy pairs
    int real = 0;    ///< all real s-roots
};

inline LevelCounts level_counts(const EvenCharPoly& q) {
    const double inf = std::numeric_limits<double>::infinity();
    return {count_real_roots_ge(q, kRealityLowerBound).total, count_real_roots_ge(q, -inf).total};
}

/// Number of vanishing low-order coefficients of q in root-scaled units,
/// i.e. the multiplicity of s = 0.
inline int zero_root_multiplicity(const EvenCharPoly& q) {
    const auto f = scaled(q.coeffs, root_scale(q.coeffs));
    int m = 0;
    while (m < f.degree() && std::abs(f[m]) <= kChainZeroTol) {
        ++m;
    }
    return m;
}

/// Indices of the two closest s-roots among those not clearly negative.
inline std::pair<std::size_t, std::size_t> closest_pair(const SpectrumSample& s) {
    const auto& r = s.roots.sRoots;
    std::pair<std::size_t, std::size_t> best{0, 1};
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].real() < -real_tolerance(r[i])) {
            continue;
        }
        for (std::size_t j = i + 1; j < r.size(); ++j) {
            if (r[j].real() < -real_tolerance(r[j])) {
                continue;
            }
            const double d = std::abs(r[i] - r[j]);
            if (d < gap) {
                gap = d;
                best = {i, j};
            }
        }
    }
    return best;
}

inline std::size_t nearest_to_zero(const SpectrumSample& s) {
    const auto& r = s.roots.sRoots;
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (std::abs(r[i]) < std::abs(r[best])) {
            best = i;
        }
    }
    return best;
}

class MergerWalker {
public:
    MergerWalker(const ChainModel& model, double width) : model_(model), width_(width) {}

    SpectrumSample tracked_sample(double t, const SpectrumSample& ref) const {
        auto s = spectrum_at(model_, t);
        track_labels(ref, s);
        return s;
    }

    LevelCounts counts(double t) const { return level_counts(char_poly(model_, t)); }

    /// Resolves every count drop between a (sample `at_a`) and b.
    void resolve_cell(const SpectrumSample& at_a, LevelCounts counts_a, double b,
                      LevelCounts counts_b, MergerResult& result) const {
        SpectrumSample cur = at_a;
        LevelCounts cur_counts = counts_a;
        int guard = 0;
        while (cur_counts.nonneg > counts_b.nonneg && guard++ <= model_.half_dim()) {
            const int level = cur_counts.nonneg;
            const Bracket br = bisect([&](double t) { return counts(t).nonneg >= level; }, cur.t,
                                      b, width_);
            const LevelCounts far = counts(br.outside);
            const SpectrumSample near = tracked_sample(br.inside, cur);
            const int drop = cur_counts.nonneg - far.nonneg;
            const int real_drop = cur_counts.real - far.real;

            MergerEvent ev;
            ev.bracket = br;
            ev.t = br.inside;
            if (drop == 2 && real_drop == 2) {
                const auto [i, j] = closest_pair(near);
                const auto& r = near.roots.sRoots;
                const double scale = 1.0 + std::max(std::abs(r[i]), std::abs(r[j]));
                if (std::abs(0.5 * (r[i] + r[j])) <= 1e-6 * scale) {
                    // A collision sitting on s = 0 merges four levels at E = 0.
                    ev.kind = MergerKind::Degenerate;
                } else {
                    const int m1 = std::min(near.labels[i], near.labels[j]);
                    const int m2 = std::max(near.labels[i], near.labels[j]);
                    ev.kind = MergerKind::Collision;
                    ev.pairs = {{-m2, -m1}, {m1, m2}};
                }
            } else if (drop == 1 && real_drop == 0) {
                const int m = near.labels[nearest_to_zero(near)];
                ev.kind = MergerKind::ZeroCrossing;
                ev.pairs = {{-m, m}};
                refine_zero_crossing(cur.t, br.outside, ev);
            } else {
                ev.kind = MergerKind::Degenerate;
            }
            record(ev, result);

            cur = tracked_sample(br.outside, near);
            cur_counts = far;
        }
    }

    /// Mergers sitting exactly on the last grid point.
    void resolve_endpoint(const SpectrumSample& end, MergerResult& result) const {
        const auto q = char_poly(model_, end.t);
        const int m0 = zero_root_multiplicity(q);
        const auto c = count_real_roots_ge(q, kRealityLowerBound);
        const int excess = (c.total - c.distinct) - std::max(m0 - 1, 0);
        MergerEvent ev;
        ev.t = end.t;
        ev.bracket = {end.t, end.t};
        if (m0 >= 2 || excess >= 2 || (m0 == 1 && excess >= 1)) {
            ev.kind = MergerKind::Degenerate;
        } else if (m0 == 1) {
            const int m = end.labels[nearest_to_zero(end)];
            ev.kind = MergerKind::ZeroCrossing;
            ev.pairs = {{-m, m}};
        } else if (excess == 1) {
            const auto [i, j] = closest_pair(end);
            const int m1 = std::min(end.labels[i], end.labels[j]);
            const int m2 = std::max(end.labels[i], end.labels[j]);
            ev.kind = MergerKind::Collision;
            ev.pairs = {{-m2, -m1}, {m1, m2}};
        } else {
            return;
        }
        record(ev, result);
    }

private:
    /// Moves a zero-crossing time onto the sign change of q(0; t) when the
    /// cell brackets one.
    void refine_zero_crossing(double a, double b, MergerEvent& ev) const {
        const auto q0 = [&](double t) { return char_poly(model_, t).coeffs.front(); };
        const double fa = q0(a);
        const double fb = q0(b);
        if (fa == 0.0) {
            ev.t = a;
            ev.bracket = {a, a};
            return;
        }
        if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) {
            return;
        }
        const bool sign_a = fa < 0.0;
        ev.bracket = bisect([&](double t) { return (q0(t) < 0.0) == sign_a; }, a, b, width_);
        ev.t = ev.bracket.inside;
    }

    static void record(const MergerEvent& ev, MergerResult& result) {
        if (ev.kind == MergerKind::Degenerate) {
            result.pattern.degenerate = true;
        }
        for (const auto& p : ev.pairs) {
            result.pattern.pairs.push_back(p);
        }
        result.events.push_back(ev);
    }

    const ChainModel& model_;
    double width_;
};

}  // namespace detail

/// Walks t from t_start to t_end and records which tracked levels merge.
/// A collision of two real s-roots labelled m1 < m2 merges E_{m1} with E_{m2}
/// and, mirrored, E_{-m2} with E_{-m1}; an s-root m crossing zero merges
/// E_{-m} with E_m. Events are refined by bisection on exact sign predicates.
inline MergerResult classify_mergers(const ChainModel& model, double t_start, double t_end,
                                     int steps = kClassifySteps, double width = kBracketWidth) {
    if (steps < 2) {
        throw std::invalid_argument("classification needs at least 2 steps");
    }
    if (!spectrum_is_real(char_poly(model, t_start))) {
        throw SpectrumNotReal("spectrum is not real at t = " + std::to_string(t_start));
    }
    detail::MergerWalker walker(model, width);
    MergerResult result;

    SpectrumSample prev = spectrum_at(model, t_start);
    assign_initial_labels(prev);
    detail::LevelCounts prev_counts = walker.counts(t_start);
    for (int i = 1; i < steps; ++i) {
        const double t = grid_point(t_start, t_end, steps, i);
        SpectrumSample cur = walker.tracked_sample(t, prev);
        const auto cur_counts = walker.counts(t);
        if (cur_counts.nonneg < prev_counts.nonneg) {
            walker.resolve_cell(prev, prev_counts, t, cur_counts, result);
        }
        prev = std::move(cur);
        prev_counts = cur_counts;
    }
    walker.resolve_endpoint(prev, result);

    std::set<int> covered;
    for (const auto& [a, b] : result.pattern.pairs) {
        covered.insert(a);
        covered.insert(b);
    }
    result.pattern.complete = !result.pattern.degenerate &&
                              covered.size() == static_cast<std::size_t>(model.dim());
    if (!result.pattern.degenerate && !validate_pattern(result.pattern, model.half_dim())) {
        result.pattern.degenerate = true;
        result.pattern.complete = false;
    }
    return result;
}

}  // namespace phchain
