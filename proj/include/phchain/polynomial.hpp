#pragma once

// Characteristic polynomial of the chain in the even variable s = E^2, a
// Sturm-chain real-root counter, and a simultaneous (Aberth-Ehrlich) complex
// root finder.
//
// The spectrum of every chain member is symmetric under E -> -E, so
// det(H - E) only has even powers of E and all spectral questions reduce to a
// degree-J polynomial q(s).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace phchain {

/// Dense univariate polynomial, coefficients in ascending powers.
template <typename T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) {}

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool empty() const noexcept { return c_.empty(); }
    const std::vector<T>& coeffs() const noexcept { return c_; }
    std::vector<T>& coeffs() noexcept { return c_; }
    T operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }
    T leading() const { return c_.back(); }

    template <typename X>
    X operator()(const X& x) const {
        X acc{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc = acc * x + X(*it);
        }
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) {
            return Polynomial(std::vector<T>{T(0)});
        }
        std::vector<T> d(c_.size() - 1);
        for (std::size_t j = 1; j < c_.size(); ++j) {
            d[j - 1] = static_cast<T>(j) * c_[j];
        }
        return Polynomial(std::move(d));
    }

    T max_abs() const {
        T m = 0;
        for (const T& x : c_) {
            m = std::max(m, static_cast<T>(std::abs(x)));
        }
        return m;
    }

    /// Drops leading coefficients with |c| <= tol * max|c|; keeps at least one.
    void trim(T rel_tol = T(0)) {
        const T cut = rel_tol * max_abs();
        while (c_.size() > 1 && std::abs(c_.back()) <= cut) {
            c_.pop_back();
        }
    }

    /// Rescales by a positive factor so that max|c| = 1.
    void normalize() {
        const T m = max_abs();
        if (m > T(0)) {
            for (T& x : c_) {
                x /= m;
            }
        }
    }

private:
    std::vector<T> c_;
};

/// Remainder of a / b. b must have a nonzero leading coefficient.
template <typename T>
Polynomial<T> remainder(const Polynomial<T>& a, const Polynomial<T>& b) {
    std::vector<T> r = a.coeffs();
    const int db = b.degree();
    const T lead = b.leading();
    for (int k = a.degree(); k >= db; --k) {
        const T factor = r[static_cast<std::size_t>(k)] / lead;
        for (int j = 0; j <= db; ++j) {
            r[static_cast<std::size_t>(k - db + j)] -= factor * b[j];
        }
        r[static_cast<std::size_t>(k)] = T(0);
    }
    r.resize(static_cast<std::size_t>(std::max(db, 1)));
    return Polynomial<T>(std::move(r));
}

/// q(s) = sum_j coeffs[j] s^j, the even part of det(H - E) with s = E^2.
struct EvenCharPoly {
    std::vector<double> coeffs;
    double sourceT = 0.0;

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

    template <typename X>
    X operator()(const X& s) const {
        X acc{};
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * s + X(*it);
        }
        return acc;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : coeffs) {
            m = std::max(m, std::abs(x));
        }
        return m;
    }
};

struct RootSet {
    std::vector<std::complex<double>> sRoots;
    /// +sqrt(s_i), -sqrt(s_i) for each sRoot in order (principal branch).
    std::vector<std::complex<double>> energies;
    bool allReal = false;
};

struct RealRootCount {
    int distinct = 0;
    /// Counted with multiplicity, recovered from the derivative-gcd chain.
    int total = 0;
};

/// Imaginary-part tolerance used to call an s-root real.
inline double real_tolerance(std::complex<double> s) { return 1e-9 * (1.0 + std::abs(s)); }

/// Lower bound used by the reality predicate; admits the exact E = 0 case.
inline constexpr double kRealityLowerBound = -1e-10;

/// det(H - E) as a polynomial in E via the three-term recurrence
///   p_k = (d_k - E) p_{k-1} + w p_{k-2}
/// where w is the signed weight of the bond (k-1, k).
inline Polynomial<long double> char_poly_full(std::span<const double> weights) {
    using Real = long double;
    const int J = static_cast<int>(weights.size());
    if (J < 1) {
        throw std::invalid_argument("need at least one coupling");
    }
    const int N = 2 * J;
    const auto d = diagonal(J);

    std::vector<Real> prev2{Real(1)};
    std::vector<Real> prev1{static_cast<Real>(d[0]), Real(-1)};
    for (int k = 2; k <= N; ++k) {
        const Real dk = static_cast<Real>(d[static_cast<std::size_t>(k - 1)]);
        const Real w = static_cast<Real>(
            weights[static_cast<std::size_t>(bond_coupling(k - 1, N) - 1)]);
        std::vector<Real> cur(static_cast<std::size_t>(k + 1), Real(0));
        for (std::size_t j = 0; j < prev1.size(); ++j) {
            cur[j] += dk * prev1[j];
            cur[j + 1] -= prev1[j];
        }
        for (std::size_t j = 0; j < prev2.size(); ++j) {
            cur[j] += w * prev2[j];
        }
        prev2 = std::move(prev1);
        prev1 = std::move(cur);
    }
    return Polynomial<Real>(std::move(prev1));
}

inline Polynomial<long double> char_poly_full(const ChainModel& model, double t) {
    const auto w = coupling_weights(model, t);
    return char_poly_full(std::span<const double>(w));
}

inline EvenCharPoly char_poly_weights(std::span<const double> weights, double t = 0.0) {
    const auto p = char_poly_full(weights);
    EvenCharPoly q;
    q.sourceT = t;
    q.coeffs.resize(weights.size() + 1);
    for (std::size_t j = 0; j < q.coeffs.size(); ++j) {
        q.coeffs[j] = static_cast<double>(p[static_cast<int>(2 * j)]);
    }
    return q;
}

inline EvenCharPoly char_poly(const ChainModel& model, double t) {
    const auto w = coupling_weights(model, t);
    return char_poly_weights(std::span<const double>(w), t);
}

/// |sum of s-roots (Vieta) - trace(H^2)/2|.
inline double sum_rule_check(const EvenCharPoly& q, const ChainModel& model, double t) {
    const int J = model.half_dim();
    const int N = model.dim();
    const double vieta = -q.coeffs[static_cast<std::size_t>(J - 1)] /
                         q.coeffs[static_cast<std::size_t>(J)];
    double trace = 0.0;
    for (double dk : diagonal(J)) {
        trace += dk * dk;
    }
    for (int k = 1; k < N; ++k) {
        trace -= 2.0 * coupling_state(model, bond_coupling(k, N), t).wSigned;
    }
    return std::abs(vieta - 0.5 * trace);
}

namespace detail {

using Real = long double;

/// Power of two close to the Fujiwara bound on |roots|, so that roots of
/// q(scale * u) are O(1). Scaling by a power of two is exact.
inline Real root_scale(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    const Real lead = std::abs(static_cast<Real>(c.back()));
    Real bound = 0;
    for (int j = 0; j < n; ++j) {
        const Real ratio = std::abs(static_cast<Real>(c[static_cast<std::size_t>(j)])) / lead;
        if (ratio > 0) {
            bound = std::max(bound, std::pow(ratio, Real(1) / static_cast<Real>(n - j)));
        }
    }
    if (!(bound > 0) || !std::isfinite(static_cast<double>(bound))) {
        return 1;
    }
    return std::ldexp(Real(1), static_cast<int>(std::ceil(std::log2(static_cast<double>(bound)))));
}

inline Polynomial<Real> scaled(const std::vector<double>& c, Real scale) {
    std::vector<Real> u(c.size());
    Real power = 1;
    for (std::size_t j = 0; j < c.size(); ++j) {
        u[j] = static_cast<Real>(c[j]) * power;
        power *= scale;
    }
    Polynomial<Real> p(std::move(u));
    p.normalize();
    return p;
}

inline constexpr Real kChainZeroTol = 1e-13L;
inline constexpr Real kDeflationCheckTol = 1e-8L;

inline int sign_of(Real x) { return (x > 0) - (x < 0); }

inline int sign_variations(const std::vector<Polynomial<Real>>& chain, Real x) {
    int count = 0;
    int last = 0;
    for (const auto& f : chain) {
        int s;
        if (std::isinf(static_cast<double>(x))) {
            s = sign_of(f.leading());
            if (x < 0 && f.degree() % 2 == 1) {
                s = -s;
            }
        } else {
            s = sign_of(f(x));
        }
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++count;
        }
        last = s;
    }
    return count;
}

/// Sturm sequence f, f', -rem(...), ... ; the last entry is gcd(f, f').
inline std::vector<Polynomial<Real>> sturm_chain(Polynomial<Real> f) {
    f.trim(kChainZeroTol);
    f.normalize();
    std::vector<Polynomial<Real>> chain;
    chain.push_back(f);
    if (f.degree() < 1) {
        return chain;
    }
    auto df = f.derivative();
    df.normalize();
    chain.push_back(df);
    while (chain.back().degree() >= 1) {
        auto r = remainder(chain[chain.size() - 2], chain.back());
        if (r.max_abs() <= kChainZeroTol) {
            break;
        }
        for (auto& x : r.coeffs()) {
            x = -x;
        }
        r.trim(kChainZeroTol);
        r.normalize();
        chain.push_back(std::move(r));
    }
    return chain;
}

inline RealRootCount count_scaled(const Polynomial<Real>& f, Real lower, int depth = 0) {
    RealRootCount out;
    if (f.degree() < 1) {
        return out;
    }
    const auto chain = sturm_chain(f);
    const Real inf = std::numeric_limits<Real>::infinity();
    out.distinct = sign_variations(chain, lower) - sign_variations(chain, inf);
    out.total = out.distinct;

    Polynomial<Real> g = chain.back();
    if (g.degree() >= 1 && chain.size() > 1) {
        Polynomial<Real> fn = chain.front();
        const auto check = remainder(fn, g);
        if (check.max_abs() > kDeflationCheckTol) {
            throw IllConditioned("derivative-gcd deflation does not divide the polynomial",
                                 static_cast<double>(check.max_abs()));
        }
        if (depth > f.degree()) {
            throw IllConditioned("deflation recursion did not terminate");
        }
        out.total += count_scaled(g, lower, depth + 1).total;
    }
    return out;
}

}  // namespace detail

/// Real roots of q in [lower, +inf). Pass -infinity for all real roots.
inline RealRootCount count_real_roots_ge(const EvenCharPoly& q, double lower) {
    if (q.max_abs() == 0.0) {
        throw std::invalid_argument("polynomial is identically zero");
    }
    EvenCharPoly trimmed = q;
    while (trimmed.coeffs.size() > 1 && trimmed.coeffs.back() == 0.0) {
        trimmed.coeffs.pop_back();
    }
    const detail::Real scale = detail::root_scale(trimmed.coeffs);
    const auto f = detail::scaled(trimmed.coeffs, scale);
    const detail::Real lo = std::isinf(lower) ? static_cast<detail::Real>(lower)
                                              : static_cast<detail::Real>(lower) / scale;
    return detail::count_scaled(f, lo);
}

/// True when every s-root is real and >= kRealityLowerBound, i.e. all 2J energies are real.
inline bool spectrum_is_real(const EvenCharPoly& q) {
    return count_real_roots_ge(q, kRealityLowerBound).total == q.degree();
}

inline RootSet make_root_set(std::vector<std::complex<double>> s_roots) {
    RootSet rs;
    rs.allReal = true;
    for (auto& s : s_roots) {
        const double tol = real_tolerance(s);
        if (std::abs(s.imag()) <= tol) {
            s = {s.real(), 0.0};
        } else {
            rs.allReal = false;
        }
        if (s.real() < -tol) {
            rs.allReal = false;
        }
    }
    std::sort(s_roots.begin(), s_roots.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    rs.energies.reserve(2 * s_roots.size());
    for (const auto& s : s_roots) {
        const auto e = std::sqrt(s);
        rs.energies.push_back(e);
        rs.energies.push_back(-e);
    }
    rs.sRoots = std::move(s_roots);
    return rs;
}

inline constexpr int kMaxAberthSweeps = 500;

/// All J complex roots of q by Aberth-Ehrlich iteration on the rescaled
/// polynomial. Seeds lie on a circle of radius 1 + max|c_j / c_J| at angles
/// 2 pi k / J + 0.4, so results are reproducible.
inline RootSet all_roots(const EvenCharPoly& q) {
    using detail::Real;
    using Cx = std::complex<Real>;

    const int J = q.degree();
    if (J < 1 || q.coeffs.back() == 0.0) {
        throw std::invalid_argument("all_roots needs a polynomial of degree >= 1");
    }
    // Exact roots at the origin are split off; iterating on a multiple root
    // at zero would stall at |s| ~ sqrt(tolerance).
    int zeros = 0;
    while (zeros < J && q.coeffs[static_cast<std::size_t>(zeros)] == 0.0) {
        ++zeros;
    }
    if (zeros > 0) {
        std::vector<std::complex<double>> roots(static_cast<std::size_t>(zeros));
        if (zeros < J) {
            const EvenCharPoly rest{std::vector<double>(q.coeffs.begin() + zeros, q.coeffs.end()),
                                    q.sourceT};
            const auto tail = all_roots(rest);
            roots.insert(roots.end(), tail.sRoots.begin(), tail.sRoots.end());
        }
        return make_root_set(std::move(roots));
    }
    if (J == 1) {
        return make_root_set({std::complex<double>(-q.coeffs[0] / q.coeffs[1], 0.0)});
    }

    const Real scale = detail::root_scale(q.coeffs);
    const auto f = detail::scaled(q.coeffs, scale);
    const auto df = f.derivative();
    const Real lead = f.leading();

    Real radius = 0;
    for (int j = 0; j < J; ++j) {
        radius = std::max(radius, std::abs(f[j] / lead));
    }
    radius += 1;

    std::vector<Cx> z(static_cast<std::size_t>(J));
    for (int k = 0; k < J; ++k) {
        const Real angle = 2 * std::numbers::pi_v<Real> * k / J + Real(0.4);
        z[static_cast<std::size_t>(k)] = std::polar(radius, angle);
    }

    const Real eps = std::numeric_limits<Real>::epsilon();
    auto magnitude_sum = [&](Real r) {
        Real acc = 0;
        for (int j = J; j >= 0; --j) {
            acc = acc * r + std::abs(f[j]);
        }
        return acc;
    };

    std::vector<char> done(static_cast<std::size_t>(J), 0);
    int remaining = J;
    int sweep = 0;
    for (; sweep < kMaxAberthSweeps && remaining > 0; ++sweep) {
        for (int k = 0; k < J; ++k) {
            auto& zk = z[static_cast<std::size_t>(k)];
            if (done[static_cast<std::size_t>(k)]) {
                continue;
            }
            const Cx p = f(zk);
            const Cx dp = df(zk);
            const Real absz = std::abs(zk);
            const bool converged = std::abs(p) == 0 ||
                                   std::abs(p) <= Real(1e-11) * (1 + absz) * std::abs(dp) ||
                                   std::abs(p) <= 32 * eps * magnitude_sum(absz);
            if (std::abs(p) != 0) {
                Cx repulsion = 0;
                for (int j = 0; j < J; ++j) {
                    if (j != k) {
                        const Cx gap = zk - z[static_cast<std::size_t>(j)];
                        if (gap != Cx(0)) {
                            repulsion += Real(1) / gap;
                        }
                    }
                }
                const Cx ratio = p / dp;
                const Cx step = ratio / (Real(1) - ratio * repulsion);
                if (std::isfinite(static_cast<double>(std::abs(step)))) {
                    zk -= step;
                }
            }
            if (converged) {
                done[static_cast<std::size_t>(k)] = 1;
                --remaining;
            }
        }
    }

    std::vector<std::complex<double>> roots(static_cast<std::size_t>(J));
    for (int k = 0; k < J; ++k) {
        const Cx s = z[static_cast<std::size_t>(k)] * scale;
        roots[static_cast<std::size_t>(k)] = {static_cast<double>(s.real()),
                                              static_cast<double>(s.imag())};
    }
    if (remaining > 0) {
        Real worst = 0;
        for (const auto& zk : z) {
            worst = std::max(worst, std::abs(f(zk)) / magnitude_sum(std::abs(zk)));
        }
        throw NoConvergence(std::move(roots), static_cast<double>(worst), sweep);
    }
    return make_root_set(std::move(roots));
}

}  // namespace phchain
