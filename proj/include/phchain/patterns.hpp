#pragma once

// Combinatorics of level mergers. The 2J unperturbed levels carry the odd
// labels -(2J-1), ..., -1, 1, ..., 2J-1. A complete merger pattern pairs every
// label with exactly one partner, the pairing is invariant under the mirror
// (a, b) -> (-b, -a), and no two connections interleave.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace phchain {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct MergerPattern {
    /// (low, high) label pairs, low < high.
    std::vector<std::pair<int, int>> pairs;
    bool complete = false;
    bool degenerate = false;

    /// Pairs sorted by their lower label.
    std::vector<std::pair<int, int>> sorted_pairs() const {
        auto out = pairs;
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// Shorthand such as {[-3,-1],[1,3]}.
inline std::string to_string(const MergerPattern& p) {
    std::string s = "{";
    bool first = true;
    for (const auto& [a, b] : p.sorted_pairs()) {
        if (!first) {
            s += ',';
        }
        first = false;
        s += '[' + std::to_string(a) + ',' + std::to_string(b) + ']';
    }
    return s + '}';
}

inline MergerPattern make_pattern(std::vector<std::pair<int, int>> pairs, bool complete = true) {
    MergerPattern p;
    p.pairs = std::move(pairs);
    p.complete = complete;
    return p;
}

/// Mirror-closed, non-crossing, odd in-range distinct labels; a complete
/// pattern must also cover all 2J labels. J defaults to the smallest chain
/// that holds every label.
inline bool validate_pattern(const MergerPattern& p, std::optional<int> half_dim = std::nullopt) {
    int max_label = 0;
    std::set<int> labels;
    for (const auto& [a, b] : p.pairs) {
        if (a >= b) {
            return false;
        }
        for (int x : {a, b}) {
            if (x % 2 == 0) {
                return false;
            }
            if (!labels.insert(x).second) {
                return false;
            }
            max_label = std::max(max_label, std::abs(x));
        }
    }
    const int J = half_dim.value_or((max_label + 1) / 2);
    if (max_label > 2 * J - 1) {
        return false;
    }

    std::set<std::pair<int, int>> arcs(p.pairs.begin(), p.pairs.end());
    for (const auto& [a, b] : p.pairs) {
        if (!arcs.count({-b, -a})) {
            return false;
        }
    }
    for (const auto& [a, b] : p.pairs) {
        for (const auto& [c, d] : p.pairs) {
            if (a < c && c < b && b < d) {
                return false;
            }
        }
    }
    if (p.complete && labels.size() != static_cast<std::size_t>(2 * J)) {
        return false;
    }
    return true;
}

/// P^(N) for N = 0, 2, ..., max_dim from the two coupled recurrences
///   P(4K)   - P(4K-2) = sum_{i<K} P(2K-2-2i) P(4i)
///   P(4L+2) - P(4L)   = sum_{i<L} P(2L-2-2i) P(4i+2)
/// seeded with P(0) = 1. Entry [N/2] holds P^(N).
inline std::vector<BigInt> recurrence_counts(int max_dim) {
    if (max_dim < 0) {
        throw std::invalid_argument("dimension must be non-negative");
    }
    std::vector<BigInt> P(static_cast<std::size_t>(max_dim / 2) + 1);
    const auto at = [&](int N) -> const BigInt& { return P[static_cast<std::size_t>(N / 2)]; };
    P[0] = 1;
    for (int N = 2; N <= max_dim; N += 2) {
        BigInt q = 0;
        if (N % 4 == 0) {
            const int K = N / 4;
            for (int i = 0; i < K; ++i) {
                q += at(2 * K - 2 - 2 * i) * at(4 * i);
            }
        } else {
            const int L = (N - 2) / 4;
            for (int i = 0; i < L; ++i) {
                q += at(2 * L - 2 - 2 * i) * at(4 * i + 2);
            }
        }
        P[static_cast<std::size_t>(N / 2)] = at(N - 2) + q;
    }
    return P;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

struct PatternCountTable {
    int maxK = 0;
    std::vector<BigInt> P4K;
    std::vector<BigInt> P4Kplus2;
    /// Signed R^(K) = (P^(4K) - C(2K,K)) / 2.
    std::vector<Rational> R;
    /// Signed R^(K) - S^(K), S^(K) = (P^(4K+2) - C(2K+1,K)) / 4.
    std::vector<Rational> RminusS;
};

struct BinomialDeltas {
    std::vector<Rational> R;
    std::vector<Rational> S;
    std::vector<Rational> RminusS;
    std::vector<Rational> absR;
    std::vector<Rational> absRminusS;
};

inline BinomialDeltas binomial_deltas(const PatternCountTable& table) {
    BinomialDeltas out;
    for (int K = 0; K <= table.maxK; ++K) {
        const auto k = static_cast<std::size_t>(K);
        const Rational r = Rational(table.P4K[k] - binomial(2 * K, K)) / 2;
        const Rational s = Rational(table.P4Kplus2[k] - binomial(2 * K + 1, K)) / 4;
        out.R.push_back(r);
        out.S.push_back(s);
        out.RminusS.push_back(r - s);
        out.absR.push_back(abs(r));
        out.absRminusS.push_back(abs(r - s));
    }
    return out;
}

inline PatternCountTable enumerate_counts(int maxK) {
    if (maxK < 0) {
        throw std::invalid_argument("maxK must be non-negative");
    }
    const auto P = recurrence_counts(4 * maxK + 2);
    PatternCountTable table;
    table.maxK = maxK;
    for (int K = 0; K <= maxK; ++K) {
        table.P4K.push_back(P[static_cast<std::size_t>(2 * K)]);
        table.P4Kplus2.push_back(P[static_cast<std::size_t>(2 * K + 1)]);
    }
    const auto deltas = binomial_deltas(table);
    table.R = deltas.R;
    table.RminusS = deltas.RminusS;
    return table;
}

inline constexpr int kMaxBruteForceHalfDim = 10;

/// Every mirror-symmetric non-crossing perfect matching of the 2J labels,
/// found by filtering all non-crossing matchings.
inline std::vector<MergerPattern> brute_force_patterns(int half_dim) {
    if (half_dim < 1 || half_dim > kMaxBruteForceHalfDim) {
        throw std::invalid_argument("brute force supports 1 <= J <= " +
                                    std::to_string(kMaxBruteForceHalfDim));
    }
    const int n = 2 * half_dim;
    const auto label = [n](int pos) { return 2 * pos - (n - 1); };

    std::vector<MergerPattern> out;
    std::vector<int> partner(static_cast<std::size_t>(n), -1);

    // Pair the first unmatched position with each position that leaves an
    // even-sized interior, then recurse. Interiors are matched before the rest,
    // so every generated matching is non-crossing.
    auto recurse = [&](auto&& self, int first) -> void {
        while (first < n && partner[static_cast<std::size_t>(first)] >= 0) {
            ++first;
        }
        if (first == n) {
            for (int a = 0; a < n; ++a) {
                const int b = partner[static_cast<std::size_t>(a)];
                const int ma = n - 1 - b;
                if (partner[static_cast<std::size_t>(ma)] != n - 1 - a) {
                    return;
                }
            }
            MergerPattern p;
            p.complete = true;
            for (int a = 0; a < n; ++a) {
                const int b = partner[static_cast<std::size_t>(a)];
                if (a < b) {
                    p.pairs.emplace_back(label(a), label(b));
                }
            }
            out.push_back(std::move(p));
            return;
        }
        for (int b = first + 1; b < n; b += 2) {
            if (partner[static_cast<std::size_t>(b)] >= 0) {
                break;
            }
            partner[static_cast<std::size_t>(first)] = b;
            partner[static_cast<std::size_t>(b)] = first;
            self(self, first + 1);
            partner[static_cast<std::size_t>(first)] = -1;
            partner[static_cast<std::size_t>(b)] = -1;
        }
    };
    recurse(recurse, 0);
    return out;
}

inline BigInt brute_force_count(int half_dim) {
    return BigInt(brute_force_patterns(half_dim).size());
}

}  // namespace phchain
