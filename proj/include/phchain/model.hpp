#pragma once

// Tridiagonal N = 2J state chain Hamiltonians with couplings symmetric about
// the center:
//
//   H[k][k]   = 2k - N - 1                      (k = 1..N)
//   H[k][k+1] = g_{m},  H[k+1][k] = -g_{m},     m = min(k, N - k)
//   g_n^2     = n (N - n) (1 - xi_n(t))
//   xi_n(t)   = t + t^2 + ... + t^{J-1} + G_n t^J
//
// Coupling index n = 1 is the outermost bond, n = J the central one.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace phchain {

class ChainModel {
public:
    ChainModel(int half_dim, std::vector<double> coefficients)
        : J_(half_dim), G_(std::move(coefficients)) {
        if (J_ < 1) {
            throw std::invalid_argument("half-dimension J must be >= 1");
        }
        if (G_.size() != static_cast<std::size_t>(J_)) {
            throw std::invalid_argument("expected " + std::to_string(J_) +
                                        " coefficients, got " + std::to_string(G_.size()));
        }
    }

    /// All couplings share the same leading coefficient.
    static ChainModel uniform(int half_dim, double coefficient) {
        return ChainModel(half_dim, std::vector<double>(static_cast<std::size_t>(half_dim),
                                                        coefficient));
    }

    int half_dim() const noexcept { return J_; }
    int dim() const noexcept { return 2 * J_; }
    const std::vector<double>& coefficients() const noexcept { return G_; }
    double coefficient(int n) const { return G_.at(static_cast<std::size_t>(n - 1)); }

    /// n (N - n), the coupling strength squared at xi_n = 0.
    double max_weight(int n) const { check_index(n); return static_cast<double>(n * (dim() - n)); }

    void check_index(int n) const {
        if (n < 1 || n > J_) {
            throw std::out_of_range("coupling index " + std::to_string(n) + " outside 1.." +
                                    std::to_string(J_));
        }
    }

private:
    int J_;
    std::vector<double> G_;
};

struct CouplingState {
    int n = 0;
    double xi = 0.0;
    /// g_n^2 with sign: positive for a real antisymmetric bond, negative when
    /// the literal matrix entry is imaginary.
    double wSigned = 0.0;
};

struct ParitySignature {
    std::vector<int> signs;

    bool operator==(const ParitySignature&) const = default;
};

/// Unperturbed levels -(N-1), -(N-3), ..., N-1.
inline std::vector<double> diagonal(int half_dim) {
    if (half_dim < 1) {
        throw std::invalid_argument("half-dimension J must be >= 1");
    }
    const int N = 2 * half_dim;
    std::vector<double> d(static_cast<std::size_t>(N));
    for (int k = 1; k <= N; ++k) {
        d[static_cast<std::size_t>(k - 1)] = static_cast<double>(2 * k - N - 1);
    }
    return d;
}

inline double xi(const ChainModel& model, int n, double t) {
    model.check_index(n);
    const int J = model.half_dim();
    // Horner form of t + t^2 + ... + t^{J-1} + G_n t^J.
    double acc = model.coefficient(n);
    for (int j = J - 1; j >= 1; --j) {
        acc = acc * t + 1.0;
    }
    return acc * t;
}

inline CouplingState coupling_state(const ChainModel& model, int n, double t) {
    const double x = xi(model, n, t);
    return {n, x, model.max_weight(n) * (1.0 - x)};
}

/// Signed weights w_1..w_J for all couplings at parameter t.
inline std::vector<double> coupling_weights(const ChainModel& model, double t) {
    std::vector<double> w(static_cast<std::size_t>(model.half_dim()));
    for (int n = 1; n <= model.half_dim(); ++n) {
        w[static_cast<std::size_t>(n - 1)] = coupling_state(model, n, t).wSigned;
    }
    return w;
}

/// Coupling index of the bond between sites k and k+1 (1-based, k = 1..N-1).
inline int bond_coupling(int k, int N) noexcept { return k < N - k ? k : N - k; }

/// Dense matrix with explicit square roots. The spectral code never uses it;
/// it exists for validation and for the parity diagnostics.
inline Eigen::MatrixXcd materialize_weights(const std::vector<double>& weights) {
    const int J = static_cast<int>(weights.size());
    const int N = 2 * J;
    const auto d = diagonal(J);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        H(k, k) = d[static_cast<std::size_t>(k)];
    }
    for (int k = 1; k < N; ++k) {
        const double w = weights[static_cast<std::size_t>(bond_coupling(k, N) - 1)];
        const std::complex<double> g = std::sqrt(std::complex<double>(w, 0.0));
        H(k - 1, k) = g;
        H(k, k - 1) = -g;
    }
    return H;
}

inline Eigen::MatrixXcd materialize(const ChainModel& model, double t) {
    return materialize_weights(coupling_weights(model, t));
}

/// Diagonal sign matrix P with P H P = H^dagger, normalized to P_11 = +1.
inline ParitySignature find_parity_signature(const ChainModel& model, double t) {
    const int N = model.dim();
    ParitySignature sig;
    sig.signs.assign(static_cast<std::size_t>(N), 1);
    for (int k = 1; k < N; ++k) {
        const int n = bond_coupling(k, N);
        const double w = coupling_state(model, n, t).wSigned;
        if (std::abs(w) < 1e-12 * model.max_weight(n)) {
            throw DegenerateBond(n, w);
        }
        // Real antisymmetric bond flips the sign; an imaginary (Hermitian) bond keeps it.
        const int link = w > 0.0 ? -1 : 1;
        sig.signs[static_cast<std::size_t>(k)] = sig.signs[static_cast<std::size_t>(k - 1)] * link;
    }
    return sig;
}

/// max |P H P - H^dagger| entrywise.
inline double parity_defect(const Eigen::MatrixXcd& H, const ParitySignature& sig) {
    const Eigen::Index N = H.rows();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j) {
            const double s = sig.signs[static_cast<std::size_t>(i)] *
                             sig.signs[static_cast<std::size_t>(j)];
            const auto diff = s * H(i, j) - std::conj(H(j, i));
            worst = std::max(worst, std::abs(diff));
        }
    }
    return worst;
}

}  // namespace phchain
