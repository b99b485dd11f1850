#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phchain {

/// Base class for every failure the numerical routines report.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A coupling sits on its switch-off point, so the parity signature is ambiguous.
class DegenerateBond : public NumericalError {
public:
    DegenerateBond(int coupling, double weight)
        : NumericalError("degenerate bond at coupling " + std::to_string(coupling)),
          coupling_(coupling), weight_(weight) {}

    int coupling() const noexcept { return coupling_; }
    double weight() const noexcept { return weight_; }

private:
    int coupling_;
    double weight_;
};

/// Derivative-gcd deflation produced a chain that does not divide the input.
class IllConditioned : public NumericalError {
public:
    explicit IllConditioned(const std::string& what, double residual = 0.0)
        : NumericalError(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Simultaneous root iteration hit its cap. Carries the last iterate.
class NoConvergence : public NumericalError {
public:
    NoConvergence(std::vector<std::complex<double>> best, double residual, int iterations)
        : NumericalError("root iteration did not converge after " +
                         std::to_string(iterations) + " sweeps"),
          best_(std::move(best)), residual_(residual) {}

    const std::vector<std::complex<double>>& best_iterate() const noexcept { return best_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<std::complex<double>> best_;
    double residual_;
};

class NoRootInRange : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PredicateNotBracketed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Merger classification needs a fully real spectrum at the start of the walk.
class SpectrumNotReal : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace phchain
