#pragma once

// Closed-form spectral densities and mean root fidelities for
//   tau = sqrt(sigma) rho sqrt(sigma)     (sigma fixed, rho random)
//   chi = sqrt(rho1) rho2 sqrt(rho1)      (both random)
// with rho, rho1, rho2 Hilbert-Schmidt distributed with ancilla sizes m, m1, m2.

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bures/specfun.hpp"
#include "bures/states.hpp"

namespace bures::analytic {

enum class Scenario { Fixed, Pure, Mixed, TwoRandom };

std::string to_string(Scenario s);
/// "fixed", "pure", "mixed", "two"; throws DomainError otherwise.
Scenario parse_scenario(const std::string& s);

struct MeanFidelityResult {
    double mean_root_fidelity = 1.0;
    double mean_sq_bures = 0.0;  ///< 2 - 2 * mean_root_fidelity
    Scenario scenario = Scenario::Pure;
};

MeanFidelityResult make_mean_result(double mean_root_fidelity, Scenario scenario);

// ---------------------------------------------------------------------------
// Mean root fidelity
// ---------------------------------------------------------------------------

/// Determinant formula for a sigma with strictly positive, pairwise distinct
/// eigenvalues. The Cramer ratio sum_i det(xi_i) / det(V) is evaluated in
/// 50-digit binary floating point; spectra whose Vandermonde conditioning
/// would eat more than 30 of those digits raise DegenerateSpectrum.
MeanFidelityResult mean_root_fidelity_fixed(const states::FixedStateSpectrum& sigma, int m);

/// (m)_{1/2} / (nm)_{1/2}
MeanFidelityResult mean_root_fidelity_pure(int n, int m);

/// sigma = I/n
MeanFidelityResult mean_root_fidelity_mixed(int n, int m);

MeanFidelityResult mean_root_fidelity_two_random(int n, int m1, int m2);

/// Estimated number of decimal digits lost to cancellation in the
/// determinant formulas: max_j sum_{l != j} log10(max|a| / |a_j - a_l|).
double vandermonde_digit_loss(const std::vector<double>& a);

inline constexpr double kMaxDigitLoss = 30.0;

/// Spreads each cluster of equal eigenvalues symmetrically by multiples of
/// delta (1e-5 of the mean gap between distinct eigenvalues, or of the mean
/// eigenvalue if all coincide), evaluates f at delta and delta/2, and
/// Richardson-extrapolates assuming an O(delta^2) error (the symmetric
/// spread cancels the first-order term). Zero eigenvalues are rejected.
double perturbed_limit(const states::FixedStateSpectrum& sigma,
                       const std::function<double(const states::FixedStateSpectrum&)>& f);

/// Spectrum used by perturbed_limit at spread `delta`.
states::FixedStateSpectrum spread_degenerate(const states::FixedStateSpectrum& sigma, double delta);

// ---------------------------------------------------------------------------
// Spectral densities
// ---------------------------------------------------------------------------

/// Value returned at an endpoint where a density diverges.
inline constexpr double kDivergent = std::numeric_limits<double>::infinity();

/// Marginal density of a generic eigenvalue of tau for a non-degenerate
/// sigma. Support [0, max eig(sigma)]; endpoints return the one-sided limit.
class TauDensity {
public:
    TauDensity(const states::FixedStateSpectrum& sigma, int m);
    double operator()(double lambda) const;
    std::pair<double, double> support() const { return {0.0, upper_}; }
    /// Interior kinks (the smaller eigenvalues of sigma).
    const std::vector<double>& breakpoints() const { return breaks_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double upper_;
    std::vector<double> breaks_;
};

double density_tau(const states::FixedStateSpectrum& sigma, int m, double lambda);

/// Beta(m, nm - m) density of the fidelity with a pure sigma; n >= 2.
double fidelity_pdf_pure(int n, int m, double f);

/// Density of a generic eigenvalue of tau with sigma = I/n; support [0, 1/n].
class MixedTauDensity {
public:
    MixedTauDensity(int n, int m);
    double operator()(double lambda) const;
    std::pair<double, double> support() const { return {0.0, 1.0 / n_}; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    int n_;
};

double density_tau_mixed(int n, int m, double lambda);

/// Density of a generic eigenvalue of chi; n >= 2, support [0, 1]. At mu = 0
/// returns kDivergent when m1 = m2 = n, the finite limit when exactly one
/// of them equals n, and 0 otherwise.
class ChiDensity {
public:
    ChiDensity(int n, int m1, int m2);
    double operator()(double mu) const;
    std::pair<double, double> support() const { return {0.0, 1.0}; }
    /// Limit mu -> 0+ (kDivergent when it is infinite).
    double limit_at_zero() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    int n_, m1_, m2_;
};

double density_chi(int n, int m1, int m2, double mu);

// ---------------------------------------------------------------------------
// Grids and integrals
// ---------------------------------------------------------------------------

using Density = std::function<double(double)>;

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// Adaptive Gauss-Kronrod integral of weight(x) * density(x) over
/// [lo, hi], split at the given breakpoints. Nodes never touch the ends, so
/// integrable endpoint singularities are fine.
IntegralResult integrate(const Density& density, std::pair<double, double> support,
                         const std::vector<double>& breakpoints = {},
                         const Density& weight = nullptr, double tol = 1e-10);

struct GridDensity {
    std::vector<double> abscissae;
    std::vector<double> values;
    std::pair<double, double> support{0.0, 1.0};
    double normalization = 0.0;   ///< adaptive quadrature of the density
    double trapezoid = 0.0;       ///< trapezoid rule over the grid points
    bool normalization_ok = false;
    std::string warning;
};

/// Chebyshev-distributed interior points (denser near both ends of the
/// support). normalization_ok is |normalization - 1| <= tol.
GridDensity grid_density(const Density& density, int points, std::pair<double, double> support,
                         const std::vector<double>& breakpoints = {}, double tol = 1e-5);

}  // namespace bures::analytic
