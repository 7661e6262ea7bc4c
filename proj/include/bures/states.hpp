#pragma once

// Density matrices, fixed-state spectra, fidelity and Bures distance.

#include <vector>

#include "bures/matrix.hpp"

namespace bures::states {

/// Hermitian, unit-trace (to 1e-10), PSD (eigenvalues >= -1e-10) matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(const linalg::HermitianMatrix& h);
    explicit DensityMatrix(const linalg::ComplexMatrix& m);

    /// For matrices that are valid by construction (sampler, kicked top).
    /// Only the Hermitian symmetrization is applied.
    static DensityMatrix trusted(const linalg::ComplexMatrix& m);

    int dim() const { return h_.dim(); }
    const linalg::HermitianMatrix& hermitian() const { return h_; }
    const linalg::ComplexMatrix& matrix() const { return h_.matrix(); }
    double purity() const;

    /// Re-runs the trace and eigenvalue checks; throws DomainError.
    void validate() const;

private:
    DensityMatrix() = default;
    linalg::HermitianMatrix h_;
};

/// Eigenvalues of a fixed state sigma. They must be >= 0 and sum to 1
/// within 1e-12.
class FixedStateSpectrum {
public:
    explicit FixedStateSpectrum(std::vector<double> eigs);

    static FixedStateSpectrum pure(int n);
    static FixedStateSpectrum maximally_mixed(int n);

    int dim() const { return static_cast<int>(eigs_.size()); }
    const std::vector<double>& eigs() const { return eigs_; }
    double max_eig() const;

    bool strictly_positive() const;
    /// 1/eig_j; throws DomainError when an eigenvalue is zero.
    std::vector<double> inverse_eigs() const;

    /// Indices whose eigenvalue coincides with another one (relative 1e-14).
    const std::vector<bool>& degenerate() const { return degenerate_; }
    bool has_degeneracy() const;

private:
    std::vector<double> eigs_;
    std::vector<bool> degenerate_;
};

DensityMatrix from_spectrum(const FixedStateSpectrum& spec);

/// sqrt(a) b sqrt(a)
linalg::HermitianMatrix symmetrized_product(const DensityMatrix& a, const DensityMatrix& b);

/// (sum_i sqrt(lambda_i))^2 over the eigenvalues of sqrt(r1) r2 sqrt(r1).
double fidelity(const DensityMatrix& r1, const DensityMatrix& r2);

/// 2 - 2 sqrt(F)
double bures_distance_sq(const DensityMatrix& r1, const DensityMatrix& r2);

/// sqrt(F) and the eigenvalues of the symmetrized product, with sqrt(a)
/// supplied by the caller. Used by the Monte Carlo loops, which keep one
/// state fixed.
struct RootFidelity {
    double root_fidelity = 0.0;
    linalg::RealVector product_eigs;  ///< ascending, clamped at 0
};
RootFidelity root_fidelity_with_sqrt(const linalg::HermitianMatrix& sqrt_a, const DensityMatrix& b);

}  // namespace bures::states
