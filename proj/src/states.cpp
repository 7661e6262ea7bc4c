#include "bures/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bures/error.hpp"

namespace bures::states {

using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kNegTol = 1e-10;
constexpr double kFidelitySlack = 1e-9;

}  // namespace

DensityMatrix::DensityMatrix(const HermitianMatrix& h) : h_(h) { validate(); }

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : h_(HermitianMatrix(m)) { validate(); }

DensityMatrix DensityMatrix::trusted(const ComplexMatrix& m) {
    DensityMatrix d;
    d.h_ = HermitianMatrix::from_trusted(m);
    return d;
}

void DensityMatrix::validate() const {
    if (h_.dim() == 0) throw DimensionMismatch("DensityMatrix: empty matrix");
    if (std::abs(h_.trace() - 1.0) > kTraceTol)
        throw DomainError("DensityMatrix: trace differs from 1");
    if (linalg::eigvalsh(h_).minCoeff() < -kNegTol)
        throw DomainError("DensityMatrix: matrix is not positive semidefinite");
}

double DensityMatrix::purity() const {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return h_.matrix().squaredNorm();
}

FixedStateSpectrum::FixedStateSpectrum(std::vector<double> eigs) : eigs_(std::move(eigs)) {
    if (eigs_.empty()) throw DimensionMismatch("FixedStateSpectrum: empty spectrum");
    for (double e : eigs_)
        if (!(e >= 0.0) || !std::isfinite(e))
            throw DomainError("FixedStateSpectrum: eigenvalues must be finite and non-negative");
    const double total = std::accumulate(eigs_.begin(), eigs_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
        throw DomainError("FixedStateSpectrum: eigenvalues must sum to 1");
    const std::size_t n = eigs_.size();
    degenerate_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(eigs_[i] - eigs_[j]) <= 1e-14 * std::max(eigs_[i], eigs_[j]))
                degenerate_[i] = degenerate_[j] = true;
}

FixedStateSpectrum FixedStateSpectrum::pure(int n) {
    if (n < 1) throw DomainError("FixedStateSpectrum::pure: n must be positive");
    std::vector<double> e(n, 0.0);
    e[0] = 1.0;
    return FixedStateSpectrum(std::move(e));
}

FixedStateSpectrum FixedStateSpectrum::maximally_mixed(int n) {
    if (n < 1) throw DomainError("FixedStateSpectrum::maximally_mixed: n must be positive");
    return FixedStateSpectrum(std::vector<double>(n, 1.0 / n));
}

double FixedStateSpectrum::max_eig() const { return *std::max_element(eigs_.begin(), eigs_.end()); }

bool FixedStateSpectrum::strictly_positive() const {
    return std::all_of(eigs_.begin(), eigs_.end(), [](double e) { return e > 0.0; });
}

std::vector<double> FixedStateSpectrum::inverse_eigs() const {
    if (!strictly_positive())
        throw DomainError("FixedStateSpectrum: zero eigenvalue has no inverse");
    std::vector<double> a(eigs_.size());
    std::transform(eigs_.begin(), eigs_.end(), a.begin(), [](double e) { return 1.0 / e; });
    return a;
}

bool FixedStateSpectrum::has_degeneracy() const {
    return std::find(degenerate_.begin(), degenerate_.end(), true) != degenerate_.end();
}

DensityMatrix from_spectrum(const FixedStateSpectrum& spec) {
    const linalg::RealVector d =
        Eigen::Map<const linalg::RealVector>(spec.eigs().data(), spec.dim());
    return DensityMatrix(HermitianMatrix::diagonal(d));
}

HermitianMatrix symmetrized_product(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("symmetrized_product: dimensions differ");
    const HermitianMatrix s = linalg::sqrt_psd(a.hermitian());
    return HermitianMatrix::from_trusted(s.matrix() * b.matrix() * s.matrix());
}

RootFidelity root_fidelity_with_sqrt(const HermitianMatrix& sqrt_a, const DensityMatrix& b) {
    if (sqrt_a.dim() != b.dim()) throw DimensionMismatch("fidelity: dimensions differ");
    const HermitianMatrix t =
        HermitianMatrix::from_trusted(sqrt_a.matrix() * b.matrix() * sqrt_a.matrix());
    RootFidelity r;
    r.product_eigs = linalg::eigvalsh(t).cwiseMax(0.0);
    r.root_fidelity = r.product_eigs.cwiseSqrt().sum();
    if (r.root_fidelity > 1.0 + kFidelitySlack)
        throw ConsistencyError("fidelity: root fidelity exceeds 1 beyond rounding slack");
    r.root_fidelity = std::min(r.root_fidelity, 1.0);
    return r;
}

double fidelity(const DensityMatrix& r1, const DensityMatrix& r2) {
    const double rf = root_fidelity_with_sqrt(linalg::sqrt_psd(r1.hermitian()), r2).root_fidelity;
    return rf * rf;
}

double bures_distance_sq(const DensityMatrix& r1, const DensityMatrix& r2) {
    return 2.0 - 2.0 * std::sqrt(fidelity(r1, r2));
}

}  // namespace bures::states
