#pragma once

// Dense complex linear algebra on top of Eigen: Hermitian eigensolver, PSD
// square root, Kronecker product, partial trace, exp(-i t H).

#include <complex>

#include <Eigen/Dense>

namespace bures::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Square complex matrix with entry(i, j) == conj(entry(j, i)).
///
/// The checked constructor accepts deviations up to 1e-12 * max(1, max |entry|)
/// and then stores the exactly Hermitian part (M + M^dagger) / 2.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const ComplexMatrix& m);

    /// Skips the Hermiticity check; still symmetrizes.
    static HermitianMatrix from_trusted(const ComplexMatrix& m);
    static HermitianMatrix identity(int dim);
    static HermitianMatrix diagonal(const RealVector& d);

    int dim() const { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }
    double trace() const { return m_.diagonal().real().sum(); }

private:
    ComplexMatrix m_;
};

struct EigenDecomposition {
    RealVector values;     ///< ascending
    ComplexMatrix vectors; ///< columns are eigenvectors
};

EigenDecomposition eigh(const HermitianMatrix& h);
RealVector eigvalsh(const HermitianMatrix& h);

/// Relative slack below zero tolerated by sqrt_psd (and by DensityMatrix).
inline constexpr double kPsdSlack = 1e-10;

/// V diag(sqrt(max(w, 0))) V^dagger. Throws DomainError if an eigenvalue is
/// below -kPsdSlack * max eigenvalue.
HermitianMatrix sqrt_psd(const HermitianMatrix& h);

/// Reduces a (n*m_dim) x (n*m_dim) matrix over its second tensor factor:
/// out(i, j) = sum_k in(i*m_dim + k, j*m_dim + k).
HermitianMatrix partial_trace_second(const ComplexMatrix& m, int n, int m_dim);

/// exp(-i * scale * h) through the eigendecomposition of h.
ComplexMatrix unitary_exp(const HermitianMatrix& h, double scale);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& m);

/// max |U^dagger U - I|
double unitarity_defect(const ComplexMatrix& u);

}  // namespace bures::linalg
