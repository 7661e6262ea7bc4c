#include "bures/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "bures/error.hpp"

namespace bures::linalg {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionMismatch("HermitianMatrix: matrix must be square and non-empty");
    const double scale = std::max(1.0, max_abs(m));
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale) throw DomainError("HermitianMatrix: matrix is not Hermitian");
    m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::from_trusted(const ComplexMatrix& m) {
    HermitianMatrix h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
}

HermitianMatrix HermitianMatrix::identity(int dim) {
    return from_trusted(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
    return from_trusted(d.cast<Complex>().asDiagonal().toDenseMatrix());
}

EigenDecomposition eigh(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigh: Hermitian eigensolver did not converge", NAN);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigvalsh(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigvalsh: Hermitian eigensolver did not converge", NAN);
    return solver.eigenvalues();
}

HermitianMatrix sqrt_psd(const HermitianMatrix& h) {
    const EigenDecomposition ed = eigh(h);
    const double top = ed.values.maxCoeff();
    const double floor = -kPsdSlack * std::max(top, 0.0);
    if (ed.values.minCoeff() < floor)
        throw DomainError("sqrt_psd: matrix has a genuinely negative eigenvalue");
    const RealVector roots = ed.values.cwiseMax(0.0).cwiseSqrt();
    return HermitianMatrix::from_trusted(ed.vectors * roots.cast<Complex>().asDiagonal() *
                                         ed.vectors.adjoint());
}

HermitianMatrix partial_trace_second(const ComplexMatrix& m, int n, int m_dim) {
    if (n <= 0 || m_dim <= 0 || m.rows() != n * m_dim || m.cols() != n * m_dim)
        throw DimensionMismatch("partial_trace_second: input is not (n*m) x (n*m)");
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < m_dim; ++k) out(i, j) += m(i * m_dim + k, j * m_dim + k);
    return HermitianMatrix(out);
}

ComplexMatrix unitary_exp(const HermitianMatrix& h, double scale) {
    const EigenDecomposition ed = eigh(h);
    ComplexVector phases(ed.values.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::polar(1.0, -scale * ed.values(i));
    return ed.vectors * phases.asDiagonal() * ed.vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double unitarity_defect(const ComplexMatrix& u) {
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

}  // namespace bures::linalg
