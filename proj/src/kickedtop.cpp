#include "bures/kickedtop.hpp"

#include <cmath>
#include <numbers>

#include "bures/error.hpp"

namespace bures::kickedtop {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianMatrix;

namespace {

int spin_dim(double j) {
    const double twice = 2.0 * j;
    if (!(j > 0.0) || twice != std::floor(twice))
        throw DomainError("kicked top: spin j must be a positive integer or half-integer");
    return static_cast<int>(twice) + 1;
}

// exp(-i kappa/(2j) Jz^2) exp(-i pi/2 Jy)
ComplexMatrix single_top(double j, double kappa) {
    const int d = spin_dim(j);
    const SpinOperators ops = angular_momentum_ops(j);
    ComplexMatrix u = linalg::unitary_exp(ops.jy, std::numbers::pi / 2.0);
    for (int p = 0; p < d; ++p) {
        const double mz = j - p;
        u.row(p) *= std::polar(1.0, -kappa * mz * mz / (2.0 * j));
    }
    return u;
}

ComplexMatrix initial_state(const KickedTopConfig& c) {
    const ComplexVector a = coherent_state(c.j1, c.theta1, c.phi1);
    const ComplexVector b = coherent_state(c.j2, c.theta2, c.phi2);
    return a * b.transpose();
}

}  // namespace

SpinOperators angular_momentum_ops(double j) {
    const int d = spin_dim(j);
    ComplexMatrix jp = ComplexMatrix::Zero(d, d);
    ComplexMatrix jz = ComplexMatrix::Zero(d, d);
    for (int p = 0; p < d; ++p) {
        const double mz = j - p;
        jz(p, p) = mz;
        // J+ |mz> = sqrt(j(j+1) - mz(mz+1)) |mz+1>, and |mz+1> sits at p-1
        if (p > 0) jp(p - 1, p) = std::sqrt(j * (j + 1.0) - mz * (mz + 1.0));
    }
    const ComplexMatrix jm = jp.adjoint();
    const Complex two_i{0.0, 2.0};
    return {HermitianMatrix((jp + jm) / 2.0), HermitianMatrix((jp - jm) / two_i), HermitianMatrix(jz)};
}

int KickedTopConfig::n() const { return spin_dim(j1); }
int KickedTopConfig::m() const { return spin_dim(j2); }

void KickedTopConfig::validate() const {
    spin_dim(j1);
    spin_dim(j2);
    if (transient < 0) throw DomainError("kicked top: transient must be >= 0");
    if (samples < 1) throw DomainError("kicked top: samples must be >= 1");
    if (thinning < 1) throw DomainError("kicked top: thinning must be >= 1");
    for (double x : {kappa1, kappa2, epsilon, theta1, phi1, theta2, phi2})
        if (!std::isfinite(x)) throw DomainError("kicked top: parameters must be finite");
}

FloquetOperator::FloquetOperator(const KickedTopConfig& c) {
    c.validate();
    u1_ = single_top(c.j1, c.kappa1);
    u2_ = single_top(c.j2, c.kappa2);
    u2_t_ = u2_.transpose();
    const int n = c.n(), m = c.m();
    phases_.resize(n, m);
    const double g = c.epsilon / std::sqrt(c.j1 * c.j2);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < m; ++b) phases_(a, b) = std::polar(1.0, -g * (c.j1 - a) * (c.j2 - b));
}

void FloquetOperator::apply(ComplexMatrix& psi) const {
    psi = (u1_ * psi * u2_t_).cwiseProduct(phases_);
}

ComplexMatrix FloquetOperator::dense() const {
    ComplexMatrix u = linalg::kron(u1_, u2_);
    const int m = this->m();
    for (Eigen::Index r = 0; r < u.rows(); ++r) u.row(r) *= phases_(r / m, r % m);
    return u;
}

ComplexVector coherent_state(double j, double theta, double phi) {
    const int d = spin_dim(j);
    const SpinOperators ops = angular_momentum_ops(j);
    const HermitianMatrix axis =
        HermitianMatrix::from_trusted(std::sin(phi) * ops.jx.matrix() - std::cos(phi) * ops.jy.matrix());
    ComplexVector top = ComplexVector::Zero(d);
    top(0) = 1.0;
    return linalg::unitary_exp(axis, -theta) * top;
}

ComplexVector flatten(const ComplexMatrix& psi) {
    ComplexVector v(psi.size());
    for (Eigen::Index a = 0; a < psi.rows(); ++a)
        for (Eigen::Index b = 0; b < psi.cols(); ++b) v(a * psi.cols() + b) = psi(a, b);
    return v;
}

states::DensityMatrix reduced_state(const ComplexMatrix& psi) {
    const ComplexMatrix rho = psi * psi.adjoint();
    return states::DensityMatrix::trusted(rho / rho.trace().real());
}

void evolve_ensemble(const KickedTopConfig& config, const StateSink& sink) {
    const FloquetOperator u(config);
    ComplexMatrix psi = initial_state(config);
    for (int t = 0; t < config.transient; ++t) u.apply(psi);
    for (int s = 0; s < config.samples; ++s) {
        for (int t = 0; t < config.thinning; ++t) u.apply(psi);
        sink(static_cast<std::size_t>(s), reduced_state(psi));
    }
}

std::vector<states::DensityMatrix> evolve_ensemble(const KickedTopConfig& config) {
    std::vector<states::DensityMatrix> out;
    out.reserve(config.samples);
    evolve_ensemble(config, [&](std::size_t, const states::DensityMatrix& r) { out.push_back(r); });
    return out;
}

void evolve_pair_ensemble(const KickedTopConfig& a, const KickedTopConfig& b, const PairSink& sink) {
    if (a.j1 != b.j1) throw DimensionMismatch("evolve_pair_ensemble: both systems need the same j1");
    const FloquetOperator ua(a), ub(b);
    ComplexMatrix pa = initial_state(a), pb = initial_state(b);
    for (int t = 0; t < a.transient; ++t) {
        ua.apply(pa);
        ub.apply(pb);
    }
    for (int s = 0; s < a.samples; ++s) {
        for (int t = 0; t < a.thinning; ++t) {
            ua.apply(pa);
            ub.apply(pb);
        }
        sink(static_cast<std::size_t>(s), reduced_state(pa), reduced_state(pb));
    }
}

std::vector<std::pair<states::DensityMatrix, states::DensityMatrix>> evolve_pair_ensemble(
    const KickedTopConfig& a, const KickedTopConfig& b) {
    std::vector<std::pair<states::DensityMatrix, states::DensityMatrix>> out;
    out.reserve(a.samples);
    evolve_pair_ensemble(a, b, [&](std::size_t, const states::DensityMatrix& x,
                                   const states::DensityMatrix& y) { out.emplace_back(x, y); });
    return out;
}

}  // namespace bures::kickedtop
