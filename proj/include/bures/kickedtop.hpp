#pragma once

// Coupled kicked tops. Top r has spin j_r (dimension 2 j_r + 1), kick
// strength kappa_r, and the tops are coupled through epsilon Jz1 Jz2. One
// period is U = U12 (U1 x U2) with
//   U_r = exp(-i kappa_r / (2 j_r) Jz_r^2) exp(-i pi/2 Jy_r),
//   U12 = exp(-i epsilon / sqrt(j1 j2) Jz1 x Jz2).
// Basis ordering is m_z = j, j-1, ..., -j; product index a * dim2 + b.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bures/matrix.hpp"
#include "bures/states.hpp"

namespace bures::kickedtop {

struct SpinOperators {
    linalg::HermitianMatrix jx, jy, jz;
};

/// Throws DomainError unless 2j is a positive integer.
SpinOperators angular_momentum_ops(double j);

struct KickedTopConfig {
    double j1 = 12.0;
    double j2 = 17.0;
    double kappa1 = 7.0;
    double kappa2 = 8.0;
    double epsilon = 1.0;
    double theta1 = 2.25;
    double phi1 = 1.1;
    double theta2 = 2.25;
    double phi2 = 1.1;
    int transient = 500;
    int samples = 5000;
    int thinning = 1;

    int n() const;  ///< 2 j1 + 1
    int m() const;  ///< 2 j2 + 1
    void validate() const;
};

class FloquetOperator {
public:
    explicit FloquetOperator(const KickedTopConfig& config);

    int n() const { return static_cast<int>(u1_.rows()); }
    int m() const { return static_cast<int>(u2_.rows()); }

    /// In place psi -> U psi for psi stored as an n x m coefficient matrix,
    /// psi(a, b) = <a, b | psi>. Costs O(nm(n + m)).
    void apply(linalg::ComplexMatrix& psi) const;

    /// The full nm x nm matrix U12 (U1 x U2).
    linalg::ComplexMatrix dense() const;

    const linalg::ComplexMatrix& u1() const { return u1_; }
    const linalg::ComplexMatrix& u2() const { return u2_; }
    /// exp(-i epsilon m_a m_b / sqrt(j1 j2)) as an n x m array
    const linalg::ComplexMatrix& coupling_phases() const { return phases_; }

private:
    linalg::ComplexMatrix u1_, u2_, u2_t_, phases_;
};

/// Spin coherent state pointing along (sin t cos p, sin t sin p, cos t):
/// exp(i t (sin p Jx - cos p Jy)) |j, j>.
linalg::ComplexVector coherent_state(double j, double theta, double phi);

/// Flattens an n x m coefficient matrix to the product-basis vector.
linalg::ComplexVector flatten(const linalg::ComplexMatrix& psi);

/// tr_2 |psi><psi| normalized to unit trace.
states::DensityMatrix reduced_state(const linalg::ComplexMatrix& psi);

using StateSink = std::function<void(std::size_t, const states::DensityMatrix&)>;

/// Streams `samples` reduced states of top 1 (after `transient` discarded
/// periods, one every `thinning` periods) into sink(index, rho).
void evolve_ensemble(const KickedTopConfig& config, const StateSink& sink);
std::vector<states::DensityMatrix> evolve_ensemble(const KickedTopConfig& config);

using PairSink =
    std::function<void(std::size_t, const states::DensityMatrix&, const states::DensityMatrix&)>;

/// Two independent systems sharing j1; throws DimensionMismatch otherwise.
/// The sample count, transient and thinning of `a` govern both.
void evolve_pair_ensemble(const KickedTopConfig& a, const KickedTopConfig& b, const PairSink& sink);
std::vector<std::pair<states::DensityMatrix, states::DensityMatrix>> evolve_pair_ensemble(
    const KickedTopConfig& a, const KickedTopConfig& b);

}  // namespace bures::kickedtop
