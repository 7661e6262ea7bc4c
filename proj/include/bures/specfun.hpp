#pragma once

// Special functions for the random-density-matrix formulas: log-gamma (real
// and complex), Pochhammer symbols, the generalized binomial C(1/2, i),
// terminating regularized 2F1, and two Meijer G-functions evaluated by
// numerical Mellin-Barnes contour integration.

#include <complex>
#include <functional>

namespace bures::specfun {

/// ln Gamma(x) for x > 0. Throws DomainError for x <= 0.
double log_gamma(double x);

/// ln|Gamma(x)| together with the sign of Gamma(x); valid for every real x
/// that is not a non-positive integer. Negative arguments go through the
/// reflection formula.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    double value() const;
};
SignedLog log_gamma_signed(double x);

/// 1/Gamma(x); exactly zero at the poles x = 0, -1, -2, ...
double recip_gamma(double x);

/// Principal-branch-agnostic log-gamma of a complex argument. Only exp() of
/// the result is meaningful to callers; the imaginary part is defined up to
/// multiples of 2*pi.
std::complex<double> log_gamma(std::complex<double> z);

/// (alpha)_beta = Gamma(alpha + beta) / Gamma(alpha), computed in log space.
double pochhammer(double alpha, double beta);

/// ln (alpha)_beta; requires alpha > 0 and alpha + beta > 0.
double log_pochhammer(double alpha, double beta);

/// Generalized binomial coefficient C(1/2, i), i >= 0.
double binom_half(int i);

/// Regularized terminating Gauss hypergeometric function
///   sum_{k=0}^{|a|} (a)_k (b)_k z^k / (k! Gamma(c + k)) = 2F1(a, b; c; z) / Gamma(c).
/// `a` must be a non-positive integer. Non-positive integer `c` is allowed;
/// the vanishing 1/Gamma(c + k) terms drop out.
double gauss_2f1_terminating(double a, double b, double c, double z);

// ---------------------------------------------------------------------------
// Meijer G-functions
// ---------------------------------------------------------------------------

/// G^{2,1}_{1,3}( -j ; v1, v2 ; 0 | argument )
struct MeijerGSpec213 {
    int j = 0;
    int v1 = 0;
    int v2 = 0;
    double argument = 1.0;
};

/// G^{2,1}_{3,3}( -j ; p1, p2 ; v1, v2 ; 0 | argument ), where for the
/// two-random-states density p_i = n*m_i - k - 1 and v_i = m_i - n.
struct MeijerGSpec321 {
    int j = 0;
    int k = 0;
    int v1 = 0;
    int v2 = 0;
    int p1 = 1;
    int p2 = 1;
    double argument = 0.5;

    static MeijerGSpec321 from_dimensions(int j, int k, int n, int m1, int m2, double mu);
};

struct ContourOptions {
    /// Absolute accuracy target on exp(log_prefactor) * G.
    double abs_tol = 1e-9;
    /// Accuracy target relative to the integral of |integrand| along the path.
    double rel_l1_tol = 1e-13;
    /// Added to the log of the integrand, so callers can fold large gamma
    /// prefactors in without overflow.
    double log_prefactor = 0.0;
    /// Largest |Im s| explored on the vertical line.
    double t_cap = 2000.0;
};

struct ContourResult {
    double value = 0.0;           ///< exp(log_prefactor) * G
    double error_estimate = 0.0;  ///< quadrature + truncation estimate
    double imag_residual = 0.0;   ///< imaginary part left over by the integral
    double path_l1 = 0.0;         ///< integral of |integrand| / (2 pi)
    double truncation = 0.0;      ///< |Im s| where the vertical segment ended
    int evaluations = 0;
};

/// Contour integral along Re(s) = -1/2 of
///   Gamma(v1 - s) Gamma(v2 - s) Gamma(1 + j + s) / Gamma(1 + s) * y^s.
/// The integrand decays like exp(-pi |Im s|); the line is truncated where
/// it falls below 1e-16 of the running total. Throws ConvergenceError.
ContourResult meijer_g_213_contour(const MeijerGSpec213& spec, const ContourOptions& opts = {});
double meijer_g_213(const MeijerGSpec213& spec);

/// Contour integral along Re(s) = -1/2 of
///   Gamma(v1 - s) Gamma(v2 - s) Gamma(1 + j + s)
///   / (Gamma(1 + s) Gamma(p1 - s) Gamma(p2 - s)) * mu^s,   0 < mu < 1.
/// The integrand is rational in s and decays only algebraically, so beyond
/// |Im s| = T the two tails are carried along horizontal rays
/// Re(s) = -1/2 + r, r >= 0, where mu^s decays exponentially (the quadrant
/// swept by the deformation holds no poles). Throws DomainError for mu
/// outside (0, 1) and ConvergenceError when the tolerance is not met.
ContourResult meijer_g_321_contour(const MeijerGSpec321& spec, const ContourOptions& opts = {});
double meijer_g_321(const MeijerGSpec321& spec);

/// Gamma(v1 - s) Gamma(v2 - s) / (Gamma(q1 - s) Gamma(q2 - s)) mu^s, to be
/// weighted by a polynomial of the given degree.
struct WeightedKernel22 {
    int v1 = 0, v2 = 0;
    int q1 = 1, q2 = 1;
    int degree = 0;
};

/// (1/2 pi i) times the integral of kernel(s) * exp(log_weight(s)) over
/// Re s = -1/2, for 0 < mu < 1. log_weight must be a logarithm of the
/// polynomial weight (any branch). Poles of the kernel all lie to the right.
ContourResult mellin_barnes_22_weighted(const WeightedKernel22& kernel, double mu,
                                        const std::function<std::complex<double>(std::complex<double>)>& log_weight,
                                        const ContourOptions& opts = {});

/// Mellin moment of G^{2,1}_{1,3}: int_0^inf y^{k+1/2} G(y) dy
///   = Gamma(k+v1+3/2) Gamma(k+v2+3/2) Gamma(j-k-1/2) / Gamma(-k-1/2).
double meijer_213_half_moment(int j, int k, int v1, int v2);

/// Mellin moment of G^{2,1}_{3,3}: int_0^1 mu^{k+1/2} G(mu) dmu
///   = meijer_213_half_moment(j, k, v1, v2) / (Gamma(p1+k+3/2) Gamma(p2+k+3/2)).
double meijer_321_half_moment(const MeijerGSpec321& spec);

}  // namespace bures::specfun
