#include "bures/specfun.hpp"

#include <cmath>
#include <numbers>

#include "bures/error.hpp"

namespace bures::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with the argument reduced to [-1, 1) first, so that integers and
// half-integers come out exact.
double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r >= 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    if (r == 0.0 || r == -1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == -0.5) return -1.0;
    return std::sin(kPi * r);
}

// log(sin(pi z)) that stays finite for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z) {
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    const double y = z.imag();
    if (std::abs(y) < 10.0) return std::log(std::sin(kPi * z));
    if (y > 0.0) {
        // sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) * (i / 2)
        return -i * kPi * z + C{std::log(0.5), kPi / 2} + std::log(1.0 - std::exp(2.0 * i * kPi * z));
    }
    // sin(pi z) = e^{i pi z} (1 - e^{-2 i pi z}) / (2 i)
    return i * kPi * z + C{std::log(0.5), -kPi / 2} + std::log(1.0 - std::exp(-2.0 * i * kPi * z));
}

// B_{2k} / (2k (2k-1)), k = 1..8
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,  -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
};

}  // namespace

double SignedLog::value() const { return sign * std::exp(log_abs); }

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    int sign = 1;
    return ::lgamma_r(x, &sign);
}

SignedLog log_gamma_signed(double x) {
    if (std::isnan(x) || is_nonpositive_integer(x))
        throw DomainError("log_gamma_signed: pole of Gamma at non-positive integer");
    if (x > 0.0) return {log_gamma(x), 1};
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x)), with 1 - x > 1.
    const double s = sin_pi(x);
    return {std::log(kPi) - std::log(std::abs(s)) - log_gamma(1.0 - x), s > 0.0 ? 1 : -1};
}

double recip_gamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    const SignedLog g = log_gamma_signed(x);
    return g.sign * std::exp(-g.log_abs);
}

std::complex<double> log_gamma(std::complex<double> z) {
    using C = std::complex<double>;
    if (z.imag() == 0.0 && is_nonpositive_integer(z.real()))
        throw DomainError("log_gamma: pole of Gamma at non-positive integer");
    if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);

    C shift{1.0, 0.0};
    while (std::abs(z) < 12.0) {
        shift *= z;
        z += 1.0;
    }
    const C inv = 1.0 / z;
    const C inv2 = inv * inv;
    C series = 0.0;
    C p = inv;
    for (double b : kStirling) {
        series += b * p;
        p *= inv2;
    }
    const C stirling = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
    return stirling - std::log(shift);
}

double log_pochhammer(double alpha, double beta) {
    if (!(alpha > 0.0) || !(alpha + beta > 0.0))
        throw DomainError("pochhammer: gamma arguments must be positive");
    if (beta == 0.0) return 0.0;
    return log_gamma(alpha + beta) - log_gamma(alpha);
}

double pochhammer(double alpha, double beta) { return std::exp(log_pochhammer(alpha, beta)); }

double binom_half(int i) {
    if (i < 0) throw DomainError("binom_half: index must be non-negative");
    double c = 1.0;
    for (int l = 1; l <= i; ++l) c *= (0.5 - l + 1.0) / l;
    return c;
}

double gauss_2f1_terminating(double a, double b, double c, double z) {
    if (!is_nonpositive_integer(a))
        throw DomainError("gauss_2f1_terminating: a must be a non-positive integer");
    const int terms = static_cast<int>(-a);
    double p = 1.0;  // (a)_k (b)_k z^k / k!
    double sum = recip_gamma(c);
    for (int k = 0; k < terms; ++k) {
        p *= (a + k) * (b + k) * z / (k + 1);
        sum += p * recip_gamma(c + k + 1);
    }
    return sum;
}

}  // namespace bures::specfun
