#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "bures/error.hpp"
#include "bures/quadrature.hpp"
#include "bures/specfun.hpp"

namespace bures::specfun {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kContourAbscissa = -0.5;
constexpr double kNegligible = 1e-16;

// |Im s| at which the 3,3 integrand is handed over to the horizontal rays.
constexpr double kRaySwitch = 24.0;

struct LineIntegral {
    C sum{};  // integral of F(c+it) + F(c-it) over t >= 0
    double error = 0.0;
    double l1 = 0.0;
    double t_end = 0.0;
    double last_panel_l1 = 0.0;
    int evaluations = 0;
    bool decayed = false;
};

// Marches along t >= 0 in panels of at most half an oscillation period of
// arg^{it}. Stops once a panel contributes less than kNegligible of the
// accumulated |integrand| mass, or when `t_stop` is reached.
template <class LogIntegrand>
LineIntegral march_vertical(const LogIntegrand& log_f, double log_arg, double t_stop,
                            const ContourOptions& opts) {
    const double omega = std::abs(log_arg);
    const double width = omega > kPi ? kPi / omega : 1.0;
    auto g = [&](double t) {
        return std::exp(log_f(C{kContourAbscissa, t})) + std::exp(log_f(C{kContourAbscissa, -t}));
    };

    LineIntegral out;
    quad::Tolerance tol{.abs = 1e-3 * opts.abs_tol * 2.0 * kPi, .rel = 0.0, .rel_l1 = 1e-14};
    double previous = INFINITY;
    double t = 0.0;
    while (t < t_stop) {
        const double b = std::min(t + width, t_stop);
        auto panel = quad::adaptive<C>(g, t, b, tol, 64);
        out.sum += panel.value;
        out.error += panel.error;
        out.l1 += panel.l1;
        out.evaluations += panel.evaluations;
        out.last_panel_l1 = panel.l1;
        t = b;
        if (panel.l1 <= kNegligible * out.l1 && panel.l1 < previous) {
            out.decayed = true;
            break;
        }
        previous = panel.l1;
    }
    out.t_end = t;
    return out;
}

// Integral over r >= 0 of F(c + r + iT) - F(c + r - iT) in geometrically
// growing panels. `r_min` is where the integrand is known to be past every
// pole abscissa.
template <class LogIntegrand>
LineIntegral march_rays(const LogIntegrand& log_f, double height, double r_min,
                        const ContourOptions& opts) {
    auto q = [&](double r) {
        return std::exp(log_f(C{kContourAbscissa + r, height})) -
               std::exp(log_f(C{kContourAbscissa + r, -height}));
    };
    LineIntegral out;
    quad::Tolerance tol{.abs = 1e-3 * opts.abs_tol * 2.0 * kPi, .rel = 0.0, .rel_l1 = 1e-14};
    double a = 0.0;
    double width = 1.0;
    double previous = INFINITY;
    for (int panel_index = 0; panel_index < 80; ++panel_index) {
        const double b = a + width;
        auto panel = quad::adaptive<C>(q, a, b, tol, 64);
        out.sum += panel.value;
        out.error += panel.error;
        out.l1 += panel.l1;
        out.evaluations += panel.evaluations;
        out.last_panel_l1 = panel.l1;
        a = b;
        width *= 2.0;
        if (a > r_min && panel.l1 <= kNegligible * out.l1 && panel.l1 < previous) {
            out.decayed = true;
            break;
        }
        previous = panel.l1;
    }
    out.t_end = a;
    return out;
}

void check_result(const ContourResult& r, const ContourOptions& opts, const char* name) {
    const double target = std::max(opts.abs_tol, opts.rel_l1_tol * r.path_l1);
    if (!(r.error_estimate <= target) || !std::isfinite(r.value))
        throw ConvergenceError(std::string(name) + ": contour integral missed its tolerance",
                               r.error_estimate);
}

// Vertical line up to |Im s| = t_switch, then horizontal rays to the
// right for the algebraically decaying remainder.
template <class LogIntegrand>
ContourResult line_then_rays(const LogIntegrand& log_f, double log_mu, double t_switch,
                             double r_min, const ContourOptions& opts, const char* name) {
    const LineIntegral line = march_vertical(log_f, log_mu, t_switch, opts);
    C total = line.sum;  // times 1/(2 pi)
    double err = line.error;
    double l1 = line.l1;
    int evals = line.evaluations;
    if (!line.decayed) {
        const LineIntegral rays = march_rays(log_f, line.t_end, r_min, opts);
        if (!rays.decayed)
            throw ConvergenceError(std::string(name) + ": ray tail did not decay",
                                   rays.last_panel_l1 / (2.0 * kPi));
        // (1/2 pi i) * integral of q  ==  (1/2 pi) * (-i) * integral of q
        total += C{0.0, -1.0} * rays.sum;
        err += rays.error + rays.last_panel_l1;
        l1 += rays.l1;
        evals += rays.evaluations;
    } else {
        err += line.last_panel_l1;
    }

    ContourResult r;
    r.value = total.real() / (2.0 * kPi);
    r.imag_residual = total.imag() / (2.0 * kPi);
    r.error_estimate = err / (2.0 * kPi);
    r.path_l1 = l1 / (2.0 * kPi);
    r.truncation = line.t_end;
    r.evaluations = evals;
    check_result(r, opts, name);
    return r;
}

// log prod_{i=v}^{q-1} (i - s) / (i + 1), rescaled as it goes.
C log_unit_product(int v, int q, C s) {
    C prod{1.0, 0.0};
    int exponent = 0;
    for (int i = v; i < q; ++i) {
        prod *= (static_cast<double>(i) - s) / (i + 1.0);
        if ((i - v) % 32 == 31) {
            int e = 0;
            std::frexp(std::abs(prod), &e);
            prod = std::ldexp(prod.real(), -e) + C{0.0, std::ldexp(prod.imag(), -e)};
            exponent += e;
        }
    }
    return std::log(prod) + exponent * std::numbers::ln2;
}

}  // namespace

MeijerGSpec321 MeijerGSpec321::from_dimensions(int j, int k, int n, int m1, int m2, double mu) {
    return {j, k, m1 - n, m2 - n, n * m1 - k - 1, n * m2 - k - 1, mu};
}

ContourResult meijer_g_213_contour(const MeijerGSpec213& spec, const ContourOptions& opts) {
    if (spec.j < 0 || spec.v1 < 0 || spec.v2 < 0)
        throw DomainError("meijer_g_213: j, v1, v2 must be non-negative");
    if (!(spec.argument > 0.0) || !std::isfinite(spec.argument))
        throw DomainError("meijer_g_213: argument must be positive");

    const double log_y = std::log(spec.argument);
    const double v1 = spec.v1, v2 = spec.v2, j = spec.j;
    auto log_f = [&](C s) {
        return log_gamma(v1 - s) + log_gamma(v2 - s) + log_gamma(1.0 + j + s) -
               log_gamma(1.0 + s) + s * log_y + opts.log_prefactor;
    };

    const LineIntegral line = march_vertical(log_f, log_y, opts.t_cap, opts);
    ContourResult r;
    r.value = line.sum.real() / (2.0 * kPi);
    r.imag_residual = line.sum.imag() / (2.0 * kPi);
    r.path_l1 = line.l1 / (2.0 * kPi);
    r.truncation = line.t_end;
    r.evaluations = line.evaluations;
    // Exponential decay: what is left beyond the last panel is bounded by
    // that panel's own mass.
    r.error_estimate = (line.error + line.last_panel_l1) / (2.0 * kPi);
    if (!line.decayed)
        throw ConvergenceError("meijer_g_213: integrand did not decay before the |Im s| cap",
                               r.error_estimate);
    check_result(r, opts, "meijer_g_213");
    return r;
}

double meijer_g_213(const MeijerGSpec213& spec) { return meijer_g_213_contour(spec).value; }

ContourResult meijer_g_321_contour(const MeijerGSpec321& spec, const ContourOptions& opts) {
    if (spec.j < 0 || spec.k < 0 || spec.v1 < 0 || spec.v2 < 0)
        throw DomainError("meijer_g_321: j, k, v1, v2 must be non-negative");
    if (spec.p1 <= spec.v1 || spec.p2 <= spec.v2)
        throw DomainError("meijer_g_321: requires p1 > v1 and p2 > v2");
    if ((spec.p1 - spec.v1) + (spec.p2 - spec.v2) - spec.j < 2)
        throw DomainError("meijer_g_321: integrand does not decay fast enough along the line");
    if (!(spec.argument > 0.0 && spec.argument < 1.0))
        throw DomainError("meijer_g_321: argument must lie in (0, 1)");

    const double log_mu = std::log(spec.argument);
    const double v1 = spec.v1, v2 = spec.v2, j = spec.j, p1 = spec.p1, p2 = spec.p2;
    auto log_f = [&](C s) {
        return log_gamma(v1 - s) + log_gamma(v2 - s) + log_gamma(1.0 + j + s) -
               log_gamma(1.0 + s) - log_gamma(p1 - s) - log_gamma(p2 - s) + s * log_mu +
               opts.log_prefactor;
    };

    return line_then_rays(log_f, log_mu, kRaySwitch, std::max(p1, p2) + 1.0, opts, "meijer_g_321");
}

ContourResult mellin_barnes_22_weighted(const WeightedKernel22& kernel, double mu,
                                        const std::function<C(C)>& log_weight,
                                        const ContourOptions& opts) {
    if (kernel.v1 < 0 || kernel.v2 < 0 || kernel.q1 <= kernel.v1 || kernel.q2 <= kernel.v2)
        throw DomainError("mellin_barnes_22: requires 0 <= v_i < q_i");
    if ((kernel.q1 - kernel.v1) + (kernel.q2 - kernel.v2) - kernel.degree < 2)
        throw DomainError("mellin_barnes_22: integrand does not decay fast enough along the line");
    if (!(mu > 0.0 && mu < 1.0)) throw DomainError("mellin_barnes_22: argument must lie in (0, 1)");
    const double log_mu = std::log(mu);
    // Gamma(v - s) / Gamma(q - s) = (Gamma(v + 1) / Gamma(q + 1)) / prod_{i=v}^{q-1} (i - s) / (i + 1);
    // the product of near-unit factors is smooth in s, unlike differences of
    // large log-gammas.
    const double constant = opts.log_prefactor + std::lgamma(kernel.v1 + 1.0) + std::lgamma(kernel.v2 + 1.0) -
                            std::lgamma(kernel.q1 + 1.0) - std::lgamma(kernel.q2 + 1.0);
    auto log_f = [&](C s) {
        return log_weight(s) - log_unit_product(kernel.v1, kernel.q1, s) -
               log_unit_product(kernel.v2, kernel.q2, s) + s * log_mu + constant;
    };
    const double q = std::max(kernel.q1, kernel.q2);
    // Rays are only safe once every gamma factor is in its asymptotic regime;
    // below that the polynomial weight is enormous off the line.
    const double t_switch = std::max(kRaySwitch, 2.0 * q);
    return line_then_rays(log_f, log_mu, t_switch, q + kernel.degree + 1.0, opts, "mellin_barnes_22");
}

double meijer_g_321(const MeijerGSpec321& spec) {
    ContourOptions opts;
    opts.abs_tol = 1e-7;
    return meijer_g_321_contour(spec, opts).value;
}

double meijer_213_half_moment(int j, int k, int v1, int v2) {
    const SignedLog a = log_gamma_signed(k + v1 + 1.5);
    const SignedLog b = log_gamma_signed(k + v2 + 1.5);
    const SignedLog c = log_gamma_signed(j - k - 0.5);
    const SignedLog d = log_gamma_signed(-k - 0.5);
    const int sign = a.sign * b.sign * c.sign * d.sign;
    return sign * std::exp(a.log_abs + b.log_abs + c.log_abs - d.log_abs);
}

double meijer_321_half_moment(const MeijerGSpec321& spec) {
    const double base = meijer_213_half_moment(spec.j, spec.k, spec.v1, spec.v2);
    return base * std::exp(-log_gamma(spec.p1 + spec.k + 1.5) - log_gamma(spec.p2 + spec.k + 1.5));
}

}  // namespace bures::specfun
