#include "bures/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "bures/error.hpp"
#include "bures/quadrature.hpp"

namespace bures::analytic {

using states::FixedStateSpectrum;

namespace {

using Mp = boost::multiprecision::cpp_bin_float_50;

Mp mp_lgamma(double x) { return boost::math::lgamma(Mp(x)); }

Mp ipow(const Mp& x, int e) {
    if (e == 0) return Mp(1);
    return boost::multiprecision::pow(x, e);
}

void check_nm(int n, int m, const char* who) {
    if (n < 1 || m < n) throw DomainError(std::string(who) + ": requires 1 <= n <= m");
}

// Dense LU with partial pivoting, enough for the n x n Vandermonde systems.
class MpLu {
public:
    MpLu() = default;
    MpLu(std::vector<Mp> a, int n) : n_(n), lu_(std::move(a)), perm_(n) {
        std::iota(perm_.begin(), perm_.end(), 0);
        for (int c = 0; c < n_; ++c) {
            int piv = c;
            for (int r = c + 1; r < n_; ++r)
                if (abs(at(r, c)) > abs(at(piv, c))) piv = r;
            if (at(piv, c) == 0) throw DegenerateSpectrum("Vandermonde matrix is singular");
            if (piv != c) {
                for (int k = 0; k < n_; ++k) std::swap(at(piv, k), at(c, k));
                std::swap(perm_[piv], perm_[c]);
            }
            for (int r = c + 1; r < n_; ++r) {
                at(r, c) /= at(c, c);
                for (int k = c + 1; k < n_; ++k) at(r, k) -= at(r, c) * at(c, k);
            }
        }
    }

    std::vector<Mp> solve(const std::vector<Mp>& rhs) const {
        std::vector<Mp> y(n_);
        for (int r = 0; r < n_; ++r) {
            y[r] = rhs[perm_[r]];
            for (int k = 0; k < r; ++k) y[r] -= at(r, k) * y[k];
        }
        for (int r = n_ - 1; r >= 0; --r) {
            for (int k = r + 1; k < n_; ++k) y[r] -= at(r, k) * y[k];
            y[r] /= at(r, r);
        }
        return y;
    }

private:
    Mp& at(int r, int c) { return lu_[static_cast<std::size_t>(r) * n_ + c]; }
    const Mp& at(int r, int c) const { return lu_[static_cast<std::size_t>(r) * n_ + c]; }

    int n_ = 0;
    std::vector<Mp> lu_;
    std::vector<int> perm_;
};

// Nodes a_j = 1/eig_j and the factored Vandermonde matrix of a_j / scale.
// cramer_trace(g) = sum_i det(V with column i replaced by g_i) / det(V).
struct Vandermonde {
    int n = 0;
    std::vector<Mp> a;
    std::vector<Mp> inv_scale_pow;  // scale^{-k}
    MpLu lu;

    explicit Vandermonde(const FixedStateSpectrum& sigma) : n(sigma.dim()) {
        if (!sigma.strictly_positive())
            throw DomainError("fixed-state formulas need strictly positive sigma eigenvalues");
        const double loss = vandermonde_digit_loss(sigma.inverse_eigs());
        if (!(loss <= kMaxDigitLoss))
            throw DegenerateSpectrum(
                "sigma eigenvalues are (nearly) degenerate; use perturbed_limit or the "
                "pure / maximally mixed closed forms");
        for (double e : sigma.eigs()) a.push_back(Mp(1) / Mp(e));
        const Mp scale = *std::max_element(a.begin(), a.end());
        std::vector<Mp> v(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j) {
            Mp p = 1;
            const Mp b = a[j] / scale;
            for (int k = 0; k < n; ++k) {
                v[static_cast<std::size_t>(j) * n + k] = p;
                p *= b;
            }
        }
        lu = MpLu(std::move(v), n);
        Mp s = 1;
        for (int k = 0; k < n; ++k) {
            inv_scale_pow.push_back(Mp(1) / s);
            s *= scale;
        }
    }

    // column i (0-based) of the replacement is g[i]
    Mp cramer_trace(const std::vector<std::vector<Mp>>& g) const {
        Mp total = 0;
        for (int i = 0; i < n; ++i) total += lu.solve(g[i])[i] * inv_scale_pow[i];
        return total;
    }
};

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Fixed: return "fixed";
        case Scenario::Pure: return "pure";
        case Scenario::Mixed: return "mixed";
        case Scenario::TwoRandom: return "two";
    }
    return "unknown";
}

Scenario parse_scenario(const std::string& s) {
    if (s == "fixed") return Scenario::Fixed;
    if (s == "pure") return Scenario::Pure;
    if (s == "mixed") return Scenario::Mixed;
    if (s == "two") return Scenario::TwoRandom;
    throw DomainError("unknown scenario '" + s + "' (expected fixed, pure, mixed or two)");
}

MeanFidelityResult make_mean_result(double mean_root_fidelity, Scenario scenario) {
    return {mean_root_fidelity, 2.0 - 2.0 * mean_root_fidelity, scenario};
}

double vandermonde_digit_loss(const std::vector<double>& a) {
    if (a.size() < 2) return 0.0;
    double amax = 0.0;
    for (double x : a) amax = std::max(amax, std::abs(x));
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < a.size(); ++l) {
            if (l == j) continue;
            const double gap = std::abs(a[j] - a[l]);
            if (gap == 0.0) return INFINITY;
            s += std::max(0.0, std::log10(amax / gap));
        }
        worst = std::max(worst, s);
    }
    return worst;
}

MeanFidelityResult mean_root_fidelity_fixed(const FixedStateSpectrum& sigma, int m) {
    const int n = sigma.dim();
    check_nm(n, m, "mean_root_fidelity_fixed");
    const Vandermonde vdm(sigma);
    std::vector<std::vector<Mp>> g(n, std::vector<Mp>(n));
    for (int i = 1; i <= n; ++i) {
        const Mp poch = exp(mp_lgamma(m - i + 1.5) - mp_lgamma(m - i + 1.0));
        for (int j = 0; j < n; ++j) g[i - 1][j] = poch * ipow(vdm.a[j], i - 2) * sqrt(vdm.a[j]);
    }
    const Mp norm = exp(mp_lgamma(n * static_cast<double>(m) + 0.5) - mp_lgamma(n * double(m)));
    const double value = static_cast<double>(vdm.cramer_trace(g) / norm);
    return make_mean_result(value, Scenario::Fixed);
}

MeanFidelityResult mean_root_fidelity_pure(int n, int m) {
    check_nm(n, m, "mean_root_fidelity_pure");
    const double v = std::exp(specfun::log_pochhammer(m, 0.5) -
                              specfun::log_pochhammer(static_cast<double>(n) * m, 0.5));
    return make_mean_result(v, Scenario::Pure);
}

MeanFidelityResult mean_root_fidelity_mixed(int n, int m) {
    check_nm(n, m, "mean_root_fidelity_mixed");
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double lg = specfun::log_pochhammer(m, 1.5 - i) - specfun::log_pochhammer(n + 1, -i);
        sum += specfun::binom_half(i) * specfun::binom_half(i - 1) * std::exp(lg);
    }
    const double pre = 2.0 / std::sqrt(static_cast<double>(n)) /
                       specfun::pochhammer(static_cast<double>(n) * m, 0.5);
    return make_mean_result(pre * sum, Scenario::Mixed);
}

MeanFidelityResult mean_root_fidelity_two_random(int n, int m1, int m2) {
    check_nm(n, m1, "mean_root_fidelity_two_random");
    check_nm(n, m2, "mean_root_fidelity_two_random");
    const int v1 = m1 - n, v2 = m2 - n;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        const specfun::SignedLog g = specfun::log_gamma_signed(k - n + 0.5);
        const double lg = specfun::log_pochhammer(k, 0.5) + specfun::log_pochhammer(k + v1, 0.5) +
                          specfun::log_pochhammer(k + v2, 0.5) - specfun::log_gamma(n - k + 1.0) -
                          g.log_abs;
        const int sign = ((n - k) % 2 == 0 ? 1 : -1) * g.sign;
        sum += sign * std::exp(lg);
    }
    const double pre = std::exp(std::log(2.0) - specfun::log_pochhammer(double(n) * m1, 0.5) -
                                specfun::log_pochhammer(double(n) * m2, 0.5));
    return make_mean_result(pre * sum, Scenario::TwoRandom);
}

// ---------------------------------------------------------------------------

FixedStateSpectrum spread_degenerate(const FixedStateSpectrum& sigma, double delta) {
    const int n = sigma.dim();
    const std::vector<double>& e = sigma.eigs();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return e[x] < e[y]; });

    std::vector<double> out = e;
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && e[order[end]] - e[order[end - 1]] <= 1e-9 * e[order[end]]) ++end;
        const int c = end - start;
        if (c > 1) {
            double centre = 0.0;
            for (int k = start; k < end; ++k) centre += e[order[k]];
            centre /= c;
            for (int k = 0; k < c; ++k) out[order[start + k]] = centre + (k - 0.5 * (c - 1)) * delta;
        }
        start = end;
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& x : out) x /= total;
    return FixedStateSpectrum(std::move(out));
}

double perturbed_limit(const FixedStateSpectrum& sigma,
                       const std::function<double(const FixedStateSpectrum&)>& f) {
    if (!sigma.strictly_positive())
        throw DomainError("perturbed_limit: zero eigenvalues are not supported (pure sigma has a "
                          "closed form)");
    std::vector<double> sorted = sigma.eigs();
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> centres;
    for (double x : sorted)
        if (centres.empty() || x - centres.back() > 1e-9 * x) centres.push_back(x);
    if (centres.size() == sorted.size()) return f(sigma);

    const double scale = centres.size() > 1
                             ? (centres.back() - centres.front()) / (centres.size() - 1.0)
                             : 1.0 / sigma.dim();
    const double delta = 1e-5 * scale;
    const double coarse = f(spread_degenerate(sigma, delta));
    const double fine = f(spread_degenerate(sigma, 0.5 * delta));
    return (4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------------------------

struct TauDensity::Impl {
    int n, m;
    Vandermonde vdm;
    std::vector<Mp> coef;  // Gamma(nm) / (n Gamma(m-i+1) Gamma(i+nm-m-1))

    Impl(const FixedStateSpectrum& sigma, int m_) : n(sigma.dim()), m(m_), vdm(sigma) {
        const double nm = static_cast<double>(n) * m;
        for (int i = 1; i <= n; ++i)
            coef.push_back(exp(mp_lgamma(nm) - log(Mp(n)) - mp_lgamma(m - i + 1.0) -
                               mp_lgamma(i + nm - m - 1.0)));
    }
};

TauDensity::TauDensity(const FixedStateSpectrum& sigma, int m) {
    const int n = sigma.dim();
    check_nm(n, m, "density_tau");
    if (n < 2) throw DomainError("density_tau: n = 1 is a point mass");
    impl_ = std::make_shared<const Impl>(sigma, m);
    upper_ = sigma.max_eig();
    for (double e : sigma.eigs())
        if (e < upper_) breaks_.push_back(e);
    std::sort(breaks_.begin(), breaks_.end());
}

double TauDensity::operator()(double lambda) const {
    if (!(lambda >= 0.0) || lambda > upper_) return 0.0;
    const Impl& p = *impl_;
    const Mp l(lambda);
    const int nm = p.n * p.m;
    std::vector<std::vector<Mp>> g(p.n, std::vector<Mp>(p.n));
    for (int i = 1; i <= p.n; ++i) {
        const Mp lpow = p.coef[i - 1] * ipow(l, p.m - i);
        for (int j = 0; j < p.n; ++j) {
            const Mp x = p.vdm.a[j] * l;
            g[i - 1][j] = x < 1 ? lpow * ipow(p.vdm.a[j], p.m) * ipow(1 - x, i + nm - p.m - 2) : Mp(0);
        }
    }
    return static_cast<double>(p.vdm.cramer_trace(g));
}

double density_tau(const FixedStateSpectrum& sigma, int m, double lambda) {
    return TauDensity(sigma, m)(lambda);
}

double fidelity_pdf_pure(int n, int m, double f) {
    check_nm(n, m, "fidelity_pdf_pure");
    if (n < 2) throw DomainError("fidelity_pdf_pure: n = 1 is a point mass at F = 1");
    if (!(f >= 0.0 && f <= 1.0)) return 0.0;
    const double a = m, b = static_cast<double>(n) * m - m;
    if (f == 0.0 || f == 1.0) return 0.0;  // both exponents are >= 1
    const double lg = specfun::log_gamma(a + b) - specfun::log_gamma(a) - specfun::log_gamma(b) +
                      (a - 1.0) * std::log(f) + (b - 1.0) * std::log1p(-f);
    return std::exp(lg);
}

// ---------------------------------------------------------------------------

struct MixedTauDensity::Impl {
    int n, m;
    std::vector<Mp> c;  // c_i, i = 1..n
    Mp recip_gamma_c;   // 1 / Gamma(m - n + 1)

    Impl(int n_, int m_) : n(n_), m(m_) {
        const int nm = n * m;
        std::vector<Mp> fact(nm + 1);
        fact[0] = 1;
        for (int k = 1; k <= nm; ++k) fact[k] = fact[k - 1] * k;
        auto gamma_int = [&](int x) { return fact[x - 1]; };
        for (int i = 1; i <= n; ++i) {
            Mp ci = gamma_int(m + 1) * gamma_int(nm) /
                    (gamma_int(i) * gamma_int(n - i + 1) * gamma_int(i + m - n + 1) *
                     gamma_int(nm - m + n - i));
            c.push_back(i % 2 == 0 ? ci : Mp(-ci));
        }
        recip_gamma_c = 1 / fact[m - n];
    }

    // 2F1(a, b; gamma; z) / Gamma(gamma) for a non-positive integer a
    Mp f21(int a, const Mp& b, const Mp& gamma, const Mp& z) const {
        Mp term = recip_gamma_c;
        Mp sum = term;
        for (int k = 0; k < -a; ++k) {
            term *= (a + k) * (b + k) * z / ((k + 1) * (gamma + k));
            sum += term;
        }
        return sum;
    }
};

MixedTauDensity::MixedTauDensity(int n, int m) : n_(n) {
    check_nm(n, m, "density_tau_mixed");
    if (n < 2) throw DomainError("density_tau_mixed: n = 1 is a point mass");
    impl_ = std::make_shared<const Impl>(n, m);
}

double MixedTauDensity::operator()(double lambda) const {
    const Impl& p = *impl_;
    const int n = p.n, m = p.m, nm = n * m;
    const Mp x = Mp(n) * Mp(lambda);
    if (!(lambda >= 0.0) || x >= 1) return 0.0;
    const Mp z = x / (x - 1);
    const Mp gamma = m - n + 1;
    Mp total = 0;
    for (int i = 1; i <= n; ++i) {
        const Mp b = i - nm + m - n;
        const Mp bracket = (n - i) * p.f21(-n, b, gamma, z) - n * p.f21(1 - n, b, gamma, z);
        total += p.c[i - 1] * ipow(x, i + m - n - 1) * ipow(1 - x, -i + nm - m + n - 1) * bracket;
    }
    return static_cast<double>(total);
}

double density_tau_mixed(int n, int m, double lambda) { return MixedTauDensity(n, m)(lambda); }

// ---------------------------------------------------------------------------

// Each (j, k) term is mu^k times a 3,3 G-function whose Mellin-Barnes
// integrand carries (1 + s)_j; after s -> s - k all terms share the kernel
// Gamma(v1 - s) Gamma(v2 - s) / (Gamma(nm1 - 1 - s) Gamma(nm2 - 1 - s)) and
// the sum collapses to one integral against the polynomial
//   P(s) = sum_{j,k} (-1)^k (v1 - s)_k (v2 - s)_k (1 - k + s)_j
//          / (k! (k + v1)! (k + v2)! (j - k)!).
// The terms cancel heavily once n grows; P is built and evaluated in 50 digits.
struct ChiDensity::Impl {
    std::vector<Mp> coef;  // ascending powers of s
    specfun::WeightedKernel22 kernel;
    double log_norm = 0.0;

    using Poly = std::vector<Mp>;
    static Poly times_linear(const Poly& p, const Mp& c0, const Mp& c1) {
        Poly r(p.size() + 1, Mp(0));
        for (std::size_t i = 0; i < p.size(); ++i) {
            r[i] += c0 * p[i];
            r[i + 1] += c1 * p[i];
        }
        return r;
    }

    Impl(int n, int v1, int v2) {
        std::vector<Mp> fact(n + std::max(v1, v2) + 1);
        fact[0] = 1;
        for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<int>(i);
        coef.assign(3 * n, Mp(0));
        for (int k = 0; k < n; ++k) {
            Poly inner{Mp(0)};
            Poly rising{Mp(1)};  // (1 - k + s)_j
            for (int j = 0; j < n; ++j) {
                if (j >= k) {
                    inner.resize(rising.size(), Mp(0));
                    for (std::size_t i = 0; i < rising.size(); ++i) inner[i] += rising[i] / fact[j - k];
                }
                rising = times_linear(rising, Mp(1 - k + j), Mp(1));
            }
            Poly term = inner;
            for (int i = 0; i < k; ++i) {
                term = times_linear(term, Mp(v1 + i), Mp(-1));
                term = times_linear(term, Mp(v2 + i), Mp(-1));
            }
            Mp w = Mp(1) / (fact[k] * fact[k + v1] * fact[k + v2]);
            if (k % 2 == 1) w = -w;
            for (std::size_t i = 0; i < term.size(); ++i) coef[i] += w * term[i];
        }
        while (coef.size() > 1 && coef.back() == 0) coef.pop_back();
    }

    std::complex<double> log_weight(std::complex<double> s) const {
        const Mp sr = s.real(), si = s.imag();
        Mp re = 0, im = 0;
        for (std::size_t i = coef.size(); i-- > 0;) {
            const Mp nr = re * sr - im * si + coef[i];
            im = re * si + im * sr;
            re = nr;
        }
        int e = 0;
        boost::multiprecision::frexp(boost::multiprecision::abs(re) + boost::multiprecision::abs(im), &e);
        const double a = static_cast<double>(boost::multiprecision::ldexp(re, -e));
        const double b = static_cast<double>(boost::multiprecision::ldexp(im, -e));
        return {std::log(std::hypot(a, b)) + e * std::log(2.0), std::atan2(b, a)};
    }
};

ChiDensity::ChiDensity(int n, int m1, int m2) : n_(n), m1_(m1), m2_(m2) {
    check_nm(n, m1, "density_chi");
    check_nm(n, m2, "density_chi");
    if (n < 2) throw DomainError("density_chi: n = 1 is a point mass");
    auto impl = std::make_shared<Impl>(n, m1 - n, m2 - n);
    impl->kernel = {m1 - n, m2 - n, n * m1 - 1, n * m2 - 1, static_cast<int>(impl->coef.size()) - 1};
    impl->log_norm = specfun::log_gamma(double(n) * m1) + specfun::log_gamma(double(n) * m2) -
                     std::log(static_cast<double>(n));
    impl_ = std::move(impl);
}

double ChiDensity::limit_at_zero() const {
    const int v1 = m1_ - n_, v2 = m2_ - n_;
    if (v1 == 0 && v2 == 0) return kDivergent;
    if (v1 > 0 && v2 > 0) return 0.0;
    // only the k = 0 terms survive; each j contributes the same residue at s = 0
    return (double(n_) * m1_ - 1.0) * (double(n_) * m2_ - 1.0) / std::max(v1, v2);
}

double ChiDensity::operator()(double mu) const {
    if (!(mu >= 0.0) || mu >= 1.0) return 0.0;
    if (mu == 0.0) return limit_at_zero();
    specfun::ContourOptions opts;
    opts.abs_tol = 1e-10;
    opts.log_prefactor = impl_->log_norm;
    const Impl& impl = *impl_;
    return specfun::mellin_barnes_22_weighted(
               impl.kernel, mu, [&impl](std::complex<double> s) { return impl.log_weight(s); }, opts)
        .value;
}

double density_chi(int n, int m1, int m2, double mu) { return ChiDensity(n, m1, m2)(mu); }

// ---------------------------------------------------------------------------

IntegralResult integrate(const Density& density, std::pair<double, double> support,
                         const std::vector<double>& breakpoints, const Density& weight,
                         double tol) {
    std::vector<double> cuts{support.first};
    for (double b : breakpoints)
        if (b > support.first && b < support.second) cuts.push_back(b);
    cuts.push_back(support.second);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto g = [&](double x) { return weight ? weight(x) * density(x) : density(x); };
    IntegralResult out;
    const double pieces = static_cast<double>(cuts.size() - 1);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        quad::Tolerance t{.abs = tol / pieces, .rel = tol, .rel_l1 = 0.0};
        const auto r = quad::adaptive<double>(g, cuts[p], cuts[p + 1], t, 2000);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
    }
    return out;
}

GridDensity grid_density(const Density& density, int points, std::pair<double, double> support,
                         const std::vector<double>& breakpoints, double tol) {
    if (points < 2) throw DomainError("grid_density: need at least two points");
    if (!(support.second > support.first)) throw DomainError("grid_density: empty support");
    GridDensity gd;
    gd.support = support;
    const double lo = support.first, width = support.second - support.first;
    for (int k = 0; k < points; ++k) {
        const double t = (1.0 - std::cos(M_PI * (k + 0.5) / points)) / 2.0;
        gd.abscissae.push_back(lo + width * t);
    }
    for (double x : gd.abscissae) gd.values.push_back(density(x));
    for (std::size_t k = 0; k + 1 < gd.abscissae.size(); ++k)
        gd.trapezoid += 0.5 * (gd.values[k] + gd.values[k + 1]) * (gd.abscissae[k + 1] - gd.abscissae[k]);

    const IntegralResult norm = integrate(density, support, breakpoints, nullptr, 1e-9);
    gd.normalization = norm.value;
    gd.normalization_ok = norm.converged && std::abs(norm.value - 1.0) <= tol;
    if (!gd.normalization_ok)
        gd.warning = "normalization " + std::to_string(norm.value) + " differs from 1 by more than " +
                     std::to_string(tol);
    for (double v : gd.values)
        if (!(v >= 0.0) || !std::isfinite(v)) {
            gd.warning += gd.warning.empty() ? "" : "; ";
            gd.warning += "density has negative or non-finite grid values";
            break;
        }
    return gd;
}

}  // namespace bures::analytic
