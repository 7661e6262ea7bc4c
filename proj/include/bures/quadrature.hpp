#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for real- or complex-valued
// integrands on finite intervals. Used by the contour integrals in specfun
// and by the density integrals in analytic.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace bures::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;  ///< sum of |K15 - G7| over the final partition
    double l1 = 0.0;     ///< K15 estimate of the integral of |f|
    int evaluations = 0;
    int intervals = 0;
    bool converged = true;
};

struct Tolerance {
    double abs = 1e-12;
    double rel = 1e-12;     ///< relative to |value|
    double rel_l1 = 0.0;    ///< relative to the integral of |f|

    double target(double value_mag, double l1) const {
        return std::max({abs, rel * value_mag, rel_l1 * l1});
    }
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    double l1;
    bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

/// Single 15-point Kronrod panel with embedded 7-point Gauss error estimate.
template <class T, class F>
Result<T> gk15(F& f, double a, double b) {
    using namespace detail;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * kWgk[7];
    T gauss = fc * kWg[3];
    double l1 = std::abs(fc) * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kron += (f1 + f2) * kWgk[i];
        l1 += (std::abs(f1) + std::abs(f2)) * kWgk[i];
        if (i % 2 == 1) gauss += (f1 + f2) * kWg[i / 2];
    }
    Result<T> r;
    r.value = kron * h;
    r.error = std::abs((kron - gauss) * h);
    r.l1 = l1 * std::abs(h);
    r.evaluations = 15;
    r.intervals = 1;
    return r;
}

/// Globally adaptive bisection: always split the interval with the largest
/// error estimate until the summed estimate meets `tol` or `max_intervals`
/// is reached (then `converged` is false).
template <class T, class F>
Result<T> adaptive(F&& f, double a, double b, const Tolerance& tol, int max_intervals = 4000) {
    using Seg = detail::Segment<T>;
    std::vector<Seg> heap;
    auto first = gk15<T>(f, a, b);
    heap.push_back({a, b, first.value, first.error, first.l1});

    Result<T> out = first;
    while (out.error > tol.target(std::abs(out.value), out.l1)) {
        if (static_cast<int>(heap.size()) >= max_intervals) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        const Seg worst = heap.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // no longer splittable in floating point
            std::push_heap(heap.begin(), heap.end());
            out.converged = false;
            break;
        }
        heap.pop_back();
        auto left = gk15<T>(f, worst.a, mid);
        auto right = gk15<T>(f, mid, worst.b);
        out.evaluations += 30;
        out.value += left.value + right.value - worst.value;
        out.error += left.error + right.error - worst.error;
        out.l1 += left.l1 + right.l1 - worst.l1;
        heap.push_back({worst.a, mid, left.value, left.error, left.l1});
        std::push_heap(heap.begin(), heap.end());
        heap.push_back({mid, worst.b, right.value, right.error, right.l1});
        std::push_heap(heap.begin(), heap.end());
    }

    T value{};
    double err = 0.0, l1 = 0.0;
    for (const auto& s : heap) {
        value += s.value;
        err += s.error;
        l1 += s.l1;
    }
    out.value = value;
    out.error = err;
    out.l1 = l1;
    out.intervals = static_cast<int>(heap.size());
    return out;
}

}  // namespace bures::quad
