#pragma once

// Reference implementations used only by tests.  Each one takes a different
// route than the library (raw power series in quad precision, brute-force
// quadrature in extended precision), so agreement between the two is a real
// cross-check and not a tautology.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracles {

// Bessel J0 by its power series, summed in __float128.  The series
// alternates and cancellation costs roughly z digits at large z; quad
// precision still leaves ~13 good digits at z = 50.
inline double bessel_j0(double z) {
    const __float128 q = __float128(z) * z / 4;
    __float128 term = 1, sum = 1;
    for (int k = 1; k < 400; ++k) {
        term *= -q / (__float128(k) * k);
        sum += term;
        const __float128 mag = term < 0 ? -term : term;
        const __float128 smag = sum < 0 ? -sum : sum;
        if (mag < smag * __float128(1e-36) + __float128(1e-320)) break;
    }
    return static_cast<double>(sum);
}

inline double bessel_j1(double z) {
    const __float128 q = __float128(z) * z / 4;
    __float128 term = __float128(z) / 2, sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= -q / (__float128(k) * (k + 1));
        sum += term;
        const __float128 mag = term < 0 ? -term : term;
        const __float128 smag = sum < 0 ? -sum : sum;
        if (mag < smag * __float128(1e-36) + __float128(1e-320)) break;
    }
    return static_cast<double>(sum);
}

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1] computed in long double.
inline void gauss_long(int n, std::vector<long double>& x, std::vector<long double>& w) {
    const long double pi = 3.14159265358979323846264338327950288L;
    x.assign(n, 0.0L);
    w.assign(n, 0.0L);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double xi = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        long double pp = 0.0L;
        for (int iter = 0; iter < 200; ++iter) {
            long double p0 = 1.0L, p1 = 0.0L;
            for (int j = 0; j < n; ++j) {
                const long double p2 = p1;
                p1 = p0;
                p0 = ((2.0L * j + 1.0L) * xi * p1 - j * p2) / (j + 1.0L);
            }
            pp = n * (xi * p0 - p1) / (xi * xi - 1.0L);
            const long double dx = p0 / pp;
            xi -= dx;
            if (std::fabs(dx) < 1e-19L) break;
        }
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = w[n - 1 - i] = 2.0L / ((1.0L - xi * xi) * pp * pp);
    }
}

template <typename F>
long double integrate_long(F&& f, long double a, long double b, int panels, int order) {
    std::vector<long double> x, w;
    gauss_long(order, x, w);
    long double acc = 0.0L;
    const long double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const long double lo = a + p * h;
        const long double c = 0.5L * (2.0L * lo + h), r = 0.5L * h;
        for (int i = 0; i < order; ++i) acc += r * w[i] * f(c + r * x[i]);
    }
    return acc;
}

}  // namespace detail

// erfi by brute-force quadrature of its defining integral in long double.
// The integrand exp(t^2) is positive, so there is no cancellation and the
// result is good to ~1e-17 relative.
inline double erfi(double x) {
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double sign = x < 0 ? -1.0L : 1.0L;
    const long double ax = std::fabs(static_cast<long double>(x));
    if (ax == 0.0L) return 0.0;
    const long double integral =
        detail::integrate_long([](long double t) { return std::exp(t * t); }, 0.0L, ax, 32, 48);
    return static_cast<double>(sign * 2.0L / std::sqrt(pi) * integral);
}

}  // namespace oracles

// ---------------------------------------------------------------------------
// Field-functional oracles: every transform is evaluated by brute-force
// quadrature of its defining integral, never by the library's closed forms.
// ---------------------------------------------------------------------------

#include <complex>
#include <variant>

#include "propsign/fields.hpp"

namespace oracles {

namespace detail {

inline constexpr double pi_d = 3.14159265358979323846264338327950288;

template <typename F>
auto integrate_d(F&& f, double a, double b, int panels, int order) {
    std::vector<long double> x, w;
    gauss_long(order, x, w);
    using R = decltype(f(a));
    R acc{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < order; ++i)
            acc += static_cast<double>(w[i]) * 0.5 * h *
                   f(lo + 0.5 * h * (1.0 + static_cast<double>(x[i])));
    }
    return acc;
}

}  // namespace detail

// |F0(w)|^2 with F0(w) = int f0(t) e^{iwt} dt, by direct time quadrature.
inline double temporal_power(const propsign::fields::TemporalVariant& t, double w) {
    using namespace propsign::fields;
    std::complex<double> f0;
    if (const auto* e = std::get_if<Exponential>(&t)) {
        const double span = 45.0 / e->omega_bar;
        const int panels = std::max(40, static_cast<int>(span * std::fabs(w) / 3.0) + 1);
        f0 = detail::integrate_d(
            [&](double s) {
                return std::exp(std::complex<double>(-e->omega_bar * s, w * s));
            },
            0.0, span, panels, 8);
    } else {
        const auto& gt = std::get<GaussianT>(t);
        const double lo = gt.center - 12.0 * gt.width, hi = gt.center + 12.0 * gt.width;
        const int panels = std::max(24, static_cast<int>((hi - lo) * std::fabs(w) / 3.0) + 1);
        f0 = detail::integrate_d(
            [&](double s) {
                const double d = (s - gt.center) / gt.width;
                return std::exp(std::complex<double>(-0.5 * d * d, w * s));
            },
            lo, hi, panels, 8);
    }
    return std::norm(f0);
}

// Radial 3D Fourier transform of e^{-y^2/(2 width^2)} at radius x:
// (4 pi / x) int_0^inf y sin(xy) e^{-y^2/(2w^2)} dy.
inline double gauss3d_transform(double width, double x) {
    const double span = 12.0 * width;
    if (x < 1e-12) {
        return 4.0 * detail::pi_d *
               detail::integrate_d(
                   [&](double y) { return y * y * std::exp(-0.5 * y * y / (width * width)); },
                   0.0, span, 32, 12);
    }
    const int panels = std::max(16, static_cast<int>(span * x / 3.0) + 1);
    return 4.0 * detail::pi_d / x *
           detail::integrate_d(
               [&](double y) {
                   return y * std::sin(x * y) * std::exp(-0.5 * y * y / (width * width));
               },
               0.0, span, panels, 12);
}

inline double fourier3(const propsign::fields::SpatialVariant& g, double x) {
    using namespace propsign::fields;
    if (const auto* gs = std::get_if<Gaussian3D>(&g)) return gauss3d_transform(gs->width, x);
    // Plane-wave carrier shifts the transform; evaluated along the carrier.
    const auto& p = std::get<PlaneWavePacket>(g);
    const double kk = std::sqrt(p.k0[0] * p.k0[0] + p.k0[1] * p.k0[1] + p.k0[2] * p.k0[2]);
    return gauss3d_transform(p.width, std::fabs(x - kk));
}

// W(X) = int dOmega |G(X n)|^2 by quadrature over the polar angle.
inline double angular_weight(const propsign::fields::SpatialVariant& g, double x) {
    using namespace propsign::fields;
    if (const auto* gs = std::get_if<Gaussian3D>(&g)) {
        const double v = gauss3d_transform(gs->width, x);
        return 4.0 * detail::pi_d * v * v;
    }
    const auto& p = std::get<PlaneWavePacket>(g);
    const double kk = std::sqrt(p.k0[0] * p.k0[0] + p.k0[1] * p.k0[1] + p.k0[2] * p.k0[2]);
    return 2.0 * detail::pi_d *
           detail::integrate_d(
               [&](double c) {
                   const double s = std::sqrt(std::max(0.0, x * x + kk * kk - 2.0 * x * kk * c));
                   const double v = gauss3d_transform(p.width, s);
                   return v * v;
               },
               -1.0, 1.0, 4, 24);
}

// Re iDF by the momentum-space formula with every factor from the
// quadrature oracles above, on an independent panel grid.
inline double re_idf(const propsign::fields::TestFunction& f, double mass, double k_max) {
    const double value = detail::integrate_d(
        [&](double k) {
            const double omega = std::sqrt(k * k + mass * mass);
            return k * k / (2.0 * omega) * oracles::angular_weight(f.spatial, k) *
                   (oracles::temporal_power(f.temporal, omega) +
                    oracles::temporal_power(f.temporal, -omega));
        },
        0.0, k_max, 40, 12);
    const double twopi3 = 8.0 * detail::pi_d * detail::pi_d * detail::pi_d;
    return value / (2.0 * twopi3);
}

// Im iDF for the exponential profile: the relative-time integral collapses
// analytically to Omega/(omega_bar^2 + Omega^2), leaving one radial
// quadrature with the oracle angular weight.
inline double im_idf_exponential(double omega_bar, const propsign::fields::SpatialVariant& g,
                                 double mass, double k_max) {
    const double value = detail::integrate_d(
        [&](double x) {
            const double omega2 = x * x + mass * mass;
            return x * x * oracles::angular_weight(g, x) / (omega_bar * omega_bar + omega2);
        },
        0.0, k_max, 40, 12);
    const double twopi3 = 8.0 * detail::pi_d * detail::pi_d * detail::pi_d;
    return -value / (2.0 * omega_bar * twopi3);
}

}  // namespace oracles
