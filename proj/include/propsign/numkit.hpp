#pragma once

#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include "propsign/errors.hpp"

namespace propsign::numkit {

// ---------------------------------------------------------------------------
// Quadrature rules.  Nodes live on the reference interval [-1, 1]; weights of
// the Gauss-Legendre and tanh-sinh rules are strictly positive.
// ---------------------------------------------------------------------------

enum class RuleKind { GaussLegendre, TanhSinh, Trapezoid };

struct QuadratureRule {
    RuleKind kind;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_legendre(int n);
QuadratureRule tanh_sinh(int half_points);  // 2*half_points + 1 nodes
QuadratureRule trapezoid(int n);            // n + 1 equispaced nodes

// ---------------------------------------------------------------------------
// Special functions.
// ---------------------------------------------------------------------------

// Bessel J0/J1: power series for |z| <= 12, Hankel asymptotics beyond.
// Absolute error <= 1e-10 for |z| <= 50.  Non-finite z raises domain_error.
double bessel_j0(double z);
double bessel_j1(double z);

// Imaginary error function, (2/sqrt(pi)) * int_0^x exp(t^2) dt, for |x| <= 6.
// All series terms are positive, so accuracy is limited only by double
// rounding (~1e-15 relative).  |x| > 6 or non-finite x raises domain_error.
double erfi(double x);

namespace detail {
inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}
inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

// ---------------------------------------------------------------------------
// Definite integrals.  The integrand may return double or complex<double>.
// A non-finite integrand value raises evaluation_error with the node.
// ---------------------------------------------------------------------------

template <class F>
auto integrate_1d(F&& f, double a, double b, const QuadratureRule& rule) {
    using R = std::invoke_result_t<F&, double>;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    R acc{};
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double x = mid + half * rule.nodes[i];
        const R fx = f(x);
        if (!detail::finite(fx)) throw evaluation_error("integrand not finite", x);
        acc += rule.weights[i] * fx;
    }
    return acc * half;
}

// Composite version: [a, b] split into `panels` equal panels.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, const QuadratureRule& rule) {
    using R = std::invoke_result_t<F&, double>;
    R acc{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        acc += integrate_1d(f, a + p * h, a + (p + 1) * h, rule);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Semi-infinite integral of an (at least) exponentially decaying integrand.
// Truncates at 40 * decay_scale; the contribution of the last eighth of the
// truncated range is the reported tail bound, and a tail above 1e-6 of the
// total signals that the integrand does not decay -> accuracy_error.
// ---------------------------------------------------------------------------

template <class R>
struct SemiInfinite {
    R value;
    double tail_fraction;
};

template <class F>
auto integrate_semi_infinite_report(F&& f, double decay_scale, const QuadratureRule& rule) {
    using R = std::invoke_result_t<F&, double>;
    if (!(decay_scale > 0.0)) throw std::invalid_argument("decay_scale must be positive");
    const double cutoff = 40.0 * decay_scale;
    const int panels = 80;  // half a decay scale per panel
    const double h = cutoff / panels;
    R acc{};
    R tail{};
    for (int p = 0; p < panels; ++p) {
        const R piece = integrate_1d(f, p * h, (p + 1) * h, rule);
        acc += piece;
        if (p >= panels - panels / 8) tail += piece;
    }
    const double scale = detail::magnitude(acc);
    const double tail_fraction =
        scale > 0.0 ? detail::magnitude(tail) / scale : detail::magnitude(tail);
    SemiInfinite<R> out{acc, tail_fraction};
    if (tail_fraction > 1e-6) {
        throw accuracy_error("semi-infinite integrand does not decay: tail fraction " +
                             std::to_string(tail_fraction));
    }
    return out;
}

template <class F>
auto integrate_semi_infinite(F&& f, double decay_scale, const QuadratureRule& rule) {
    return integrate_semi_infinite_report(f, decay_scale, rule).value;
}

// ---------------------------------------------------------------------------
// Tabulated-integral checks.  Each returns both sides so callers can assert
// |lhs - rhs| against their own tolerance.
//
//   gr_3876_1_check:  lhs = int_0^inf sin(dt*sqrt(u^2+m^2))/sqrt(u^2+m^2)
//                                * cos(r*u) du
//                     rhs = theta(dt - r) * (pi/2) * J0(m*sqrt(dt^2 - r^2)),
//                     with theta(0) = 1/2 on the light cone dt = r.
//   The integrand decays only like 1/u; the lhs splits the product into two
//   phase components, integrates each between consecutive phase zeros, and
//   Euler-accelerates the alternating panel sums.
//
//   gr_6677_6_check:  lhs = int_0^dt J0(m*sqrt(dt^2-r^2)) cos(s*r) dr
//                     rhs = sin(dt*sqrt(s^2+m^2))/sqrt(s^2+m^2).
//
// Supported envelope: m, dt > 0, r, s >= 0, m*dt <= 10; for gr_3876_1 either
// dt = r exactly (light cone) or |dt - r| >= 0.1.
// ---------------------------------------------------------------------------

struct CheckPair {
    double lhs;
    double rhs;
};

CheckPair gr_3876_1_check(double m, double dt, double r,
                          const QuadratureRule& rule = gauss_legendre(24));
CheckPair gr_6677_6_check(double m, double dt, double s,
                          const QuadratureRule& rule = gauss_legendre(24));

}  // namespace propsign::numkit
