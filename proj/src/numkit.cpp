#include "propsign/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace propsign::numkit {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadratureRule rule{RuleKind::GaussLegendre, std::vector<double>(n), std::vector<double>(n)};
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

QuadratureRule tanh_sinh(int half_points) {
    if (half_points < 1) throw std::invalid_argument("tanh_sinh: half_points must be >= 1");
    // Outermost nodes sit where 1 - |x| ~ machine epsilon.
    const double t_max = std::asinh(std::atanh(1.0 - 1e-15) * 2.0 / kPi);
    const double h = t_max / half_points;
    QuadratureRule rule{RuleKind::TanhSinh, {}, {}};
    rule.nodes.reserve(2 * half_points + 1);
    rule.weights.reserve(2 * half_points + 1);
    for (int j = -half_points; j <= half_points; ++j) {
        const double t = j * h;
        const double s = 0.5 * kPi * std::sinh(t);
        const double x = std::tanh(s);
        const double w = h * 0.5 * kPi * std::cosh(t) / (std::cosh(s) * std::cosh(s));
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

QuadratureRule trapezoid(int n) {
    if (n < 1) throw std::invalid_argument("trapezoid: n must be >= 1");
    QuadratureRule rule{RuleKind::Trapezoid, std::vector<double>(n + 1), std::vector<double>(n + 1)};
    const double h = 2.0 / n;
    for (int i = 0; i <= n; ++i) {
        rule.nodes[i] = -1.0 + i * h;
        rule.weights[i] = (i == 0 || i == n) ? 0.5 * h : h;
    }
    return rule;
}

// ---------------------------------------------------------------------------
// Bessel J0 / J1
// ---------------------------------------------------------------------------

namespace {

double j0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return sum;
}

double j1_series(double z) {
    const double q = 0.25 * z * z;
    double term = 0.5 * z, sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return sum;
}

// Hankel asymptotic expansion: J_nu(z) = sqrt(2/(pi z)) (P cos(chi) - Q sin(chi)),
// chi = z - (nu/2 + 1/4) pi, with the (nu,k) coefficient recurrence.  The
// series is truncated at its smallest term.
double j_asymptotic(int nu, double z) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double coeff = 1.0;
    double prev = 1.0;
    for (int k = 1; k <= 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        coeff *= (mu - odd * odd) / (8.0 * k * z);
        if (std::fabs(coeff) >= prev) break;  // asymptotic tail started growing
        prev = std::fabs(coeff);
        switch (k % 4) {
            case 1: q += coeff; break;
            case 2: p -= coeff; break;
            case 3: q -= coeff; break;
            case 0: p += coeff; break;
        }
        if (prev < 1e-18) break;
    }
    const double chi = z - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double z) {
    if (!std::isfinite(z)) throw std::domain_error("bessel_j0: non-finite argument");
    const double az = std::fabs(z);
    return az <= 12.0 ? j0_series(az) : j_asymptotic(0, az);
}

double bessel_j1(double z) {
    if (!std::isfinite(z)) throw std::domain_error("bessel_j1: non-finite argument");
    const double az = std::fabs(z);
    const double v = az <= 12.0 ? j1_series(az) : j_asymptotic(1, az);
    return z < 0.0 ? -v : v;
}

double erfi(double x) {
    if (!std::isfinite(x)) throw std::domain_error("erfi: non-finite argument");
    if (std::fabs(x) > 6.0) throw std::domain_error("erfi: |x| > 6 outside supported range");
    const double x2 = x * x;
    double term = x, sum = x;
    for (int m = 1; m < 200; ++m) {
        term *= x2 / m;
        const double add = term / (2.0 * m + 1.0);
        sum += add;
        if (std::fabs(add) < 1e-17 * std::fabs(sum) + 1e-300) break;
    }
    return 2.0 / std::sqrt(kPi) * sum;
}

// ---------------------------------------------------------------------------
// gr_3876_1: oscillatory half-line integral
// ---------------------------------------------------------------------------

namespace {

// Euler transformation of a finite alternating-tail series: the first few
// terms are summed directly, the rest through iterated averaging of partial
// sums.  `terms` carries the signed panel integrals.
double euler_sum(const std::vector<double>& terms) {
    const std::size_t n = terms.size();
    const std::size_t direct = std::min<std::size_t>(8, n);
    double head = 0.0;
    for (std::size_t i = 0; i < direct; ++i) head += terms[i];
    if (direct == n) return head;

    std::vector<double> s(terms.begin() + direct, terms.end());
    for (std::size_t i = 1; i < s.size(); ++i) s[i] += s[i - 1];  // partial sums
    while (s.size() > 1) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
        s.pop_back();
    }
    return head + s[0];
}

struct PhaseIntegrand {
    double m, c1, c2;  // phase c1*sqrt(u^2+m^2) + c2*u, amplitude 1/sqrt(u^2+m^2)
    double phase(double u) const { return c1 * std::hypot(u, m) + c2 * u; }
    double rate(double u) const { return c1 * u / std::hypot(u, m) + c2; }
    double operator()(double u) const { return std::sin(phase(u)) / std::hypot(u, m); }
};

// Solves sgn*phase(u) == target on [lo, hi] by bisection; the bracket is
// grown to the right until it straddles the target.
double solve_phase(const PhaseIntegrand& f, double sgn, double target, double lo, double hi_hint) {
    double hi = hi_hint;
    while (sgn * f.phase(hi) < target) hi += (hi - lo) + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sgn * f.phase(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

// Light cone (c2 == -c1): the phase decreases monotonically from c1*m to 0,
// so beyond the last sign change the integrand is single signed; the tail is
// mapped to a finite interval with v = 1/u, where the phase
// (c1/v)(sqrt(1+m^2 v^2) - 1) = c1 m^2 v / (sqrt(1+m^2 v^2) + 1) is smooth.
double half_line_lightcone(const PhaseIntegrand& f, const QuadratureRule& rule) {
    const double cutoff = std::max(20.0, 4.0 * f.c1 * f.m * f.m);
    const double width = kPi / (1.0 + f.c1 + std::fabs(f.c2));
    const int panels = static_cast<int>(std::ceil(cutoff / width));
    double head = integrate_panels(f, 0.0, cutoff, panels, rule);

    const double m = f.m, c1 = f.c1;
    auto mapped = [m, c1](double v) {
        const double root = std::sqrt(1.0 + m * m * v * v);
        const double phase = c1 * m * m * v / (root + 1.0);
        return std::sin(phase) / (v * root);
    };
    const double tail = integrate_panels(mapped, 0.0, 1.0 / cutoff, 4, gauss_legendre(32));
    return head + tail;
}

// General case: integrate up to the point where the phase becomes steadily
// monotone, then sum panels between consecutive phase multiples of pi and
// Euler-accelerate the alternating series.
double half_line_oscillatory(const PhaseIntegrand& f, double nu, const QuadratureRule& rule) {
    const double sgn = nu > 0.0 ? 1.0 : -1.0;
    // u_mono: beyond it |rate| >= |nu|/2.
    double u_mono = 0.0;
    if (nu > 0.0 && f.c2 < 0.0) {
        const double q = -f.c2 + 0.5 * nu;  // q < c1
        u_mono = f.m * q / std::sqrt(f.c1 * f.c1 - q * q);
    }
    const double u_head = std::max({u_mono * 1.5, 1.0});

    const double width = kPi / (1.0 + f.c1 + std::fabs(f.c2));
    const int head_panels = static_cast<int>(std::ceil(u_head / width));
    double result = integrate_panels(f, 0.0, u_head, head_panels, rule);

    // First phase multiple of pi beyond the head.
    double k0 = std::ceil(sgn * f.phase(u_head) / kPi);
    double u_prev = solve_phase(f, sgn, k0 * kPi, u_head, u_head + 2.0 * kPi / std::fabs(nu));
    result += integrate_panels(f, u_head, u_prev, 2, rule);

    std::vector<double> terms;
    terms.reserve(96);
    double scale = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double guess = u_prev + kPi / std::max(std::fabs(f.rate(u_prev)), 0.5 * std::fabs(nu));
        const double u_next = solve_phase(f, sgn, (k0 + k + 1) * kPi, u_prev, guess);
        const double piece = integrate_1d(f, u_prev, u_next, rule);
        terms.push_back(piece);
        scale = std::max(scale, std::fabs(piece));
        u_prev = u_next;
        if (terms.size() >= 48 && std::fabs(piece) < 1e-13) break;
        if (terms.size() >= 160) break;
    }
    if (terms.size() < 12) throw accuracy_error("gr_3876_1: too few oscillation panels");

    // Convergence probe: the Euler value must be stable under dropping the
    // last term.
    const double full = euler_sum(terms);
    std::vector<double> shorter(terms.begin(), terms.end() - 1);
    const double probe = euler_sum(shorter);
    if (std::fabs(full - probe) > 1e-7 * std::max(1.0, std::fabs(full)) + 1e-9) {
        throw accuracy_error("gr_3876_1: oscillatory tail did not converge");
    }
    return result + full;
}

// int_0^inf sin(c1*sqrt(u^2+m^2) + c2*u) / sqrt(u^2+m^2) du,  c1 > 0.
double half_line_phase_integral(double m, double c1, double c2, const QuadratureRule& rule) {
    const PhaseIntegrand f{m, c1, c2};
    const double nu = c1 + c2;
    if (std::fabs(nu) <= 1e-12 * (c1 + std::fabs(c2))) return half_line_lightcone(f, rule);
    return half_line_oscillatory(f, nu, rule);
}

}  // namespace

CheckPair gr_3876_1_check(double m, double dt, double r, const QuadratureRule& rule) {
    if (!(m > 0.0) || !(dt > 0.0) || !(r >= 0.0))
        throw std::invalid_argument("gr_3876_1_check: need m > 0, dt > 0, r >= 0");

    // sin(A)cos(B) = (sin(A+B) + sin(A-B))/2
    const double lhs = 0.5 * (half_line_phase_integral(m, dt, r, rule) +
                              half_line_phase_integral(m, dt, -r, rule));

    const double lc_tol = 1e-12 * (dt + r);
    double theta;
    if (dt - r > lc_tol)
        theta = 1.0;
    else if (r - dt > lc_tol)
        theta = 0.0;
    else
        theta = 0.5;
    const double arg2 = std::max(dt * dt - r * r, 0.0);
    const double rhs = theta * 0.5 * kPi * bessel_j0(m * std::sqrt(arg2));
    return {lhs, rhs};
}

CheckPair gr_6677_6_check(double m, double dt, double s, const QuadratureRule& rule) {
    if (!(m > 0.0) || !(dt >= 0.0) || !(s >= 0.0))
        throw std::invalid_argument("gr_6677_6_check: need m > 0, dt >= 0, s >= 0");

    auto f = [m, dt, s](double r) {
        const double arg2 = std::max(dt * dt - r * r, 0.0);
        return bessel_j0(m * std::sqrt(arg2)) * std::cos(s * r);
    };
    const double width = kPi / (1.0 + s + m);
    const int panels = std::max(1, static_cast<int>(std::ceil(dt / width)));
    const double lhs = dt > 0.0 ? integrate_panels(f, 0.0, dt, panels, rule) : 0.0;

    const double w = std::hypot(s, m);
    const double rhs = std::sin(dt * w) / w;
    return {lhs, rhs};
}

}  // namespace propsign::numkit
