#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "propsign/numkit.hpp"

using namespace propsign;
using namespace propsign::numkit;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss_legendre nodes and weights") {
    const auto r1 = gauss_legendre(1);
    CHECK(r1.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

    const auto r = gauss_legendre(24);
    CHECK(r.kind == RuleKind::GaussLegendre);
    CHECK(r.size() == 24);
    double wsum = 0.0;
    for (int i = 0; i < 24; ++i) {
        wsum += r.weights[i];
        CHECK(r.nodes[i] == doctest::Approx(-r.nodes[23 - i]).epsilon(1e-14));
        CHECK(r.weights[i] > 0.0);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

    // Degree 2n-1 exactness: n = 5 integrates x^9 exactly.
    const double val = integrate_1d([](double x) { return std::pow(x, 9); }, 0.0, 1.0,
                                    gauss_legendre(5));
    CHECK(val == doctest::Approx(0.1).epsilon(1e-14));

    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("tanh_sinh handles endpoint singularities") {
    const auto r = tanh_sinh(40);
    CHECK(r.kind == RuleKind::TanhSinh);
    CHECK(r.size() == 81);

    const double smooth = integrate_1d([](double x) { return std::exp(x); }, -1.0, 1.0, r);
    CHECK(smooth == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-13));

    const double singular =
        integrate_1d([](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -1.0, 1.0, r);
    CHECK(singular == doctest::Approx(kPi).epsilon(1e-8));

    CHECK_THROWS_AS(tanh_sinh(0), std::invalid_argument);
}

TEST_CASE("trapezoid rule") {
    const auto r = trapezoid(8);
    CHECK(r.kind == RuleKind::Trapezoid);
    CHECK(r.size() == 9);
    CHECK(r.nodes.front() == doctest::Approx(-1.0));
    CHECK(r.nodes.back() == doctest::Approx(1.0));
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

    // Exact for linear functions.
    const double lin = integrate_1d([](double x) { return 3.0 * x + 2.0; }, 1.0, 5.0, r);
    CHECK(lin == doctest::Approx(44.0).epsilon(1e-14));

    // Spectral accuracy on a full period.
    const double per = integrate_1d([](double x) { return std::cos(x); }, 0.0, 2.0 * kPi,
                                    trapezoid(32));
    CHECK(std::fabs(per) < 1e-13);

    CHECK_THROWS_AS(trapezoid(0), std::invalid_argument);
}

TEST_CASE("integrate_1d and integrate_panels") {
    const auto rule = gauss_legendre(24);
    const double v = integrate_1d([](double x) { return 1.0 / x; }, 1.0, 3.0, rule);
    CHECK(v == doctest::Approx(std::log(3.0)).epsilon(1e-14));

    const double p = integrate_panels([](double x) { return std::sin(x); }, 0.0, kPi, 4, rule);
    CHECK(p == doctest::Approx(2.0).epsilon(1e-14));

    // Complex integrand: int_0^1 exp(i x) dx = sin(1) + i(1 - cos(1)).
    const std::complex<double> c = integrate_1d(
        [](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0, 1.0, rule);
    CHECK(c.real() == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
    CHECK(c.imag() == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-14));

    // A node landing on a pole raises evaluation_error carrying the node.
    CHECK_THROWS_AS(integrate_1d([](double x) { return 1.0 / x; }, -1.0, 1.0, trapezoid(2)),
                    evaluation_error);
}

TEST_CASE("integrate_semi_infinite") {
    const auto rule = gauss_legendre(16);

    const auto expo = integrate_semi_infinite_report([](double u) { return std::exp(-u); }, 1.0,
                                                     rule);
    CHECK(expo.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expo.tail_fraction < 1e-12);

    const double gauss =
        integrate_semi_infinite([](double u) { return std::exp(-u * u); }, 1.0, rule);
    CHECK(gauss == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-12));

    // Slowly decaying integrands are rejected rather than silently truncated.
    CHECK_THROWS_AS(integrate_semi_infinite([](double u) { return 1.0 / (1.0 + u); }, 1.0, rule),
                    accuracy_error);

    CHECK_THROWS_AS(integrate_semi_infinite([](double u) { return std::exp(-u); }, 0.0, rule),
                    std::invalid_argument);
}

TEST_CASE("bessel_j0 and bessel_j1 against frozen reference values") {
    // Values from the quad-precision power series oracle.
    const struct {
        double z, j0, j1;
    } table[] = {
        {0.5, 0.93846980724081286, 0.2422684576748739},
        {1.0, 0.76519768655796661, 0.4400505857449335},
        {2.0, 0.22389077914123567, 0.5767248077568734},
        {5.0, -0.17759677131433829, -0.32757913759146523},
        {8.0, 0.1716508071375539, 0.23463634685391463},
        {11.9, 0.025049441699589645, -0.22898324966192404},
        {12.1, 0.069666773606807314, -0.21574897337692481},
        {20.0, 0.16702466434058316, 0.06683312417585005},
        {30.0, -0.086367983581040211, -0.11875106261662294},
        {50.0, 0.055812327669252683, -0.097511828125175462},
    };
    for (const auto& row : table) {
        CHECK(std::fabs(bessel_j0(row.z) - row.j0) <= 1e-10);
        CHECK(std::fabs(bessel_j1(row.z) - row.j1) <= 1e-10);
    }

    CHECK(bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bessel_j1(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bessel_j0(-3.0) == doctest::Approx(bessel_j0(3.0)).epsilon(1e-15));
    CHECK(bessel_j1(-3.0) == doctest::Approx(-bessel_j1(3.0)).epsilon(1e-15));
}

TEST_CASE("bessel functions against live oracle across the domain") {
    for (double z = 0.05; z <= 50.0; z += 0.45) {
        CHECK(std::fabs(bessel_j0(z) - oracles::bessel_j0(z)) <= 1e-10);
        CHECK(std::fabs(bessel_j1(z) - oracles::bessel_j1(z)) <= 1e-10);
    }
}

TEST_CASE("bessel derivative relation J0' = -J1") {
    const double h = 1e-5;
    for (double z : {0.7, 3.3, 9.0, 17.5, 33.0}) {
        const double d = (bessel_j0(z + h) - bessel_j0(z - h)) / (2.0 * h);
        CHECK(d == doctest::Approx(-bessel_j1(z)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(bessel_j0(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(bessel_j1(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("erfi against frozen reference values") {
    // Values from the long-double quadrature oracle.
    const struct {
        double x, v;
    } table[] = {
        {0.1, 0.11321517416959979}, {0.5, 0.61495209469651102}, {1.0, 1.6504257587975428},
        {2.0, 18.564802414575553},  {3.0, 1629.9946226015657},  {4.5, 80197458.901217476},
        {6.0, 411275145582823.88},
    };
    for (const auto& row : table) {
        CHECK(erfi(row.x) == doctest::Approx(row.v).epsilon(5e-14));
        CHECK(erfi(-row.x) == doctest::Approx(-row.v).epsilon(5e-14));
    }
    CHECK(erfi(0.0) == 0.0);

    for (double x = 0.05; x <= 6.0; x += 0.13) {
        CHECK(erfi(x) == doctest::Approx(oracles::erfi(x)).epsilon(5e-14));
    }

    // Derivative: d erfi / dx = 2/sqrt(pi) exp(x^2).
    const double h = 1e-6;
    for (double x : {0.4, 1.7, 3.1}) {
        const double d = (erfi(x + h) - erfi(x - h)) / (2.0 * h);
        CHECK(d == doctest::Approx(2.0 / std::sqrt(kPi) * std::exp(x * x)).epsilon(1e-8));
    }

    CHECK_THROWS_AS(erfi(6.0001), std::domain_error);
    CHECK_THROWS_AS(erfi(std::nan("")), std::domain_error);
}

TEST_CASE("gr_3876_1_check: oscillatory route matches closed form") {
    SUBCASE("interior timelike points") {
        const struct {
            double m, dt, r;
        } pts[] = {
            {1.0, 1.0, 0.0}, {1.0, 2.0, 1.0},  {2.0, 3.0, 2.0},
            {0.5, 4.0, 2.0}, {1.5, 2.0, 0.5},  {2.0, 4.0, 3.9},
        };
        for (const auto& p : pts) {
            const auto c = gr_3876_1_check(p.m, p.dt, p.r);
            CHECK(std::fabs(c.lhs - c.rhs) <= 1e-6);
        }
    }
    SUBCASE("spacelike points vanish") {
        const struct {
            double m, dt, r;
        } pts[] = {{1.0, 1.0, 2.0}, {2.0, 0.5, 3.9}, {0.5, 2.0, 3.0}};
        for (const auto& p : pts) {
            const auto c = gr_3876_1_check(p.m, p.dt, p.r);
            CHECK(c.rhs == 0.0);
            CHECK(std::fabs(c.lhs) <= 1e-6);
        }
    }
    SUBCASE("light cone carries half weight") {
        const struct {
            double m, dt;
        } pts[] = {{1.0, 1.0}, {2.0, 2.0}, {0.5, 3.0}};
        for (const auto& p : pts) {
            const auto c = gr_3876_1_check(p.m, p.dt, p.dt);
            CHECK(c.rhs == doctest::Approx(kPi / 4.0).epsilon(1e-15));
            CHECK(std::fabs(c.lhs - c.rhs) <= 1e-6);
        }
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(gr_3876_1_check(0.0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(gr_3876_1_check(1.0, -1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(gr_3876_1_check(1.0, 1.0, -0.5), std::invalid_argument);
    }
}

TEST_CASE("gr_6677_6_check: finite interval route matches closed form") {
    for (double m : {0.5, 1.0, 2.0}) {
        for (double dt : {0.5, 2.0, 4.0}) {
            for (double s : {0.0, 1.0, 3.9}) {
                const auto c = gr_6677_6_check(m, dt, s);
                CHECK(std::fabs(c.lhs - c.rhs) <= 1e-9);
            }
        }
    }

    const auto zero = gr_6677_6_check(1.0, 0.0, 1.0);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == doctest::Approx(0.0).epsilon(1e-15));

    // Alternative rule kinds reach the same answer.
    const auto ts = gr_6677_6_check(1.5, 3.0, 2.0, tanh_sinh(24));
    CHECK(std::fabs(ts.lhs - ts.rhs) <= 1e-8);
    const auto tz = gr_6677_6_check(1.5, 3.0, 2.0, trapezoid(600));
    CHECK(std::fabs(tz.lhs - tz.rhs) <= 1e-6);

    CHECK_THROWS_AS(gr_6677_6_check(-1.0, 1.0, 1.0), std::invalid_argument);
}
