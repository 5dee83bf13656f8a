#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "json.hpp"
#include "propsign/covmap.hpp"
#include "propsign/errors.hpp"
#include "propsign/numkit.hpp"

using namespace propsign;
using namespace propsign::covmap;

namespace {

double maxdev(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

PState random_pstate(const MomentumBasis& basis, std::mt19937_64& rng) {
    return PState{basis, channels::random_density(basis.dim(), rng)};
}

// Full-line Gaussian Fourier multiplier, evaluated by brute quadrature.
double multiplier_oracle(double delta, double tau) {
    const double span = 40.0 * std::sqrt(tau);
    const auto f = [&](double u) {
        return std::exp(-u * u / (4.0 * tau)) * std::cos(delta * u) /
               (2.0 * std::sqrt(M_PI * tau));
    };
    return numkit::integrate_panels(f, -span, span, 64, numkit::gauss_legendre(12));
}

}  // namespace

TEST_CASE("minkowski contraction uses the plus minus minus minus signature") {
    CHECK(minkowski_dot({1, 2, 3, 4}, {1, 2, 3, 4}) == doctest::Approx(-28.0).epsilon(1e-15));
    CHECK(minkowski_dot({1, 0, 0, 0}, {5, 7, -2, 9}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(minkowski_dot({0, 1, 0, 0}, {5, 7, -2, 9}) == doctest::Approx(-7.0).epsilon(1e-15));
}

TEST_CASE("basis construction contracts points and enforces distinctness") {
    const MomentumBasis basis = make_basis({{1, 0, 0, 0}, {2, 1, 0, 0}, {3, 0, 2, 0}},
                                           {1, 0.5, 0.25, 0});
    REQUIRE(basis.dim() == 3);
    CHECK(basis.scalars[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(basis.scalars[1] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(basis.scalars[2] == doctest::Approx(2.5).epsilon(1e-15));

    CHECK_THROWS_AS(basis_from_scalars({0.0, 1.0, 1.0}), input_error);
    CHECK_NOTHROW(basis_from_scalars({0.0, 1.0, 1.0}, true));
    CHECK_THROWS_AS(basis_from_scalars({}), input_error);
    CHECK_THROWS_AS(make_basis({{1, 0, 0, 0}, {1, 1, 0, 0}}, {0, 0, 0, 0}), input_error);
}

TEST_CASE("forward map damps off-diagonal elements by the Gaussian multiplier") {
    const MomentumBasis basis = basis_from_scalars({0.0, 1.0, 2.3});
    std::mt19937_64 rng(7);
    const PState s = random_pstate(basis, rng);

    const PState out = gaussian_forward(s, 0.5);
    CHECK_NOTHROW(validate(out));
    for (int i = 0; i < 3; ++i) CHECK(out.rho.rho(i, i) == s.rho.rho(i, i));

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double d = basis.scalars[i] - basis.scalars[j];
            const std::complex<double> expected = s.rho.rho(i, j) * multiplier_oracle(d, 0.5);
            CHECK(std::abs(out.rho.rho(i, j) - expected) <= 1e-12);
        }

    const PState frozen = gaussian_forward(s, 1e-14);
    CHECK(maxdev(frozen.rho.rho, s.rho.rho) <= 1e-12);

    CHECK_THROWS_AS(gaussian_forward(s, 0.0), input_error);
    CHECK_THROWS_AS(gaussian_forward(s, -1.0), input_error);
}

TEST_CASE("backward map inverts forward exactly and overflows honestly") {
    const MomentumBasis basis = basis_from_scalars({0.0, 0.5, 1.3, 2.0});
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const PState s = random_pstate(basis, rng);
        const PState pushed = gaussian_forward(s, 0.8);
        const Matrix back = gaussian_backward(pushed.rho.rho, basis.scalars, 0.8);
        CHECK(maxdev(back, s.rho.rho) <= 1e-12);
    }

    const Matrix eye = Matrix::Identity(4, 4);
    CHECK(maxdev(gaussian_backward(eye, basis.scalars, 2.0), eye) == 0.0);

    Matrix ones = Matrix::Ones(2, 2);
    const Matrix grown = gaussian_backward(ones, {0.0, 2.0}, 1.0);
    CHECK(std::abs(grown(0, 1)) == doctest::Approx(std::exp(4.0)).epsilon(1e-14));
    CHECK(std::abs(grown(1, 0)) == doctest::Approx(std::exp(4.0)).epsilon(1e-14));

    CHECK_THROWS_AS(gaussian_backward(ones, {0.0, 30.0}, 1.0), range_error);
    CHECK_THROWS_AS(gaussian_backward(ones, {0.0, 1.0, 2.0}, 1.0), input_error);
}

TEST_CASE("semigroup composition and injectivity of the forward map") {
    const MomentumBasis basis = basis_from_scalars({-0.4, 0.3, 1.1, 1.9});
    std::mt19937_64 rng(13);
    const PState s = random_pstate(basis, rng);

    const PState two_step = gaussian_forward(gaussian_forward(s, 0.3), 0.9);
    const PState one_step = gaussian_forward(s, 1.2);
    CHECK(maxdev(two_step.rho.rho, one_step.rho.rho) <= 1e-12);

    const PState a = random_pstate(basis, rng);
    const PState b = random_pstate(basis, rng);
    const double gap = maxdev(a.rho.rho, b.rho.rho);
    REQUIRE(gap > 1e-3);
    double max_d2 = 0.0;
    for (double si : basis.scalars)
        for (double sj : basis.scalars) max_d2 = std::max(max_d2, (si - sj) * (si - sj));
    const double floor = gap * std::exp(-max_d2 * 1.2);
    CHECK(maxdev(gaussian_forward(a, 1.2).rho.rho, gaussian_forward(b, 1.2).rho.rho) >=
          floor * (1.0 - 1e-12));
}

TEST_CASE("purity rate equals minus four times the scalar variance") {
    Vector even(2);
    even << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(purity_rate(even, {0.0, 1.0}) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(purity_rate(even, {0.0, 2.0}) == doctest::Approx(-4.0).epsilon(1e-14));

    Vector point = Vector::Zero(3);
    point(1) = 1.0;
    CHECK(purity_rate(point, {0.0, 1.0, 2.0}) == 0.0);

    std::mt19937_64 rng(17);
    const MomentumBasis basis = basis_from_scalars({0.0, 0.7, 1.6});
    for (int trial = 0; trial < 5; ++trial) {
        const Vector psi = channels::haar_state(3, rng);
        const double rate = purity_rate(psi, basis.scalars);
        if (std::abs(rate) < 1e-6) continue;
        const PState pure{basis, DensityMatrix{psi * psi.adjoint()}};
        const double h = 1e-6;
        const double slope = (channels::purity(gaussian_forward(pure, h).rho) - 1.0) / h;
        CHECK(std::abs(slope - rate) <= 1e-4 * std::abs(rate));
    }
}

TEST_CASE("sigma components are valid states that average to the forward image") {
    const MomentumBasis basis = basis_from_scalars({0.0, 0.6, 1.4, 2.0});
    std::mt19937_64 rng(19);
    for (double tau : {0.35, 1.0}) {
        const Vector psi = channels::haar_state(4, rng);
        const DensityMatrix plus = sigma_pm(psi, basis, tau, +1);
        const DensityMatrix minus = sigma_pm(psi, basis, tau, -1);
        CHECK(std::abs(plus.rho.trace() - std::complex<double>(1.0)) <= 1e-10);
        CHECK(std::abs(minus.rho.trace() - std::complex<double>(1.0)) <= 1e-10);

        const PState pure{basis, DensityMatrix{psi * psi.adjoint()}};
        const Matrix mean = 0.5 * (plus.rho + minus.rho);
        CHECK(maxdev(mean, gaussian_forward(pure, tau).rho.rho) <= 1e-9);

        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const std::complex<double> closed =
                    psi(i) * std::conj(psi(j)) *
                    sigma_element_closed(basis.scalars[i], basis.scalars[j], tau, +1);
                CHECK(std::abs(plus.rho(i, j) - closed) <= 1e-9);
            }
    }

    Vector point = Vector::Zero(4);
    point(2) = 1.0;
    const DensityMatrix fixed = sigma_pm(point, basis, 0.7, -1);
    CHECK(maxdev(fixed.rho, point * point.adjoint()) <= 1e-12);

    const Vector psi = channels::haar_state(4, rng);
    CHECK_THROWS_AS(sigma_pm(psi, basis, 0.7, 0), input_error);
    CHECK_THROWS_AS(sigma_pm(psi, basis, 0.0, 1), input_error);
    CHECK_THROWS_AS(sigma_pm(2.0 * psi, basis, 0.7, 1), input_error);
}

TEST_CASE("bracket reproduces the master equation of the forward map") {
    const MomentumBasis basis = basis_from_scalars({0.0, 0.8, 1.7});
    std::mt19937_64 rng(23);
    const PState s = random_pstate(basis, rng);

    Matrix d = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) d(i, i) = basis.scalars[i];

    const Matrix br = bracket(d, s.rho.rho, d);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double gap = basis.scalars[i] - basis.scalars[j];
            CHECK(std::abs(br(i, j) - gap * gap * s.rho.rho(i, j)) <= 1e-12);
        }

    const double h = 1e-6;
    const Matrix fd = (gaussian_forward(s, h).rho.rho - s.rho.rho) / h;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(fd(i, j) + br(i, j)) <= 1e-4 * (std::abs(br(i, j)) + 1e-12));

    CHECK_THROWS_AS(bracket(Matrix::Zero(2, 3), s.rho.rho, d), input_error);
}

TEST_CASE("witness certifies the missing preimage on the standard fixture") {
    const WitnessFixture fx = standard_witness_fixture();
    const WitnessResult w = nononto_witness(fx.psi, fx.phi, fx.basis, fx.tau);

    CHECK(w.w_plus == doctest::Approx(2.9375487197563007).epsilon(1e-9));
    CHECK(w.w_minus == doctest::Approx(-2.9375487197563007).epsilon(1e-9));
    CHECK(std::abs(w.w_plus + w.w_minus) <= 1e-8);
    CHECK(std::min(w.w_plus, w.w_minus) < -1e-4);
    CHECK(w.verdict == "not_onto");
    CHECK(w.tau == 1.0);
    REQUIRE(w.lambda_scalars.size() == 3);

    const nlohmann::json doc = nlohmann::json::parse(to_json(w));
    CHECK(doc["tau"] == 1.0);
    CHECK(doc["w_plus"].get<double>() == doctest::Approx(w.w_plus).epsilon(1e-15));
    CHECK(doc["w_minus"].get<double>() == doctest::Approx(w.w_minus).epsilon(1e-15));
    CHECK(doc["verdict"] == "not_onto");
    CHECK(doc["lambda_scalars"].size() == 3);
}

TEST_CASE("witness is provably inconclusive on two points and for lambda zero") {
    std::mt19937_64 rng(29);
    const MomentumBasis two = basis_from_scalars({0.0, 1.0});
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 10; ++trial) {
        const Vector psi = channels::haar_state(2, rng);
        Vector phi(2);
        phi << -std::conj(psi(1)), std::conj(psi(0));
        phi *= std::polar(1.0, angle(rng));
        REQUIRE(std::abs(phi.dot(psi)) <= 1e-12);
        CHECK_THROWS_AS(nononto_witness(psi, phi, two, 1.0), witness_inconclusive_error);
    }

    const WitnessFixture fx = standard_witness_fixture();
    const MomentumBasis still = basis_from_scalars({0.0, 0.0, 0.0}, true);
    CHECK_THROWS_AS(nononto_witness(fx.psi, fx.phi, still, 1.0), witness_inconclusive_error);

    CHECK_THROWS_AS(nononto_witness(fx.psi, fx.psi, fx.basis, 1.0), input_error);
}
