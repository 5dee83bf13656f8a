#include "propsign/covmap.hpp"

#include <cmath>
#include <complex>

#include "json.hpp"
#include "propsign/numkit.hpp"
#include "propsign/parallel.hpp"

namespace propsign::covmap {

namespace {

constexpr double kDistinctTol = 1e-12;
constexpr double kOrthoTol = 1e-10;
constexpr double kCrossTol = 1e-10;
constexpr double kRouteTol = 1e-6;
constexpr double kOverflowExponent = 700.0;

void check_normalized(const Vector& v, const char* what) {
    if (v.size() == 0) throw input_error(std::string(what) + " is empty");
    if (std::abs(v.norm() - 1.0) > kOrthoTol)
        throw input_error(std::string(what) + " is not normalized");
}

void check_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw input_error("tau must be finite and positive");
}

void check_sign(int sign) {
    if (sign != 1 && sign != -1) throw input_error("sign must be +1 or -1");
}

}  // namespace

double minkowski_dot(const FourVector& a, const FourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

void validate(const MomentumBasis& basis) {
    const int n = basis.dim();
    if (n == 0) throw input_error("momentum basis is empty");
    if (!basis.points.empty() && static_cast<int>(basis.points.size()) != n)
        throw input_error("momentum basis point and scalar counts differ");
    for (double s : basis.scalars)
        if (!std::isfinite(s)) throw input_error("momentum basis scalar is not finite");
    if (basis.allow_degenerate) return;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(basis.scalars[i] - basis.scalars[j]) <= kDistinctTol)
                throw input_error("momentum basis scalars " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide; flag the basis degenerate");
}

MomentumBasis make_basis(std::vector<FourVector> points, const FourVector& lambda,
                         bool allow_degenerate) {
    MomentumBasis basis;
    basis.points = std::move(points);
    basis.lambda = lambda;
    basis.scalars.reserve(basis.points.size());
    for (const FourVector& p : basis.points) basis.scalars.push_back(minkowski_dot(lambda, p));
    basis.allow_degenerate = allow_degenerate;
    validate(basis);
    return basis;
}

MomentumBasis basis_from_scalars(std::vector<double> scalars, bool allow_degenerate) {
    MomentumBasis basis;
    basis.lambda = FourVector{1.0, 0.0, 0.0, 0.0};
    basis.points.reserve(scalars.size());
    for (double s : scalars) basis.points.push_back(FourVector{s, 0.0, 0.0, 0.0});
    basis.scalars = std::move(scalars);
    basis.allow_degenerate = allow_degenerate;
    validate(basis);
    return basis;
}

void validate(const PState& s) {
    validate(s.basis);
    channels::validate(s.rho);
    if (s.basis.dim() != s.rho.dim())
        throw input_error("basis and density matrix dimensions differ");
}

PState gaussian_forward(const PState& s, double tau) {
    validate(s);
    check_tau(tau);
    const int n = s.basis.dim();
    Matrix out = s.rho.rho;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = s.basis.scalars[i] - s.basis.scalars[j];
            out(i, j) *= std::exp(-d * d * tau);
        }
    return PState{s.basis, DensityMatrix{std::move(out)}};
}

Matrix gaussian_backward(const Matrix& m, const std::vector<double>& scalars, double tau) {
    check_tau(tau);
    const int n = static_cast<int>(scalars.size());
    if (m.rows() != n || m.cols() != n)
        throw input_error("matrix shape does not match the scalar list");
    Matrix out = m;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = scalars[i] - scalars[j];
            const double exponent = d * d * tau;
            if (exponent > kOverflowExponent)
                throw range_error("backward map overflows: exponent " + std::to_string(exponent) +
                                  " exceeds 700 at element (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ")");
            out(i, j) *= std::exp(exponent);
        }
    return out;
}

double purity_rate(const Vector& psi, const std::vector<double>& scalars) {
    check_normalized(psi, "state");
    if (psi.size() != static_cast<Eigen::Index>(scalars.size()))
        throw input_error("state and scalar list dimensions differ");
    double mean = 0.0;
    double mean_sq = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi(i));
        mean += w * scalars[i];
        mean_sq += w * scalars[i] * scalars[i];
    }
    return -4.0 * (mean_sq - mean * mean);
}

std::complex<double> sigma_element_closed(double s_i, double s_j, double tau, int sign) {
    check_tau(tau);
    check_sign(sign);
    const double d = s_i - s_j;
    const double damp = std::exp(-d * d * tau);
    const double cross = numkit::erfi(d * std::sqrt(tau));
    return {damp, -sign * damp * cross};
}

DensityMatrix sigma_pm(const Vector& psi, const MomentumBasis& basis, double tau, int sign,
                       bool parallel) {
    validate(basis);
    check_normalized(psi, "state");
    check_tau(tau);
    check_sign(sign);
    const int n = basis.dim();
    if (psi.size() != n) throw input_error("state and basis dimensions differ");
    const Vector psi_n = psi / psi.norm();

    struct Pair {
        int i;
        int j;
    };
    std::vector<Pair> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) pairs.push_back({i, j});

    const auto rule = numkit::gauss_legendre(16);
    const double decay = 2.0 * std::sqrt(tau);
    const double norm = 1.0 / std::sqrt(M_PI * tau);
    std::vector<std::complex<double>> vals(pairs.size());

    parallel_for(
        static_cast<int>(pairs.size()),
        [&](int k) {
            const double d = basis.scalars[pairs[k].i] - basis.scalars[pairs[k].j];
            const auto f = [&](double u) {
                return norm * std::exp(-u * u / (4.0 * tau)) *
                       std::exp(std::complex<double>(0.0, -sign * d * u));
            };
            vals[k] = numkit::integrate_semi_infinite(f, decay, rule);
        },
        parallel);

    Matrix out(n, n);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const int i = pairs[k].i;
        const int j = pairs[k].j;
        const std::complex<double> amp = psi_n(i) * std::conj(psi_n(j));
        if (i == j) {
            out(i, i) = amp * vals[k].real();
        } else {
            out(i, j) = amp * vals[k];
            out(j, i) = std::conj(out(i, j));
        }
    }
    DensityMatrix rho{std::move(out)};
    channels::validate(rho);
    return rho;
}

Matrix bracket(const Matrix& a, const Matrix& rho, const Matrix& b) {
    if (a.rows() != rho.rows() || b.rows() != rho.rows() || a.rows() != a.cols() ||
        b.rows() != b.cols() || rho.rows() != rho.cols())
        throw input_error("bracket arguments must be square matrices of one dimension");
    const Matrix ba = b * a.adjoint();
    return ba * rho + rho * ba - 2.0 * a.adjoint() * rho * b;
}

WitnessResult nononto_witness(const Vector& psi, const Vector& phi, const MomentumBasis& basis,
                              double tau) {
    validate(basis);
    check_normalized(psi, "psi");
    check_normalized(phi, "phi");
    check_tau(tau);
    const int n = basis.dim();
    if (psi.size() != n || phi.size() != n)
        throw input_error("states and basis dimensions differ");
    if (std::abs(phi.dot(psi)) > kOrthoTol)
        throw input_error("witness pair must be orthogonal within 1e-10");

    // Closed route: the orthogonality head vanishes, leaving the odd
    // erfi cross series.
    const double root_tau = std::sqrt(tau);
    double cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::complex<double> c_i = std::conj(phi(i)) * psi(i);
        for (int j = i + 1; j < n; ++j) {
            const std::complex<double> c_j = std::conj(phi(j)) * psi(j);
            const double d = basis.scalars[i] - basis.scalars[j];
            cross += numkit::erfi(d * root_tau) * (c_i * std::conj(c_j)).imag();
        }
    }
    const double w_closed = 2.0 * cross;
    if (std::abs(w_closed) < kCrossTol)
        throw witness_inconclusive_error(
            "witness cross term is below 1e-10; the configuration is degenerate");

    // Quadrature route: pull sigma back through the candidate inverse and
    // take the expectation in phi.
    std::complex<double> w_quad[2];
    const int signs[2] = {+1, -1};
    for (int k = 0; k < 2; ++k) {
        const DensityMatrix sigma = sigma_pm(psi, basis, tau, signs[k]);
        const Matrix pulled = gaussian_backward(sigma.rho, basis.scalars, tau);
        w_quad[k] = phi.dot(pulled * phi);
        if (std::abs(w_quad[k].imag()) > 1e-8)
            throw internal_consistency_error("witness expectation has imaginary part " +
                                             std::to_string(w_quad[k].imag()));
    }
    const double w_closed_pm[2] = {w_closed, -w_closed};
    for (int k = 0; k < 2; ++k) {
        const double dev = std::abs(w_quad[k].real() - w_closed_pm[k]);
        if (dev > kRouteTol * std::max(1.0, std::abs(w_closed)))
            throw internal_consistency_error(
                "witness routes disagree by " + std::to_string(dev) + " for sign " +
                std::to_string(signs[k]));
    }
    if (std::abs(w_quad[0].real() + w_quad[1].real()) > 1e-8)
        throw internal_consistency_error("witness pair does not cancel: " +
                                         std::to_string(w_quad[0].real() + w_quad[1].real()));

    WitnessResult out;
    out.tau = tau;
    out.lambda_scalars = basis.scalars;
    out.w_plus = w_closed_pm[0];
    out.w_minus = w_closed_pm[1];
    out.verdict = "not_onto";
    return out;
}

std::string to_json(const WitnessResult& w) {
    nlohmann::ordered_json doc;
    doc["tau"] = w.tau;
    doc["lambda_scalars"] = w.lambda_scalars;
    doc["w_plus"] = w.w_plus;
    doc["w_minus"] = w.w_minus;
    doc["verdict"] = w.verdict;
    return doc.dump(2);
}

WitnessFixture standard_witness_fixture() {
    WitnessFixture fx;
    fx.basis = basis_from_scalars({0.0, 1.0, 2.0});
    fx.psi = Vector(3);
    fx.phi = Vector(3);
    const double r = 1.0 / std::sqrt(3.0);
    for (int k = 0; k < 3; ++k) {
        fx.psi(k) = r;
        fx.phi(k) = std::polar(r, 2.0 * M_PI * k / 3.0);
    }
    fx.tau = 1.0;
    return fx;
}

}  // namespace propsign::covmap
