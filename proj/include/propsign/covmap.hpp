#pragma once

#include <string>
#include <vector>

#include "propsign/channels.hpp"
#include "propsign/errors.hpp"

namespace propsign::covmap {

using channels::DensityMatrix;
using channels::Matrix;
using channels::Vector;

struct FourVector {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Minkowski contraction with signature (+, -, -, -).
double minkowski_dot(const FourVector& a, const FourVector& b);

// Finite labeled set of four-momenta together with the real four-vector
// lambda; every map in this module acts through the scalars lambda.p only.
struct MomentumBasis {
    std::vector<FourVector> points;
    FourVector lambda;
    std::vector<double> scalars;   // lambda.p per point
    bool allow_degenerate = false;
    int dim() const { return static_cast<int>(scalars.size()); }
};

// Scalars must be finite and pairwise distinct (gap > 1e-12) unless the
// basis is explicitly flagged degenerate.  Throws input_error.
void validate(const MomentumBasis& basis);
MomentumBasis make_basis(std::vector<FourVector> points, const FourVector& lambda,
                         bool allow_degenerate = false);
// Convenience basis carrying the scalars directly: lambda = (1,0,0,0) and
// p_i = (s_i, 0, 0, 0).
MomentumBasis basis_from_scalars(std::vector<double> scalars, bool allow_degenerate = false);

// Density matrix expressed in the lambda.p eigenbasis.
struct PState {
    MomentumBasis basis;
    DensityMatrix rho;
};
void validate(const PState& s);

// Elementwise damping rho_{pp'} -> e^{-[lambda.(p-p')]^2 tau} rho_{pp'}.
// Diagonal elements are untouched; the output is a valid PState.
PState gaussian_forward(const PState& s, double tau);

// Candidate inverse: multiplies each element by e^{+[lambda.(p-p')]^2 tau}.
// The input need not be positive semidefinite.  Exponents above 700 raise
// range_error; this divergence is the honest face of non-invertibility.
Matrix gaussian_backward(const Matrix& m, const std::vector<double>& scalars, double tau);

// d Tr rho^2 / d tau at tau = 0 for the pure state psi:
// -4 (<(lambda.p)^2>_psi - <lambda.p>_psi^2).
double purity_rate(const Vector& psi, const std::vector<double>& scalars);

// Completely positive splitting component sigma_{psi,+-}(tau): each element
// is the semi-infinite quadrature
//   (1/sqrt(pi tau)) int_0^inf e^{-u^2/4tau} e^{-+ i s_i u} psi_i psi_j^*
//                    e^{+- i s_j u} du,
// a Gaussian-weighted mixture of pure states.  The average of the two signs
// reproduces gaussian_forward of |psi><psi|.  sign must be +1 or -1.
DensityMatrix sigma_pm(const Vector& psi, const MomentumBasis& basis, double tau, int sign,
                       bool parallel = true);

// Closed form of the same element, e^{-d^2 tau} [1 -+ i erfi(d sqrt(tau))]
// with d = s_i - s_j, used as the independent route in the witness.
std::complex<double> sigma_element_closed(double s_i, double s_j, double tau, int sign);

// Three-index bracket {A, rho, B} = B A+ rho + rho B A+ - 2 A+ rho B, the
// building block of the master equation satisfied by gaussian_forward.
Matrix bracket(const Matrix& a, const Matrix& rho, const Matrix& b);

struct WitnessResult {
    double tau = 0.0;
    std::vector<double> lambda_scalars;
    double w_plus = 0.0;
    double w_minus = 0.0;
    std::string verdict;  // "not_onto"
};

// Expectation w_+- = <phi| gaussian_backward(sigma_{psi,+-}, tau) |phi| for
// an orthonormal pair, evaluated two ways: (a) quadrature sigma pulled back
// and contracted, (b) the erfi cross-term series (the |<phi|psi>|^2 head
// vanishes by orthogonality).  Routes must agree within 1e-6.  One of w_+-
// is strictly negative and w_+ + w_- = 0 within 1e-8, certifying that the
// corresponding sigma has no physical preimage.
// Throws input_error when <phi|psi> exceeds 1e-10, witness_inconclusive_error
// when the cross term vanishes (e.g. lambda = 0, or any orthonormal pair on
// a 2-point basis), internal_consistency_error when the routes disagree.
WitnessResult nononto_witness(const Vector& psi, const Vector& phi, const MomentumBasis& basis,
                              double tau);

std::string to_json(const WitnessResult& w);

struct WitnessFixture {
    MomentumBasis basis;
    Vector psi;
    Vector phi;
    double tau;
};

// Smallest configuration with a nonvanishing cross term: scalars {0, 1, 2},
// tau = 1, psi uniform, phi the orthogonal discrete Fourier vector.  Any
// orthonormal pair on a 2-point basis has Im(c_0 conj(c_1)) = 0 identically,
// so three points are the true minimum.
WitnessFixture standard_witness_fixture();

}  // namespace propsign::covmap
