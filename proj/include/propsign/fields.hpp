#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "propsign/errors.hpp"
#include "propsign/numkit.hpp"

namespace propsign::fields {

// Separable spacetime test functions f(x) = f0(t) g(x): a temporal profile
// times a spatial profile.  All functionals below are quadratic in f.

// f0(t) = e^{-omega_bar t} for t >= 0, zero for t < 0.
struct Exponential {
    double omega_bar;
};

// Distributional temporal profile whose Fourier transform (convention
// F0(w) = int f0(t) e^{iwt} dt) is the indicator theta(sign*beta*mass - w).
// Combines a delta spike with a principal-value 1/t tail; it is evaluated
// through the frequency side only, never pointwise in t.
struct DeltaPV {
    double beta;  // in (0, 1)
    int sign;     // +1 or -1
    double mass;  // > 0, sets the frequency edge at sign*beta*mass
};

// f0(t) = e^{-(t-center)^2 / (2 width^2)}.
struct GaussianT {
    double center;
    double width;
};

// g(y) = e^{-|y|^2 / (2 width^2)}.
struct Gaussian3D {
    double width;
};

// g(y) = e^{i k0.y} e^{-|y|^2 / (2 width^2)}: a Gaussian envelope riding a
// plane-wave carrier.
struct PlaneWavePacket {
    std::array<double, 3> k0;
    double width;
};

using TemporalVariant = std::variant<Exponential, DeltaPV, GaussianT>;
using SpatialVariant = std::variant<Gaussian3D, PlaneWavePacket>;

struct TestFunction {
    TemporalVariant temporal;
    SpatialVariant spatial;
};

// Throws input_error on parameter-range violations (omega_bar <= 0,
// beta outside (0,1), nonpositive widths, sign not +-1).
void validate(const TestFunction& f);

// Grid configuration for the radial-momentum and relative-time quadratures.
//   mass   field mass m entering omega_k = sqrt(k^2 + m^2)
//   k_max  radial momentum cutoff; adequate when >= 5x the larger of mass
//          and the spatial frequency content of g
//   n_k    radial Gauss-Legendre node count (>= 64 for reliable results)
//   t_max  relative-time cutoff for the temporal quadrature
//   n_t    temporal panel count (16-node Gauss-Legendre per panel)
struct FieldConfig {
    double mass;
    double k_max;
    int n_k;
    double t_max;
    int n_t;
};

void validate(const FieldConfig& cfg);

// Baseline grid for a given field mass: k_max = max(20*mass, 10),
// n_k = 256, t_max = 40, n_t = 80.
FieldConfig default_config(double mass);

// Grid sized to the specific test function: cutoff covers the spatial
// frequency content of g, the time window covers the decay of f0.
FieldConfig auto_config(const TestFunction& f, double mass);

// True when cfg resolves f: k_max >= 5*max(mass, frequency content of g)
// and, for smooth temporal profiles, t_max covers the decay of f0.
bool config_adequate(const FieldConfig& cfg, const TestFunction& f);

// 3D Fourier transform G(x) = int e^{-ix.y} g(y) d^3y evaluated at radius
// x_norm; for PlaneWavePacket the point is taken along the carrier
// direction, where the packet is centered.
std::complex<double> fourier3(const SpatialVariant& g, double x_norm);

// Angular integral of |G|^2 over directions at radius x_norm:
// W(X) = int dOmega |G(X n)|^2.  Closed form per variant.
double angular_weight(const SpatialVariant& g, double x_norm);

// L2 norm squared of f over spacetime.  Throws input_error for DeltaPV,
// which has no finite L2 norm.
double l2norm2(const TestFunction& f);

// fourier3 tabulated on the radial quadrature grid of cfg.
struct SpatialTransform {
    std::vector<double> radii;
    std::vector<std::complex<double>> values;
};

SpatialTransform tabulate_transform(const SpatialVariant& g, const FieldConfig& cfg);

// Re iDF[f] = (1/2) iint f*(x) <0|[phi(x), phi+(y)]_+|0> f(y) d4x d4y,
// evaluated in momentum space as
//   (1/(2(2pi)^3)) int_0^kmax dk k^2/(2 omega_k) W(k)
//                  [|F0(omega_k)|^2 + |F0(-omega_k)|^2].
// Nonnegative for every test function.  The quadrature is run at n_k and
// 2 n_k; a relative shift above 1% raises accuracy_error.
double re_idf_free(const TestFunction& f, const FieldConfig& cfg);

// Im iDF[f] for separable f via the regularized radial form
//   -(2pi)^{-3} Re iint dt1 dt2 f0*(t1) f0(t2) theta(t1-t2) S(t1-t2),
//   S(u) = int_0^kmax dX X^2 W(X) sin(u Omega_X)/Omega_X,
// with Omega_X = sqrt(X^2 + m^2).  Smooth temporal profiles integrate the
// analytic relative-time autocorrelation against S; DeltaPV goes through
// the frequency side, where the time-ordered kernel becomes a numerically
// evaluated principal-value integral per radial node.  Same doubled-grid
// convergence guard as re_idf_free.
double im_idf_free(const TestFunction& f, const FieldConfig& cfg);

struct ClosedFormPair {
    double value_plus;
    double value_minus;  // = -value_plus by construction
};

// Closed form of Im iDF on the DeltaPV pair:
//   value_pm = +-(1/(2(2pi)^4)) int_0^kmax dX X^2 W(X) / Omega_X
//              ln((Omega_X - beta m)/(Omega_X + beta m)).
// The log is negative throughout, so value_plus < 0 < value_minus.
ClosedFormPair im_idf_closed_form(double beta, double m, const SpatialVariant& g,
                                  const FieldConfig& cfg);

struct WitnessReport {
    double quad_plus;    // im_idf_free on the sign=+1 function
    double quad_minus;   // im_idf_free on the sign=-1 function
    double closed_plus;  // im_idf_closed_form value_plus
    double closed_minus;
    double product;      // quad_plus * quad_minus
    double discrepancy;  // max relative gap between quadrature and closed form
    bool pass;           // product < 0 and discrepancy <= tol
};

// Runs both evaluation routes on the DeltaPV pair and checks that the two
// signs straddle zero: the functional is indeterminate.
WitnessReport indeterminacy_witness(double m, double beta, const SpatialVariant& g,
                                    const FieldConfig& cfg, double tol = 1e-3);

struct PositivityResult {
    double value;  // re_idf_free
    double scale;  // l2norm2 of the function, the tolerance floor
};

// re_idf_free over a batch of functions, each on its auto_config grid.
// Slots are independent; with parallel=false the loop is the serial
// reference, bitwise identical to the parallel result.
std::vector<PositivityResult> positivity_batch(const std::vector<TestFunction>& fs, double mass,
                                               bool parallel = true);

// Deterministic randomized smooth test functions (Exponential/GaussianT
// temporal, Gaussian3D/PlaneWavePacket spatial) for positivity sweeps.
std::vector<TestFunction> random_functions(std::uint64_t seed, int count);

}  // namespace propsign::fields
