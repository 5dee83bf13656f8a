#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "propsign/errors.hpp"
#include "propsign/fields.hpp"

namespace propsign::rwa {

// Nonnegative coupling profile |h|^2 as a function of the momentum radius.
struct H2Profile {
    enum class Kind { constant, gaussian };
    Kind kind = Kind::constant;
    double value = 0.0;      // constant: |h|^2 = value
    double amplitude = 0.0;  // gaussian: |h|^2 = amplitude * e^{-(k/width)^2}
    double width = 1.0;

    static H2Profile constant(double v);
    static H2Profile gaussian(double amplitude, double width);
    double eval(double k) const;
};

// Single-species mass plus the four coupling profiles of the rotating-wave
// master equation.  Index pair (l, j): l = 1 the particle sector, l = 2 the
// antiparticle sector; j = 1 multiplies the lowering operator in the
// dissipator (a pumping term raising occupation), j = 2 the raising
// operator (a damping term).  mode_volume is the finite quantization
// volume replacing (2pi)^3 delta^3(0) in the discrete oracle.
struct RwaModel {
    double mass = 1.0;
    double mode_volume = 1.0;
    H2Profile h11, h12, h21, h22;

    double omega(double k) const;                 // sqrt(k^2 + mass^2)
    double h2(int l, int j, double k) const;
    // Decay/pump rate (2pi)^3 2 omega_k |h_lj(k)|^2.
    double gamma(int l, int j, double k) const;
    // Net amplitude growth rate of sector l: gamma(l,1,k) - gamma(l,2,k).
    double growth_rate(int l, double k) const;
    // True when some sampled k has a positive net growth rate: occupation
    // grows without bound and time arguments must stay small.
    bool pumped() const;
};

void validate(const RwaModel& model);

// Constant-profile model whose rates at the reference momentum equal the
// given values: |h_lj|^2 = rate_lj / ((2pi)^3 2 omega(k_ref)).
RwaModel model_from_rates(double g11, double g12, double g21, double g22, double k_ref,
                          double mass, double mode_volume = 1.0);
RwaModel free_model(double mass);

// JSON round trip:
//   {"mass": m, "mode_volume": V,
//    "h2": {"h11": {"kind": "constant", "value": v} |
//                  {"kind": "gaussian", "amplitude": a, "width": w}, ...}}
std::string to_json(const RwaModel& model);
RwaModel model_from_json(const std::string& text);

// Vacuum two-time average query: indices pick the operator pair
// (C_l1 = lowering, C_l2 = raising of sector l); the first operator is
// evolved to t_prime, the second to t_doubleprime, and the product is then
// evolved for tau.  All times nonnegative, k_norm >= 0.
struct TwoTimeQuery {
    int i = 1;
    int j = 1;
    int l = 1;
    int m = 2;
    double k_norm = 0.0;
    double t_prime = 0.0;
    double t_doubleprime = 0.0;
    double tau = 0.0;
};

void validate(const TwoTimeQuery& q);

// Exponent chi_l = (2pi)^3 2 [(|h_l1(k1)|^2 - |h_l2(k1)|^2) omega_{k1} t1 +
// (|h_l1(k2)|^2 - |h_l2(k2)|^2) omega_{k2} t2]; positive values signal
// pumped growth.
double chi(int l, double k1, double k2, double t1, double t2, const RwaModel& model);

// Closed form of the vacuum average in unit (single-mode) normalization:
//   e^{chi_l(t', t'')} e^{i omega [t' c_j + t'' c_m]}
//   * [ (1-delta_{2j})(1-delta_{1m}) e^{i omega (c_j + c_m) tau}
//       e^{chi_l(tau,tau)}
//       + 4 (2pi)^3 |h_lm(k)|^2 omega tau (e^{chi_l(tau,tau)}-1)
//         / chi_l(tau,tau) ]
// with c_j = 1 - 2 delta_{1j} and the removable singularity at chi = 0
// evaluated continuously.  Index combinations with i != l or j = m return
// exactly 0 (vacuum selection rule).
std::complex<double> two_time_average(const TwoTimeQuery& q, const RwaModel& model);

// Independent cross-check: integrates the adjoint master equation for a
// single truncated-Fock mode (levels 0..n_max, rates gamma(l,j,k)) with
// RK4, propagating first each operator and then their product, and takes
// the vacuum expectation.  The vacuum state is also propagated forward;
// population above 1e-8 on the top level raises accuracy_error.
std::complex<double> lindblad_oracle(const TwoTimeQuery& q, const RwaModel& model, int n_max);

struct TransformPair {
    std::complex<double> g1;
    std::complex<double> g2;
};

// Double Laplace transform of the two-time average in the Eq-58 continuum
// normalization ((2pi)^3 2 omega_k times the unit-normalized average):
// which = 1 transforms (t1, 0, t2) -> e^{-omega1 t1 - omega2 t2}, which = 2
// transforms (0, t1, t2).  Throws range_error naming the offending rate
// when the integrand grows faster than the exponential weights decay.
std::complex<double> laplace_G(int which, int i, int j, int l, int m, double omega1,
                               double omega2, double k, const RwaModel& model);

// The positivity combination at (omega_bar, 2 omega_bar): for sector i,
// g1 = G^(1) with indices (i, i, i, 3-i) and g2 = G^(2) with (i, 3-i, i, i).
TransformPair sign_transforms(int i, double omega_bar, double k, const RwaModel& model);

// Closed form of Re[g1 + g2]:
//   (2pi)^3 omega_k (omega_bar + G_i1 + G_i2)
//   / (omega_bar [omega_k^2 + (omega_bar + G_i2 - G_i1)^2])
// with G_ij = gamma(i, j, k).  Nonnegative for every model.
double rwa_sign_closed_form(int i, double omega_bar, double k, const RwaModel& model);

// Radial assembly of the interacting positivity functional for the
// exponential-in-time test function e^{-omega_bar t} h(x):
//   int_0^{k_max} dk k^2 / ((2pi)^3 2 omega_k)^2 W_h(k) [S_1(k) + S_2(k)]
// where W_h is the angular weight of the spatial profile and S_i the
// closed-form sign combination.  Checked on a doubled grid; a relative
// shift above 1% raises accuracy_error.
double interacting_functional(const fields::SpatialVariant& h_spatial, double omega_bar,
                              const RwaModel& model, const fields::FieldConfig& cfg);

struct SweepRow {
    int i = 1;
    double omega_bar = 1.0;
    double k = 0.0;
    double h11 = 0.0;
    double h12 = 0.0;
    double h21 = 0.0;
    double h22 = 0.0;
    double value = 0.0;
    bool pass = false;
};

// Random positivity sweep over omega_bar in (0, 10], k in [0, 10],
// constant |h|^2 in [0, 1]; pass means value >= -1e-12 * (1 + |value|).
std::vector<SweepRow> make_sweep(int count, std::uint64_t seed, bool parallel = true);

// CSV with header row: sector, inputs, closed-form value, pass flag.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace propsign::rwa
