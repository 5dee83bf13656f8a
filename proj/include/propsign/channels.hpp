#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "propsign/errors.hpp"

namespace propsign::channels {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Hermitian, unit-trace, positive-semidefinite complex matrix.
struct DensityMatrix {
    Matrix rho;
    int dim() const { return static_cast<int>(rho.rows()); }
};

// Validation tolerances: hermiticity and trace 1e-12, smallest eigenvalue
// >= -1e-10.  Throws input_error naming the violated invariant.
void validate(const DensityMatrix& rho);
DensityMatrix make_density(const Matrix& m);  // validate + return

// Ordered Kraus operators V_j with completeness sum V+V = 1 within 1e-10.
struct KrausSet {
    std::vector<Matrix> ops;
    int dim() const { return ops.empty() ? 0 : static_cast<int>(ops[0].rows()); }
};

void validate(const KrausSet& k);  // throws input_error naming the deviation

// rho -> sum_j V_j rho V_j+.  Output is exactly hermitized; its trace
// matches the input within the completeness tolerance.
DensityMatrix apply_channel(const KrausSet& k, const DensityMatrix& rho);

// Tr rho^2 in (0, 1]; equals 1 iff rho is pure.
double purity(const DensityMatrix& rho);

struct Proportionality {
    bool proportional;
    std::optional<int> j_star;
};

// Samples Haar-random pure states and looks for an operator V_{j*} that
// never annihilates a sample and whose image spans every other V_i's image
// on each sample (projection residual <= 1e-8 relative).  Collinearity
// failure is an open condition, so random states detect it almost surely.
// Rank-deficient sets sharing one image line also pass this test; they are
// rejected by the norm-constancy check in extract_unitary.
// Requires samples >= 2*dim^2.
Proportionality proportionality_test(const KrausSet& k, int samples, std::mt19937_64& rng);

struct UnitaryPart {
    Matrix u;
    double normalization;  // N in (0, 1]: V_{j*} = sqrt(N) U
};

// Recovers the unitary behind a proportional Kraus set: N is read off from
// |V_{j*} psi|^2 (constant across samples within 1e-8, else
// not_invertible_error), U = V_{j*}/sqrt(N) with the global phase fixed by
// making the first nonzero entry (column-major scan) real positive.
// max |U+U - 1| above 1e-9 raises internal_consistency_error.
UnitaryPart extract_unitary(const KrausSet& k, int samples, std::mt19937_64& rng);

// Single-Kraus inverse channel rho -> U+ rho U.  Throws
// not_invertible_error when the channel is not unitary conjugation.
KrausSet invert_channel(const KrausSet& k, int samples, std::mt19937_64& rng);

struct MixtureProbeReport {
    double image_purity;     // purity of Lambda(p rho1 + (1-p) rho2)
    bool image_pure;         // image_purity > 1 - 1e-10
    bool images_coincide;    // Lambda(rho1) == Lambda(rho2) within 1e-8
    bool one_to_one;         // false when a mixture maps to a pure state
    double image_distance;   // max-entry distance of the two images
};

// Probes the mixture-to-pure mechanism: if the image of a proper mixture is
// pure, both components must map to that same pure state and the channel
// cannot be one-to-one.  A pure image with distinct component images is an
// internal_consistency_error.
MixtureProbeReport mixture_to_pure_probe(const KrausSet& k, const DensityMatrix& rho1,
                                         const DensityMatrix& rho2, double p);

enum class Verdict { invertible_unitary, not_invertible };

struct ChannelReport {
    bool purity_preserving;                   // over sampled states
    bool proportional;
    std::optional<int> j_star;
    std::optional<double> normalization;      // N when proportional
    std::optional<double> unitary_deviation;  // max |U+U - 1| when proportional
    Verdict verdict;
};

// Full invertibility analysis: verdict is invertible_unitary iff the
// channel preserves purity on samples, the Kraus operators are mutually
// proportional, and the recovered U is unitary within 1e-9.
ChannelReport analyze_channel(const KrausSet& k, int samples, std::mt19937_64& rng);

// Haar-random pure state (normalized complex Gaussian vector).
Vector haar_state(int dim, std::mt19937_64& rng);

// Haar-random unitary (QR of a complex Ginibre matrix, phase-corrected).
Matrix haar_unitary(int dim, std::mt19937_64& rng);

// Random full-rank density matrix (normalized Ginibre Gram matrix).
DensityMatrix random_density(int dim, std::mt19937_64& rng);

// Unitary conjugation split into `pieces` phase-multiple Kraus operators
// with random weights: V_j = e^{i phi_j} sqrt(q_j) U, sum q_j = 1.
KrausSet random_phase_multiple_unitary(int dim, int pieces, std::mt19937_64& rng);

// Two-operator channel from a random Stinespring isometry, rejection
// sampled until genuinely non-proportional.
KrausSet random_nonproportional_pair(int dim, std::mt19937_64& rng);

// JSON round trip: {"dim": n, "ops": [op...]} for Kraus sets and
// {"dim": n, "entries": op} for density matrices, where an op is a flat
// row-major list of dim^2 [re, im] pairs.  Malformed text or violated
// invariants raise input_error.
std::string to_json(const KrausSet& k);
std::string to_json(const DensityMatrix& rho);
KrausSet kraus_from_json(const std::string& text);
DensityMatrix density_from_json(const std::string& text);

}  // namespace propsign::channels
