#include "propsign/channels.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "json.hpp"

namespace propsign::channels {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = -1e-10;
constexpr double kCompletenessTol = 1e-10;
constexpr double kSpanTol = 1e-8;
constexpr double kUnitaryTol = 1e-9;
constexpr double kPurityPreserveTol = 1e-9;
constexpr double kPureTol = 1e-10;
constexpr int kDimCap = 64;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void check_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw input_error(std::string(what) + " must be a nonempty square matrix");
    if (!m.allFinite()) throw input_error(std::string(what) + " has non-finite entries");
}

std::complex<double> gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

Matrix ginibre(int rows, int cols, std::mt19937_64& rng) {
    Matrix a(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) a(r, c) = gaussian(rng);
    return a;
}

}  // namespace

void validate(const DensityMatrix& rho) {
    check_square(rho.rho, "density matrix");
    if (rho.dim() > kDimCap) throw input_error("density matrix dimension exceeds 64");
    const double herm = max_abs(rho.rho - rho.rho.adjoint());
    if (herm > kHermTol)
        throw input_error("density matrix is not hermitian: deviation " + std::to_string(herm));
    const double tr = std::abs(rho.rho.trace() - std::complex<double>(1.0));
    if (tr > kTraceTol)
        throw input_error("density matrix trace differs from 1 by " + std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.rho + rho.rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < kPsdTol)
        throw input_error("density matrix has negative eigenvalue " + std::to_string(lo));
}

DensityMatrix make_density(const Matrix& m) {
    DensityMatrix rho{m};
    validate(rho);
    return rho;
}

void validate(const KrausSet& k) {
    if (k.ops.empty()) throw input_error("Kraus set is empty");
    const int d = static_cast<int>(k.ops[0].rows());
    for (const Matrix& v : k.ops) {
        check_square(v, "Kraus operator");
        if (v.rows() != d) throw input_error("Kraus operators have mixed dimensions");
    }
    if (d > kDimCap) throw input_error("Kraus set dimension exceeds 64");
    Matrix sum = Matrix::Zero(d, d);
    for (const Matrix& v : k.ops) sum += v.adjoint() * v;
    const double dev = max_abs(sum - Matrix::Identity(d, d));
    if (dev > kCompletenessTol)
        throw input_error("Kraus completeness sum deviates from identity by " +
                          std::to_string(dev));
}

DensityMatrix apply_channel(const KrausSet& k, const DensityMatrix& rho) {
    if (k.ops.empty()) throw input_error("Kraus set is empty");
    if (k.dim() != rho.dim()) throw input_error("Kraus set and state dimensions differ");
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const Matrix& v : k.ops) out += v * rho.rho * v.adjoint();
    return DensityMatrix{0.5 * (out + Matrix(out.adjoint()))};
}

double purity(const DensityMatrix& rho) { return rho.rho.squaredNorm(); }

Proportionality proportionality_test(const KrausSet& k, int samples, std::mt19937_64& rng) {
    validate(k);
    const int d = k.dim();
    const int n_ops = static_cast<int>(k.ops.size());
    if (samples < 2 * d * d)
        throw input_error("proportionality test needs at least 2*dim^2 samples");

    std::vector<Vector> states(samples);
    for (int s = 0; s < samples; ++s) states[s] = haar_state(d, rng);

    // images[i][s] = V_i psi_s, shared across candidate pivots.
    std::vector<std::vector<Vector>> images(n_ops, std::vector<Vector>(samples));
    for (int i = 0; i < n_ops; ++i)
        for (int s = 0; s < samples; ++s) images[i][s] = k.ops[i] * states[s];

    std::vector<double> scale(n_ops);
    for (int i = 0; i < n_ops; ++i) scale[i] = k.ops[i].norm();

    for (int j = 0; j < n_ops; ++j) {
        bool nonvanishing = true;
        for (int s = 0; s < samples && nonvanishing; ++s)
            if (images[j][s].norm() <= kSpanTol * scale[j]) nonvanishing = false;
        if (!nonvanishing) continue;

        bool spans = true;
        for (int i = 0; i < n_ops && spans; ++i) {
            if (i == j) continue;
            for (int s = 0; s < samples && spans; ++s) {
                const Vector& a = images[j][s];
                const Vector& b = images[i][s];
                const double bn = b.norm();
                if (bn <= kSpanTol * scale[i]) continue;
                const std::complex<double> coeff = a.dot(b) / a.squaredNorm();
                if ((b - coeff * a).norm() > kSpanTol * bn) spans = false;
            }
        }
        if (spans) return {true, j};
    }
    return {false, std::nullopt};
}

UnitaryPart extract_unitary(const KrausSet& k, int samples, std::mt19937_64& rng) {
    const Proportionality prop = proportionality_test(k, samples, rng);
    if (!prop.proportional)
        throw not_invertible_error("Kraus operators are not mutually proportional");
    const int d = k.dim();
    const Matrix& pivot = k.ops[*prop.j_star];

    double n_first = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double n_s = (pivot * haar_state(d, rng)).squaredNorm();
        if (s == 0) {
            n_first = n_s;
        } else if (std::abs(n_s - n_first) > kSpanTol) {
            throw not_invertible_error("pivot norm varies across states: " +
                                       std::to_string(n_first) + " vs " + std::to_string(n_s));
        }
    }
    if (!(n_first > 0.0) || n_first > 1.0 + kUnitaryTol)
        throw internal_consistency_error("recovered normalization " + std::to_string(n_first) +
                                         " outside (0, 1]");

    Matrix u = pivot / std::sqrt(n_first);
    std::complex<double> lead(0.0, 0.0);
    for (int c = 0; c < d && lead == std::complex<double>(0.0, 0.0); ++c)
        for (int r = 0; r < d; ++r)
            if (std::abs(u(r, c)) > 1e-12) {
                lead = u(r, c);
                break;
            }
    if (lead != std::complex<double>(0.0, 0.0)) u *= std::conj(lead) / std::abs(lead);

    const double dev = max_abs(u.adjoint() * u - Matrix::Identity(d, d));
    if (dev > kUnitaryTol)
        throw internal_consistency_error("recovered operator fails unitarity by " +
                                         std::to_string(dev));
    return {u, std::min(n_first, 1.0)};
}

KrausSet invert_channel(const KrausSet& k, int samples, std::mt19937_64& rng) {
    const UnitaryPart part = extract_unitary(k, samples, rng);
    return KrausSet{{part.u.adjoint()}};
}

MixtureProbeReport mixture_to_pure_probe(const KrausSet& k, const DensityMatrix& rho1,
                                         const DensityMatrix& rho2, double p) {
    if (!(p > 0.0 && p < 1.0)) throw input_error("mixture weight must lie strictly in (0, 1)");
    if (rho1.dim() != rho2.dim() || rho1.dim() != k.dim())
        throw input_error("mixture components and channel dimensions differ");
    if (max_abs(rho1.rho - rho2.rho) <= kSpanTol)
        throw input_error("mixture components must be distinct states");

    const DensityMatrix mix{p * rho1.rho + (1.0 - p) * rho2.rho};
    const DensityMatrix img = apply_channel(k, mix);
    const DensityMatrix img1 = apply_channel(k, rho1);
    const DensityMatrix img2 = apply_channel(k, rho2);

    MixtureProbeReport report;
    report.image_purity = purity(img);
    report.image_pure = report.image_purity > 1.0 - kPureTol;
    report.image_distance = max_abs(img1.rho - img2.rho);
    report.images_coincide = report.image_distance <= kSpanTol;
    report.one_to_one = !report.image_pure;
    if (report.image_pure && !report.images_coincide)
        throw internal_consistency_error(
            "mixture image is pure but component images differ by " +
            std::to_string(report.image_distance));
    return report;
}

ChannelReport analyze_channel(const KrausSet& k, int samples, std::mt19937_64& rng) {
    validate(k);
    const int d = k.dim();

    double purity_drift = 0.0;
    for (int s = 0; s < 20; ++s) {
        const DensityMatrix rho = random_density(d, rng);
        purity_drift =
            std::max(purity_drift, std::abs(purity(apply_channel(k, rho)) - purity(rho)));
    }

    ChannelReport report;
    report.purity_preserving = purity_drift <= kPurityPreserveTol;

    const Proportionality prop = proportionality_test(k, samples, rng);
    report.proportional = prop.proportional;
    report.j_star = prop.j_star;
    report.verdict = Verdict::not_invertible;
    if (!prop.proportional) return report;

    try {
        const UnitaryPart part = extract_unitary(k, samples, rng);
        report.normalization = part.normalization;
        const double dev =
            max_abs(part.u.adjoint() * part.u - Matrix::Identity(d, d));
        report.unitary_deviation = dev;
        if (report.purity_preserving && dev <= kUnitaryTol)
            report.verdict = Verdict::invertible_unitary;
    } catch (const not_invertible_error&) {
        // proportional in span but not in norm; stays not_invertible
    }
    return report;
}

Vector haar_state(int dim, std::mt19937_64& rng) {
    if (dim < 1) throw input_error("state dimension must be positive");
    Vector v(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) v(i) = gaussian(rng);
        norm = v.norm();
    } while (norm < 1e-12);
    return v / norm;
}

Matrix haar_unitary(int dim, std::mt19937_64& rng) {
    if (dim < 1) throw input_error("unitary dimension must be positive");
    const Matrix a = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const std::complex<double> rii = r(i, i);
        const double mag = std::abs(rii);
        q.col(i) *= mag > 1e-300 ? rii / mag : std::complex<double>(1.0, 0.0);
    }
    return q;
}

DensityMatrix random_density(int dim, std::mt19937_64& rng) {
    const Matrix a = ginibre(dim, dim, rng);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix{0.5 * (rho + Matrix(rho.adjoint()))};
}

KrausSet random_phase_multiple_unitary(int dim, int pieces, std::mt19937_64& rng) {
    if (pieces < 1) throw input_error("piece count must be positive");
    const Matrix u = haar_unitary(dim, rng);
    std::uniform_real_distribution<double> weight(0.2, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::vector<double> q(pieces);
    double total = 0.0;
    for (double& w : q) total += (w = weight(rng));
    KrausSet k;
    for (int j = 0; j < pieces; ++j) {
        const double phi = phase(rng);
        k.ops.push_back(std::sqrt(q[j] / total) * std::polar(1.0, phi) * u);
    }
    return k;
}

KrausSet random_nonproportional_pair(int dim, std::mt19937_64& rng) {
    for (;;) {
        const Matrix a = ginibre(2 * dim, dim, rng);
        Eigen::HouseholderQR<Matrix> qr(a);
        const Matrix w = qr.householderQ() * Matrix::Identity(2 * dim, dim);
        KrausSet k{{w.topRows(dim), w.bottomRows(dim)}};
        if (!proportionality_test(k, 2 * dim * dim, rng).proportional) return k;
    }
}

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m) {
    json flat = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            flat.push_back({m(r, c).real(), m(r, c).imag()});
    return flat;
}

Matrix matrix_from_json(const json& flat, int dim, const char* what) {
    if (!flat.is_array() || flat.size() != static_cast<std::size_t>(dim) * dim)
        throw input_error(std::string(what) + " must hold dim^2 complex entries");
    Matrix m(dim, dim);
    std::size_t idx = 0;
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c, ++idx) {
            const json& e = flat[idx];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw input_error(std::string(what) + " entries must be [re, im] pairs");
            m(r, c) = std::complex<double>(e[0].get<double>(), e[1].get<double>());
        }
    if (!m.allFinite()) throw input_error(std::string(what) + " has non-finite entries");
    return m;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed JSON: ") + e.what());
    }
}

int read_dim(const json& doc) {
    if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer())
        throw input_error("document must be an object with an integer \"dim\"");
    const int dim = doc["dim"].get<int>();
    if (dim < 1 || dim > kDimCap)
        throw input_error("dimension " + std::to_string(dim) + " outside [1, 64]");
    return dim;
}

}  // namespace

std::string to_json(const KrausSet& k) {
    json doc;
    doc["dim"] = k.dim();
    json ops = json::array();
    for (const Matrix& v : k.ops) ops.push_back(matrix_to_json(v));
    doc["ops"] = std::move(ops);
    return doc.dump(2);
}

std::string to_json(const DensityMatrix& rho) {
    json doc;
    doc["dim"] = rho.dim();
    doc["entries"] = matrix_to_json(rho.rho);
    return doc.dump(2);
}

KrausSet kraus_from_json(const std::string& text) {
    const json doc = parse_document(text);
    const int dim = read_dim(doc);
    if (!doc.contains("ops") || !doc["ops"].is_array() || doc["ops"].empty())
        throw input_error("document must hold a nonempty \"ops\" array");
    KrausSet k;
    for (const json& op : doc["ops"]) k.ops.push_back(matrix_from_json(op, dim, "Kraus operator"));
    validate(k);
    return k;
}

DensityMatrix density_from_json(const std::string& text) {
    const json doc = parse_document(text);
    const int dim = read_dim(doc);
    if (!doc.contains("entries"))
        throw input_error("document must hold an \"entries\" matrix");
    DensityMatrix rho{matrix_from_json(doc["entries"], dim, "density matrix")};
    validate(rho);
    return rho;
}

}  // namespace propsign::channels
