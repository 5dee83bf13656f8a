#include "propsign/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "propsign/parallel.hpp"

namespace propsign::fields {

namespace {

constexpr double kPi = std::numbers::pi;
const double kTwoPiCubed = std::pow(2.0 * kPi, 3);

double sq(double x) { return x * x; }

double k0_norm(const PlaneWavePacket& p) {
    return std::sqrt(sq(p.k0[0]) + sq(p.k0[1]) + sq(p.k0[2]));
}

// Frequency scale beyond which g's transform is negligible.
double spatial_content(const SpatialVariant& g) {
    if (const auto* gs = std::get_if<Gaussian3D>(&g)) return 3.0 / gs->width;
    const auto& p = std::get<PlaneWavePacket>(g);
    return k0_norm(p) + 3.0 / p.width;
}

// Decay window of the temporal autocorrelation; infinite for DeltaPV,
// which never touches the time grid.
double temporal_window(const TemporalVariant& t) {
    if (const auto* e = std::get_if<Exponential>(&t)) return 30.0 / e->omega_bar;
    if (const auto* gt = std::get_if<GaussianT>(&t)) return 15.0 * gt->width;
    return 0.0;
}

double theta_half(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }

// |F0(w)|^2 of the temporal profile, convention F0(w) = int f0 e^{iwt} dt.
double temporal_power(const TemporalVariant& t, double w) {
    if (const auto* e = std::get_if<Exponential>(&t)) {
        return 1.0 / (sq(e->omega_bar) + sq(w));
    }
    if (const auto* gt = std::get_if<GaussianT>(&t)) {
        return 2.0 * kPi * sq(gt->width) * std::exp(-sq(gt->width * w));
    }
    const auto& d = std::get<DeltaPV>(t);
    return theta_half(d.sign * d.beta * d.mass - w);
}

// Autocorrelation K(u) = int f0*(v+u) f0(v) dv for u >= 0, smooth variants.
double autocorrelation(const TemporalVariant& t, double u) {
    if (const auto* e = std::get_if<Exponential>(&t)) {
        return std::exp(-e->omega_bar * u) / (2.0 * e->omega_bar);
    }
    const auto& gt = std::get<GaussianT>(t);
    return std::sqrt(kPi) * gt.width * std::exp(-sq(u) / (4.0 * sq(gt.width)));
}

struct RadialGrid {
    std::vector<double> x;  // nodes on [0, k_max]
    std::vector<double> w;  // matching weights
};

RadialGrid radial_grid(const FieldConfig& cfg, int n) {
    const auto rule = numkit::gauss_legendre(n);
    RadialGrid grid;
    grid.x.resize(n);
    grid.w.resize(n);
    const double c = 0.5 * cfg.k_max, r = 0.5 * cfg.k_max;
    for (int i = 0; i < n; ++i) {
        grid.x[i] = c + r * rule.nodes[i];
        grid.w[i] = r * rule.weights[i];
    }
    return grid;
}

// PV int_{-inf}^{upper} dw / (Omega^2 - w^2) computed numerically: a
// symmetric window around the pole at w = -Omega (where the principal value
// reduces to the regular integral of 2/(4 Omega^2 - v^2)), the remaining
// finite segment, and a 1/w-mapped tail.  Requires upper in (-Omega, Omega).
double pv_frequency_integral(double omega, double upper) {
    const auto rule = numkit::gauss_legendre(32);
    const double a = 0.5 * std::min(omega, omega + upper);
    const double window = numkit::integrate_1d(
        [omega](double v) { return 2.0 / (4.0 * sq(omega) - sq(v)); }, 0.0, a, rule);
    const double mid = numkit::integrate_1d(
        [omega](double w) { return 1.0 / (sq(omega) - sq(w)); }, -omega + a, upper, rule);
    const double edge = omega + a;
    const double tail = numkit::integrate_1d(
        [omega, edge](double s) { return edge / (sq(omega * s) - sq(edge)); }, 0.0, 1.0, rule);
    return window + mid + tail;
}

// Guard against a grid-dependent result: evaluates at the configured
// resolution and at double resolution, rejects a shift above 1%.
template <typename Eval>
double converged(Eval&& eval, const FieldConfig& cfg) {
    const double coarse = eval(cfg.n_k, cfg.n_t);
    const double fine = eval(2 * cfg.n_k, 2 * cfg.n_t);
    const double denom = std::max(std::fabs(coarse), std::fabs(fine));
    if (denom > 0.0 && std::fabs(coarse - fine) > 0.01 * denom) {
        throw accuracy_error("field functional not converged on the configured grid: " +
                             std::to_string(coarse) + " vs " + std::to_string(fine) +
                             " at doubled resolution");
    }
    return fine;
}

double re_eval(const TestFunction& f, const FieldConfig& cfg, int n_k) {
    const RadialGrid grid = radial_grid(cfg, n_k);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        const double k = grid.x[i];
        const double omega = std::hypot(k, cfg.mass);
        const double power =
            temporal_power(f.temporal, omega) + temporal_power(f.temporal, -omega);
        acc += grid.w[i] * sq(k) / (2.0 * omega) * angular_weight(f.spatial, k) * power;
    }
    return acc / (2.0 * kTwoPiCubed);
}

double im_eval_smooth(const TestFunction& f, const FieldConfig& cfg, int n_k, int n_t) {
    const RadialGrid grid = radial_grid(cfg, n_k);
    std::vector<double> coeff(grid.x.size()), freq(grid.x.size());
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        const double x = grid.x[i];
        freq[i] = std::hypot(x, cfg.mass);
        coeff[i] = grid.w[i] * sq(x) * angular_weight(f.spatial, x) / freq[i];
    }
    const auto s_kernel = [&](double u) {
        double s = 0.0;
        for (std::size_t i = 0; i < coeff.size(); ++i) s += coeff[i] * std::sin(u * freq[i]);
        return s;
    };
    const double time_integral = numkit::integrate_panels(
        [&](double u) { return autocorrelation(f.temporal, u) * s_kernel(u); }, 0.0, cfg.t_max,
        n_t, numkit::gauss_legendre(16));
    return -time_integral / kTwoPiCubed;
}

double im_eval_deltapv(const DeltaPV& d, const SpatialVariant& g, const FieldConfig& cfg,
                       int n_k) {
    const RadialGrid grid = radial_grid(cfg, n_k);
    const double upper = d.sign * d.beta * d.mass;
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        const double x = grid.x[i];
        const double omega = std::hypot(x, cfg.mass);
        acc += grid.w[i] * sq(x) * angular_weight(g, x) *
               pv_frequency_integral(omega, upper) / (2.0 * kPi);
    }
    return -acc / kTwoPiCubed;
}

}  // namespace

void validate(const TestFunction& f) {
    if (const auto* e = std::get_if<Exponential>(&f.temporal)) {
        if (!(e->omega_bar > 0.0)) throw input_error("Exponential: omega_bar must be > 0");
    } else if (const auto* d = std::get_if<DeltaPV>(&f.temporal)) {
        if (!(d->beta > 0.0 && d->beta < 1.0))
            throw input_error("DeltaPV: beta must lie in (0, 1)");
        if (!(d->mass > 0.0)) throw input_error("DeltaPV: mass must be > 0");
        if (d->sign != 1 && d->sign != -1) throw input_error("DeltaPV: sign must be +1 or -1");
    } else {
        const auto& gt = std::get<GaussianT>(f.temporal);
        if (!(gt.width > 0.0)) throw input_error("GaussianT: width must be > 0");
    }
    if (const auto* gs = std::get_if<Gaussian3D>(&f.spatial)) {
        if (!(gs->width > 0.0)) throw input_error("Gaussian3D: width must be > 0");
    } else {
        const auto& p = std::get<PlaneWavePacket>(f.spatial);
        if (!(p.width > 0.0)) throw input_error("PlaneWavePacket: width must be > 0");
    }
}

void validate(const FieldConfig& cfg) {
    if (!(cfg.mass > 0.0)) throw input_error("FieldConfig: mass must be > 0");
    if (!(cfg.k_max > 0.0)) throw input_error("FieldConfig: k_max must be > 0");
    if (cfg.n_k < 1 || cfg.n_t < 1) throw input_error("FieldConfig: counts must be positive");
    if (!(cfg.t_max > 0.0)) throw input_error("FieldConfig: t_max must be > 0");
}

FieldConfig default_config(double mass) {
    if (!(mass > 0.0)) throw input_error("default_config: mass must be > 0");
    return FieldConfig{mass, std::max(20.0 * mass, 10.0), 256, 40.0, 80};
}

FieldConfig auto_config(const TestFunction& f, double mass) {
    validate(f);
    FieldConfig cfg = default_config(mass);
    cfg.k_max = std::max(cfg.k_max, 5.0 * spatial_content(f.spatial));
    const double window = temporal_window(f.temporal);
    if (window > 0.0) {
        cfg.t_max = window;
        const double omega_max = std::hypot(cfg.k_max, mass);
        // Keep the per-panel phase of sin(u*Omega) under ~10 radians.
        cfg.n_t = std::max(cfg.n_t, static_cast<int>(std::ceil(cfg.t_max * omega_max / 10.0)));
    }
    return cfg;
}

bool config_adequate(const FieldConfig& cfg, const TestFunction& f) {
    validate(cfg);
    validate(f);
    if (cfg.k_max < 5.0 * std::max(cfg.mass, spatial_content(f.spatial))) return false;
    if (cfg.n_k < 64) return false;
    const double window = temporal_window(f.temporal);
    return cfg.t_max >= window;
}

std::complex<double> fourier3(const SpatialVariant& g, double x_norm) {
    if (!(x_norm >= 0.0)) throw input_error("fourier3: x_norm must be >= 0");
    if (const auto* gs = std::get_if<Gaussian3D>(&g)) {
        const double amp = std::pow(2.0 * kPi, 1.5) * std::pow(gs->width, 3);
        return amp * std::exp(-0.5 * sq(gs->width * x_norm));
    }
    const auto& p = std::get<PlaneWavePacket>(g);
    const double amp = std::pow(2.0 * kPi, 1.5) * std::pow(p.width, 3);
    return amp * std::exp(-0.5 * sq(p.width) * sq(x_norm - k0_norm(p)));
}

double angular_weight(const SpatialVariant& g, double x_norm) {
    if (!(x_norm >= 0.0)) throw input_error("angular_weight: x_norm must be >= 0");
    if (const auto* gs = std::get_if<Gaussian3D>(&g)) {
        const double amp2 = kTwoPiCubed * std::pow(gs->width, 6);
        return 4.0 * kPi * amp2 * std::exp(-sq(gs->width * x_norm));
    }
    const auto& p = std::get<PlaneWavePacket>(g);
    const double amp2 = kTwoPiCubed * std::pow(p.width, 6);
    const double kk = k0_norm(p);
    const double y = 2.0 * sq(p.width) * x_norm * kk;
    if (y < 1e-6) {
        // sinh(y)/y ~ 1 + y^2/6
        return 4.0 * kPi * amp2 * std::exp(-sq(p.width) * (sq(x_norm) + sq(kk))) *
               (1.0 + sq(y) / 6.0);
    }
    // exp(-w^2(X^2+K^2)) sinh(y)/y recast to avoid overflow of sinh.
    const double lo = std::exp(-sq(p.width * (x_norm - kk)));
    const double hi = std::exp(-sq(p.width * (x_norm + kk)));
    return 4.0 * kPi * amp2 * (lo - hi) / (2.0 * y);
}

double l2norm2(const TestFunction& f) {
    validate(f);
    double temporal;
    if (const auto* e = std::get_if<Exponential>(&f.temporal)) {
        temporal = 1.0 / (2.0 * e->omega_bar);
    } else if (const auto* gt = std::get_if<GaussianT>(&f.temporal)) {
        temporal = gt->width * std::sqrt(kPi);
    } else {
        throw input_error("l2norm2: DeltaPV has no finite L2 norm");
    }
    double width;
    if (const auto* gs = std::get_if<Gaussian3D>(&f.spatial)) {
        width = gs->width;
    } else {
        width = std::get<PlaneWavePacket>(f.spatial).width;
    }
    return temporal * std::pow(kPi, 1.5) * std::pow(width, 3);
}

SpatialTransform tabulate_transform(const SpatialVariant& g, const FieldConfig& cfg) {
    validate(cfg);
    const RadialGrid grid = radial_grid(cfg, cfg.n_k);
    SpatialTransform out;
    out.radii = grid.x;
    out.values.reserve(grid.x.size());
    for (double r : grid.x) out.values.push_back(fourier3(g, r));
    return out;
}

double re_idf_free(const TestFunction& f, const FieldConfig& cfg) {
    validate(f);
    validate(cfg);
    return converged([&](int n_k, int) { return re_eval(f, cfg, n_k); }, cfg);
}

double im_idf_free(const TestFunction& f, const FieldConfig& cfg) {
    validate(f);
    validate(cfg);
    if (const auto* d = std::get_if<DeltaPV>(&f.temporal)) {
        return converged([&](int n_k, int) { return im_eval_deltapv(*d, f.spatial, cfg, n_k); },
                         cfg);
    }
    return converged([&](int n_k, int n_t) { return im_eval_smooth(f, cfg, n_k, n_t); }, cfg);
}

ClosedFormPair im_idf_closed_form(double beta, double m, const SpatialVariant& g,
                                  const FieldConfig& cfg) {
    if (!(beta > 0.0 && beta < 1.0))
        throw input_error("im_idf_closed_form: beta must lie in (0, 1)");
    if (!(m > 0.0)) throw input_error("im_idf_closed_form: mass must be > 0");
    validate(cfg);
    const RadialGrid grid = radial_grid(cfg, cfg.n_k);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        const double x = grid.x[i];
        const double omega = std::hypot(x, cfg.mass);
        acc += grid.w[i] * sq(x) * angular_weight(g, x) *
               std::log((omega - beta * m) / (omega + beta * m)) / omega;
    }
    const double value = acc / (2.0 * sq(sq(2.0 * kPi)));
    return ClosedFormPair{value, -value};
}

WitnessReport indeterminacy_witness(double m, double beta, const SpatialVariant& g,
                                    const FieldConfig& cfg, double tol) {
    const ClosedFormPair closed = im_idf_closed_form(beta, m, g, cfg);
    const TestFunction fplus{DeltaPV{beta, +1, m}, g};
    const TestFunction fminus{DeltaPV{beta, -1, m}, g};
    WitnessReport rep{};
    rep.quad_plus = im_idf_free(fplus, cfg);
    rep.quad_minus = im_idf_free(fminus, cfg);
    rep.closed_plus = closed.value_plus;
    rep.closed_minus = closed.value_minus;
    rep.product = rep.quad_plus * rep.quad_minus;
    const double dp = std::fabs(rep.quad_plus - closed.value_plus) /
                      std::max(std::fabs(closed.value_plus), 1e-300);
    const double dm = std::fabs(rep.quad_minus - closed.value_minus) /
                      std::max(std::fabs(closed.value_minus), 1e-300);
    rep.discrepancy = std::max(dp, dm);
    rep.pass = rep.product < 0.0 && rep.discrepancy <= tol;
    return rep;
}

std::vector<PositivityResult> positivity_batch(const std::vector<TestFunction>& fs, double mass,
                                               bool parallel) {
    std::vector<PositivityResult> out(fs.size());
    parallel_for(
        fs.size(),
        [&](std::size_t i) {
            const FieldConfig cfg = auto_config(fs[i], mass);
            out[i] = PositivityResult{re_idf_free(fs[i], cfg), l2norm2(fs[i])};
        },
        parallel);
    return out;
}

std::vector<TestFunction> random_functions(std::uint64_t seed, int count) {
    if (count < 0) throw input_error("random_functions: count must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<TestFunction> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        TestFunction f;
        if (unit(rng) < 0.5) {
            f.temporal = Exponential{0.2 * std::pow(25.0, unit(rng))};  // [0.2, 5]
        } else {
            f.temporal = GaussianT{3.0 * unit(rng), 0.2 + 2.8 * unit(rng)};
        }
        if (unit(rng) < 0.5) {
            f.spatial = Gaussian3D{0.3 + 2.7 * unit(rng)};
        } else {
            const double kk = 3.0 * unit(rng);
            const double cth = 2.0 * unit(rng) - 1.0;
            const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
            const double phi = 2.0 * kPi * unit(rng);
            f.spatial = PlaneWavePacket{{kk * sth * std::cos(phi), kk * sth * std::sin(phi),
                                         kk * cth},
                                        0.3 + 2.7 * unit(rng)};
        }
        out.push_back(f);
    }
    return out;
}

}  // namespace propsign::fields
