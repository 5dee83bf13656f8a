#include "propsign/rwa.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "propsign/numkit.hpp"
#include "propsign/parallel.hpp"

namespace propsign::rwa {

namespace {

const double kTwoPi3 = std::pow(2.0 * M_PI, 3);

// (e^x - 1)/x, continuous through x = 0.
double expm1_ratio(double x) {
    if (std::abs(x) < 1e-8) return 1.0 + 0.5 * x;
    return std::expm1(x) / x;
}

void check_index(int v, const char* what) {
    if (v != 1 && v != 2) throw input_error(std::string(what) + " must be 1 or 2");
}

void check_profile(const H2Profile& p, const char* name) {
    switch (p.kind) {
        case H2Profile::Kind::constant:
            if (!(p.value >= 0.0) || !std::isfinite(p.value))
                throw input_error(std::string(name) + " constant value must be >= 0");
            return;
        case H2Profile::Kind::gaussian:
            if (!(p.amplitude >= 0.0) || !std::isfinite(p.amplitude))
                throw input_error(std::string(name) + " gaussian amplitude must be >= 0");
            if (!(p.width > 0.0) || !std::isfinite(p.width))
                throw input_error(std::string(name) + " gaussian width must be positive");
            return;
    }
    throw input_error(std::string(name) + " has an unknown profile kind");
}

}  // namespace

H2Profile H2Profile::constant(double v) {
    H2Profile p;
    p.kind = Kind::constant;
    p.value = v;
    return p;
}

H2Profile H2Profile::gaussian(double amplitude, double width) {
    H2Profile p;
    p.kind = Kind::gaussian;
    p.amplitude = amplitude;
    p.width = width;
    return p;
}

double H2Profile::eval(double k) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::gaussian:
            return amplitude * std::exp(-(k / width) * (k / width));
    }
    return 0.0;
}

double RwaModel::omega(double k) const { return std::hypot(k, mass); }

double RwaModel::h2(int l, int j, double k) const {
    check_index(l, "sector index");
    check_index(j, "coupling index");
    if (l == 1) return j == 1 ? h11.eval(k) : h12.eval(k);
    return j == 1 ? h21.eval(k) : h22.eval(k);
}

double RwaModel::gamma(int l, int j, double k) const {
    return kTwoPi3 * 2.0 * omega(k) * h2(l, j, k);
}

double RwaModel::growth_rate(int l, double k) const {
    return gamma(l, 1, k) - gamma(l, 2, k);
}

bool RwaModel::pumped() const {
    for (int l : {1, 2})
        for (int step = 0; step <= 200; ++step)
            if (growth_rate(l, 0.1 * step) > 1e-15) return true;
    return false;
}

void validate(const RwaModel& model) {
    if (!(model.mass > 0.0) || !std::isfinite(model.mass))
        throw input_error("model mass must be positive");
    if (!(model.mode_volume > 0.0) || !std::isfinite(model.mode_volume))
        throw input_error("mode volume must be positive");
    check_profile(model.h11, "h11");
    check_profile(model.h12, "h12");
    check_profile(model.h21, "h21");
    check_profile(model.h22, "h22");
}

RwaModel model_from_rates(double g11, double g12, double g21, double g22, double k_ref,
                          double mass, double mode_volume) {
    if (!(mass > 0.0)) throw input_error("model mass must be positive");
    if (!(k_ref >= 0.0)) throw input_error("reference momentum must be >= 0");
    for (double g : {g11, g12, g21, g22})
        if (!(g >= 0.0) || !std::isfinite(g)) throw input_error("rates must be >= 0");
    const double denom = kTwoPi3 * 2.0 * std::hypot(k_ref, mass);
    RwaModel model;
    model.mass = mass;
    model.mode_volume = mode_volume;
    model.h11 = H2Profile::constant(g11 / denom);
    model.h12 = H2Profile::constant(g12 / denom);
    model.h21 = H2Profile::constant(g21 / denom);
    model.h22 = H2Profile::constant(g22 / denom);
    validate(model);
    return model;
}

RwaModel free_model(double mass) { return model_from_rates(0, 0, 0, 0, 0, mass); }

namespace {

using json = nlohmann::ordered_json;

json profile_to_json(const H2Profile& p) {
    json doc;
    if (p.kind == H2Profile::Kind::constant) {
        doc["kind"] = "constant";
        doc["value"] = p.value;
    } else {
        doc["kind"] = "gaussian";
        doc["amplitude"] = p.amplitude;
        doc["width"] = p.width;
    }
    return doc;
}

H2Profile profile_from_json(const json& doc, const char* name) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw input_error(std::string(name) + " must be an object with a \"kind\" string");
    const std::string kind = doc["kind"].get<std::string>();
    const auto number = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_number())
            throw input_error(std::string(name) + " needs a numeric \"" + key + "\"");
        return doc[key].get<double>();
    };
    if (kind == "constant") return H2Profile::constant(number("value"));
    if (kind == "gaussian") return H2Profile::gaussian(number("amplitude"), number("width"));
    throw input_error(std::string(name) + " kind must be \"constant\" or \"gaussian\"");
}

}  // namespace

std::string to_json(const RwaModel& model) {
    json doc;
    doc["mass"] = model.mass;
    doc["mode_volume"] = model.mode_volume;
    json h2;
    h2["h11"] = profile_to_json(model.h11);
    h2["h12"] = profile_to_json(model.h12);
    h2["h21"] = profile_to_json(model.h21);
    h2["h22"] = profile_to_json(model.h22);
    doc["h2"] = std::move(h2);
    return doc.dump(2);
}

RwaModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("mass") || !doc["mass"].is_number() ||
        !doc.contains("mode_volume") || !doc["mode_volume"].is_number() ||
        !doc.contains("h2") || !doc["h2"].is_object())
        throw input_error("model document needs mass, mode_volume, and an h2 object");
    RwaModel model;
    model.mass = doc["mass"].get<double>();
    model.mode_volume = doc["mode_volume"].get<double>();
    const json& h2 = doc["h2"];
    for (const char* key : {"h11", "h12", "h21", "h22"})
        if (!h2.contains(key)) throw input_error(std::string("h2 is missing \"") + key + "\"");
    model.h11 = profile_from_json(h2["h11"], "h11");
    model.h12 = profile_from_json(h2["h12"], "h12");
    model.h21 = profile_from_json(h2["h21"], "h21");
    model.h22 = profile_from_json(h2["h22"], "h22");
    validate(model);
    return model;
}

void validate(const TwoTimeQuery& q) {
    check_index(q.i, "index i");
    check_index(q.j, "index j");
    check_index(q.l, "index l");
    check_index(q.m, "index m");
    if (!(q.k_norm >= 0.0) || !std::isfinite(q.k_norm))
        throw input_error("k_norm must be >= 0");
    for (double t : {q.t_prime, q.t_doubleprime, q.tau})
        if (!(t >= 0.0) || !std::isfinite(t))
            throw input_error("times must be nonnegative; reduced dynamics only runs forward");
}

double chi(int l, double k1, double k2, double t1, double t2, const RwaModel& model) {
    check_index(l, "sector index");
    if (!(t1 >= 0.0) || !(t2 >= 0.0)) throw input_error("chi times must be nonnegative");
    return model.growth_rate(l, k1) * t1 + model.growth_rate(l, k2) * t2;
}

std::complex<double> two_time_average(const TwoTimeQuery& q, const RwaModel& model) {
    validate(q);
    validate(model);
    if (q.i != q.l || q.j == q.m) return {0.0, 0.0};

    const double w = model.omega(q.k_norm);
    const double c_j = q.j == 1 ? -1.0 : 1.0;
    const double c_m = q.m == 1 ? -1.0 : 1.0;
    const double chi_tt = chi(q.l, q.k_norm, q.k_norm, q.t_prime, q.t_doubleprime, model);
    const double chi_tau = chi(q.l, q.k_norm, q.k_norm, q.tau, q.tau, model);

    std::complex<double> bracket(0.0, 0.0);
    if (q.j != 2 && q.m != 1)
        bracket += std::exp(std::complex<double>(chi_tau, w * (c_j + c_m) * q.tau));
    bracket += 4.0 * kTwoPi3 * model.h2(q.l, q.m, q.k_norm) * w * q.tau * expm1_ratio(chi_tau);

    return std::exp(std::complex<double>(chi_tt,
                                         w * (q.t_prime * c_j + q.t_doubleprime * c_m))) *
           bracket;
}

namespace {

using Mat = Eigen::MatrixXcd;

struct FockMode {
    Mat a;
    Mat ad;
    Mat h;
    double g1;  // pump rate
    double g2;  // damping rate

    FockMode(int n_max, double omega, double pump, double damp)
        : a(Mat::Zero(n_max + 1, n_max + 1)),
          ad(Mat::Zero(n_max + 1, n_max + 1)),
          g1(pump),
          g2(damp) {
        for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
        ad = a.adjoint();
        h = omega * (ad * a);
    }

    // Adjoint (observable) generator of the sector master equation.
    Mat adjoint(const Mat& o) const {
        const std::complex<double> im(0.0, 1.0);
        Mat out = im * (h * o - o * h);
        out += g1 * (a * (o * ad - ad * o) + (a * o - o * a) * ad);
        out += g2 * (ad * (o * a - a * o) + (ad * o - o * ad) * a);
        return out;
    }

    // Forward (state) generator, used only for the truncation-leakage probe.
    Mat forward(const Mat& rho) const {
        const std::complex<double> im(0.0, 1.0);
        Mat out = -im * (h * rho - rho * h);
        out += g1 * (2.0 * ad * rho * a - a * ad * rho - rho * a * ad);
        out += g2 * (2.0 * a * rho * ad - ad * a * rho - rho * ad * a);
        return out;
    }

    template <class Gen>
    Mat propagate(Mat o, double t, Gen&& gen) const {
        if (t <= 0.0) return o;
        const double scale = 1.0 + 0.3 * (h.rows() > 0 ? std::abs(h(1, 1).real()) : 1.0) +
                             0.3 * (g1 + g2);
        const int steps = std::max(1, static_cast<int>(std::ceil(t * scale / 0.0025)));
        const double dt = t / steps;
        for (int s = 0; s < steps; ++s) {
            const Mat k1 = gen(o);
            const Mat k2 = gen(o + 0.5 * dt * k1);
            const Mat k3 = gen(o + 0.5 * dt * k2);
            const Mat k4 = gen(o + dt * k3);
            o += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return o;
    }

    Mat heisenberg(const Mat& o, double t) const {
        return propagate(o, t, [this](const Mat& x) { return adjoint(x); });
    }
};

}  // namespace

std::complex<double> lindblad_oracle(const TwoTimeQuery& q, const RwaModel& model, int n_max) {
    validate(q);
    validate(model);
    if (n_max < 8) throw input_error("oracle needs n_max >= 8");

    const double w = model.omega(q.k_norm);
    const auto mode_for = [&](int sector) {
        return FockMode(n_max, w, model.gamma(sector, 1, q.k_norm),
                        model.gamma(sector, 2, q.k_norm));
    };
    const auto op_for = [&](const FockMode& mode, int j) { return j == 1 ? mode.a : mode.ad; };

    std::complex<double> value;
    double total_time = q.t_prime + q.t_doubleprime + q.tau;
    if (q.i == q.l) {
        const FockMode mode = mode_for(q.i);
        const Mat first = mode.heisenberg(op_for(mode, q.j), q.t_prime);
        const Mat second = mode.heisenberg(op_for(mode, q.m), q.t_doubleprime);
        const Mat product = mode.heisenberg(first * second, q.tau);
        value = product(0, 0);

        Mat rho = Mat::Zero(n_max + 1, n_max + 1);
        rho(0, 0) = 1.0;
        rho = mode.propagate(rho, total_time,
                             [&mode](const Mat& x) { return mode.forward(x); });
        const double leak = std::abs(rho(n_max, n_max));
        if (leak > 1e-8)
            throw accuracy_error("truncation leakage " + std::to_string(leak) +
                                 " at Fock level " + std::to_string(n_max));
    } else {
        // Operators live in different sectors; the generators factorize, so
        // the vacuum average is the product of single-operator averages.
        const FockMode mode_i = mode_for(q.i);
        const FockMode mode_l = mode_for(q.l);
        const Mat first = mode_i.heisenberg(mode_i.heisenberg(op_for(mode_i, q.j), q.t_prime),
                                            q.tau);
        const Mat second =
            mode_l.heisenberg(mode_l.heisenberg(op_for(mode_l, q.m), q.t_doubleprime), q.tau);
        value = first(0, 0) * second(0, 0);
    }
    return value;
}

std::complex<double> laplace_G(int which, int i, int j, int l, int m, double omega1,
                               double omega2, double k, const RwaModel& model) {
    if (which != 1 && which != 2) throw input_error("transform selector must be 1 or 2");
    check_index(i, "index i");
    check_index(j, "index j");
    check_index(l, "index l");
    check_index(m, "index m");
    if (!(omega1 > 0.0) || !(omega2 > 0.0))
        throw input_error("Laplace arguments must be positive");
    if (!(k >= 0.0)) throw input_error("k must be >= 0");
    validate(model);

    if (i != l || j == m) return {0.0, 0.0};

    const double growth = model.growth_rate(l, k);
    if (omega1 <= growth)
        throw range_error("Laplace transform diverges: omega1 = " + std::to_string(omega1) +
                          " does not exceed the sector growth rate " + std::to_string(growth));
    if (omega2 <= 2.0 * growth)
        throw range_error("Laplace transform diverges: omega2 = " + std::to_string(omega2) +
                          " does not exceed twice the sector growth rate " +
                          std::to_string(2.0 * growth));

    const double w = model.omega(k);
    const double span1 = 40.0 / (omega1 - growth);
    const double span2 = 40.0 / (omega2 - std::max(2.0 * growth, 0.0));
    const auto rule = numkit::gauss_legendre(12);
    const int panels1 = std::max(24, static_cast<int>(std::ceil(span1 * (w + 1.0) / 5.0)));
    const int panels2 = std::max(24, static_cast<int>(std::ceil(span2 * (w + 1.0) / 5.0)));

    const auto average = [&](double t1, double t2) {
        TwoTimeQuery q;
        q.i = i;
        q.j = j;
        q.l = l;
        q.m = m;
        q.k_norm = k;
        q.t_prime = which == 1 ? t1 : 0.0;
        q.t_doubleprime = which == 1 ? 0.0 : t1;
        q.tau = t2;
        return two_time_average(q, model);
    };

    const auto outer = [&](double t2) {
        const auto inner = [&](double t1) { return std::exp(-omega1 * t1) * average(t1, t2); };
        return std::exp(-omega2 * t2) *
               numkit::integrate_panels(inner, 0.0, span1, panels1, rule);
    };
    const std::complex<double> raw =
        numkit::integrate_panels(outer, 0.0, span2, panels2, rule);
    return kTwoPi3 * 2.0 * w * raw;
}

TransformPair sign_transforms(int i, double omega_bar, double k, const RwaModel& model) {
    check_index(i, "sector index");
    if (!(omega_bar > 0.0)) throw input_error("omega_bar must be positive");
    const int j = 3 - i;
    TransformPair pair;
    pair.g1 = laplace_G(1, i, i, i, j, omega_bar, 2.0 * omega_bar, k, model);
    pair.g2 = laplace_G(2, i, j, i, i, omega_bar, 2.0 * omega_bar, k, model);
    return pair;
}

double rwa_sign_closed_form(int i, double omega_bar, double k, const RwaModel& model) {
    check_index(i, "sector index");
    if (!(omega_bar > 0.0) || !std::isfinite(omega_bar))
        throw input_error("omega_bar must be positive");
    if (!(k >= 0.0)) throw input_error("k must be >= 0");
    validate(model);
    const double w = model.omega(k);
    const double g1 = model.gamma(i, 1, k);
    const double g2 = model.gamma(i, 2, k);
    const double shifted = omega_bar + g2 - g1;
    return kTwoPi3 * w * (omega_bar + g1 + g2) /
           (omega_bar * (w * w + shifted * shifted));
}

double interacting_functional(const fields::SpatialVariant& h_spatial, double omega_bar,
                              const RwaModel& model, const fields::FieldConfig& cfg) {
    if (!(omega_bar > 0.0) || !std::isfinite(omega_bar))
        throw input_error("omega_bar must be positive");
    validate(model);
    fields::validate(cfg);

    const auto integrand = [&](double k) {
        const double w = model.omega(k);
        const double denom = kTwoPi3 * 2.0 * w;
        const double weight = fields::angular_weight(h_spatial, k);
        const double combo = rwa_sign_closed_form(1, omega_bar, k, model) +
                             rwa_sign_closed_form(2, omega_bar, k, model);
        return k * k / (denom * denom) * weight * combo;
    };
    const auto at = [&](int nodes) {
        return numkit::integrate_1d(integrand, 0.0, cfg.k_max, numkit::gauss_legendre(nodes));
    };
    const double coarse = at(cfg.n_k);
    const double fine = at(2 * cfg.n_k);
    const double scale = std::max(std::abs(fine), std::abs(coarse));
    if (scale > 0.0 && std::abs(fine - coarse) > 0.01 * scale)
        throw accuracy_error("interacting functional not converged on the configured grid: " +
                             std::to_string(coarse) + " vs " + std::to_string(fine) +
                             " at doubled resolution");
    return fine;
}

std::vector<SweepRow> make_sweep(int count, std::uint64_t seed, bool parallel) {
    if (count < 0) throw input_error("sweep count must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> sector(1, 2);

    std::vector<SweepRow> rows(count);
    for (SweepRow& row : rows) {
        row.i = sector(rng);
        row.omega_bar = 10.0 * (1.0 - unit(rng));
        row.k = 10.0 * unit(rng);
        row.h11 = unit(rng);
        row.h12 = unit(rng);
        row.h21 = unit(rng);
        row.h22 = unit(rng);
    }

    parallel_for(
        count,
        [&](int idx) {
            SweepRow& row = rows[idx];
            RwaModel model;
            model.mass = 1.0;
            model.h11 = H2Profile::constant(row.h11);
            model.h12 = H2Profile::constant(row.h12);
            model.h21 = H2Profile::constant(row.h21);
            model.h22 = H2Profile::constant(row.h22);
            row.value = rwa_sign_closed_form(row.i, row.omega_bar, row.k, model);
            row.pass = row.value >= -1e-12 * (1.0 + std::abs(row.value));
        },
        parallel);
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "sector,omega_bar,k,h11_sq,h12_sq,h21_sq,h22_sq,closed_form,oracle,pass\n";
    for (const SweepRow& row : rows) {
        out << row.i << ',' << row.omega_bar << ',' << row.k << ',' << row.h11 << ','
            << row.h12 << ',' << row.h21 << ',' << row.h22 << ',' << row.value << ",,"
            << (row.pass ? "pass" : "fail") << '\n';
    }
    return out.str();
}

}  // namespace propsign::rwa
