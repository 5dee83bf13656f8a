#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "propsign/channels.hpp"
#include "propsign/covmap.hpp"
#include "propsign/errors.hpp"
#include "propsign/fields.hpp"
#include "propsign/numkit.hpp"
#include "propsign/rwa.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace propsign;

// Flag misuse detected after CLI11 parsing (bad ranges, unknown names).
struct usage_error_cli {
    std::string message;
};

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    std::vector<std::string> tol_raw;
    std::string fixture;
};

void add_common(CLI::App* cmd, Common& c, bool with_fixture = false) {
    cmd->add_option("--seed", c.seed, "Deterministic seed for randomized pieces");
    cmd->add_option("--out", c.out, "Write the report here instead of stdout");
    cmd->add_option("--format", c.format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", c.tol_raw,
                    "Tolerance override NAME=VALUE (repeatable; names per subcommand)");
    if (with_fixture) cmd->add_option("--fixture", c.fixture, "Named built-in fixture");
}

// Applies --tol overrides onto the subcommand's defaults; unknown names and
// unparsable values are usage errors.
std::map<std::string, double> resolve_tols(const std::vector<std::string>& raw,
                                           std::map<std::string, double> defaults) {
    for (const std::string& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw usage_error_cli{"--tol expects NAME=VALUE, got \"" + item + "\""};
        const std::string name = item.substr(0, eq);
        if (defaults.find(name) == defaults.end())
            throw usage_error_cli{"unknown tolerance \"" + name + "\" for this subcommand"};
        try {
            std::size_t used = 0;
            const double value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1 || !(value > 0.0) || !std::isfinite(value))
                throw std::invalid_argument("");
            defaults[name] = value;
        } catch (const std::exception&) {
            throw usage_error_cli{"--tol " + name + " needs a positive real value"};
        }
    }
    return defaults;
}

json tols_to_json(const std::map<std::string, double>& tols) {
    json doc = json::object();
    for (const auto& [name, value] : tols) doc[name] = value;
    return doc;
}

// Assembles the versioned report document.
json make_doc(const std::string& command, json config_echo, json results, bool ok) {
    json doc;
    doc["schema"] = 1;
    doc["command"] = command;
    doc["config_echo"] = std::move(config_echo);
    doc["results"] = std::move(results);
    doc["verdict"] = ok ? "verified" : "claim_failed";
    return doc;
}

int emit(const Common& c, const json& doc, const std::string& csv, bool ok) {
    const std::string text = c.format == "csv" ? csv : doc.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(c.out);
        if (!file) {
            std::cerr << "error: cannot write " << c.out << "\n";
            return 74;
        }
        file << text;
    }
    return ok ? 0 : 1;
}

std::string csv_bool(bool b) { return b ? "pass" : "fail"; }

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw input_error("cannot read " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

// ---- free-sign --------------------------------------------------------------

struct FreeSignOpts {
    Common common;
    int count = 100;
    double mass = 1.0;
    int n_k = 0;  // 0 keeps each function's automatic grid
};

int cmd_free_sign(const FreeSignOpts& opt) {
    if (opt.count < 0) throw usage_error_cli{"--count must be >= 0"};
    if (!(opt.mass > 0.0)) throw usage_error_cli{"--mass must be positive"};
    if (opt.n_k < 0) throw usage_error_cli{"--n-k must be >= 0"};
    const auto tols = resolve_tols(opt.common.tol_raw, {{"positivity_rel", 1e-9}});
    const double rel = tols.at("positivity_rel");

    const std::vector<fields::TestFunction> fs =
        fields::random_functions(opt.common.seed, opt.count);
    std::vector<fields::PositivityResult> values;
    if (opt.n_k > 0) {
        values.reserve(fs.size());
        for (const fields::TestFunction& f : fs) {
            fields::FieldConfig cfg = fields::auto_config(f, opt.mass);
            cfg.n_k = opt.n_k;
            values.push_back({fields::re_idf_free(f, cfg), fields::l2norm2(f)});
        }
    } else {
        values = fields::positivity_batch(fs, opt.mass, true);
    }

    bool ok = true;
    json results = json::array();
    std::ostringstream csv;
    csv << "index,value,scale,pass\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool pass = values[i].value >= -rel * values[i].scale;
        ok = ok && pass;
        json row;
        row["index"] = static_cast<int>(i);
        row["value"] = values[i].value;
        row["scale"] = values[i].scale;
        row["pass"] = pass;
        results.push_back(std::move(row));
        csv << i << ',' << fmt(values[i].value) << ',' << fmt(values[i].scale) << ','
            << csv_bool(pass) << '\n';
    }

    json echo;
    echo["seed"] = opt.common.seed;
    echo["count"] = opt.count;
    echo["mass"] = opt.mass;
    echo["n_k"] = opt.n_k;
    echo["tol"] = tols_to_json(tols);
    if (!ok) std::cerr << "free-sign: a test function produced a negative value\n";
    return emit(opt.common, make_doc("free-sign", std::move(echo), std::move(results), ok),
                csv.str(), ok);
}

// ---- im-indeterminate ---------------------------------------------------------

struct ImOpts {
    Common common;
    double mass = 1.0;
    std::vector<double> betas;
};

int cmd_im_indeterminate(const ImOpts& opt) {
    if (!(opt.mass > 0.0)) throw usage_error_cli{"--mass must be positive"};
    std::vector<double> betas = opt.betas.empty() ? std::vector<double>{0.5} : opt.betas;
    for (double beta : betas)
        if (!(beta > 0.0 && beta < 1.0))
            throw usage_error_cli{"--beta must lie strictly between 0 and 1"};
    std::sort(betas.begin(), betas.end());
    const auto tols = resolve_tols(opt.common.tol_raw, {{"witness_rel", 1e-3}});

    const fields::SpatialVariant spatial = fields::Gaussian3D{1.0};
    const fields::FieldConfig cfg = fields::default_config(opt.mass);

    bool ok = true;
    json results = json::array();
    std::ostringstream csv;
    csv << "beta,quad_plus,quad_minus,closed_plus,closed_minus,product,discrepancy,pass\n";
    for (double beta : betas) {
        const fields::WitnessReport report =
            fields::indeterminacy_witness(opt.mass, beta, spatial, cfg, tols.at("witness_rel"));
        ok = ok && report.pass;
        json row;
        row["beta"] = beta;
        row["quad_plus"] = report.quad_plus;
        row["quad_minus"] = report.quad_minus;
        row["closed_plus"] = report.closed_plus;
        row["closed_minus"] = report.closed_minus;
        row["product"] = report.product;
        row["discrepancy"] = report.discrepancy;
        row["pass"] = report.pass;
        results.push_back(std::move(row));
        csv << fmt(beta) << ',' << fmt(report.quad_plus) << ',' << fmt(report.quad_minus)
            << ',' << fmt(report.closed_plus) << ',' << fmt(report.closed_minus) << ','
            << fmt(report.product) << ',' << fmt(report.discrepancy) << ','
            << csv_bool(report.pass) << '\n';
    }

    json echo;
    echo["seed"] = opt.common.seed;
    echo["mass"] = opt.mass;
    echo["betas"] = betas;
    echo["tol"] = tols_to_json(tols);
    if (!ok) std::cerr << "im-indeterminate: witness failed for at least one beta\n";
    return emit(opt.common,
                make_doc("im-indeterminate", std::move(echo), std::move(results), ok),
                csv.str(), ok);
}

// ---- covmap -------------------------------------------------------------------

struct CovmapOpts {
    Common common;
    double tau = 1.0;
    double lambda_scale = 1.0;
};

int cmd_covmap(const CovmapOpts& opt) {
    if (!(opt.tau > 0.0)) throw usage_error_cli{"--tau must be positive"};
    if (opt.lambda_scale < 0.0) throw usage_error_cli{"--lambda must be >= 0"};
    if (!opt.common.fixture.empty() && opt.common.fixture != "standard")
        throw usage_error_cli{"unknown fixture \"" + opt.common.fixture + "\""};
    const auto tols = resolve_tols(opt.common.tol_raw, {{"roundtrip", 1e-12},
                                                        {"decomposition", 1e-9},
                                                        {"purity_rate", 1e-4}});

    covmap::WitnessFixture fixture = covmap::standard_witness_fixture();
    fixture.tau = opt.tau;
    if (opt.lambda_scale != 1.0) {
        std::vector<double> scaled = fixture.basis.scalars;
        for (double& s : scaled) s *= opt.lambda_scale;
        fixture.basis = covmap::basis_from_scalars(scaled, opt.lambda_scale == 0.0);
    }
    const covmap::MomentumBasis& basis = fixture.basis;
    const covmap::Vector& psi = fixture.psi;

    bool ok = true;
    json results = json::array();
    std::ostringstream csv;
    csv << "check,metric,value,pass\n";
    const auto push = [&](const char* check, const char* metric, double value, double tol) {
        const bool pass = value <= tol;
        ok = ok && pass;
        json row;
        row["check"] = check;
        row["metric"] = metric;
        row["value"] = value;
        row["tolerance"] = tol;
        row["pass"] = pass;
        results.push_back(std::move(row));
        csv << check << ',' << metric << ',' << fmt(value) << ',' << csv_bool(pass) << '\n';
        if (!pass) std::cerr << "covmap: fixture " << check << " failed (" << metric << ")\n";
    };

    const channels::Matrix projector = psi * psi.adjoint();
    const covmap::PState state{basis, channels::make_density(projector)};

    // Splitting components average back to the forward map.
    const covmap::PState forwarded = covmap::gaussian_forward(state, opt.tau);
    const channels::Matrix mixed = 0.5 * (covmap::sigma_pm(psi, basis, opt.tau, +1).rho +
                                          covmap::sigma_pm(psi, basis, opt.tau, -1).rho);
    push("decomposition", "max_abs_gap", (mixed - forwarded.rho.rho).cwiseAbs().maxCoeff(),
         tols.at("decomposition"));

    // Purity decay rate at tau = 0 against the variance formula.
    const double h = 1e-6;
    const double fd =
        (channels::purity(covmap::gaussian_forward(state, h).rho) - 1.0) / h;
    const double rate = covmap::purity_rate(psi, basis.scalars);
    push("purity_rate", "abs_gap", std::abs(fd - rate), tols.at("purity_rate"));

    // backward(forward(rho)) returns the state elementwise.
    const channels::Matrix back =
        covmap::gaussian_backward(forwarded.rho.rho, basis.scalars, opt.tau);
    push("roundtrip", "max_abs_gap", (back - state.rho.rho).cwiseAbs().maxCoeff(),
         tols.at("roundtrip"));

    try {
        const covmap::WitnessResult witness =
            covmap::nononto_witness(psi, fixture.phi, basis, opt.tau);
        const double w_min = std::min(witness.w_plus, witness.w_minus);
        const bool pass = w_min < 0.0;
        ok = ok && pass;
        json row;
        row["check"] = "witness";
        row["w_plus"] = witness.w_plus;
        row["w_minus"] = witness.w_minus;
        row["verdict"] = witness.verdict;
        row["pass"] = pass;
        results.push_back(std::move(row));
        csv << "witness,w_plus," << fmt(witness.w_plus) << ',' << csv_bool(pass) << '\n';
        csv << "witness,w_minus," << fmt(witness.w_minus) << ',' << csv_bool(pass) << '\n';
        if (!pass) std::cerr << "covmap: fixture witness failed (w_min >= 0)\n";
    } catch (const witness_inconclusive_error& e) {
        json row;
        row["check"] = "witness";
        row["verdict"] = "inconclusive";
        row["warning"] = e.what();
        row["pass"] = true;
        results.push_back(std::move(row));
        csv << "witness,inconclusive,0,pass\n";
        std::cerr << "warning: witness inconclusive: " << e.what() << "\n";
    }

    json echo;
    echo["seed"] = opt.common.seed;
    echo["fixture"] = "standard";
    echo["tau"] = opt.tau;
    echo["lambda_scale"] = opt.lambda_scale;
    echo["tol"] = tols_to_json(tols);
    return emit(opt.common, make_doc("covmap", std::move(echo), std::move(results), ok),
                csv.str(), ok);
}

// ---- kraus --------------------------------------------------------------------

struct KrausOpts {
    Common common;
    std::string file;
};

int cmd_kraus(const KrausOpts& opt) {
    const auto tols = resolve_tols(opt.common.tol_raw, {});
    const channels::KrausSet set = channels::kraus_from_json(read_file(opt.file));
    const int samples = std::max(2 * set.dim() * set.dim(), 16);
    std::mt19937_64 rng(opt.common.seed);
    const channels::ChannelReport report = channels::analyze_channel(set, samples, rng);

    json row;
    row["dim"] = set.dim();
    row["n_ops"] = static_cast<int>(set.ops.size());
    row["purity_preserving"] = report.purity_preserving;
    row["proportional"] = report.proportional;
    if (report.j_star) row["j_star"] = *report.j_star;
    if (report.normalization) row["normalization"] = *report.normalization;
    if (report.unitary_deviation) row["unitary_deviation"] = *report.unitary_deviation;
    const bool unitary = report.verdict == channels::Verdict::invertible_unitary;
    row["verdict"] = unitary ? "invertible_unitary" : "not_invertible";

    std::ostringstream csv;
    csv << "metric,value\n";
    csv << "dim," << set.dim() << '\n';
    csv << "n_ops," << set.ops.size() << '\n';
    csv << "purity_preserving," << (report.purity_preserving ? "true" : "false") << '\n';
    csv << "proportional," << (report.proportional ? "true" : "false") << '\n';
    if (report.normalization) csv << "normalization," << fmt(*report.normalization) << '\n';
    if (report.unitary_deviation)
        csv << "unitary_deviation," << fmt(*report.unitary_deviation) << '\n';
    csv << "verdict," << (unitary ? "invertible_unitary" : "not_invertible") << '\n';

    json echo;
    echo["seed"] = opt.common.seed;
    echo["file"] = opt.file;
    echo["samples"] = samples;
    echo["tol"] = tols_to_json(tols);

    // The verdict is the payload: analysis completing at all is success.
    json results = json::array();
    results.push_back(std::move(row));
    return emit(opt.common, make_doc("kraus", std::move(echo), std::move(results), true),
                csv.str(), true);
}

// ---- rwa ----------------------------------------------------------------------

struct RwaOpts {
    Common common;
    std::string file;
    int count = 1000;
    double omega_bar = 1.0;
    int n_max = 12;
};

rwa::RwaModel rwa_fixture_model(const std::string& name) {
    if (name.empty() || name == "default")
        return rwa::model_from_rates(0.01, 0.03, 0.005, 0.02, 0.0, 1.0);
    if (name == "free") return rwa::free_model(1.0);
    if (name == "pumped") return rwa::model_from_rates(0.04, 0.01, 0.0, 0.02, 0.0, 1.0);
    throw usage_error_cli{"unknown fixture \"" + name + "\" (default, free, pumped)"};
}

int cmd_rwa(const RwaOpts& opt) {
    if (opt.count < 0) throw usage_error_cli{"--count must be >= 0"};
    if (!(opt.omega_bar > 0.0)) throw usage_error_cli{"--omega-bar must be positive"};
    if (opt.n_max < 8) throw usage_error_cli{"--n-max must be >= 8"};
    if (!opt.file.empty() && !opt.common.fixture.empty())
        throw usage_error_cli{"pass either a model file or --fixture, not both"};
    const auto tols = resolve_tols(opt.common.tol_raw, {{"oracle_rel", 1e-4},
                                                        {"laplace_rel", 1e-5},
                                                        {"functional_rel", 1e-9}});

    const rwa::RwaModel model = opt.file.empty()
                                    ? rwa_fixture_model(opt.common.fixture)
                                    : rwa::model_from_json(read_file(opt.file));

    bool ok = true;
    json results = json::array();
    std::ostringstream csv;

    // Interacting functional stays nonnegative.
    {
        const double value = rwa::interacting_functional(
            fields::Gaussian3D{1.0}, opt.omega_bar, model, fields::default_config(model.mass));
        const bool pass = value >= -tols.at("functional_rel") * (1.0 + std::abs(value));
        ok = ok && pass;
        json row;
        row["check"] = "interacting";
        row["omega_bar"] = opt.omega_bar;
        row["value"] = value;
        row["pass"] = pass;
        results.push_back(std::move(row));
    }

    // Quadrature Laplace transforms against the closed form, both sectors.
    for (int sector : {1, 2}) {
        const rwa::TransformPair pair =
            rwa::sign_transforms(sector, opt.omega_bar, 0.0, model);
        const double combined = (pair.g1 + pair.g2).real();
        const double closed = rwa::rwa_sign_closed_form(sector, opt.omega_bar, 0.0, model);
        const double rel = std::abs(combined - closed) / std::max(std::abs(closed), 1e-300);
        const bool pass = rel <= tols.at("laplace_rel") && closed >= 0.0;
        ok = ok && pass;
        json row;
        row["check"] = "laplace";
        row["sector"] = sector;
        row["omega_bar"] = opt.omega_bar;
        row["closed_form"] = closed;
        row["quadrature"] = combined;
        row["rel_gap"] = rel;
        row["pass"] = pass;
        results.push_back(std::move(row));
        if (!pass) std::cerr << "rwa: Laplace cross-check failed in sector " << sector << "\n";
    }

    // Closed-form averages against the truncated master-equation oracle.
    {
        struct Probe {
            int i, j, l, m;
            double tp, tpp, tau;
        };
        const std::vector<Probe> probes = {
            {1, 1, 1, 2, 0.4, 0.0, 0.3},
            {1, 2, 1, 1, 0.3, 0.5, 0.4},
            {2, 1, 2, 2, 0.5, 0.2, 0.3},
        };
        for (const Probe& p : probes) {
            rwa::TwoTimeQuery q;
            q.i = p.i;
            q.j = p.j;
            q.l = p.l;
            q.m = p.m;
            q.k_norm = 0.0;
            q.t_prime = p.tp;
            q.t_doubleprime = p.tpp;
            q.tau = p.tau;
            const std::complex<double> closed = rwa::two_time_average(q, model);
            const std::complex<double> oracle = rwa::lindblad_oracle(q, model, opt.n_max);
            const double rel =
                std::abs(closed - oracle) / std::max(std::abs(closed), 1e-300);
            const bool pass = rel <= tols.at("oracle_rel");
            ok = ok && pass;
            json row;
            row["check"] = "oracle";
            row["indices"] = {p.i, p.j, p.l, p.m};
            row["times"] = {p.tp, p.tpp, p.tau};
            row["closed_re"] = closed.real();
            row["closed_im"] = closed.imag();
            row["oracle_re"] = oracle.real();
            row["oracle_im"] = oracle.imag();
            row["rel_gap"] = rel;
            row["pass"] = pass;
            results.push_back(std::move(row));
            if (!pass)
                std::cerr << "rwa: oracle mismatch at (" << p.i << p.j << p.l << p.m << ")\n";
        }
    }

    // Random positivity sweep; failing points are listed.
    const std::vector<rwa::SweepRow> rows = rwa::make_sweep(opt.count, opt.common.seed, true);
    int violations = 0;
    for (const rwa::SweepRow& row : rows) {
        if (row.pass) continue;
        ++violations;
        if (violations <= 20) {
            json bad;
            bad["check"] = "sweep_violation";
            bad["sector"] = row.i;
            bad["omega_bar"] = row.omega_bar;
            bad["k"] = row.k;
            bad["value"] = row.value;
            bad["pass"] = false;
            results.push_back(std::move(bad));
        }
    }
    ok = ok && violations == 0;
    {
        json row;
        row["check"] = "sweep";
        row["count"] = opt.count;
        row["violations"] = violations;
        row["pass"] = violations == 0;
        results.push_back(std::move(row));
        if (violations > 0)
            std::cerr << "rwa: " << violations << " sweep points went negative\n";
    }

    json echo;
    echo["seed"] = opt.common.seed;
    if (!opt.file.empty())
        echo["file"] = opt.file;
    else
        echo["fixture"] = opt.common.fixture.empty() ? "default" : opt.common.fixture;
    echo["count"] = opt.count;
    echo["omega_bar"] = opt.omega_bar;
    echo["n_max"] = opt.n_max;
    echo["tol"] = tols_to_json(tols);

    // CSV output is the plot-ready sweep table.
    return emit(opt.common, make_doc("rwa", std::move(echo), std::move(results), ok),
                rwa::sweep_to_csv(rows), ok);
}

// ---- bessel-identities ----------------------------------------------------------

int cmd_bessel(const Common& common) {
    const auto tols = resolve_tols(common.tol_raw, {{"gr_3876_1", 1e-5}, {"gr_6677_6", 1e-8}});

    bool ok = true;
    json results = json::array();
    std::ostringstream csv;
    csv << "identity,m,dt,x,lhs,rhs,abs_gap,pass\n";
    const auto push = [&](const char* identity, double m, double dt, double x,
                          const numkit::CheckPair& pair, double tol) {
        const double gap = std::abs(pair.lhs - pair.rhs);
        const bool pass = gap <= tol;
        ok = ok && pass;
        json row;
        row["identity"] = identity;
        row["m"] = m;
        row["dt"] = dt;
        row["x"] = x;
        row["lhs"] = pair.lhs;
        row["rhs"] = pair.rhs;
        row["abs_gap"] = gap;
        row["pass"] = pass;
        results.push_back(std::move(row));
        csv << identity << ',' << fmt(m) << ',' << fmt(dt) << ',' << fmt(x) << ','
            << fmt(pair.lhs) << ',' << fmt(pair.rhs) << ',' << fmt(gap) << ','
            << csv_bool(pass) << '\n';
    };

    for (double m : {0.5, 1.0, 2.0})
        for (double dt : {1.0, 2.0, 3.0})
            for (double x : {0.5, 1.0, 2.0}) {
                push("gr_3876_1", m, dt, x, numkit::gr_3876_1_check(m, dt, x),
                     tols.at("gr_3876_1"));
                push("gr_6677_6", m, dt, x, numkit::gr_6677_6_check(m, dt, x),
                     tols.at("gr_6677_6"));
            }

    json echo;
    echo["seed"] = common.seed;
    echo["tol"] = tols_to_json(tols);
    if (!ok) std::cerr << "bessel-identities: an identity exceeded its tolerance\n";
    return emit(common, make_doc("bessel-identities", std::move(echo), std::move(results), ok),
                csv.str(), ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification suite for propagator sign claims"};
    app.require_subcommand(1);

    FreeSignOpts free_opts;
    CLI::App* free_cmd =
        app.add_subcommand("free-sign", "Positivity of the free-propagator real part");
    add_common(free_cmd, free_opts.common);
    free_cmd->add_option("--count", free_opts.count, "Number of randomized test functions");
    free_cmd->add_option("--mass", free_opts.mass, "Field mass");
    free_cmd->add_option("--n-k", free_opts.n_k, "Radial grid override (0 = automatic)");

    ImOpts im_opts;
    CLI::App* im_cmd = app.add_subcommand(
        "im-indeterminate", "Indeterminate sign of the imaginary part");
    add_common(im_cmd, im_opts.common);
    im_cmd->add_option("--mass", im_opts.mass, "Field mass");
    im_cmd->add_option("--beta", im_opts.betas, "Velocity parameter in (0,1), repeatable");

    CovmapOpts cov_opts;
    CLI::App* cov_cmd =
        app.add_subcommand("covmap", "Covariant damping map contracts and witness");
    add_common(cov_cmd, cov_opts.common, true);
    cov_cmd->add_option("--tau", cov_opts.tau, "Map parameter tau");
    cov_cmd->add_option("--lambda", cov_opts.lambda_scale, "Scale factor on lambda");

    KrausOpts kraus_opts;
    CLI::App* kraus_cmd =
        app.add_subcommand("kraus", "Invertibility analysis of a Kraus channel file");
    add_common(kraus_cmd, kraus_opts.common);
    kraus_cmd->add_option("file", kraus_opts.file, "KrausSet JSON file")->required();

    RwaOpts rwa_opts;
    CLI::App* rwa_cmd =
        app.add_subcommand("rwa", "Damped/pumped mode sign checks and oracle comparison");
    add_common(rwa_cmd, rwa_opts.common, true);
    rwa_cmd->add_option("file", rwa_opts.file, "Model JSON file (optional)");
    rwa_cmd->add_option("--count", rwa_opts.count, "Sweep size");
    rwa_cmd->add_option("--omega-bar", rwa_opts.omega_bar, "Laplace frequency");
    rwa_cmd->add_option("--n-max", rwa_opts.n_max, "Oracle Fock truncation");

    Common bessel_common;
    CLI::App* bessel_cmd =
        app.add_subcommand("bessel-identities", "Tabulated oscillatory integral identities");
    add_common(bessel_cmd, bessel_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    }

    try {
        if (free_cmd->parsed()) return cmd_free_sign(free_opts);
        if (im_cmd->parsed()) return cmd_im_indeterminate(im_opts);
        if (cov_cmd->parsed()) return cmd_covmap(cov_opts);
        if (kraus_cmd->parsed()) return cmd_kraus(kraus_opts);
        if (rwa_cmd->parsed()) return cmd_rwa(rwa_opts);
        if (bessel_cmd->parsed()) return cmd_bessel(bessel_common);
    } catch (const usage_error_cli& e) {
        std::cerr << "error: " << e.message << "\n";
        return 64;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    } catch (const accuracy_error& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return 2;
    } catch (const range_error& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return 2;
    } catch (const internal_consistency_error& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 70;
    }
    return 64;
}
