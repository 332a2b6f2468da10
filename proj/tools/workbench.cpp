#include "workbench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "sturm/liouville.hpp"
#include "sturm/metric.hpp"

namespace sturm::workbench {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Serialization

json complex_array(const ComplexMatrix& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back({m(i, j).real(), m(i, j).imag()});
    return arr;
}

ComplexMatrix parse_complex_array(const json& j, Eigen::Index n, const char* field) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(n * n)) {
        throw InputError(std::string(field) + " must hold n^2 = " + std::to_string(n * n) + " [re, im] pairs");
    }
    ComplexMatrix m(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k) {
        const json& pair = j[static_cast<std::size_t>(k)];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw InputError(std::string(field) + " entry " + std::to_string(k) + " is not a [re, im] pair");
        }
        m(k / n, k % n) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    if (!m.allFinite()) throw InputError(std::string(field) + " has non-finite entries");
    return m;
}

namespace {

json real_array(const RealVector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

RealVector parse_real_array(const json& j, Eigen::Index n, const char* field) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(n)) {
        throw InputError(std::string(field) + " must hold " + std::to_string(n) + " numbers");
    }
    RealVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number()) throw InputError(std::string(field) + " entry not a number");
        v[i] = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << data;
    if (!out) throw InputError("write failed for " + path.string());
}

json parse_json_text(const std::string& text, const fs::path& path) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

}  // namespace

json model_to_json(const SturmianPencil& pencil, std::optional<std::uint64_t> seed) {
    json j;
    j["schemaVersion"] = kSchemaVersion;
    j["n"] = pencil.n();
    j["H"] = complex_array(pencil.H);
    j["W"] = complex_array(pencil.W);
    j["provenance"] = std::string(to_string(pencil.provenance));
    if (seed) j["seed"] = *seed;
    j["label"] = pencil.label;
    return j;
}

ModelFile model_from_json(const json& j) {
    if (!j.is_object()) throw InputError("model file must be a JSON object");
    if (!j.contains("schemaVersion") || j["schemaVersion"] != kSchemaVersion) {
        throw InputError("unsupported schemaVersion (expected 1)");
    }
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
        throw InputError("n must be a positive integer");
    }
    const auto n = static_cast<Eigen::Index>(j["n"].get<long long>());
    if (!j.contains("H") || !j.contains("W")) throw InputError("model needs H and W");
    ModelFile m;
    m.pencil = SturmianPencil(parse_complex_array(j["H"], n, "H"), parse_complex_array(j["W"], n, "W"),
                              provenance_from_string(j.value("provenance", std::string("file"))),
                              j.value("label", std::string()));
    if (j.contains("seed") && !j["seed"].is_null()) {
        if (!j["seed"].is_number_unsigned()) throw InputError("seed must be a non-negative integer");
        m.seed = j["seed"].get<std::uint64_t>();
    }
    return m;
}

ModelFile read_model(const fs::path& path) { return model_from_json(parse_json_text(read_file(path), path)); }

fs::path truth_path(const fs::path& model_path) {
    fs::path p = model_path;
    return p.replace_filename(model_path.stem().string() + ".truth.json");
}

json truth_to_json(const DressedModel& model) {
    json j;
    j["schemaVersion"] = kSchemaVersion;
    j["n"] = model.pencil.n();
    j["seed"] = model.seed;
    j["thetaTrue"] = complex_array(model.theta_true);
    j["omegaTrue"] = complex_array(model.omega_true);
    j["spectrumTrue"] = real_array(model.spectrum_true);
    return j;
}

std::optional<TruthFile> read_truth(const fs::path& model_path, Eigen::Index n) {
    const fs::path path = truth_path(model_path);
    if (!fs::exists(path)) return std::nullopt;
    const json j = parse_json_text(read_file(path), path);
    if (j.value("n", Eigen::Index{-1}) != n) throw InputError("truth sidecar dimension differs from model");
    return TruthFile{parse_complex_array(j.at("thetaTrue"), n, "thetaTrue"),
                     parse_complex_array(j.at("omegaTrue"), n, "omegaTrue"),
                     parse_real_array(j.at("spectrumTrue"), n, "spectrumTrue")};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream ss;
    for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return ss.str();
}

// ---------------------------------------------------------------------------
// Report pieces

namespace {

json metric_report_json(const MetricReport& r) {
    return {{"hermiticityResidual", r.hermiticity},
            {"hermiticityMax", r.hermiticity_max},
            {"intertwineH", r.intertwine_h},
            {"intertwineW", r.intertwine_w},
            {"minEigTheta", r.min_eig_theta},
            {"minEigThetaW", r.min_eig_theta_w},
            {"thetaDefiniteness", std::string(to_string(r.theta_definiteness))},
            {"thetaWDefiniteness", std::string(to_string(r.theta_w_definiteness))},
            {"checks",
             {{"hermitian", r.hermitian_ok},
              {"intertwineH", r.intertwine_h_ok},
              {"intertwineW", r.intertwine_w_ok},
              {"thetaPositive", r.theta_positive()},
              {"thetaWPositive", r.theta_w_positive()}}},
            {"verdict", r.pass() ? "pass" : "fail"}};
}

json consistency_json(const ConsistencyReport& c) {
    return {{"orthogonality", c.orthogonality},
            {"completeness", c.completeness},
            {"completenessCurly", c.completeness_curly},
            {"weightReconstruction", c.weight_reconstruction},
            {"hamiltonianReconstruction", c.hamiltonian_reconstruction},
            {"rightProblem", c.right_problem},
            {"dualProblem", c.dual_problem},
            {"curlyDualDefinition", c.curly_dual_definition},
            {"pairing", complex_array(c.pairing)}};
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string truncation_csv(const std::vector<TruncationPoint>& curve) {
    std::string csv = "K,hermiticity,intertwineH,intertwineW,minEigTheta,minEigThetaW\n";
    for (const auto& p : curve) {
        csv += std::to_string(p.modes) + "," + fmt_double(p.report.hermiticity) + "," +
               fmt_double(p.report.intertwine_h) + "," + fmt_double(p.report.intertwine_w) + "," +
               fmt_double(p.report.min_eig_theta) + "," + fmt_double(p.report.min_eig_theta_w) + "\n";
    }
    return csv;
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(std::string("cannot parse ") + what + " entry '" + item + "'");
        }
    }
    if (values.empty()) throw InputError(std::string(what) + " list is empty");
    return values;
}

std::string command_line(const std::vector<std::string>& args) {
    std::string cmd = "sturm-workbench";
    for (const auto& a : args) {
        cmd += ' ';
        if (a.find_first_of(" \t\"'") != std::string::npos) {
            cmd += '\'' + a + '\'';
        } else {
            cmd += a;
        }
    }
    return cmd;
}

void emit(const json& report, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << dump(report);
    } else {
        write_file(out_path, dump(report));
    }
}

json error_json(const Error& e) { return {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}; }

// ---------------------------------------------------------------------------
// Subcommands

struct ForgeArgs {
    std::string kind;
    long long n = 8;
    std::uint64_t seed = 0;
    double cap = 1e3;
    std::string out;
};

int cmd_forge(const ForgeArgs& a, std::ostream& out) {
    if (a.n < 2 && a.kind != "incompatible") throw InputError("--n must be at least 2");
    json model;
    std::optional<json> truth;
    if (a.kind == "dressed") {
        DressingOptions opts;
        opts.condition_cap = a.cap;
        const DressedModel m = gen_dressed(a.n, a.seed, opts);
        model = model_to_json(m.pencil, a.seed);
        truth = truth_to_json(m);
    } else if (a.kind == "hermitian") {
        model = model_to_json(gen_hermitian_pencil(a.n, a.seed), a.seed);
    } else if (a.kind == "incompatible") {
        model = model_to_json(canned_incompatible(), std::nullopt);
    } else {
        throw InputError("unknown model kind '" + a.kind + "'");
    }
    if (a.out.empty()) {
        out << dump(model);
        return kPass;
    }
    write_file(a.out, dump(model));
    if (truth) write_file(truth_path(a.out), dump(*truth));
    out << "wrote " << a.out << " sha256=" << sha256_hex(dump(model)) << "\n";
    return kPass;
}

struct MetricArgs {
    std::string model;
    std::string method = "single";
    std::string weights;
    std::string truncate;
    std::string out;
    double tol = 1e-9;
    double reality_tol = 1e-8;
    bool dress = false;
    bool timing = false;
};

int cmd_metric(const MetricArgs& a, const std::string& command, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    const std::string bytes = read_file(a.model);
    const ModelFile mf = model_from_json(parse_json_text(bytes, a.model));
    const SturmianPencil& pencil = mf.pencil;
    const Eigen::Index n = pencil.n();
    const auto truth = read_truth(a.model, n);

    RealVector weights = RealVector::Ones(n);
    if (!a.weights.empty()) {
        const auto w = parse_number_list(a.weights, "--weights");
        if (static_cast<Eigen::Index>(w.size()) != n) {
            throw InputError("--weights needs " + std::to_string(n) + " entries");
        }
        weights = Eigen::Map<const RealVector>(w.data(), n);
        for (double v : w)
            if (!(v > 0.0)) throw InputError("--weights entries must be positive");
    }
    const bool want_single = a.method == "single" || a.method == "both";
    const bool want_double = a.method == "double" || a.method == "both";

    MetricTolerances tol;
    tol.hermiticity = a.tol;
    tol.intertwine = a.tol;

    json report;
    report["command"] = command;
    report["input"] = {{"path", a.model},
                       {"sha256", sha256_hex(bytes)},
                       {"n", n},
                       {"label", pencil.label},
                       {"provenance", std::string(to_string(pencil.provenance))}};
    report["tolerances"] = {{"metric", a.tol}, {"reality", a.reality_tol}};
    report["weights"] = real_array(weights);

    int code = kPass;
    try {
        PencilOptions popts;
        popts.reality_tol = a.reality_tol;
        const BiorthogonalSystem sys = solve_pencil(pencil, popts);
        report["lambdas"] = real_array(sys.lambdas);
        report["realityResidual"] = sys.reality_residual;
        report["normalization"] = std::string(to_string(sys.normalization));
        report["balanceResidual"] = sys.balance_residual;
        report["consistency"] = consistency_json(consistency_report(sys, pencil));

        bool all_pass = true;
        const MetricCandidate single = build_metric_single(sys, weights);
        if (want_single) {
            const MetricReport r = verify_metric(pencil, single, tol);
            report["methods"]["single-series"] = metric_report_json(r);
            all_pass = all_pass && r.pass();
        }
        if (want_double) {
            const ComplexMatrix m = weights.cast<Complex>().asDiagonal() * compute_m(sys);
            const ComplexMatrix m_alt = weights.cast<Complex>().asDiagonal() * compute_m_via_weight(sys, pencil);
            const MetricCandidate dbl = build_metric_double(sys, m);
            const MetricReport r = verify_metric(pencil, dbl, tol);
            json j = metric_report_json(r);
            j["mFormDisagreement"] = scaled((m - m_alt).norm(), m.norm());
            j["singleDoubleDisagreement"] = scaled((dbl.theta - single.theta).norm(), single.theta.norm());
            report["methods"]["double-series"] = j;
            all_pass = all_pass && r.pass();
        }
        if (truth) {
            const MetricCandidate gt{truth->theta_true, RealVector::Ones(n), MetricMethod::GroundTruth};
            json j = metric_report_json(verify_metric(pencil, gt, tol));
            j["spectrumDeviation"] = (truth->spectrum_true - sys.lambdas).cwiseAbs().maxCoeff();
            report["methods"]["ground-truth"] = j;
        }
        if (!a.truncate.empty()) {
            const auto curve = truncate_scan(sys, pencil, weights, tol);
            json arr = json::array();
            for (const auto& p : curve) {
                arr.push_back({{"K", p.modes},
                               {"hermiticityResidual", p.report.hermiticity},
                               {"intertwineH", p.report.intertwine_h},
                               {"intertwineW", p.report.intertwine_w}});
            }
            report["truncation"] = arr;
            write_file(a.truncate, truncation_csv(curve));
        }
        if (a.dress) {
            const Dressing d = dress(pencil, single);
            report["dressing"] = {{"hResidual", d.h_residual},
                                  {"wResidual", d.w_residual},
                                  {"spectrum", real_array(d.spectrum)},
                                  {"spectrumDeviation", (d.spectrum - sys.lambdas).cwiseAbs().maxCoeff()}};
        }
        report["verdict"] = all_pass ? "pass" : "fail";
        code = all_pass ? kPass : kVerificationFailure;
    } catch (const Error& e) {
        if (!is_numerical(e.kind())) throw;
        err << e.what() << "\n";
        report["error"] = error_json(e);
        report["verdict"] = "error";
        code = kNumericalFailure;
    }
    if (a.timing) {
        report["wallTimeSeconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    emit(report, a.out, out);
    return code;
}

struct LiouvilleArgs {
    std::string potential = "harmonic";
    std::string map = "exp";
    std::string domain = "0.02,8";
    long long n = 4000;
    long long k = 3;
    double tol = 5e-3;
    bool refine = false;
    bool metric = false;
    std::string out;
};

RealFunction parse_potential(const std::string& spec) {
    if (spec == "zero") return [](double) { return 0.0; };
    if (spec == "harmonic") return [](double r) { return r * r; };
    if (spec.rfind("poly:", 0) == 0) return polynomial_potential(parse_number_list(spec.substr(5), "polynomial"));
    throw InputError("unknown potential '" + spec + "' (zero | harmonic | poly:c0,c1,...)");
}

Substitution parse_map(const std::string& spec) {
    if (spec == "identity") return identity_substitution();
    if (spec == "exp") return exponential_substitution();
    if (spec == "cubic") return cubic_substitution();
    throw InputError("unknown map '" + spec + "' (identity | exp | cubic)");
}

json comparison_json(const IsospectralComparison& c) {
    return {{"original", real_array(c.first)},
            {"sturmian", real_array(c.second)},
            {"relativeDifference", real_array(c.relative_difference)},
            {"worst", c.worst},
            {"pass", c.pass}};
}

int cmd_liouville(const LiouvilleArgs& a, const std::string& command, std::ostream& out, std::ostream& err) {
    const RealFunction v1 = parse_potential(a.potential);
    const Substitution s = parse_map(a.map);
    const auto dom = parse_number_list(a.domain, "--domain");
    if (dom.size() != 2 || !(dom[1] > dom[0])) throw InputError("--domain needs lo,hi with hi > lo");
    if (s.name == "exp" && !(dom[0] > 0.0)) throw InputError("exp map needs a positive r-domain");
    if (a.k < 1) throw InputError("--k must be at least 1");

    json report;
    report["command"] = command;
    report["potential"] = a.potential;
    report["map"] = s.name;
    report["domain"] = dom;
    report["N"] = a.n;
    report["k"] = a.k;
    report["tol"] = a.tol;

    int code = kPass;
    try {
        const LiouvillePair pair = liouville_pair(v1, s, dom[0], dom[1], a.n);
        if (a.k > a.n) throw InputError("--k exceeds the number of grid unknowns");
        const IsospectralComparison c = isospectral_check(pair.original, pair.sturmian, a.k, a.tol);
        report["comparison"] = comparison_json(c);
        bool pass = c.pass;
        if (a.refine) {
            const long long fine = 2 * a.n + 1;
            const LiouvillePair pf = liouville_pair(v1, s, dom[0], dom[1], fine);
            const IsospectralComparison cf = isospectral_check(pf.original, pf.sturmian, a.k, a.tol);
            const double ratio = cf.worst > 0 ? c.worst / cf.worst : std::numeric_limits<double>::infinity();
            report["refinement"] = {{"N", fine}, {"comparison", comparison_json(cf)}, {"ratio", ratio}};
        }
        if (a.metric) {
            const SturmianPencil pencil = pair.sturmian.pencil();
            const BiorthogonalSystem sys = solve_pencil(pencil);
            const MetricReport r = verify_metric(pencil, build_metric_single(sys));
            json j = metric_report_json(r);
            j["identityDeviation"] = scaled(
                (build_metric_single(sys).theta - ComplexMatrix::Identity(pencil.n(), pencil.n())).norm(),
                std::sqrt(static_cast<double>(pencil.n())));
            j["realityResidual"] = sys.reality_residual;
            report["metric"] = j;
            pass = pass && r.pass();
        }
        report["verdict"] = pass ? "pass" : "fail";
        code = pass ? kPass : kVerificationFailure;
    } catch (const Error& e) {
        if (!is_numerical(e.kind())) throw;
        err << e.what() << "\n";
        report["error"] = error_json(e);
        report["verdict"] = "error";
        code = kNumericalFailure;
    }
    emit(report, a.out, out);
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Metric operators for Sturm-Schroedinger pencils", "sturm-workbench"};
    app.require_subcommand(1);

    ForgeArgs forge;
    auto* forge_cmd = app.add_subcommand("forge", "Write a seeded or canned model file");
    forge_cmd->add_option("kind", forge.kind, "dressed | hermitian | incompatible")->required();
    forge_cmd->add_option("--n", forge.n, "Dimension");
    forge_cmd->add_option("--seed", forge.seed, "RNG seed");
    forge_cmd->add_option("--cap", forge.cap, "Condition-number cap for dressed models");
    forge_cmd->add_option("--out", forge.out, "Output model path (stdout when omitted)");

    MetricArgs metric;
    auto* metric_cmd = app.add_subcommand("metric", "Solve a model and build/verify metrics");
    metric_cmd->add_option("model", metric.model, "Model JSON file")->required();
    metric_cmd->add_option("--method", metric.method, "single | double | both")
        ->check(CLI::IsMember({"single", "double", "both"}));
    metric_cmd->add_option("--weights", metric.weights, "Comma-separated positive mode weights");
    metric_cmd->add_option("--truncate", metric.truncate, "Write the truncation curve CSV here");
    metric_cmd->add_option("--tol", metric.tol, "Residual tolerance for the verdict");
    metric_cmd->add_option("--reality-tol", metric.reality_tol, "Largest accepted relative |Im lambda|");
    metric_cmd->add_flag("--dress", metric.dress, "Also dress the pencil with Omega = Theta^(1/2)");
    metric_cmd->add_flag("--timing", metric.timing, "Record wall time (makes the report non-reproducible)");
    metric_cmd->add_option("--out", metric.out, "Report path (stdout when omitted)");

    LiouvilleArgs liou;
    auto* liou_cmd = app.add_subcommand("liouville", "Isospectrality check of a Liouville transformation");
    liou_cmd->add_option("--potential", liou.potential, "zero | harmonic | poly:c0,c1,...");
    liou_cmd->add_option("--map", liou.map, "identity | exp | cubic");
    liou_cmd->add_option("--domain", liou.domain, "r-interval lo,hi");
    liou_cmd->add_option("--n", liou.n, "Interior grid points");
    liou_cmd->add_option("--k", liou.k, "Number of lowest eigenvalues compared");
    liou_cmd->add_option("--tol", liou.tol, "Relative eigenvalue tolerance");
    liou_cmd->add_flag("--refine", liou.refine, "Repeat with the grid step halved");
    liou_cmd->add_flag("--metric", liou.metric, "Run the Sturmian pencil through the metric checks");
    liou_cmd->add_option("--out", liou.out, "Report path (stdout when omitted)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kInputError;
    }

    const std::string command = command_line(args);
    try {
        if (*forge_cmd) return cmd_forge(forge, out);
        if (*metric_cmd) return cmd_metric(metric, command, out, err);
        if (*liou_cmd) return cmd_liouville(liou, command, out, err);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return is_numerical(e.kind()) ? kNumericalFailure : kInputError;
    } catch (const json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace sturm::workbench
