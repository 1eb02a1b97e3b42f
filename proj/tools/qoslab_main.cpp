// qoslab command line front end. Subcommands build systems, run the
// experiment suite and emit reproducible JSON/CSV reports. Exit codes:
// 0 all selected checks pass, 1 a check failed, 2 usage or config error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qoslab/serialize.hpp"

namespace {

using namespace qoslab;

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::string system;
    std::string space = "scalar";
    std::string p = "2";
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opt) {
    cmd->add_option("--seed", opt.seed, "Master seed (QOSLAB_SEED env as fallback)")
        ->each([&opt](const std::string&) { opt.seed_given = true; });
    cmd->add_option("--threads", opt.threads, "Worker parallelism bound; results do not depend on it")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opt.out, "Report file path (stdout when omitted)");
    cmd->add_option("--format", opt.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

std::uint64_t resolve_seed(const CommonOpts& opt) {
    if (opt.seed_given) return opt.seed;
    if (const char* env = std::getenv("QOSLAB_SEED")) return std::stoull(env);
    return 0;
}

QSystemInstance load_system(const std::string& spec, std::uint64_t seed) {
    if (spec.empty()) throw std::invalid_argument("missing --system");
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        std::ifstream in(spec);
        if (!in) throw std::invalid_argument("cannot open system file: " + spec);
        Json j = Json::parse(in);
        return system_from_json(j);
    }
    return build_system_from_spec(spec, seed);
}

/// The report envelope. --threads and output plumbing are deliberately not
/// part of it so reruns with different worker counts stay byte-identical.
Json envelope(const std::string& name, std::uint64_t seed, Json config, Json values,
              std::optional<bool> pass) {
    Json j;
    j["name"] = name;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["config"] = std::move(config);
    j["values"] = std::move(values);
    if (pass) j["pass"] = *pass;
    return j;
}

int emit(const CommonOpts& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << opt.out << "\n";
        return 2;
    }
    out << text;
    return 0;
}

int emit_json(const CommonOpts& opt, const Json& j) { return emit(opt, j.dump(2) + "\n"); }

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad ") + what + " entry: '" + tok + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string("empty ") + what + " list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad ") + what + " entry: '" + tok + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string("empty ") + what + " list");
    return out;
}

CoeffFamily random_family(const SystemParams& params, const VectorSpaceDesc& desc,
                          RngStream rng) {
    CoeffFamily a = CoeffFamily::zero(params, desc);
    for (auto& per_coord : a.blocks)
        for (auto& m : per_coord)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    m(i, c) = Complex(rng.gaussian(), rng.gaussian());
    return a;
}

// ---------------------------------------------------------------- verify ---

struct VerifyOpts : CommonOpts {
    std::vector<std::string> checks;
    std::string q = "2";
    int trials = 20;
    int level = 2;
    std::uint64_t n = 100000;
};

int cmd_verify(const VerifyOpts& opt) {
    if (opt.checks.empty()) {
        std::cerr << "verify: at least one --check is required\n";
        return 2;
    }
    const std::uint64_t seed = resolve_seed(opt);
    RngStream rng(seed, 0xc11u);
    QSystemInstance sys = load_system(opt.system, seed);
    const Exponent p = parse_exponent(opt.p);
    const Exponent q = parse_exponent(opt.q);
    const VectorSpaceDesc desc = parse_space_desc(opt.space);

    Json values = Json::object();
    bool all_pass = true;
    for (std::size_t idx = 0; idx < opt.checks.size(); ++idx) {
        const std::string& check = opt.checks[idx];
        RngStream sub = rng.substream(idx);
        if (check == "orthonormality") {
            OrthonormalityReport rep = verify_orthonormality(sys);
            const double tol = sys.defect_tolerance();
            Json j = to_json(rep);
            j["tolerance"] = tol;
            j["pass"] = rep.max_defect <= tol;
            all_pass = all_pass && rep.max_defect <= tol;
            values[check] = j;
        } else if (check == "uniform-bound") {
            const double est = uniform_bound(sys);
            bool pass = true;
            if (sys.declared_bound) pass = est <= *sys.declared_bound * (1.0 + 1e-9);
            Json j{{"estimate", est}, {"unbounded", est > 3.0}, {"pass", pass}};
            if (sys.declared_bound)
                j["declared_bound"] = *sys.declared_bound;
            else
                j["declared_bound"] = nullptr;
            all_pass = all_pass && pass;
            values[check] = j;
        } else if (check == "riesz") {
            RieszReport rep = verify_riesz(sys, p, opt.trials, opt.level, sub);
            all_pass = all_pass && rep.pass;
            values[check] = to_json(rep);
        } else if (check == "contraction") {
            bool pass = true;
            double worst = 0.0;
            for (int t = 0; t < opt.trials; ++t) {
                RngStream trial = sub.substream(t);
                CoeffFamily a = random_family(sys.params, desc, trial.substream(1));
                std::vector<ComplexMatrix> d_mats;
                RngStream drng = trial.substream(2);
                for (int d : sys.params.dims) d_mats.push_back(gaussian_matrix(d, drng));
                ContractionReport rep =
                    verify_contraction(sys.params, a, d_mats, q, opt.n, trial.substream(3));
                pass = pass && rep.pass;
                if (rep.sup_d * rep.rhs > 0.0)
                    worst = std::max(worst, rep.lhs / (rep.sup_d * rep.rhs));
            }
            all_pass = all_pass && pass;
            values[check] = Json{{"trials", opt.trials}, {"worst_ratio", worst}, {"pass", pass}};
        } else if (check == "rad-steinhaus") {
            bool pass = true;
            double lo = 1e300, hi = 0.0;
            for (int t = 0; t < opt.trials; ++t) {
                RngStream trial = sub.substream(t);
                CoeffFamily a = random_family(sys.params, desc, trial.substream(1));
                TwoSidedReport rep =
                    compare_rademacher_steinhaus(a, q, opt.n, trial.substream(2));
                pass = pass && rep.pass;
                if (!rep.zero_convention) {
                    lo = std::min(lo, rep.ratio);
                    hi = std::max(hi, rep.ratio);
                }
            }
            all_pass = all_pass && pass;
            values[check] = Json{{"trials", opt.trials},
                                 {"min_ratio", lo},
                                 {"max_ratio", hi},
                                 {"pass", pass}};
        } else if (check == "rad-gaussian") {
            bool pass = true;
            double hi = 0.0;
            for (int t = 0; t < opt.trials; ++t) {
                RngStream trial = sub.substream(t);
                CoeffFamily a = random_family(sys.params, desc, trial.substream(1));
                GaussCompareReport rep =
                    compare_rademacher_gaussian(a, opt.n, trial.substream(2));
                pass = pass && rep.pass;
                if (!rep.zero_convention) hi = std::max(hi, rep.ratio);
            }
            all_pass = all_pass && pass;
            values[check] = Json{{"trials", opt.trials}, {"max_ratio", hi}, {"pass", pass}};
        } else {
            std::cerr << "verify: unknown check '" << check << "'\n";
            return 2;
        }
    }

    Json config{{"system", opt.system}, {"checks", opt.checks}, {"E", opt.space},
                {"p", opt.p},           {"q", opt.q},           {"trials", opt.trials},
                {"level", opt.level},   {"n", opt.n}};
    int rc = emit_json(opt, envelope("verify", seed, config, values, all_pass));
    if (rc != 0) return rc;
    return all_pass ? 0 : 1;
}

// -------------------------------------------------------------- estimate ---

struct EstimateOpts : CommonOpts {
    std::string task = "constants";
    std::string sigma;
    std::string method = "exact-svd";
    std::string map_name = "transpose";
    std::uint64_t budget = 10000;
    int d = 2;
};

int cmd_estimate(const EstimateOpts& opt) {
    const std::uint64_t seed = resolve_seed(opt);
    RngStream rng(seed, 0xe57u);
    const VectorSpaceDesc desc = parse_space_desc(opt.space);
    const ConstantsMethod method = parse_constants_method(opt.method);

    if (opt.task == "pisier") {
        ComplexMatrix t;
        if (opt.map_name == "identity") {
            t = ComplexMatrix::Identity(opt.d * opt.d, opt.d * opt.d);
        } else if (opt.map_name == "transpose") {
            t = ComplexMatrix::Zero(opt.d * opt.d, opt.d * opt.d);
            for (int i = 0; i < opt.d; ++i)
                for (int j = 0; j < opt.d; ++j) t(i * opt.d + j, j * opt.d + i) = 1.0;
        } else {
            std::cerr << "estimate: unknown --map '" << opt.map_name << "'\n";
            return 2;
        }
        PisierReport rep = pisier_criterion(desc, opt.d, t, method, opt.budget, rng);
        Json config{{"task", opt.task},     {"E", opt.space},      {"d", opt.d},
                    {"map", opt.map_name},  {"method", opt.method}, {"budget", opt.budget}};
        int rc = emit_json(opt, envelope("estimate", seed, config, to_json(rep), rep.pass));
        return rc != 0 ? rc : (rep.pass ? 0 : 1);
    }

    // constants and degenerate both need a system; when none is given, fall
    // back to the classical Rademacher family with --sigma independent signs.
    std::string system_spec = opt.system;
    std::vector<int> subset;
    if (system_spec.empty()) {
        int count = 2;
        if (!opt.sigma.empty()) count = std::stoi(opt.sigma);
        if (count < 1) throw std::invalid_argument("--sigma must be positive");
        system_spec = "rademacher:dims=1x" + std::to_string(count) + ",n=1000";
    } else if (!opt.sigma.empty()) {
        subset = parse_int_list(opt.sigma, "sigma");
    }
    QSystemInstance sys = load_system(system_spec, seed);
    const Exponent p = parse_exponent(opt.p);

    Json config{{"task", opt.task},     {"system", system_spec}, {"E", opt.space},
                {"p", opt.p},           {"sigma", opt.sigma},    {"method", opt.method},
                {"budget", opt.budget}};
    if (opt.task == "degenerate") {
        DegenerateReport rep = degenerate_bound_check(sys, desc, p, method, opt.budget, rng);
        int rc = emit_json(opt, envelope("estimate", seed, config, to_json(rep), rep.pass));
        return rc != 0 ? rc : (rep.pass ? 0 : 1);
    }
    if (opt.task != "constants") {
        std::cerr << "estimate: unknown --task '" << opt.task << "'\n";
        return 2;
    }
    ConstantsReport rep = estimate_constants(sys, desc, subset, p, method, opt.budget, rng);
    int rc = emit_json(opt, envelope("estimate", seed, config, to_json(rep), std::nullopt));
    return rc;
}

// ------------------------------------------------------------------- clt ---

struct CltOpts : CommonOpts {
    std::string dims;
    std::string h = "s2sq";
    std::string schedule = "1,4,16";
    std::uint64_t n = 100000;
};

int cmd_clt(const CltOpts& opt) {
    const std::uint64_t seed = resolve_seed(opt);
    const std::vector<int> dims = parse_int_list(opt.dims, "dims");
    const std::vector<int> schedule = parse_int_list(opt.schedule, "m");
    CltReport rep = clt_functional(dims, parse_clt_functional(opt.h), schedule, opt.n,
                                   RngStream(seed, 0xc17u));
    if (opt.format == "csv") return emit(opt, clt_to_csv(rep));
    Json config{{"dims", opt.dims}, {"h", opt.h}, {"m", opt.schedule}, {"n", opt.n}};
    return emit_json(opt, envelope("clt", seed, config, to_json(rep), std::nullopt));
}

// ----------------------------------------------------------------- approx ---

struct ApproxOpts : CommonOpts {
    std::string eps = "0.5,0.25,0.125";
};

int cmd_approx(const ApproxOpts& opt) {
    const std::uint64_t seed = resolve_seed(opt);
    QSystemInstance sys = load_system(opt.system, seed);
    if (!sys.is_complete) {
        std::cerr << "approx: system not complete\n";
        return 2;
    }
    const std::vector<double> eps = parse_double_list(opt.eps, "eps");
    DeltaApproxResult res = approximate_deltas(sys, eps);
    Json values = to_json(res);
    values["bessel_audit"] = bessel_audit(sys);
    Json config{{"system", opt.system}, {"eps", opt.eps}};
    int rc = emit_json(opt, envelope("approx", seed, config, values, res.pass));
    return rc != 0 ? rc : (res.pass ? 0 : 1);
}

// -------------------------------------------------------------- transform ---

struct TransformOpts : CommonOpts {
    bool roundtrip = false;
    int trials = 20;
};

int cmd_transform(const TransformOpts& opt) {
    if (!opt.roundtrip) {
        std::cerr << "transform: --roundtrip is the only mode; nothing to do\n";
        return 2;
    }
    const std::uint64_t seed = resolve_seed(opt);
    RngStream rng(seed, 0x7f0u);
    QSystemInstance sys = load_system(opt.system, seed);
    const VectorSpaceDesc desc = parse_space_desc(opt.space);

    long total = 0;
    for (int d : sys.params.dims) total += (long)d * d;
    const bool exact = sys.space->kind == SpaceKind::ExactFinite;
    const double tol = exact ? 1e-10 : sys.defect_tolerance() * (double)total * 4.0;

    double max_residual = 0.0;
    double worst_parseval = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
        CoeffFamily a = random_family(sys.params, desc, rng.substream(t));
        SampledVectorFunction f = inverse(a, sys);
        CoeffFamily b = forward(f, sys);
        double norm_a = 0.0, diff = 0.0;
        for (std::size_t s = 0; s < a.params.count(); ++s)
            for (std::size_t e = 0; e < a.blocks[s].size(); ++e) {
                diff = std::max(diff, (b.blocks[s][e] - a.blocks[s][e]).cwiseAbs().maxCoeff());
                norm_a = std::max(norm_a, a.blocks[s][e].cwiseAbs().maxCoeff());
            }
        max_residual = std::max(max_residual, diff / std::max(norm_a, 1.0));
        try {
            const double ratio =
                lp_sigma_norm(b, Exponent(2.0)) / lp_omega_norm(f, Exponent(2.0));
            worst_parseval = std::max(worst_parseval, std::abs(ratio - 1.0));
        } catch (const unsupported_norm_error&) {
            // non-Hilbertian E at p = 2: only the round-trip residual applies
        }
    }
    const bool pass = max_residual <= tol && worst_parseval <= tol;
    Json values{{"trials", opt.trials},
                {"max_residual", max_residual},
                {"max_parseval_defect", worst_parseval},
                {"tolerance", tol},
                {"pass", pass}};
    Json config{{"system", opt.system}, {"E", opt.space}, {"trials", opt.trials},
                {"roundtrip", true}};
    int rc = emit_json(opt, envelope("transform", seed, config, values, pass));
    return rc != 0 ? rc : (pass ? 0 : 1);
}

// ----------------------------------------------------------------- report ---

struct ReportOpts : CommonOpts {
    std::string in;
};

int cmd_report(const ReportOpts& opt) {
    std::ifstream in(opt.in);
    if (!in) {
        std::cerr << "report: cannot open " << opt.in << "\n";
        return 2;
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        std::cerr << "report: not valid JSON: " << e.what() << "\n";
        return 2;
    }
    for (const char* key : {"name", "version", "seed", "config"}) {
        if (!j.contains(key)) {
            std::cerr << "report: missing field '" << key << "'\n";
            return 2;
        }
    }
    int rc = emit_json(opt, j);
    if (rc != 0) return rc;
    if (j.contains("pass") && j.at("pass").is_boolean() && !j.at("pass").get<bool>()) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantized orthonormal systems laboratory"};
    app.require_subcommand(1);

    VerifyOpts vo;
    CLI::App* verify = app.add_subcommand("verify", "Run orthonormality/inequality checks");
    verify->add_option("--system", vo.system, "System shorthand or JSON file")->required();
    verify->add_option("--check", vo.checks,
                       "orthonormality | uniform-bound | riesz | contraction | rad-steinhaus | "
                       "rad-gaussian (repeatable)");
    verify->add_option("--E", vo.space, "Coefficient space (scalar, l<q>:<m>, s<q>:<m>)");
    verify->add_option("--p", vo.p, "Exponent for the riesz check");
    verify->add_option("--q", vo.q, "Moment exponent for randomized checks");
    verify->add_option("--trials", vo.trials)->check(CLI::PositiveNumber);
    verify->add_option("--level", vo.level, "Amplification level for riesz")
        ->check(CLI::PositiveNumber);
    verify->add_option("--n", vo.n, "Sample count for randomized checks");
    add_common(verify, vo);

    EstimateOpts eo;
    CLI::App* estimate = app.add_subcommand("estimate", "Type/cotype constants and criteria");
    estimate->add_option("--task", eo.task, "constants | pisier | degenerate");
    estimate->add_option("--system", eo.system, "System shorthand or JSON file");
    estimate->add_option("--E", eo.space, "Coefficient space");
    estimate->add_option("--p", eo.p, "Exponent");
    estimate->add_option("--sigma", eo.sigma,
                         "Subset of sigma ids, or the sign count when --system is omitted");
    estimate->add_option("--method", eo.method,
                         "exact-svd | stochastic-ascent | exhaustive-signs");
    estimate->add_option("--budget", eo.budget, "Evaluation budget");
    estimate->add_option("--d", eo.d, "Matrix size for the pisier task")
        ->check(CLI::PositiveNumber);
    estimate->add_option("--map", eo.map_name, "pisier task map: transpose | identity");
    add_common(estimate, eo);

    CltOpts co;
    CLI::App* clt = app.add_subcommand("clt", "Matrix central limit schedule");
    clt->set_help_flag("--help", "Print help");  // frees -h for the functional flag
    clt->add_option("--dims", co.dims, "Block dimensions, comma separated")->required();
    clt->add_option("--h", co.h, "s2sq | s4pow4 | e11sq");
    clt->add_option("--m", co.schedule, "Summand schedule, comma separated");
    clt->add_option("--n", co.n, "Samples per schedule entry");
    add_common(clt, co);

    ApproxOpts ao;
    CLI::App* approx = app.add_subcommand("approx", "Delta approximation construction");
    approx->add_option("--system", ao.system, "Complete blocked system")->required();
    approx->add_option("--eps", ao.eps, "Error schedule, comma separated");
    add_common(approx, ao);

    TransformOpts to;
    CLI::App* transform = app.add_subcommand("transform", "Forward/inverse transform checks");
    transform->add_option("--system", to.system, "System shorthand or JSON file")->required();
    transform->add_flag("--roundtrip", to.roundtrip, "Round-trip and Parseval audit");
    transform->add_option("--E", to.space, "Coefficient space");
    transform->add_option("--trials", to.trials)->check(CLI::PositiveNumber);
    add_common(transform, to);

    ReportOpts ro;
    CLI::App* report = app.add_subcommand("report", "Validate and re-emit a report file");
    report->add_option("--in", ro.in, "Report JSON file")->required();
    add_common(report, ro);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(verify)) return cmd_verify(vo);
        if (app.got_subcommand(estimate)) return cmd_estimate(eo);
        if (app.got_subcommand(clt)) return cmd_clt(co);
        if (app.got_subcommand(approx)) return cmd_approx(ao);
        if (app.got_subcommand(transform)) return cmd_transform(to);
        if (app.got_subcommand(report)) return cmd_report(ro);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qoslab::unsupported_norm_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qoslab::resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
