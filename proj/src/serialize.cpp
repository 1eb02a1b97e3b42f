#include "qoslab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qoslab {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(sep, start);
        if (end == std::string::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

/// key=value pairs separated by commas, where a value may itself contain
/// commas (dims lists): a comma token without '=' continues the previous value.
std::map<std::string, std::string> parse_args(const std::string& text) {
    std::map<std::string, std::string> out;
    std::string current;
    for (const std::string& tok : split(text, ',')) {
        const std::size_t eq = tok.find('=');
        if (eq != std::string::npos) {
            current = tok.substr(0, eq);
            out[current] = tok.substr(eq + 1);
        } else if (!current.empty()) {
            out[current] += "," + tok;
        } else if (!tok.empty()) {
            throw std::invalid_argument("system spec: stray token '" + tok + "'");
        }
    }
    return out;
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    for (const std::string& tok : split(text, ',')) {
        if (tok.empty()) throw std::invalid_argument("system spec: empty dims token");
        const std::size_t x = tok.find('x');
        int d = 0, rep = 1;
        try {
            d = std::stoi(tok.substr(0, x));
            if (x != std::string::npos) rep = std::stoi(tok.substr(x + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("system spec: bad dims token '" + tok + "'");
        }
        if (d < 1 || rep < 1) throw std::invalid_argument("system spec: dims must be positive");
        for (int r = 0; r < rep; ++r) dims.push_back(d);
    }
    if (dims.empty()) throw std::invalid_argument("system spec: empty dims");
    return dims;
}

SystemParams params_from_dims(std::vector<int> dims) {
    SystemParams p;
    p.dims = std::move(dims);
    for (std::size_t s = 0; s < p.dims.size(); ++s) p.sigma_ids.push_back((int)s);
    return p;
}

std::uint64_t require_count(const std::map<std::string, std::string>& args) {
    auto it = args.find("n");
    if (it == args.end()) throw std::invalid_argument("system spec: missing n=<sample count>");
    return std::stoull(it->second);
}

int default_levels(const std::vector<int>& dims) {
    long need = 0;
    for (int d : dims) need += (long)d * d;
    int levels = 1;
    while ((1L << levels) < need) ++levels;
    return levels;
}

}  // namespace

Exponent parse_exponent(const std::string& text) {
    if (text == "inf") return Exponent::inf();
    const std::size_t slash = text.find('/');
    try {
        if (slash != std::string::npos)
            return Exponent(std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1)));
        return Exponent(std::stod(text));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad exponent: " + text);
    }
}

std::string exponent_str(const Exponent& p) {
    if (p.is_inf()) return "inf";
    return format_double(p.value());
}

VectorSpaceDesc parse_space_desc(const std::string& text) {
    if (text == "scalar") return VectorSpaceDesc::scalar();
    if (text.size() < 2 || (text[0] != 'l' && text[0] != 's'))
        throw std::invalid_argument("bad coefficient space: " + text);
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("bad coefficient space (expected <kind><q>:<m>): " + text);
    Exponent q = parse_exponent(text.substr(1, colon - 1));
    int m = std::stoi(text.substr(colon + 1));
    return text[0] == 'l' ? VectorSpaceDesc::lq(q, m) : VectorSpaceDesc::schatten(q, m);
}

std::string space_desc_str(const VectorSpaceDesc& desc) {
    switch (desc.kind) {
        case SpaceDescKind::Scalar:
            return "scalar";
        case SpaceDescKind::Lq:
            return "l" + exponent_str(desc.q) + ":" + std::to_string(desc.m);
        default:
            return "s" + exponent_str(desc.q) + ":" + std::to_string(desc.m);
    }
}

QSystemInstance build_system_from_spec(const std::string& spec, std::uint64_t seed,
                                       std::uint64_t stream) {
    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::map<std::string, std::string> args =
        colon == std::string::npos ? std::map<std::string, std::string>{}
                                   : parse_args(spec.substr(colon + 1));

    if (head.size() > 5 && head.substr(head.size() - 5) == "-dual" && head != "su2-dual")
        return build_finite_group_dual(head.substr(0, head.size() - 5));

    if (head == "su2" || head == "su2-dual") {
        auto it = args.find("jmax");
        if (it == args.end()) throw std::invalid_argument("su2 spec: missing jmax=");
        double j;
        const std::size_t slash = it->second.find('/');
        if (slash != std::string::npos)
            j = std::stod(it->second.substr(0, slash)) / std::stod(it->second.substr(slash + 1));
        else
            j = std::stod(it->second);
        const int twoj = (int)std::lround(2.0 * j);
        return build_su2_dual(twoj, require_count(args), RngStream(seed, stream));
    }

    if (head == "rademacher" || head == "steinhaus" || head == "gaussian") {
        std::vector<int> dims;
        if (args.count("dims"))
            dims = parse_dims(args.at("dims"));
        else if (args.count("d"))
            dims = {std::stoi(args.at("d"))};
        else
            throw std::invalid_argument(head + " spec: missing dims= or d=");
        SystemParams params = params_from_dims(std::move(dims));
        RngStream rng(seed, stream);
        if (head == "rademacher") return build_rademacher(params, require_count(args), rng);
        if (head == "steinhaus") return build_steinhaus(params, require_count(args), rng);
        return build_gaussian(params, require_count(args), rng);
    }

    if (head == "walsh-blocked" || head == "trig-blocked") {
        if (!args.count("dims")) throw std::invalid_argument(head + " spec: missing dims=");
        std::vector<int> dims = parse_dims(args.at("dims"));
        const int levels =
            args.count("levels") ? std::stoi(args.at("levels")) : default_levels(dims);
        return build_blocked_scalar(head == "walsh-blocked" ? BlockedBase::Walsh : BlockedBase::Trig,
                                    params_from_dims(std::move(dims)), levels);
    }

    throw std::invalid_argument("unknown system spec: " + spec);
}

Json system_to_json(const QSystemInstance& sys) {
    Json j;
    j["kind"] = sys.kind_tag;
    j["params"] = {{"sigma_ids", sys.params.sigma_ids}, {"dims", sys.params.dims}};
    Json space;
    space["kind"] = sys.space->kind == SpaceKind::ExactFinite ? "exact-finite" : "monte-carlo";
    space["size"] = sys.space->size();
    if (sys.space->master_seed) {
        space["seed"] = *sys.space->master_seed;
        space["stream"] = sys.space->stream_id ? *sys.space->stream_id : 0;
    }
    j["space"] = space;
    if (sys.declared_bound)
        j["bound"] = *sys.declared_bound;
    else
        j["bound"] = nullptr;
    if (sys.blocked_levels > 0) j["levels"] = sys.blocked_levels;
    return j;
}

QSystemInstance system_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const std::vector<int> dims = j.at("params").at("dims").get<std::vector<int>>();
    const Json& space = j.at("space");

    if (kind.size() > 5 && kind.substr(kind.size() - 5) == "-dual" && kind != "su2-dual")
        return build_finite_group_dual(kind.substr(0, kind.size() - 5));
    if (kind == "su2-dual") {
        int twoj_max = 0;
        for (int d : dims) twoj_max = std::max(twoj_max, d - 1);
        return build_su2_dual(twoj_max, space.at("size").get<std::size_t>(),
                              RngStream(space.at("seed").get<std::uint64_t>(),
                                        space.at("stream").get<std::uint64_t>()));
    }
    if (kind == "rademacher" || kind == "steinhaus" || kind == "gaussian") {
        SystemParams params = params_from_dims(dims);
        RngStream rng(space.at("seed").get<std::uint64_t>(),
                      space.at("stream").get<std::uint64_t>());
        const std::size_t n = space.at("size").get<std::size_t>();
        if (kind == "rademacher") return build_rademacher(params, n, rng);
        if (kind == "steinhaus") return build_steinhaus(params, n, rng);
        return build_gaussian(params, n, rng);
    }
    if (kind == "walsh-blocked" || kind == "trig-blocked")
        return build_blocked_scalar(kind == "walsh-blocked" ? BlockedBase::Walsh
                                                            : BlockedBase::Trig,
                                    params_from_dims(dims), j.at("levels").get<int>());
    throw std::invalid_argument("system_from_json: unknown kind " + kind);
}

Json coeffs_to_json(const CoeffFamily& a) {
    Json j;
    j["desc"] = space_desc_str(a.desc);
    Json blocks = Json::object();
    for (std::size_t s = 0; s < a.params.count(); ++s) {
        Json per_coord = Json::array();
        for (const auto& m : a.blocks[s]) {
            Json rows = Json::array();
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                Json row = Json::array();
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    row.push_back(Json::array({m(i, c).real(), m(i, c).imag()}));
                rows.push_back(row);
            }
            per_coord.push_back(rows);
        }
        blocks[std::to_string(a.params.sigma_ids[s])] = per_coord;
    }
    j["blocks"] = blocks;
    return j;
}

CoeffFamily coeffs_from_json(const Json& j, const SystemParams& params) {
    CoeffFamily a = CoeffFamily::zero(params, parse_space_desc(j.at("desc").get<std::string>()));
    const Json& blocks = j.at("blocks");
    for (std::size_t s = 0; s < params.count(); ++s) {
        const Json& per_coord = blocks.at(std::to_string(params.sigma_ids[s]));
        for (int e = 0; e < a.desc.dim(); ++e)
            for (int i = 0; i < params.dims[s]; ++i)
                for (int c = 0; c < params.dims[s]; ++c)
                    a.blocks[s][e](i, c) = Complex(per_coord.at(e).at(i).at(c).at(0).get<double>(),
                                                   per_coord.at(e).at(i).at(c).at(1).get<double>());
    }
    a.validate();
    return a;
}

Json to_json(const OrthonormalityReport& rep) {
    return Json{{"max_defect", rep.max_defect},
                {"worst_a", {rep.worst_a.s, rep.worst_a.i, rep.worst_a.j}},
                {"worst_b", {rep.worst_b.s, rep.worst_b.i, rep.worst_b.j}},
                {"pairs_checked", rep.pairs_checked}};
}

Json to_json(const RieszReport& rep) {
    return Json{{"p", rep.p},
                {"trials", rep.trials},
                {"max_ratio", rep.max_ratio},
                {"bound", rep.bound},
                {"tolerance", rep.tolerance},
                {"amplified_trials", rep.amplified_trials},
                {"max_amplified_ratio", rep.max_amplified_ratio},
                {"pass", rep.pass}};
}

Json to_json(const ContractionReport& rep) {
    return Json{{"lhs", rep.lhs},           {"rhs", rep.rhs},
                {"sup_d", rep.sup_d},       {"tolerance", rep.tolerance},
                {"zero_convention", rep.zero_convention}, {"pass", rep.pass}};
}

Json to_json(const TwoSidedReport& rep) {
    return Json{{"rademacher", rep.rademacher},
                {"steinhaus", rep.steinhaus},
                {"ratio", rep.ratio},
                {"band", {rep.lo, rep.hi}},
                {"tolerance", rep.tolerance},
                {"zero_convention", rep.zero_convention},
                {"pass", rep.pass}};
}

Json to_json(const GaussCompareReport& rep) {
    Json j{{"rademacher_sq", rep.rademacher_sq},
           {"gaussian_sq", rep.gaussian_sq},
           {"ratio", rep.ratio},
           {"c_max", rep.c_max},
           {"tolerance", rep.tolerance},
           {"zero_convention", rep.zero_convention},
           {"pass", rep.pass}};
    if (rep.exact_ratio)
        j["exact_ratio"] = *rep.exact_ratio;
    else
        j["exact_ratio"] = nullptr;
    return j;
}

Json to_json(const CltReport& rep) {
    Json rows = Json::array();
    for (const auto& row : rep.rows)
        rows.push_back(Json{{"m", row.m},
                            {"estimate", row.estimate},
                            {"stderr", row.stderr_est},
                            {"frob_mean", row.frob_mean},
                            {"frob_stderr", row.frob_stderr}});
    return Json{{"dims", rep.dims},
                {"h", rep.h},
                {"rows", rows},
                {"reference", rep.reference},
                {"reference_stderr", rep.reference_stderr}};
}

Json to_json(const ConstantsReport& rep) {
    Json j{{"system", rep.system_tag},
           {"E", space_desc_str(rep.desc)},
           {"sigma_subset", rep.sigma_subset},
           {"p", rep.p},
           {"k1_lower", rep.k1_lower},
           {"k2_lower", rep.k2_lower},
           {"method", rep.method}};
    if (rep.exact)
        j["exact"] = *rep.exact;
    else
        j["exact"] = nullptr;
    if (rep.k1_witness) j["k1_witness"] = coeffs_to_json(*rep.k1_witness);
    return j;
}

Json to_json(const PisierReport& rep) {
    Json j{{"E", rep.e_desc},      {"d", rep.d},
           {"denominator", rep.denominator}, {"numerator", rep.numerator},
           {"ratio", rep.ratio},   {"method", rep.method},
           {"pass", rep.pass}};
    if (rep.witness) j["witness"] = coeffs_to_json(*rep.witness);
    return j;
}

Json to_json(const DeltaApproxResult& rep) {
    Json steps = Json::array();
    for (const auto& step : rep.steps)
        steps.push_back(Json{{"k", step.k},
                             {"eps", step.eps},
                             {"error", step.error},
                             {"support", step.support}});
    return Json{{"steps", steps},
                {"supports_disjoint", rep.supports_disjoint},
                {"pass", rep.pass}};
}

Json to_json(const DegenerateReport& rep) {
    return Json{{"bound", rep.bound},
                {"k1_lower", rep.k1_lower},
                {"k2_lower", rep.k2_lower},
                {"pass", rep.pass}};
}

std::string clt_to_csv(const CltReport& rep) {
    std::string out = "m,estimate,stderr,reference,reference_stderr\n";
    for (const auto& row : rep.rows) {
        out += std::to_string(row.m) + "," + format_double(row.estimate) + "," +
               format_double(row.stderr_est) + "," + format_double(rep.reference) + "," +
               format_double(rep.reference_stderr) + "\n";
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace qoslab
