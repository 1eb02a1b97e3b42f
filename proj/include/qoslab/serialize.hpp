#pragma once

#include <string>

#include <json.hpp>

#include "qoslab/experiments.hpp"

namespace qoslab {

using Json = nlohmann::ordered_json;

/// "inf", a plain double, or a fraction like "4/3".
Exponent parse_exponent(const std::string& text);
std::string exponent_str(const Exponent& p);

/// "scalar", "l<q>:<m>" or "s<q>:<m>", e.g. "l1:2", "s2:3".
VectorSpaceDesc parse_space_desc(const std::string& text);
std::string space_desc_str(const VectorSpaceDesc& desc);

/// System shorthand:
///   s3-dual | d4-dual | q8-dual | z<n>-dual
///   su2:jmax=<half-integer>,n=<count>
///   rademacher:dims=<list>,n=<count>   (dims tokens "d" or "dxk")
///   steinhaus:dims=...  gaussian:dims=... (gaussian also accepts d=<dim>)
///   walsh-blocked:dims=<list>[,levels=<L>]
///   trig-blocked:dims=<list>[,levels=<L>]
/// Monte Carlo builders consume RngStream(seed, stream).
QSystemInstance build_system_from_spec(const std::string& spec, std::uint64_t seed,
                                       std::uint64_t stream = 0);

/// JSON system description; loading rebuilds through the same constructors,
/// bit-exact for exact-finite systems and seed-exact for sampled ones.
Json system_to_json(const QSystemInstance& sys);
QSystemInstance system_from_json(const Json& j);

Json coeffs_to_json(const CoeffFamily& a);
CoeffFamily coeffs_from_json(const Json& j, const SystemParams& params);

// Report payloads. The envelope (name, seed, version, config) is added by the
// command layer.
Json to_json(const OrthonormalityReport& rep);
Json to_json(const RieszReport& rep);
Json to_json(const ContractionReport& rep);
Json to_json(const TwoSidedReport& rep);
Json to_json(const GaussCompareReport& rep);
Json to_json(const CltReport& rep);
Json to_json(const ConstantsReport& rep);
Json to_json(const PisierReport& rep);
Json to_json(const DeltaApproxResult& rep);
Json to_json(const DegenerateReport& rep);

/// CLT schedule as plot-ready CSV: m, estimate, stderr, reference,
/// reference_stderr; '.' decimal, 17 significant digits.
std::string clt_to_csv(const CltReport& rep);

/// 17-significant-digit decimal rendering (lossless for doubles).
std::string format_double(double v);

}  // namespace qoslab
