#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qoslab/transforms.hpp"

namespace qoslab {

/// Hausdorff-Young style check: sup over random polynomials f of
/// ||forward(f)||_{p'} / ||f||_{L^p} against the bound M^(2/p - 1).
struct RieszReport {
    double p = 2.0;
    int trials = 0;
    double max_ratio = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    int amplified_trials = 0;
    double max_amplified_ratio = 0.0;
    bool pass = false;
};

RieszReport verify_riesz(const QSystemInstance& sys, const Exponent& p, int trials, int level,
                         const RngStream& rng);

struct ContractionReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double sup_d = 0.0;
    double tolerance = 0.0;
    bool zero_convention = false;
    bool pass = false;
};

/// Contraction principle on a fresh Rademacher ensemble:
/// ||sum d tr(A rho D)||_{L^q} <= sup||D|| * ||sum d tr(A rho)||_{L^q}.
ContractionReport verify_contraction(const SystemParams& params, const CoeffFamily& a,
                                     const std::vector<ComplexMatrix>& d_mats, const Exponent& q,
                                     std::size_t sample_count, const RngStream& rng);

struct TwoSidedReport {
    double rademacher = 0.0;
    double steinhaus = 0.0;
    double ratio = 1.0;
    double lo = 0.5;
    double hi = 2.0;
    double tolerance = 0.0;
    bool zero_convention = false;
    bool pass = false;
};

/// Marcus-Pisier factor-2 comparison of the Rademacher and Steinhaus
/// randomizations of the same coefficient family.
TwoSidedReport compare_rademacher_steinhaus(const CoeffFamily& a, const Exponent& q,
                                            std::size_t sample_count, const RngStream& rng);

struct GaussCompareReport {
    double rademacher_sq = 0.0;
    double gaussian_sq = 0.0;
    double ratio = 1.0;
    double c_max = 4.0;
    double tolerance = 0.0;
    /// Present when the coefficient space is Hilbertian: both second moments
    /// evaluated from the orthonormality relations instead of sampling.
    std::optional<double> exact_ratio;
    bool zero_convention = false;
    bool pass = false;
};

GaussCompareReport compare_rademacher_gaussian(const CoeffFamily& a, std::size_t sample_count,
                                               const RngStream& rng, double c_max = 4.0);

enum class CltFunctional { S2Sq, S4Pow4, Entry11Sq };

CltFunctional parse_clt_functional(const std::string& name);  // s2sq | s4pow4 | e11sq
std::string clt_functional_name(CltFunctional h);

struct CltRow {
    int m = 0;
    double estimate = 0.0;
    double stderr_est = 0.0;
    /// sanity statistic E sum_sigma ||rho(m)||_F^2 (= sum of dims exactly)
    double frob_mean = 0.0;
    double frob_stderr = 0.0;
};

struct CltReport {
    std::vector<int> dims;
    std::string h;
    std::vector<CltRow> rows;
    double reference = 0.0;
    double reference_stderr = 0.0;
};

/// Matrix CLT: compares E h((1/sqrt(m)) sum of m Haar orthogonals) along the
/// m-schedule against the Gaussian reference ensemble.
CltReport clt_functional(const std::vector<int>& dims, CltFunctional h,
                         const std::vector<int>& m_schedule, std::size_t sample_count,
                         const RngStream& rng);

enum class ConstantsMethod { ExactSvd, StochasticAscent, ExhaustiveSigns };

ConstantsMethod parse_constants_method(const std::string& name);
std::string constants_method_name(ConstantsMethod m);

struct ConstantsReport {
    std::string system_tag;
    VectorSpaceDesc desc;
    std::vector<int> sigma_subset;
    double p = 2.0;
    /// best found value of ||inverse(A)||_{L^2_E} / ||A||_{L^2_E(Sigma)}
    double k1_lower = 0.0;
    /// best found value of ||forward(f)||_{L^2_E(Sigma)} / ||f||_{L^2_E}
    double k2_lower = 0.0;
    /// set on the exact paths, where lower bounds are the true values
    std::optional<double> exact;
    std::string method;
    std::optional<CoeffFamily> k1_witness;
};

ConstantsReport estimate_constants(const QSystemInstance& sys, const VectorSpaceDesc& e,
                                   const std::vector<int>& sigma_subset, const Exponent& p,
                                   ConstantsMethod method, std::size_t budget,
                                   const RngStream& rng);

struct PisierReport {
    std::string e_desc;
    int d = 0;
    double denominator = 0.0;  // largest singular value of T on S^2_d
    double numerator = 0.0;    // found norm of T tensor id on S^2_d(E)
    double ratio = 0.0;
    std::string method;
    std::optional<CoeffFamily> witness;
    bool pass = false;  // ratio >= 1 - 1e-9
};

/// Amplification ratio ||T (x) I_E|| / ||T|| for a map T on S^2_d given as a
/// d^2 x d^2 matrix acting on row-major vectorized matrices.
PisierReport pisier_criterion(const VectorSpaceDesc& e, int d, const ComplexMatrix& t,
                              ConstantsMethod method, std::size_t budget, const RngStream& rng);

struct DeltaStep {
    int k = 0;
    double eps = 0.0;
    double error = 0.0;  // ||f_n - delta_{k_n}||_{L^2}, re-verified
    std::vector<int> support;
    CoeffFamily coeffs;
};

struct DeltaApproxResult {
    std::vector<DeltaStep> steps;
    bool supports_disjoint = false;
    bool pass = false;
};

/// Constructive approximation of dyadic deltas by polynomials with pairwise
/// disjoint frequency supports, error < eps_n each.
DeltaApproxResult approximate_deltas(const QSystemInstance& sys, const std::vector<double>& eps);

/// Max over entries (sigma, i, j) of sum_k |forward(delta_k)^sigma_ij|^2 minus
/// the Bessel bound 1/d_sigma; nonpositive up to rounding.
double bessel_audit(const QSystemInstance& sys);

struct DegenerateReport {
    double bound = 0.0;
    double k1_lower = 0.0;
    double k2_lower = 0.0;
    bool pass = false;
};

/// Degenerate a-priori bound M * (sum d^2)^(1/p') on both constants.
DegenerateReport degenerate_bound_check(const QSystemInstance& sys, const VectorSpaceDesc& e,
                                        const Exponent& p, ConstantsMethod method,
                                        std::size_t budget, const RngStream& rng);

}  // namespace qoslab
