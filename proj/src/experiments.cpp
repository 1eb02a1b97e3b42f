#include "qoslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <set>
#include <stdexcept>

namespace qoslab {

namespace {

CoeffFamily random_scalar_family(const SystemParams& params, RngStream& rng) {
    CoeffFamily a = CoeffFamily::zero(params, VectorSpaceDesc::scalar());
    for (std::size_t s = 0; s < params.count(); ++s)
        for (int i = 0; i < params.dims[s]; ++i)
            for (int j = 0; j < params.dims[s]; ++j)
                a.blocks[s][0](i, j) = Complex(rng.gaussian(), rng.gaussian());
    return a;
}

double safe_ratio(double num, double den, bool* zero_flag) {
    if (den == 0.0) {
        if (num == 0.0) {
            *zero_flag = true;
            return 1.0;
        }
        return std::numeric_limits<double>::infinity();
    }
    return num / den;
}

void require_p2(const Exponent& p, const char* where) {
    if (p.is_inf() || p.value() != 2.0)
        throw std::invalid_argument(std::string(where) + ": only p = 2 is implemented");
}

/// L^q(Omega, B) norm of omega -> sum_sigma d_sigma tr(A^sigma rho^sigma(omega))
/// over a streamed ensemble of independent draws.
double randomized_lq_norm(const CoeffFamily& a, const Exponent& q, std::size_t n,
                          const RngStream& base, ComplexMatrix (*draw)(int, RngStream&)) {
    const int edim = a.desc.dim();
    const double qv = q.value();
    Eigen::VectorXcd val(edim);
    long double acc = 0.0L;
    for (std::size_t pt = 0; pt < n; ++pt) {
        RngStream sub = base.substream(pt);
        val.setZero();
        for (std::size_t s = 0; s < a.params.count(); ++s) {
            const int d = a.params.dims[s];
            ComplexMatrix rho = draw(d, sub);
            for (int e = 0; e < edim; ++e) val(e) += (double)d * trace_pair(a.blocks[s][e], rho);
        }
        acc += std::pow((long double)vector_norm(a.desc, val), (long double)qv);
    }
    return (double)std::pow(acc / (long double)n, 1.0L / qv);
}

}  // namespace

RieszReport verify_riesz(const QSystemInstance& sys, const Exponent& p, int trials, int level,
                         const RngStream& rng) {
    if (!sys.declared_bound)
        throw std::invalid_argument("verify_riesz: system has no declared uniform bound");
    if (p.is_inf() || p.value() < 1.0 || p.value() > 2.0)
        throw std::invalid_argument("verify_riesz: p must lie in [1, 2]");
    if (trials < 1) throw std::invalid_argument("verify_riesz: trials must be positive");

    RieszReport rep;
    rep.p = p.value();
    rep.trials = trials;
    rep.bound = std::pow(*sys.declared_bound, 2.0 / p.value() - 1.0);
    const bool exact = sys.space->kind == SpaceKind::ExactFinite;
    const bool endpoint = p.value() == 1.0 || p.value() == 2.0;
    rep.tolerance = exact ? (endpoint ? 1e-9 : 1e-6) : 5.0 / std::sqrt((double)sys.space->size());

    const Exponent pc = p.conjugate();
    for (int t = 0; t < trials; ++t) {
        RngStream sub = rng.substream((std::uint64_t)t);
        CoeffFamily a = random_scalar_family(sys.params, sub);
        SampledVectorFunction f = inverse(a, sys);
        CoeffFamily fw = forward(f, sys);
        bool zero = false;
        double ratio = safe_ratio(lp_sigma_norm(fw, pc), lp_omega_norm(f, p), &zero);
        rep.max_ratio = std::max(rep.max_ratio, ratio);

        if (level > 1) {
            try {
                ComplexMatrix tmat = haar_unitary(level, sub);
                CoeffFamily amp = amplify(fw, tmat);
                SampledVectorFunction fa;
                fa.space = f.space;
                fa.desc = amp.desc;
                fa.values.resize(f.values.rows(), level * level);
                for (Eigen::Index pt = 0; pt < f.values.rows(); ++pt)
                    for (int u = 0; u < level; ++u)
                        for (int v = 0; v < level; ++v)
                            fa.values(pt, u * level + v) = f.values(pt, 0) * tmat(u, v);
                double aratio = safe_ratio(lp_sigma_norm(amp, pc), lp_omega_norm(fa, p), &zero);
                rep.max_amplified_ratio = std::max(rep.max_amplified_ratio, aratio);
                ++rep.amplified_trials;
            } catch (const unsupported_norm_error&) {
                // the amplified norm combination is not defined at this p
            }
        }
    }
    double worst = std::max(rep.max_ratio, rep.max_amplified_ratio);
    rep.pass = worst <= rep.bound * (1.0 + rep.tolerance);
    return rep;
}

ContractionReport verify_contraction(const SystemParams& params, const CoeffFamily& a,
                                     const std::vector<ComplexMatrix>& d_mats, const Exponent& q,
                                     std::size_t sample_count, const RngStream& rng) {
    params.validate();
    a.validate();
    if (a.params.dims != params.dims)
        throw std::invalid_argument("verify_contraction: coefficient dims do not match params");
    if (d_mats.size() != params.count())
        throw std::invalid_argument("verify_contraction: one D matrix per sigma required");
    if (q.is_inf()) throw std::invalid_argument("verify_contraction: q must be finite");
    if (sample_count < 1000)
        throw std::invalid_argument("verify_contraction: sample_count must be >= 1000");
    for (std::size_t s = 0; s < params.count(); ++s)
        if (d_mats[s].rows() != params.dims[s] || d_mats[s].cols() != params.dims[s])
            throw std::invalid_argument("verify_contraction: D shape mismatch");

    ContractionReport rep;
    for (const auto& m : d_mats) rep.sup_d = std::max(rep.sup_d, schatten_norm(m, Exponent::inf()));

    // tr(A rho D) = tr((D A) rho): fold D into a second coefficient family
    CoeffFamily da = a;
    for (std::size_t s = 0; s < params.count(); ++s)
        for (int e = 0; e < a.desc.dim(); ++e) da.blocks[s][e] = d_mats[s] * a.blocks[s][e];

    const int edim = a.desc.dim();
    const double qv = q.value();
    Eigen::VectorXcd lhs_val(edim), rhs_val(edim);
    long double lhs_acc = 0.0L, rhs_acc = 0.0L;
    for (std::size_t pt = 0; pt < sample_count; ++pt) {
        RngStream sub = rng.substream(pt);
        lhs_val.setZero();
        rhs_val.setZero();
        for (std::size_t s = 0; s < params.count(); ++s) {
            const int d = params.dims[s];
            ComplexMatrix rho = haar_orthogonal(d, sub);
            for (int e = 0; e < edim; ++e) {
                rhs_val(e) += (double)d * trace_pair(a.blocks[s][e], rho);
                lhs_val(e) += (double)d * trace_pair(da.blocks[s][e], rho);
            }
        }
        lhs_acc += std::pow((long double)vector_norm(a.desc, lhs_val), (long double)qv);
        rhs_acc += std::pow((long double)vector_norm(a.desc, rhs_val), (long double)qv);
    }
    rep.lhs = (double)std::pow(lhs_acc / (long double)sample_count, 1.0L / qv);
    rep.rhs = (double)std::pow(rhs_acc / (long double)sample_count, 1.0L / qv);
    rep.tolerance = 5.0 / std::sqrt((double)sample_count);
    if (rep.lhs == 0.0 && rep.rhs == 0.0) rep.zero_convention = true;
    rep.pass = rep.lhs <= rep.sup_d * rep.rhs * (1.0 + rep.tolerance) + 1e-12;
    return rep;
}

TwoSidedReport compare_rademacher_steinhaus(const CoeffFamily& a, const Exponent& q,
                                            std::size_t sample_count, const RngStream& rng) {
    a.validate();
    if (a.desc.kind != SpaceDescKind::Scalar && !a.desc.hilbertian())
        throw std::invalid_argument(
            "compare_rademacher_steinhaus: coefficients must be scalar or Hilbertian-valued");
    if (q.is_inf()) throw std::invalid_argument("compare_rademacher_steinhaus: q must be finite");
    if (sample_count < 1000)
        throw std::invalid_argument("compare_rademacher_steinhaus: sample_count must be >= 1000");

    TwoSidedReport rep;
    rep.rademacher = randomized_lq_norm(a, q, sample_count, rng.substream(1), &haar_orthogonal);
    rep.steinhaus = randomized_lq_norm(a, q, sample_count, rng.substream(2), &haar_unitary);
    rep.ratio = safe_ratio(rep.rademacher, rep.steinhaus, &rep.zero_convention);
    rep.tolerance = 5.0 / std::sqrt((double)sample_count);
    rep.lo = 0.5 * (1.0 - rep.tolerance);
    rep.hi = 2.0 * (1.0 + rep.tolerance);
    rep.pass = rep.zero_convention || (rep.ratio >= rep.lo && rep.ratio <= rep.hi);
    return rep;
}

GaussCompareReport compare_rademacher_gaussian(const CoeffFamily& a, std::size_t sample_count,
                                               const RngStream& rng, double c_max) {
    a.validate();
    if (sample_count < 1000)
        throw std::invalid_argument("compare_rademacher_gaussian: sample_count must be >= 1000");
    GaussCompareReport rep;
    rep.c_max = c_max;
    const Exponent two(2.0);
    double r = randomized_lq_norm(a, two, sample_count, rng.substream(1), &haar_orthogonal);
    double g = randomized_lq_norm(a, two, sample_count, rng.substream(2), &gaussian_matrix);
    rep.rademacher_sq = r * r;
    rep.gaussian_sq = g * g;
    rep.ratio = safe_ratio(rep.rademacher_sq, rep.gaussian_sq, &rep.zero_convention);
    rep.tolerance = 5.0 / std::sqrt((double)sample_count);
    rep.pass = rep.zero_convention || rep.ratio <= c_max * (1.0 + rep.tolerance);

    if (a.desc.kind == SpaceDescKind::Scalar || a.desc.hilbertian()) {
        // Orthonormality gives E|sum d tr(A rho)|^2 = sum d ||A||_F^2 per
        // coordinate, identically for both ensembles.
        long double direct = 0.0L;
        for (std::size_t s = 0; s < a.params.count(); ++s)
            for (const auto& m : a.blocks[s])
                direct += (long double)a.params.dims[s] * (long double)m.squaredNorm();
        const double via_norm = lp_sigma_norm(a, two);
        bool zf = false;
        rep.exact_ratio = safe_ratio(via_norm * via_norm, (double)direct, &zf);
    }
    return rep;
}

CltFunctional parse_clt_functional(const std::string& name) {
    if (name == "s2sq") return CltFunctional::S2Sq;
    if (name == "s4pow4") return CltFunctional::S4Pow4;
    if (name == "e11sq") return CltFunctional::Entry11Sq;
    throw std::invalid_argument("unknown clt functional: " + name);
}

std::string clt_functional_name(CltFunctional h) {
    switch (h) {
        case CltFunctional::S2Sq:
            return "s2sq";
        case CltFunctional::S4Pow4:
            return "s4pow4";
        default:
            return "e11sq";
    }
}

namespace {

double clt_h_value(CltFunctional h, const std::vector<ComplexMatrix>& ms) {
    switch (h) {
        case CltFunctional::S2Sq: {
            double acc = 0.0;
            for (const auto& m : ms) acc += m.squaredNorm();
            return acc;
        }
        case CltFunctional::S4Pow4: {
            // sum of fourth powers of singular values = ||M*M||_F^2
            double acc = 0.0;
            for (const auto& m : ms) acc += (m.adjoint() * m).squaredNorm();
            return acc;
        }
        default:
            return std::norm(ms[0](0, 0));
    }
}

}  // namespace

CltReport clt_functional(const std::vector<int>& dims, CltFunctional h,
                         const std::vector<int>& m_schedule, std::size_t sample_count,
                         const RngStream& rng) {
    if (dims.empty()) throw std::invalid_argument("clt_functional: dims must be nonempty");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("clt_functional: dims must be >= 1");
    if (m_schedule.empty()) throw std::invalid_argument("clt_functional: empty schedule");
    for (std::size_t i = 0; i < m_schedule.size(); ++i)
        if (m_schedule[i] < 1 || (i > 0 && m_schedule[i] <= m_schedule[i - 1]))
            throw std::invalid_argument("clt_functional: schedule must be strictly increasing");
    if (sample_count < 1000)
        throw std::invalid_argument("clt_functional: sample_count must be >= 1000");

    CltReport rep;
    rep.dims = dims;
    rep.h = clt_functional_name(h);

    std::vector<ComplexMatrix> ms(dims.size());
    for (std::size_t idx = 0; idx < m_schedule.size(); ++idx) {
        const int m = m_schedule[idx];
        const double root = std::sqrt((double)m);
        long double s = 0.0L, s2 = 0.0L, fs = 0.0L, fs2 = 0.0L;
        for (std::size_t pt = 0; pt < sample_count; ++pt) {
            RngStream sub = rng.substream((idx + 1) * 0x100000000ULL + pt);
            for (std::size_t si = 0; si < dims.size(); ++si) {
                ComplexMatrix acc = ComplexMatrix::Zero(dims[si], dims[si]);
                for (int k = 0; k < m; ++k) acc += haar_orthogonal(dims[si], sub);
                ms[si] = acc / root;
            }
            const double hv = clt_h_value(h, ms);
            s += hv;
            s2 += hv * hv;
            double fv = 0.0;
            for (const auto& mm : ms) fv += mm.squaredNorm();
            fs += fv;
            fs2 += fv * fv;
        }
        CltRow row;
        row.m = m;
        row.estimate = (double)(s / sample_count);
        row.stderr_est =
            std::sqrt(std::max(0.0, (double)(s2 / sample_count) - row.estimate * row.estimate) /
                      (double)sample_count);
        row.frob_mean = (double)(fs / sample_count);
        row.frob_stderr =
            std::sqrt(std::max(0.0, (double)(fs2 / sample_count) - row.frob_mean * row.frob_mean) /
                      (double)sample_count);
        rep.rows.push_back(row);
    }

    long double s = 0.0L, s2 = 0.0L;
    for (std::size_t pt = 0; pt < sample_count; ++pt) {
        RngStream sub = rng.substream(pt);
        for (std::size_t si = 0; si < dims.size(); ++si) ms[si] = gaussian_matrix(dims[si], sub);
        const double hv = clt_h_value(h, ms);
        s += hv;
        s2 += hv * hv;
    }
    rep.reference = (double)(s / sample_count);
    rep.reference_stderr =
        std::sqrt(std::max(0.0, (double)(s2 / sample_count) - rep.reference * rep.reference) /
                  (double)sample_count);
    return rep;
}

ConstantsMethod parse_constants_method(const std::string& name) {
    if (name == "exact-svd") return ConstantsMethod::ExactSvd;
    if (name == "stochastic-ascent") return ConstantsMethod::StochasticAscent;
    if (name == "exhaustive-signs") return ConstantsMethod::ExhaustiveSigns;
    throw std::invalid_argument("unknown method: " + name);
}

std::string constants_method_name(ConstantsMethod m) {
    switch (m) {
        case ConstantsMethod::ExactSvd:
            return "exact-svd";
        case ConstantsMethod::StochasticAscent:
            return "stochastic-ascent";
        default:
            return "exhaustive-signs";
    }
}

namespace {

struct ColIndex {
    int s;  // position within the subset's params order
    int a;
    int b;
};

/// Column layout and the evaluation/analysis matrices of the subset transform.
struct SubsetOps {
    std::vector<int> subset;
    SystemParams sub_params;
    std::vector<ColIndex> cols;
    /// values = P * C with C the (K x dimE) coefficient matrix
    Eigen::MatrixXcd p_mat;
    /// recovered coefficients = Q * values
    Eigen::MatrixXcd q_mat;
};

SubsetOps make_subset_ops(const QSystemInstance& sys, const std::vector<int>& subset) {
    SubsetOps ops;
    ops.subset = subset;
    const std::size_t npts = sys.space->size();
    for (std::size_t i = 0; i < subset.size(); ++i) {
        const int s = subset[i];
        ops.sub_params.sigma_ids.push_back(sys.params.sigma_ids[s]);
        ops.sub_params.dims.push_back(sys.params.dims[s]);
        for (int a = 0; a < sys.params.dims[s]; ++a)
            for (int b = 0; b < sys.params.dims[s]; ++b) ops.cols.push_back({(int)i, a, b});
    }
    const std::size_t k = ops.cols.size();
    ops.p_mat.resize(npts, k);
    ops.q_mat.resize(k, npts);
    for (std::size_t c = 0; c < k; ++c) {
        const int s = subset[ops.cols[c].s];
        const int d = sys.params.dims[s];
        for (std::size_t pt = 0; pt < npts; ++pt) {
            const Complex phi = sys.eval[s][pt](ops.cols[c].b, ops.cols[c].a);
            ops.p_mat(pt, c) = (double)d * phi;
            ops.q_mat(c, pt) = sys.space->weights[pt] * std::conj(phi);
        }
    }
    return ops;
}

CoeffFamily family_from_cols(const SubsetOps& ops, const VectorSpaceDesc& e,
                             const Eigen::MatrixXcd& c) {
    CoeffFamily fam = CoeffFamily::zero(ops.sub_params, e);
    for (std::size_t col = 0; col < ops.cols.size(); ++col)
        for (int coord = 0; coord < e.dim(); ++coord)
            fam.blocks[ops.cols[col].s][coord](ops.cols[col].a, ops.cols[col].b) = c(col, coord);
    return fam;
}

/// Derivative-free maximization: random perturbations, keep-if-better, with
/// step shrinking and restarts from the incumbent. budget counts objective
/// evaluations.
template <typename Eval>
std::pair<double, Eigen::MatrixXcd> ascend(const Eval& eval,
                                           const std::vector<Eigen::MatrixXcd>& seeds,
                                           std::size_t budget, RngStream& rng) {
    double best = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd best_x;
    std::size_t used = 0;
    for (const auto& seed : seeds) {
        if (used >= budget) break;
        double v = eval(seed);
        ++used;
        if (v > best) {
            best = v;
            best_x = seed;
        }
    }
    if (best_x.size() == 0) return {best, best_x};

    Eigen::MatrixXcd cur = best_x, cand;
    double cur_v = best;
    double step = 0.3;
    int stale = 0;
    while (used < budget) {
        cand = cur;
        for (Eigen::Index i = 0; i < cand.rows(); ++i)
            for (Eigen::Index j = 0; j < cand.cols(); ++j)
                cand(i, j) += step * Complex(rng.gaussian(), rng.gaussian());
        double v = eval(cand);
        ++used;
        if (v > cur_v) {
            cur_v = v;
            cur.swap(cand);
            stale = 0;
            if (cur_v > best) {
                best = cur_v;
                best_x = cur;
            }
        } else if (++stale > 40) {
            stale = 0;
            step *= 0.5;
            if (step < 1e-4) {
                step = 0.3;
                cur = best_x;
                cur_v = best;
            }
        }
    }
    return {best, best_x};
}

std::vector<int> checked_subset(const QSystemInstance& sys, const std::vector<int>& sigma_subset) {
    std::vector<int> subset = sigma_subset;
    if (subset.empty())
        for (std::size_t s = 0; s < sys.params.count(); ++s) subset.push_back((int)s);
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    for (int s : subset)
        if (s < 0 || (std::size_t)s >= sys.params.count())
            throw std::invalid_argument("estimate_constants: sigma index out of range");
    return subset;
}

}  // namespace

ConstantsReport estimate_constants(const QSystemInstance& sys, const VectorSpaceDesc& e,
                                   const std::vector<int>& sigma_subset, const Exponent& p,
                                   ConstantsMethod method, std::size_t budget,
                                   const RngStream& rng) {
    require_p2(p, "estimate_constants");
    if (budget == 0) throw std::invalid_argument("estimate_constants: budget must be positive");
    const std::vector<int> subset = checked_subset(sys, sigma_subset);

    ConstantsReport rep;
    rep.system_tag = sys.kind_tag;
    rep.desc = e;
    rep.sigma_subset = subset;
    rep.p = 2.0;
    rep.method = constants_method_name(method);

    if (method == ConstantsMethod::ExactSvd) {
        if (!e.hilbertian())
            throw unsupported_norm_error(
                "estimate_constants: exact-svd needs a Hilbertian coefficient space");
        if (sys.space->kind == SpaceKind::ExactFinite) {
            // Rows sqrt(d) sqrt(w) conj(phi_ba): the scaled transform matrix.
            // Both constants are its largest singular value; tensoring with a
            // Hilbert space does not change singular values.
            std::size_t k = 0;
            for (int s : subset) k += (std::size_t)sys.params.dims[s] * sys.params.dims[s];
            const std::size_t npts = sys.space->size();
            Eigen::MatrixXcd m(k, npts);
            std::size_t row = 0;
            for (int s : subset) {
                const int d = sys.params.dims[s];
                const double rd = std::sqrt((double)d);
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b, ++row)
                        for (std::size_t pt = 0; pt < npts; ++pt)
                            m(row, pt) = rd * std::sqrt(sys.space->weights[pt]) *
                                         std::conj(sys.eval[s][pt](b, a));
            }
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
            const double smax = svd.singularValues()(0);
            rep.k1_lower = smax;
            rep.k2_lower = smax;
            rep.exact = smax;
        } else if (sys.exactly_orthonormal) {
            // Haar / Gaussian moments make the system orthonormal in law, so
            // the transform is a coisometry and both constants equal one.
            rep.k1_lower = 1.0;
            rep.k2_lower = 1.0;
            rep.exact = 1.0;
            rep.method += "(analytic)";
        } else {
            throw unsupported_norm_error(
                "estimate_constants: exact-svd needs an exact space or analytic orthonormality");
        }
        return rep;
    }

    if (method == ConstantsMethod::ExhaustiveSigns) {
        const int n = (int)subset.size();
        if (n > 20)
            throw resource_error("estimate_constants: exhaustive-signs limited to 20 indices");
        for (int s : subset)
            if (sys.params.dims[s] != 1)
                throw std::invalid_argument(
                    "estimate_constants: exhaustive-signs needs one-dimensional blocks");
        if (sys.kind != SystemKind::Rademacher)
            throw std::invalid_argument(
                "estimate_constants: exhaustive-signs is defined for the sign system");
        const int dim_e = e.dim();
        const std::size_t patterns = (std::size_t)1 << n;

        // rows of x are the E-vectors x_s; both objectives enumerate the full
        // sign cube exactly.
        auto cube_moments = [&](const Eigen::MatrixXcd& x, double* l2_omega, double* l2_sigma) {
            long double acc = 0.0L;
            Eigen::VectorXcd v(dim_e);
            for (std::size_t mask = 0; mask < patterns; ++mask) {
                v.setZero();
                for (int s = 0; s < n; ++s) {
                    const double sign = (mask >> s) & 1 ? -1.0 : 1.0;
                    v += sign * x.row(s).transpose();
                }
                const double nv = vector_norm(e, v);
                acc += (long double)nv * nv;
            }
            *l2_omega = std::sqrt((double)(acc / (long double)patterns));
            long double cacc = 0.0L;
            for (int s = 0; s < n; ++s) {
                const double ns = vector_norm(e, x.row(s).transpose());
                cacc += (long double)ns * ns;
            }
            *l2_sigma = std::sqrt((double)cacc);
        };
        auto eval_k1 = [&](const Eigen::MatrixXcd& x) {
            double lo = 0.0, ls = 0.0;
            cube_moments(x, &lo, &ls);
            return ls == 0.0 ? -1.0 : lo / ls;
        };
        auto eval_k2 = [&](const Eigen::MatrixXcd& x) {
            double lo = 0.0, ls = 0.0;
            cube_moments(x, &lo, &ls);
            return lo == 0.0 ? -1.0 : ls / lo;
        };

        std::vector<Eigen::MatrixXcd> seeds;
        Eigen::MatrixXcd canonical = Eigen::MatrixXcd::Zero(n, dim_e);
        for (int s = 0; s < n; ++s) canonical(s, s % dim_e) = 1.0;
        Eigen::MatrixXcd aligned = Eigen::MatrixXcd::Zero(n, dim_e);
        aligned.col(0).setOnes();
        seeds.push_back(canonical);
        seeds.push_back(aligned);
        RngStream arng = rng.substream(0);
        for (int r = 0; r < 2; ++r) {
            Eigen::MatrixXcd rnd(n, dim_e);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < dim_e; ++j) rnd(i, j) = Complex(arng.gaussian(), arng.gaussian());
            seeds.push_back(rnd);
        }
        auto [v1, x1] = ascend(eval_k1, seeds, budget / 2 + 1, arng);
        auto [v2, x2] = ascend(eval_k2, seeds, budget / 2 + 1, arng);
        rep.k1_lower = v1;
        rep.k2_lower = v2;
        (void)x2;

        CoeffFamily witness = CoeffFamily::zero(sys.params, e);
        for (int s = 0; s < n; ++s)
            for (int coord = 0; coord < dim_e; ++coord)
                witness.blocks[subset[s]][coord](0, 0) = x1(s, coord);
        rep.k1_witness = witness;
        return rep;
    }

    // stochastic ascent on the system's own sampled space
    SubsetOps ops = make_subset_ops(sys, subset);
    const int dim_e = e.dim();
    SampledVectorFunction fbuf;
    fbuf.space = sys.space;
    fbuf.desc = e;
    fbuf.values.resize(sys.space->size(), dim_e);

    auto eval_k1 = [&](const Eigen::MatrixXcd& c) {
        fbuf.values.noalias() = ops.p_mat * c;
        const double den = lp_sigma_norm(family_from_cols(ops, e, c), Exponent(2.0));
        if (den == 0.0) return -1.0;
        return lp_omega_norm(fbuf, Exponent(2.0)) / den;
    };
    auto eval_k2 = [&](const Eigen::MatrixXcd& c) {
        fbuf.values.noalias() = ops.p_mat * c;
        const double den = lp_omega_norm(fbuf, Exponent(2.0));
        if (den == 0.0) return -1.0;
        Eigen::MatrixXcd rec = ops.q_mat * fbuf.values;
        return lp_sigma_norm(family_from_cols(ops, e, rec), Exponent(2.0)) / den;
    };

    const std::size_t k = ops.cols.size();
    std::vector<Eigen::MatrixXcd> seeds;
    Eigen::MatrixXcd spread = Eigen::MatrixXcd::Zero(k, dim_e);
    for (std::size_t col = 0; col < k; ++col) spread(col, col % dim_e) = 1.0;
    Eigen::MatrixXcd aligned = Eigen::MatrixXcd::Zero(k, dim_e);
    aligned.col(0).setOnes();
    seeds.push_back(spread);
    seeds.push_back(aligned);
    RngStream arng = rng.substream(1);
    for (int r = 0; r < 2; ++r) {
        Eigen::MatrixXcd rnd(k, dim_e);
        for (std::size_t i = 0; i < k; ++i)
            for (int j = 0; j < dim_e; ++j) rnd(i, j) = Complex(arng.gaussian(), arng.gaussian());
        seeds.push_back(rnd);
    }
    auto [v1, x1] = ascend(eval_k1, seeds, budget / 2 + 1, arng);
    auto [v2, x2] = ascend(eval_k2, seeds, budget / 2 + 1, arng);
    (void)x2;
    rep.k1_lower = v1;
    rep.k2_lower = v2;

    CoeffFamily witness = CoeffFamily::zero(sys.params, e);
    for (std::size_t col = 0; col < k; ++col)
        for (int coord = 0; coord < dim_e; ++coord)
            witness.blocks[subset[ops.cols[col].s]][coord](ops.cols[col].a, ops.cols[col].b) =
                x1(col, coord);
    rep.k1_witness = witness;
    return rep;
}

namespace {

/// Banach-level stand-in for the S^2_d(E) norm used by the amplification
/// search. Hilbertian E collapses to the Frobenius norm; lq(q, m) uses the
/// Schatten-q norm of the coordinate matrices stacked vertically; the
/// schatten(q, m) case embeds M_d(S^q_m) into S^q_{dm} blockwise.
double pisier_proxy_norm(const VectorSpaceDesc& e, int d, const Eigen::MatrixXcd& c) {
    if (e.kind == SpaceDescKind::Scalar || e.hilbertian()) return c.norm();
    if (e.kind == SpaceDescKind::Lq) {
        ComplexMatrix stack(e.m * d, d);
        for (int coord = 0; coord < e.m; ++coord)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) stack(coord * d + i, j) = c(i * d + j, coord);
        return schatten_norm(stack, e.q);
    }
    ComplexMatrix big(d * e.m, d * e.m);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int u = 0; u < e.m; ++u)
                for (int v = 0; v < e.m; ++v)
                    big(i * e.m + u, j * e.m + v) = c(i * d + j, u * e.m + v);
    return schatten_norm(big, e.q);
}

}  // namespace

PisierReport pisier_criterion(const VectorSpaceDesc& e, int d, const ComplexMatrix& t,
                              ConstantsMethod method, std::size_t budget, const RngStream& rng) {
    if (d < 1) throw std::invalid_argument("pisier_criterion: d must be >= 1");
    if (t.rows() != (Eigen::Index)d * d || t.cols() != (Eigen::Index)d * d)
        throw std::invalid_argument("pisier_criterion: T must be d^2 x d^2");
    if (!all_finite(t)) throw std::invalid_argument("pisier_criterion: non-finite T");

    PisierReport rep;
    rep.e_desc = e.str();
    rep.d = d;
    Eigen::JacobiSVD<Eigen::MatrixXcd> tsvd(t, Eigen::ComputeThinV);
    rep.denominator = tsvd.singularValues()(0);

    const int dim_e = e.dim();
    if (e.kind == SpaceDescKind::Scalar || e.hilbertian()) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> big(
            kron(t, ComplexMatrix::Identity(dim_e, dim_e)));
        rep.numerator = big.singularValues()(0);
        rep.method = "exact-svd";
    } else {
        if (method == ConstantsMethod::ExactSvd)
            throw unsupported_norm_error(
                "pisier_criterion: exact-svd needs a Hilbertian coefficient space");
        if (budget == 0) throw std::invalid_argument("pisier_criterion: budget must be positive");
        auto eval = [&](const Eigen::MatrixXcd& c) {
            const double den = pisier_proxy_norm(e, d, c);
            if (den == 0.0) return -1.0;
            Eigen::MatrixXcd tc = t * c;
            return pisier_proxy_norm(e, d, tc) / den;
        };
        std::vector<Eigen::MatrixXcd> seeds;
        // top singular input of T placed in the first E-coordinate
        Eigen::MatrixXcd top = Eigen::MatrixXcd::Zero(d * d, dim_e);
        top.col(0) = tsvd.matrixV().col(0);
        seeds.push_back(top);
        // rank-one pieces of the top input, which keep every Schatten norm
        // equal to one
        ComplexMatrix vmat(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) vmat(i, j) = tsvd.matrixV()(i * d + j, 0);
        Eigen::JacobiSVD<ComplexMatrix> vsvd(vmat, Eigen::ComputeFullU | Eigen::ComputeFullV);
        for (int r = 0; r < d; ++r) {
            if (vsvd.singularValues()(r) < 1e-12) break;
            Eigen::MatrixXcd seed = Eigen::MatrixXcd::Zero(d * d, dim_e);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    seed(i * d + j, 0) = vsvd.matrixU()(i, r) * std::conj(vsvd.matrixV()(j, r));
            seeds.push_back(seed);
        }
        if (d >= 2 && dim_e >= 2) {
            // the witness pattern that separates the transpose map over l1
            Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d * d, dim_e);
            w(0, 0) = 1.0;      // entry (0,0) in coordinate 0
            w(d, 1) = 1.0;      // entry (1,0) in coordinate 1
            seeds.push_back(w);
        }
        RngStream arng = rng.substream(3);
        for (int r = 0; r < 3; ++r) {
            Eigen::MatrixXcd rnd(d * d, dim_e);
            for (int i = 0; i < d * d; ++i)
                for (int j = 0; j < dim_e; ++j) rnd(i, j) = Complex(arng.gaussian(), arng.gaussian());
            seeds.push_back(rnd);
        }
        auto [v, x] = ascend(eval, seeds, budget, arng);
        rep.numerator = v;
        rep.method = "stochastic-ascent";
        SystemParams wp;
        wp.sigma_ids = {0};
        wp.dims = {d};
        CoeffFamily witness = CoeffFamily::zero(wp, e);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int coord = 0; coord < dim_e; ++coord)
                    witness.blocks[0][coord](i, j) = x(i * d + j, coord);
        rep.witness = witness;
    }
    bool zf = false;
    rep.ratio = safe_ratio(rep.numerator, rep.denominator, &zf);
    rep.pass = rep.ratio >= 1.0 - 1e-9;
    return rep;
}

namespace {

SampledVectorFunction delta_function(const QSystemInstance& sys, int k) {
    SampledVectorFunction f;
    f.space = sys.space;
    f.desc = VectorSpaceDesc::scalar();
    f.values.resize(sys.space->size(), 1);
    for (std::size_t pt = 0; pt < sys.space->size(); ++pt)
        f.values(pt, 0) = (double)dyadic_delta(k, sys.space->coords[pt]);
    return f;
}

void require_dyadic_blocked(const QSystemInstance& sys, const char* where) {
    if (sys.blocked_levels <= 0 || sys.space->coords.size() != sys.space->size())
        throw std::invalid_argument(std::string(where) +
                                    ": system does not resolve dyadic deltas");
}

}  // namespace

DeltaApproxResult approximate_deltas(const QSystemInstance& sys, const std::vector<double>& eps) {
    if (!sys.is_complete)
        throw std::invalid_argument("approximate_deltas: system not complete");
    require_dyadic_blocked(sys, "approximate_deltas");
    if (eps.empty()) throw std::invalid_argument("approximate_deltas: empty eps schedule");
    for (double e : eps)
        if (!(e > 0.0)) throw std::invalid_argument("approximate_deltas: eps must be positive");

    DeltaApproxResult result;
    std::set<int> sigma_used;
    for (double en : eps) {
        const double third_sq = (en / 3.0) * (en / 3.0);
        int chosen = -1;
        CoeffFamily coeffs;
        std::vector<double> mass;
        double total = 0.0;
        for (int k = 1; k <= sys.blocked_levels; ++k) {
            CoeffFamily c = forward(delta_function(sys, k), sys);
            std::vector<double> ms(sys.params.count());
            double tot = 0.0, used_mass = 0.0;
            for (std::size_t s = 0; s < sys.params.count(); ++s) {
                ms[s] = (double)sys.params.dims[s] * c.blocks[s][0].squaredNorm();
                tot += ms[s];
                if (sigma_used.count((int)s)) used_mass += ms[s];
            }
            if (used_mass < third_sq && 1.0 - tot < third_sq) {
                chosen = k;
                coeffs = std::move(c);
                mass = std::move(ms);
                total = tot;
                break;
            }
        }
        if (chosen < 0)
            throw resource_error(
                "approximate_deltas: no resolvable delta beyond k = " +
                std::to_string(sys.blocked_levels) + " satisfies the eps = " +
                std::to_string(en) + " schedule");

        // truncate by decreasing block mass until the dropped tail (plus any
        // part of the delta outside the span) is below (eps/3)^2
        std::vector<std::size_t> order(sys.params.count());
        for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
        double kept = 0.0;
        std::vector<char> keep(sys.params.count(), 0);
        for (std::size_t s : order) {
            if (1.0 - kept < third_sq) break;
            keep[s] = 1;
            kept += mass[s];
        }
        (void)total;

        DeltaStep step;
        step.k = chosen;
        step.eps = en;
        step.coeffs = CoeffFamily::zero(sys.params, VectorSpaceDesc::scalar());
        for (std::size_t s = 0; s < sys.params.count(); ++s)
            if (keep[s] && !sigma_used.count((int)s)) {
                step.coeffs.blocks[s][0] = coeffs.blocks[s][0];
                step.support.push_back((int)s);
            }

        // independent postcondition check of ||f_n - delta_{k_n}||
        SampledVectorFunction fn = inverse(step.coeffs, sys);
        step.error = lp_omega_norm(subtract(fn, delta_function(sys, chosen)), Exponent(2.0));

        for (int s : step.support) sigma_used.insert(s);
        result.steps.push_back(std::move(step));
    }

    result.supports_disjoint = true;
    for (std::size_t i = 0; i < result.steps.size() && result.supports_disjoint; ++i)
        for (std::size_t j = i + 1; j < result.steps.size(); ++j) {
            std::vector<int> both;
            std::set_intersection(result.steps[i].support.begin(),
                                  result.steps[i].support.end(),
                                  result.steps[j].support.begin(),
                                  result.steps[j].support.end(), std::back_inserter(both));
            if (!both.empty()) {
                result.supports_disjoint = false;
                break;
            }
        }
    result.pass = result.supports_disjoint;
    for (const auto& step : result.steps)
        if (!(step.error < step.eps)) result.pass = false;
    return result;
}

double bessel_audit(const QSystemInstance& sys) {
    require_dyadic_blocked(sys, "bessel_audit");
    std::vector<ComplexMatrix> acc(sys.params.count());
    for (std::size_t s = 0; s < sys.params.count(); ++s)
        acc[s] = ComplexMatrix::Zero(sys.params.dims[s], sys.params.dims[s]);
    for (int k = 1; k <= sys.blocked_levels; ++k) {
        CoeffFamily c = forward(delta_function(sys, k), sys);
        for (std::size_t s = 0; s < sys.params.count(); ++s)
            acc[s] += c.blocks[s][0].cwiseAbs2();
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sys.params.count(); ++s) {
        const double cap = 1.0 / sys.params.dims[s];
        for (int i = 0; i < sys.params.dims[s]; ++i)
            for (int j = 0; j < sys.params.dims[s]; ++j)
                worst = std::max(worst, acc[s](i, j).real() - cap);
    }
    return worst;
}

DegenerateReport degenerate_bound_check(const QSystemInstance& sys, const VectorSpaceDesc& e,
                                        const Exponent& p, ConstantsMethod method,
                                        std::size_t budget, const RngStream& rng) {
    require_p2(p, "degenerate_bound_check");
    if (!sys.declared_bound)
        throw std::invalid_argument("degenerate_bound_check: system has no declared bound");
    double dsum = 0.0;
    for (int d : sys.params.dims) dsum += (double)d * d;
    DegenerateReport rep;
    rep.bound = *sys.declared_bound * std::pow(dsum, 1.0 / p.conjugate().value());
    ConstantsReport cr = estimate_constants(sys, e, {}, p, method, budget, rng);
    rep.k1_lower = cr.k1_lower;
    rep.k2_lower = cr.k2_lower;
    rep.pass = rep.k1_lower <= rep.bound * (1.0 + 1e-6) && rep.k2_lower <= rep.bound * (1.0 + 1e-6);
    return rep;
}

}  // namespace qoslab
